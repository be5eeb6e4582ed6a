#include "sinetune/sine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sinetune {
namespace {

// occ(s) <= t * occ(s') for every s' of p collapses to a single comparison
// against the least frequent symbol of p; multiplication by t > 0 preserves
// the ordering, so this is exact.
std::uint32_t min_occurrence(const Fact& fact, const OccurrenceTable& occ) {
    std::uint32_t m = std::numeric_limits<std::uint32_t>::max();
    for (SymbolId s : fact.symbols) m = std::min(m, occ[s]);
    return m;
}

bool trigger_condition(std::uint32_t occ_s, std::uint32_t min_occ, const SineParams& params) {
    if (occ_s <= static_cast<std::uint32_t>(params.generality)) return true;
    return static_cast<double>(occ_s) <= params.tolerance * static_cast<double>(min_occ);
}

}  // namespace

void SineParams::validate() const {
    if (!(tolerance > 0.0) || !std::isfinite(tolerance))
        throw std::invalid_argument("tolerance must be finite and > 0");
    if (generality < 1) throw std::invalid_argument("generality threshold must be >= 1");
    if (depth < 0) throw std::invalid_argument("depth must be >= 0");
}

bool triggers(const Corpus& corpus, const OccurrenceTable& occ, const SineParams& params,
              SymbolId s, FactId p) {
    const Fact& fact = corpus.facts.at(p);
    if (!std::binary_search(fact.symbols.begin(), fact.symbols.end(), s)) return false;
    if (occ[s] <= static_cast<std::uint32_t>(params.generality)) return true;
    for (SymbolId other : fact.symbols)
        if (static_cast<double>(occ[s]) > params.tolerance * static_cast<double>(occ[other]))
            return false;
    return true;
}

TriggerIndex TriggerIndex::build(const Corpus& corpus, const OccurrenceTable& occ,
                                 const SineParams& params) {
    TriggerIndex index;
    index.by_symbol_.resize(corpus.symbols.size());
    for (FactId p = 0; p < corpus.facts.size(); ++p) {
        const Fact& fact = corpus.facts[p];
        std::uint32_t min_occ = min_occurrence(fact, occ);
        for (SymbolId s : fact.symbols)
            if (trigger_condition(occ[s], min_occ, params)) index.by_symbol_[s].push_back(p);
    }
    return index;
}

SineSelector::SineSelector(const Corpus& corpus, const SineParams& params)
    : corpus_(&corpus), params_(params) {
    params.validate();
    occ_ = symbol_occurrences(corpus);
    index_ = TriggerIndex::build(corpus, occ_, params);
}

std::vector<FactId> SineSelector::select(const Conjecture& conjecture) const {
    const Corpus& corpus = *corpus_;
    std::vector<char> accessible(corpus.facts.size(), 0);
    for (FactId p : conjecture.accessible) accessible[p] = 1;

    std::vector<char> symbol_seen(corpus.symbols.size(), 0);
    std::vector<char> fact_selected(corpus.facts.size(), 0);
    std::vector<FactId> selected;

    std::vector<SymbolId> frontier;
    for (SymbolId s : conjecture.goal_symbols) {
        if (!symbol_seen[s]) {
            symbol_seen[s] = 1;
            frontier.push_back(s);
        }
    }

    std::vector<SymbolId> next;
    for (int round = 0; round < params_.depth && !frontier.empty(); ++round) {
        next.clear();
        for (SymbolId s : frontier) {
            for (FactId p : index_.triggered_by(s)) {
                if (!accessible[p] || fact_selected[p]) continue;
                fact_selected[p] = 1;
                selected.push_back(p);
                for (SymbolId s2 : corpus.facts[p].symbols) {
                    if (!symbol_seen[s2]) {
                        symbol_seen[s2] = 1;
                        next.push_back(s2);
                    }
                }
            }
        }
        frontier.swap(next);
    }

    std::sort(selected.begin(), selected.end());
    return selected;
}

std::vector<std::string> select_premises(const Corpus& corpus, const Conjecture& conjecture,
                                         const SineParams& params) {
    SineSelector selector(corpus, params);
    std::vector<std::string> names;
    for (FactId p : selector.select(conjecture)) names.push_back(corpus.facts[p].name);
    return names;
}

}  // namespace sinetune
