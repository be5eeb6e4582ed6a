#pragma once

#include "sinetune/corpus.hpp"

namespace sinetune {

/// The SInE parameter triple: tolerance t > 0, generality threshold g >= 1,
/// depth k >= 0.
struct SineParams {
    double tolerance = 1.0;
    int generality = 1;
    int depth = 0;

    void validate() const;  // throws std::invalid_argument
};

/// trigger(s, p): s occurs in p and either occ(s) <= g or
/// occ(s) <= t * occ(s') for every symbol s' of p.
bool triggers(const Corpus& corpus, const OccurrenceTable& occ, const SineParams& params,
              SymbolId s, FactId p);

/// Per-symbol lists of facts the symbol triggers, over the whole corpus.
class TriggerIndex {
public:
    static TriggerIndex build(const Corpus& corpus, const OccurrenceTable& occ,
                              const SineParams& params);
    std::span<const FactId> triggered_by(SymbolId s) const {
        return by_symbol_.at(s);
    }

private:
    std::vector<std::vector<FactId>> by_symbol_;
};

/// One corpus + one parameter triple; select() may run concurrently for
/// different conjectures.
class SineSelector {
public:
    SineSelector(const Corpus& corpus, const SineParams& params);

    /// Premises triggered within `depth` rounds starting from the goal
    /// symbols, restricted to the conjecture's accessible facts. Sorted ids.
    std::vector<FactId> select(const Conjecture& conjecture) const;

    const OccurrenceTable& occurrences() const { return occ_; }
    const TriggerIndex& index() const { return index_; }

private:
    const Corpus* corpus_;
    SineParams params_;
    OccurrenceTable occ_;
    TriggerIndex index_;
};

/// One-shot convenience; returns fact names in corpus order.
std::vector<std::string> select_premises(const Corpus& corpus, const Conjecture& conjecture,
                                         const SineParams& params);

}  // namespace sinetune
