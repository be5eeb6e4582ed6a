#include "sinetune/gen.hpp"

#include "sinetune/rng.hpp"
#include "sinetune/sine.hpp"

#include <algorithm>
#include <stdexcept>

namespace sinetune {
namespace {

// Hidden ground truth the required sets are derived from.
constexpr SineParams kTruth{4.0, 3, 2};

class ZipfSampler {
public:
    ZipfSampler(int n) : cumulative_(static_cast<std::size_t>(n)) {
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            total += 1.0 / static_cast<double>(i + 1);
            cumulative_[static_cast<std::size_t>(i)] = total;
        }
    }

    int draw(Rng& rng) const {
        double u = rng.uniform() * cumulative_.back();
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        auto idx = static_cast<std::size_t>(it - cumulative_.begin());
        return static_cast<int>(std::min(idx, cumulative_.size() - 1));
    }

    /// `count` distinct ranks; falls back to a low-rank sweep if rejection
    /// sampling stalls.
    std::vector<int> draw_distinct(Rng& rng, int count) const {
        std::vector<int> out;
        for (int attempts = 0; static_cast<int>(out.size()) < count && attempts < 200;
             ++attempts) {
            int r = draw(rng);
            if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
        }
        for (int r = 0; static_cast<int>(out.size()) < count; ++r)
            if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
        return out;
    }

private:
    std::vector<double> cumulative_;
};

}  // namespace

void GenConfig::validate() const {
    if (n_facts < 1) throw std::invalid_argument("n_facts must be >= 1");
    if (n_symbols < 1) throw std::invalid_argument("n_symbols must be >= 1");
    if (n_conjectures < 1) throw std::invalid_argument("n_conjectures must be >= 1");
}

Corpus generate_corpus(const GenConfig& config) {
    config.validate();
    Rng rng(config.seed);
    ZipfSampler zipf(config.n_symbols);

    std::vector<std::string> symbol_names(static_cast<std::size_t>(config.n_symbols));
    for (int i = 0; i < config.n_symbols; ++i)
        symbol_names[static_cast<std::size_t>(i)] = "s" + std::to_string(i + 1);

    CorpusBuilder facts_builder;
    std::vector<std::vector<std::string>> fact_symbols;
    for (int i = 0; i < config.n_facts; ++i) {
        int size = static_cast<int>(
            rng.uniform_int(std::min(2, config.n_symbols), std::min(6, config.n_symbols)));
        std::vector<std::string> symbols;
        for (int rank : zipf.draw_distinct(rng, size))
            symbols.push_back(symbol_names[static_cast<std::size_t>(rank)]);
        fact_symbols.push_back(symbols);
        facts_builder.add_fact("p" + std::to_string(i + 1), std::move(symbols));
    }
    Corpus facts_only = facts_builder.build();
    SineSelector reference(facts_only, kTruth);

    std::vector<FactId> all_facts(facts_only.facts.size());
    for (FactId i = 0; i < all_facts.size(); ++i) all_facts[i] = i;

    auto reference_selection = [&](const std::vector<std::string>& goal_names) {
        Conjecture probe;
        probe.name = "probe";
        for (const std::string& n : goal_names)
            if (auto id = facts_only.symbols.find(n)) probe.goal_symbols.push_back(*id);
        std::sort(probe.goal_symbols.begin(), probe.goal_symbols.end());
        probe.goal_symbols.erase(
            std::unique(probe.goal_symbols.begin(), probe.goal_symbols.end()),
            probe.goal_symbols.end());
        probe.accessible = all_facts;
        if (probe.goal_symbols.empty()) return std::vector<FactId>{};
        return reference.select(probe);
    };

    CorpusBuilder builder;
    for (std::size_t i = 0; i < fact_symbols.size(); ++i)
        builder.add_fact("p" + std::to_string(i + 1),
                         std::vector<std::string>(fact_symbols[i]));

    for (int j = 0; j < config.n_conjectures; ++j) {
        int goal_size = static_cast<int>(rng.uniform_int(1, std::min(3, config.n_symbols)));
        std::vector<std::string> goal;
        for (int rank : zipf.draw_distinct(rng, goal_size))
            goal.push_back(symbol_names[static_cast<std::size_t>(rank)]);

        std::vector<FactId> selection = reference_selection(goal);
        if (selection.empty()) {
            // Borrow the symbols of a random fact; its least general symbol
            // always triggers it, so the selection is non-empty.
            auto donor = static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<std::int64_t>(fact_symbols.size()) - 1));
            goal = fact_symbols[donor];
            selection = reference_selection(goal);
        }

        auto take = static_cast<std::size_t>(
            rng.uniform_int(1, std::min<std::int64_t>(8, static_cast<std::int64_t>(
                                                             selection.size()))));
        // Partial Fisher-Yates for the subsample.
        for (std::size_t a = 0; a < take; ++a) {
            auto b = static_cast<std::size_t>(rng.uniform_int(
                static_cast<std::int64_t>(a), static_cast<std::int64_t>(selection.size()) - 1));
            std::swap(selection[a], selection[b]);
        }
        selection.resize(take);
        std::sort(selection.begin(), selection.end());

        std::vector<std::string> required;
        for (FactId id : selection) required.push_back(facts_only.facts[id].name);
        builder.add_conjecture("c" + std::to_string(j + 1), std::move(goal),
                               std::move(required));
    }

    return builder.build();
}

}  // namespace sinetune
