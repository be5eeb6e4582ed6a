#pragma once

#include "sinetune/corpus.hpp"

#include <cstdint>

namespace sinetune {

/// Synthetic corpus: Zipf-distributed symbol usage (exponent 1), required
/// sets produced by a reference selection at a fixed hidden parameter triple
/// and subsampled to at most 8 facts. Deterministic per seed.
struct GenConfig {
    int n_facts = 100;
    int n_symbols = 40;
    int n_conjectures = 50;
    std::uint64_t seed = 0;

    void validate() const;  // throws std::invalid_argument
};

Corpus generate_corpus(const GenConfig& config);

}  // namespace sinetune
