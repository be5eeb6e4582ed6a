#pragma once

#include "sinetune/corpus.hpp"
#include "sinetune/sine.hpp"

namespace sinetune {

/// Per-conjecture score
///   S_i = |rec ∩ req| / |req| + |rec ∩ req| / 2^|rec|
/// and 0 for an empty recommendation. The 2^|rec| term is evaluated in
/// floating point and vanishes for large recommendation sets.
double score_from_counts(std::size_t n_required, std::size_t n_recommended,
                         std::size_t n_intersection);

/// Both spans must be sorted.
double score_conjecture(std::span<const FactId> required, std::span<const FactId> recommended);

struct ConjectureScore {
    std::string conjecture;
    double score = 0.0;
    std::size_t recommended_size = 0;
    std::size_t intersection_size = 0;
};

struct ScoreReport {
    std::vector<ConjectureScore> per_conjecture;  // in corpus conjecture order
    double total = 0.0;
    double proofs_found_fraction = 0.0;
};

/// Runs selection for every conjecture and scores it. Per-conjecture work may
/// fan out over `threads` workers; the report is identical for any thread
/// count (fixed summation order).
ScoreReport evaluate_corpus(const Corpus& corpus, const SineParams& params, unsigned threads = 1);

double aggregate_score(const Corpus& corpus, const SineParams& params, unsigned threads = 1);

/// Fraction of conjectures whose full required set is recommended.
double proofs_found(const Corpus& corpus, const SineParams& params, unsigned threads = 1);

/// CSV with header `conjecture,S_i,recommended,intersection`.
std::string report_to_csv(const ScoreReport& report);

/// JSON object with `total`, `proofs_found_fraction` and `params`.
std::string report_summary_json(const ScoreReport& report, const SineParams& params);

}  // namespace sinetune
