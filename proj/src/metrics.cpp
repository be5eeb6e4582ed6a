#include "sinetune/metrics.hpp"

#include "sinetune/detail/format.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace sinetune {
namespace {

std::size_t intersection_size(std::span<const FactId> a, std::span<const FactId> b) {
    std::size_t count = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) {
            ++ia;
        } else if (*ib < *ia) {
            ++ib;
        } else {
            ++count;
            ++ia;
            ++ib;
        }
    }
    return count;
}

}  // namespace

double score_from_counts(std::size_t n_required, std::size_t n_recommended,
                         std::size_t n_intersection) {
    if (n_required == 0) throw std::invalid_argument("required premise set must be non-empty");
    if (n_recommended == 0) return 0.0;
    double inter = static_cast<double>(n_intersection);
    return inter / static_cast<double>(n_required) +
           inter / std::exp2(static_cast<double>(n_recommended));
}

double score_conjecture(std::span<const FactId> required, std::span<const FactId> recommended) {
    return score_from_counts(required.size(), recommended.size(),
                             intersection_size(required, recommended));
}

ScoreReport evaluate_corpus(const Corpus& corpus, const SineParams& params, unsigned threads) {
    if (corpus.conjectures.empty())
        throw std::invalid_argument("corpus has no conjectures to evaluate");
    params.validate();

    const std::size_t n = corpus.conjectures.size();
    SineSelector selector(corpus, params);
    std::vector<ConjectureScore> rows(n);

    auto work = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const Conjecture& conj = corpus.conjectures[i];
            std::vector<FactId> recommended = selector.select(conj);
            std::size_t inter = intersection_size(conj.required, recommended);
            rows[i] = ConjectureScore{
                conj.name, score_from_counts(conj.required.size(), recommended.size(), inter),
                recommended.size(), inter};
        }
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    if (threads <= 1) {
        work(0, n);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        std::size_t chunk = (n + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            std::size_t lo = static_cast<std::size_t>(t) * chunk;
            std::size_t hi = std::min(n, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(work, lo, hi);
        }
        for (std::thread& t : pool) t.join();
    }

    ScoreReport report;
    report.per_conjecture = std::move(rows);
    std::size_t proved = 0;
    for (std::size_t i = 0; i < n; ++i) {
        report.total += report.per_conjecture[i].score;
        if (report.per_conjecture[i].intersection_size == corpus.conjectures[i].required.size())
            ++proved;
    }
    report.proofs_found_fraction = static_cast<double>(proved) / static_cast<double>(n);
    return report;
}

double aggregate_score(const Corpus& corpus, const SineParams& params, unsigned threads) {
    return evaluate_corpus(corpus, params, threads).total;
}

double proofs_found(const Corpus& corpus, const SineParams& params, unsigned threads) {
    return evaluate_corpus(corpus, params, threads).proofs_found_fraction;
}

std::string report_to_csv(const ScoreReport& report) {
    std::ostringstream out;
    out << "conjecture,S_i,recommended,intersection\n";
    for (const ConjectureScore& row : report.per_conjecture)
        out << row.conjecture << ',' << detail::format_double(row.score) << ','
            << row.recommended_size << ',' << row.intersection_size << '\n';
    return out.str();
}

std::string report_summary_json(const ScoreReport& report, const SineParams& params) {
    nlohmann::json j;
    j["total"] = report.total;
    j["proofs_found_fraction"] = report.proofs_found_fraction;
    j["params"] = {{"t", params.tolerance}, {"g", params.generality}, {"k", params.depth}};
    return j.dump(2) + "\n";
}

}  // namespace sinetune
