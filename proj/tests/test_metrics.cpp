#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"

#include "sinetune/metrics.hpp"

using namespace sinetune;
using testsupport::three_fact_corpus;

TEST_CASE("score: exact recommendation of a two-premise proof") {
    // |rec ∩ req|/|req| + |rec ∩ req|/2^|rec| = 2/2 + 2/4
    CHECK(score_from_counts(2, 2, 2) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("score: empty recommendation is zero") {
    CHECK(score_from_counts(2, 0, 0) == 0.0);
}

TEST_CASE("score: redundant recommendations are penalised exponentially") {
    CHECK(score_from_counts(1, 3, 1) == doctest::Approx(1.125).epsilon(1e-12));
}

TEST_CASE("score: empty required set is a contract violation") {
    CHECK_THROWS_AS(score_from_counts(0, 1, 0), std::invalid_argument);
}

TEST_CASE("score: huge recommendation sets lose the precision term, not the recall term") {
    double s = score_from_counts(4, 5000, 4);
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::isfinite(s));
}

TEST_CASE("score_conjecture on id spans") {
    std::vector<FactId> required{1, 2};
    std::vector<FactId> recommended{1, 2};
    CHECK(score_conjecture(required, recommended) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(score_conjecture(required, {}) == 0.0);
}

TEST_CASE("property: adding an irrelevant premise strictly lowers the score") {
    Rng rng(5);
    for (int trial = 0; trial < 1000; ++trial) {
        auto required = static_cast<std::size_t>(rng.uniform_int(1, 6));
        auto inter = static_cast<std::size_t>(rng.uniform_int(1, static_cast<int>(required)));
        auto rec = inter + static_cast<std::size_t>(rng.uniform_int(0, 12));
        CHECK(score_from_counts(required, rec + 1, inter) <
              score_from_counts(required, rec, inter));
    }
}

TEST_CASE("property: score stays within [0, 1 + |required|]") {
    Rng rng(6);
    for (int trial = 0; trial < 1000; ++trial) {
        auto required = static_cast<std::size_t>(rng.uniform_int(1, 8));
        auto rec = static_cast<std::size_t>(rng.uniform_int(0, 20));
        auto inter = static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<int>(std::min(required, rec))));
        double s = score_from_counts(required, rec, inter);
        CHECK(s >= 0.0);
        CHECK(s <= 1.0 + static_cast<double>(required));
        if (rec == 0 || inter == 0) CHECK(s == 0.0);
    }
}

TEST_CASE("aggregate: worked 3-fact corpus") {
    Corpus corpus = three_fact_corpus();
    SineParams params{1.0, 1, 1};
    // selection is {p1}, required is {p1}: 1/1 + 1/2
    CHECK(aggregate_score(corpus, params) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(proofs_found(corpus, params) == 1.0);

    ScoreReport report = evaluate_corpus(corpus, params);
    REQUIRE(report.per_conjecture.size() == 1);
    CHECK(report.per_conjecture[0].conjecture == "c1");
    CHECK(report.per_conjecture[0].recommended_size == 1);
    CHECK(report.per_conjecture[0].intersection_size == 1);
}

TEST_CASE("aggregate: sums per-conjecture scores") {
    // c1 scores 1.5; c2 requires p2, but goal {a} at t=1,g=1 selects only p1,
    // so its intersection is empty and it scores 0
    Corpus corpus = parse_corpus(
        "F p1: f, a\nF p2: g, a\nF p3: h, f\n"
        "C c1: a ; p1\nC c2: a ; p2\n");
    SineParams params{1.0, 1, 1};
    ScoreReport report = evaluate_corpus(corpus, params);
    REQUIRE(report.per_conjecture.size() == 2);
    CHECK(report.per_conjecture[0].score == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(report.per_conjecture[1].score == 0.0);
    CHECK(report.total == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(report.proofs_found_fraction == 0.5);
}

TEST_CASE("proofs_found: depth 0 recommends nothing") {
    Corpus corpus = three_fact_corpus();
    CHECK(proofs_found(corpus, SineParams{1.0, 1, 0}) == 0.0);
    CHECK(aggregate_score(corpus, SineParams{1.0, 1, 0}) == 0.0);
}

TEST_CASE("proofs_found: full recall everywhere") {
    Corpus corpus = three_fact_corpus();
    CHECK(proofs_found(corpus, SineParams{1e9, 64, 8}) == 1.0);
}

TEST_CASE("property: proofs_found is monotone in depth") {
    Rng rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        Corpus corpus = testsupport::random_corpus(rng);
        SineParams params = testsupport::random_params(rng);
        SineParams deeper = params;
        deeper.depth += 1;
        CHECK(proofs_found(corpus, params) <= proofs_found(corpus, deeper));
    }
}

TEST_CASE("evaluation is identical for any worker count") {
    Rng rng(88);
    for (int trial = 0; trial < 20; ++trial) {
        Corpus corpus = testsupport::random_corpus(rng);
        SineParams params = testsupport::random_params(rng);
        ScoreReport one = evaluate_corpus(corpus, params, 1);
        ScoreReport four = evaluate_corpus(corpus, params, 4);
        CHECK(one.total == four.total);  // bitwise: same summation order
        CHECK(one.proofs_found_fraction == four.proofs_found_fraction);
    }
}

TEST_CASE("report serialisation") {
    Corpus corpus = three_fact_corpus();
    SineParams params{1.0, 1, 1};
    ScoreReport report = evaluate_corpus(corpus, params);
    std::string csv = report_to_csv(report);
    CHECK(csv.find("conjecture,S_i,recommended,intersection\n") == 0);
    CHECK(csv.find("c1,1.5,1,1\n") != std::string::npos);
    std::string json = report_summary_json(report, params);
    CHECK(json.find("\"total\"") != std::string::npos);
    CHECK(json.find("\"proofs_found_fraction\"") != std::string::npos);
    CHECK(json.find("\"params\"") != std::string::npos);
}

TEST_CASE("evaluate rejects an empty corpus") {
    CorpusBuilder builder;
    builder.add_fact("p1", {"f"});
    Corpus corpus = builder.build();
    CHECK_THROWS_AS(evaluate_corpus(corpus, SineParams{1.0, 1, 1}), std::invalid_argument);
}
