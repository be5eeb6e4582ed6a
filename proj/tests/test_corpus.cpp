#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"

#include "sinetune/corpus.hpp"

using namespace sinetune;

TEST_CASE("parse: two facts and a conjecture with default accessible") {
    Corpus corpus = parse_corpus("F p1: f, a\nF p2: g, a\nC c1: a ; p1");
    REQUIRE(corpus.facts.size() == 2);
    REQUIRE(corpus.conjectures.size() == 1);
    CHECK(corpus.symbols.size() == 3);
    CHECK(corpus.symbols.find("f").has_value());
    CHECK(corpus.symbols.find("a").has_value());
    CHECK(corpus.symbols.find("g").has_value());

    const Conjecture& c1 = corpus.conjectures[0];
    REQUIRE(c1.required.size() == 1);
    CHECK(corpus.facts[c1.required[0]].name == "p1");
    REQUIRE(c1.accessible.size() == 2);  // defaults to every fact
    CHECK(corpus.facts[c1.accessible[0]].name == "p1");
    CHECK(corpus.facts[c1.accessible[1]].name == "p2");
}

TEST_CASE("parse: duplicate fact name reports the offending line") {
    try {
        parse_corpus("F p1: f, a\nF p1: g");
        FAIL("expected CorpusError");
    } catch (const CorpusError& e) {
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find("duplicate") != std::string::npos);
    }
}

TEST_CASE("parse: unknown fact in required list") {
    CHECK_THROWS_WITH_AS(parse_corpus("C c1: a ; pX"),
                         doctest::Contains("unknown fact 'pX'"), CorpusError);
}

TEST_CASE("parse: empty symbol list is rejected") {
    CHECK_THROWS_AS(parse_corpus("F p1:"), CorpusError);
    CHECK_THROWS_AS(parse_corpus("F p1: ,"), CorpusError);
    CHECK_THROWS_AS(parse_corpus("F p1: f\nC c1:  ; p1"), CorpusError);
}

TEST_CASE("parse: malformed lines") {
    CHECK_THROWS_AS(parse_corpus("X p1: f"), CorpusError);
    CHECK_THROWS_AS(parse_corpus("F p1 f"), CorpusError);            // missing ':'
    CHECK_THROWS_AS(parse_corpus("F p1: f\nC c1: a"), CorpusError);  // missing required group
    CHECK_THROWS_AS(parse_corpus("F p1: f\nC c1: a ; p1 ; p1 ; p1"), CorpusError);
    CHECK_THROWS_AS(parse_corpus("F p#1: f"), CorpusError);          // '#' inside a token
}

TEST_CASE("parse: empty required list is rejected") {
    CHECK_THROWS_AS(parse_corpus("F p1: f\nC c1: a ;"), CorpusError);
}

TEST_CASE("parse: required must be accessible") {
    CHECK_THROWS_AS(parse_corpus("F p1: f\nF p2: g\nC c1: f ; p1 ; p2"), CorpusError);
    // explicit accessible that covers required is fine
    Corpus corpus = parse_corpus("F p1: f\nF p2: g\nC c1: f ; p1 ; p1 p2");
    CHECK(corpus.conjectures[0].accessible.size() == 2);
}

TEST_CASE("parse: conjecture name may not collide with a fact name") {
    CHECK_THROWS_AS(parse_corpus("F a: f\nC a: f ; a"), CorpusError);
    CHECK_THROWS_AS(parse_corpus("F p1: f\nC c1: f ; p1\nC c1: f ; p1"), CorpusError);
}

TEST_CASE("parse: comments, blank lines, CRLF and stray whitespace") {
    Corpus corpus = parse_corpus("# header\n\n  F  p1 :  f , a \r\nC c1: a ; p1\r\n# end\n");
    REQUIRE(corpus.facts.size() == 1);
    CHECK(corpus.facts[0].symbols.size() == 2);
    CHECK(corpus.conjectures.size() == 1);
}

TEST_CASE("parse: duplicate symbols in a fact collapse to a set") {
    Corpus corpus = parse_corpus("F p1: f, f, a\nC c1: a ; p1");
    CHECK(corpus.facts[0].symbols.size() == 2);
}

TEST_CASE("occurrences: worked 3-fact corpus") {
    Corpus corpus = testsupport::three_fact_corpus();
    OccurrenceTable occ = symbol_occurrences(corpus);
    auto occ_of = [&](const char* name) { return occ[*corpus.symbols.find(name)]; };
    CHECK(occ_of("f") == 2);
    CHECK(occ_of("a") == 2);
    CHECK(occ_of("g") == 1);
    CHECK(occ_of("h") == 1);
}

TEST_CASE("occurrences: single fact and goal-only symbol") {
    Corpus corpus = parse_corpus("F p1: f\nC c1: z ; p1");
    OccurrenceTable occ = symbol_occurrences(corpus);
    CHECK(occ[*corpus.symbols.find("f")] == 1);
    CHECK(occ[*corpus.symbols.find("z")] == 0);
}

TEST_CASE("property: occurrence counts double-count symbol slots") {
    Rng rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        Corpus corpus = testsupport::random_corpus(rng);
        OccurrenceTable occ = symbol_occurrences(corpus);
        std::size_t total_occ = 0;
        for (std::uint32_t o : occ) total_occ += o;
        std::size_t total_slots = 0;
        for (const Fact& f : corpus.facts) total_slots += f.symbols.size();
        CHECK(total_occ == total_slots);
    }
}

TEST_CASE("property: render/parse round trip") {
    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        Corpus corpus = testsupport::random_corpus(rng);
        Corpus reparsed = parse_corpus(render_corpus(corpus));
        CHECK(testsupport::corpora_equivalent(corpus, reparsed));
    }
}

TEST_CASE("builder: fact order is preserved") {
    Corpus corpus = parse_corpus("F b: x\nF a: y\nC c: x ; b");
    CHECK(corpus.facts[0].name == "b");
    CHECK(corpus.facts[1].name == "a");
    CHECK(corpus.fact_id("a") == FactId{1});
    CHECK(!corpus.fact_id("missing").has_value());
}
