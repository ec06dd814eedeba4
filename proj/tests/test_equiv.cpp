#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gen.hpp"
#include "linkc/equiv.hpp"

using namespace linkc;
using namespace linkc::testgen;

namespace {
const LanguageId kLamRefK = LanguageId::lamrefk();

EquivVerdict probe_at(const char* p1, const char* p2, const std::string& at,
                      std::int64_t fuel = kDefaultFuel) {
    LinkTypePtr ty = LT(at);
    return probe(parse(p1, kLamRefK), parse(p2, kLamRefK), ty, suite_for(ty), fuel);
}

const std::string kPP = "(-> (-> int (R pure int)) (R pure int))";
const std::string kII = "(-> (-> int (R impure int)) (R impure int))";
const std::string kPI = "(-> (-> int (R pure int)) (R impure int))";
const std::string kIP = "(-> (-> int (R impure int)) (R pure int))";
}  // namespace

TEST_CASE("the counter context distinguishes the one-call and two-call clients") {
    EquivVerdict v = probe_at(kE1, kE2, kE1Annot);
    REQUIRE(v.kind == EquivVerdict::Kind::Distinguished);
    CHECK(v.witness == "c-ref");
    CHECK(v.outcome1->num == 1);
    CHECK(v.outcome2->num == 2);
}

TEST_CASE("a component is never distinguished from itself") {
    for (const std::string& at : {kPP, kII})
        CHECK(probe_at(kProgB, kProgB, at).kind == EquivVerdict::Kind::NotDistinguished);
    CHECK(probe_at(kE1, kE1, kE1Annot).kind == EquivVerdict::Kind::NotDistinguished);
}

TEST_CASE("pure-argument rows of the equivalence figure: no distinctions") {
    for (const std::string& at : {kPP, kPI}) {
        for (auto [x, y] : {std::pair{kProgA, kProgB}, std::pair{kProgA, kProgC},
                            std::pair{kProgB, kProgC}}) {
            EquivVerdict v = probe_at(x, y, at);
            CHECK(v.kind == EquivVerdict::Kind::NotDistinguished);
            CHECK_FALSE(v.contexts_tried.empty());
        }
    }
}

TEST_CASE("the impure row separates all three programs pairwise") {
    auto outcome = [&](const char* x, const char* y) {
        EquivVerdict v = probe_at(x, y, kII);
        REQUIRE(v.kind == EquivVerdict::Kind::Distinguished);
        CHECK(v.witness == "counter-observer");
        return std::pair{v.outcome1->num, v.outcome2->num};
    };
    CHECK(outcome(kProgA, kProgB) == std::pair<std::int64_t, std::int64_t>{0, 1});
    CHECK(outcome(kProgA, kProgC) == std::pair<std::int64_t, std::int64_t>{0, 2});
    CHECK(outcome(kProgB, kProgC) == std::pair<std::int64_t, std::int64_t>{1, 2});
}

TEST_CASE("the impure-argument pure-result row leaves only the non-caller probeable") {
    EquivVerdict ab = probe_at(kProgA, kProgB, kIP);
    CHECK(ab.kind == EquivVerdict::Kind::IllTyped);
    CHECK(ab.ill_typed_component == 2);
    EquivVerdict ba = probe_at(kProgB, kProgA, kIP);
    CHECK(ba.kind == EquivVerdict::Kind::IllTyped);
    CHECK(ba.ill_typed_component == 1);
    EquivVerdict bc = probe_at(kProgB, kProgC, kIP);
    CHECK(bc.kind == EquivVerdict::Kind::IllTyped);

    CHECK(probe_at(kProgA, kProgA, kIP).kind == EquivVerdict::Kind::NotDistinguished);
}

TEST_CASE("distinguishing witnesses replay deterministically") {
    EquivVerdict v = probe_at(kE1, kE2, kE1Annot);
    REQUIRE(v.kind == EquivVerdict::Kind::Distinguished);
    for (int round = 0; round < 2; ++round) {
        EquivVerdict again = probe_at(kE1, kE2, kE1Annot);
        REQUIRE(again.kind == EquivVerdict::Kind::Distinguished);
        CHECK(again.witness == v.witness);
        CHECK(equal(again.outcome1, v.outcome1));
        CHECK(equal(again.outcome2, v.outcome2));
    }
}

TEST_CASE("property: enlarging a suite never hides a distinction") {
    LinkTypePtr ty = LT(kII);
    std::vector<ProbeContext> full = suite_for(ty);
    REQUIRE(full.size() >= 2);
    std::vector<ProbeContext> counter_only = {full[0]};

    TermPtr a = parse(kProgA, kLamRefK), b = parse(kProgB, kLamRefK);
    EquivVerdict small = probe(a, b, ty, counter_only, kDefaultFuel);
    REQUIRE(small.kind == EquivVerdict::Kind::Distinguished);

    for (std::size_t extra = 1; extra <= full.size(); ++extra) {
        std::vector<ProbeContext> grown(full.begin(), full.begin() + extra);
        EquivVerdict v = probe(a, b, ty, grown, kDefaultFuel);
        if (!grown.empty() && grown[0].name == "counter-observer")
            CHECK(v.kind == EquivVerdict::Kind::Distinguished);
    }

    // appending contexts to a distinguishing suite keeps the verdict
    std::vector<ProbeContext> padded = counter_only;
    padded.insert(padded.end(), full.begin(), full.end());
    CHECK(probe(a, b, ty, padded, kDefaultFuel).kind == EquivVerdict::Kind::Distinguished);
}

TEST_CASE("fuel exhaustion is reported separately, never as a distinction") {
    EquivVerdict v = probe_at(kProgA, kProgB, kII, /*fuel=*/2);
    CHECK(v.kind == EquivVerdict::Kind::NotDistinguished);
    CHECK_FALSE(v.fuel_exhausted.empty());
}

TEST_CASE("an empty suite distinguishes nothing") {
    EquivVerdict v = probe(parse(kProgA, kLamRefK), parse(kProgB, kLamRefK), LT(kII), {},
                           kDefaultFuel);
    CHECK(v.kind == EquivVerdict::Kind::NotDistinguished);
    CHECK(v.contexts_tried.empty());
}

TEST_CASE("contexts with the wrong hole type are refused") {
    std::vector<ProbeContext> wrong = suite_for(LT(kPP));
    REQUIRE_FALSE(wrong.empty());
    CHECK_THROWS_AS(
        probe(parse(kProgA, kLamRefK), parse(kProgB, kLamRefK), LT(kII), wrong, kDefaultFuel),
        TypeError);
}

TEST_CASE("builtin suites cover the published hole types") {
    for (const std::string& at : {kPP, kII, kPI, kIP, std::string(kE1Annot)})
        CHECK_FALSE(suite_for(LT(at)).empty());
    CHECK(suite_for(lt_unit()).empty());
}
