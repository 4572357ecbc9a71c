#include <doctest.h>

#include <random>
#include <set>

#include "ixfold/oracle.hh"
#include "helpers.hh"

using namespace ixfold;

TEST_CASE("oracle counts tiny instances") {
    EnergyModel m;
    CHECK(enumerate_structures({"AA", "UU"}, m).count == 7);
    CHECK(enumerate_structures({"G", "C"}, m).count == 2);
    CHECK(enumerate_structures({"AA", "GG"}, m).count == 1);

    const auto gg = enumerate_structures({"GG", "CC"}, m);
    CHECK(gg.count == 7);
    // both two-arc configurations present: nested and crossing
    bool nested = false, crossing = false;
    for (const auto& s : gg.structures) {
        if (s.arcs.size() != 2) continue;
        if (s.arcs[0].first == Arc{1, 4} && s.arcs[1].first == Arc{2, 3}) nested = true;
        if (s.arcs[0].first == Arc{1, 3} && s.arcs[1].first == Arc{2, 4}) crossing = true;
    }
    CHECK(nested);
    CHECK(crossing);
}

TEST_CASE("oracle structures are duplicate-free and valid") {
    std::mt19937_64 rng(211);
    EnergyModel m;
    for (int t = 0; t < 10; ++t) {
        const SequencePair p{testhelpers::random_sequence(rng, 1 + rng() % 5),
                             testhelpers::random_sequence(rng, 1 + rng() % 5)};
        const auto res = enumerate_structures(p, m, true);
        std::set<std::vector<std::pair<Arc, ArcKind>>> seen;
        for (const auto& s : res.structures) {
            CHECK(seen.insert(s.arcs).second);
            CHECK(is_valid_interaction_structure(s, p, m));
        }
        CHECK(res.count == static_cast<int>(res.structures.size()));
    }
}

TEST_CASE("oracle count monotone under added pairing possibilities") {
    EnergyModel m;
    // turning G into A where S holds U adds AU possibilities
    const auto base = enumerate_structures({"GG", "UU"}, m); // GU pairs allowed
    const auto more = enumerate_structures({"AG", "UU"}, m);
    CHECK(more.count >= base.count);
}

TEST_CASE("oracle cap") {
    EnergyModel m;
    m.oracle_cap = 6;
    CHECK_THROWS_AS(enumerate_structures({"AAAA", "UUUU"}, m), ResourceLimit);
}
