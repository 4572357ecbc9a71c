#include <doctest.h>

#include <random>

#include "ixfold/atlas.hh"
#include "ixfold/shadow.hh"
#include "ixfold/topology.hh"
#include "helpers.hh"

using namespace ixfold;

namespace {
Diagram one_bb(int n, std::vector<Arc> arcs) { return build_diagram(n, {Interval{1, n}}, std::move(arcs)); }
Diagram two_bb(int n, int cut, std::vector<Arc> arcs) {
    return build_diagram(n, {Interval{1, cut}, Interval{cut + 1, n}}, std::move(arcs));
}
} // namespace

TEST_CASE("shadow projection examples") {
    // (1,8) crosses nothing; the remaining pair crosses
    const Diagram a = shadow(one_bb(8, {{1, 8}, {2, 4}, {3, 5}}));
    CHECK(a.n == 4);
    CHECK(a.arcs == std::vector<Arc>{{1, 3}, {2, 4}});

    // any secondary structure projects to the empty diagram
    const Diagram b = shadow(one_bb(8, {{1, 8}, {2, 5}, {6, 7}}));
    CHECK(b.n == 0);
    CHECK(b.backbone_count() == 1);

    // a crossing pair with both arcs doubled into stacks collapses back to it
    const Diagram c0 = one_bb(8, {{1, 6}, {2, 5}, {3, 8}, {4, 7}});
    CHECK(genus(c0) == 1);
    const Diagram c = shadow(c0);
    CHECK(c.arcs == std::vector<Arc>{{1, 3}, {2, 4}});
    CHECK(genus(c) == 1);

    // two-backbone secondary input keeps both (empty) backbones
    const Diagram d = shadow(two_bb(4, 2, {{1, 2}, {3, 4}}));
    CHECK(d.backbone_count() == 2);
    CHECK(d.n == 0);
}

TEST_CASE("shadow idempotence and genus behavior") {
    // Genus preservation is the classical one-backbone fact; over two
    // backbones it can fail when a non-crossing exterior arc wraps the
    // junction with co-cyclic rotations (see the pinned counterexample).
    std::mt19937_64 rng(31);
    for (int t = 0; t < 2000; ++t) {
        const Diagram d = testhelpers::random_diagram(rng);
        const Diagram s = shadow(d);
        CHECK(same_labeled_diagram(shadow(s), s));
        CHECK(s.backbone_count() == d.backbone_count());
        if (d.backbone_count() == 1) {
            CHECK(genus(s) == genus(d));
        } else {
            bool has_free_exterior = false;
            for (const auto& a : d.arcs) {
                if (d.kind(a) != ArcKind::Exterior) continue;
                bool crossing = false;
                for (const auto& b : d.arcs)
                    if (!(a == b) && arcs_cross(a, b)) crossing = true;
                if (!crossing) has_free_exterior = true;
            }
            if (!has_free_exterior)
                CHECK(genus(s) == genus(d));
            else
                CHECK(genus(s) <= genus(d));
        }
    }
}

TEST_CASE("junction-wrapping free exterior arc drops genus under projection") {
    // arcs {(1,6),(3,7),(4,5)} over [1..4],[5..9]: a theta fatgraph with
    // co-cyclic rotations, genus 1; its shadow is the crossing hybrid, genus 0
    const Diagram d = two_bb(9, 4, {{1, 6}, {3, 7}, {4, 5}});
    CHECK(genus(d) == 1);
    const Diagram s = shadow(d);
    CHECK(s.arcs == std::vector<Arc>{{1, 3}, {2, 4}});
    CHECK(genus(s) == 0);
}

TEST_CASE("crossing components") {
    CHECK(crossing_components(one_bb(4, {{1, 3}, {2, 4}})).size() == 1);
    CHECK(crossing_components(one_bb(4, {{1, 4}, {2, 3}})).size() == 2);
    CHECK(crossing_components(one_bb(6, {{1, 3}, {2, 5}, {4, 6}})).size() == 1);
}

TEST_CASE("irreducible shadow decomposition") {
    // crossing hybrid: a single I2^1 entry
    const auto dec = irreducible_shadows(two_bb(4, 2, {{1, 3}, {2, 4}}));
    CHECK(dec.i1.empty());
    CHECK(dec.i2_0.empty());
    REQUIRE(dec.i2_1.size() == 1);
    CHECK(dec.i2_1[0].genus == 0);
    CHECK(dec.i2_1[0].irreducible);

    // one-backbone H-type pseudoknot: a single I1 entry
    const auto dec1 = irreducible_shadows(one_bb(4, {{1, 3}, {2, 4}}));
    REQUIRE(dec1.i1.size() == 1);
    CHECK(dec1.i1[0].genus == 1);
    CHECK(dec1.i2_0.empty());
    CHECK(dec1.i2_1.empty());

    // composite: a one-backbone irreducible nested under two two-backbone
    // irreducibles; three entries, one-backbone removed first in the trace
    const Diagram ch = two_bb(4, 2, {{1, 3}, {2, 4}});
    Diagram comp = product_bullet(ch, ch); // R = [1..4], S = [5..8]
    // embed an H-pseudoknot inside the R part of the inner layer
    std::vector<Arc> arcs = comp.arcs;
    // shift: insert 4 vertices after position 4 (inside the inner corner on R)
    for (auto& a : arcs) {
        if (a.first > 4) a.first += 4;
        if (a.second > 4) a.second += 4;
    }
    arcs.push_back({5, 7});
    arcs.push_back({6, 8});
    const Diagram big = build_diagram(12, {Interval{1, 8}, Interval{9, 12}}, arcs);
    const auto dec2 = irreducible_shadows(big);
    CHECK(dec2.i1.size() == 1);
    CHECK(dec2.i2_1.size() == 2);
    REQUIRE(dec2.trace.size() >= 3);
    CHECK(dec2.trace[0].action == "remove");
    CHECK(dec2.trace[0].backbones_spanned == 1);
    CHECK(dec2.trace[1].backbones_spanned == 2);
}

TEST_CASE("gamma classification") {
    CHECK(gamma_index(one_bb(8, {{1, 8}, {2, 5}, {6, 7}})) == 0); // secondary
    CHECK(gamma_index(two_bb(4, 2, {{1, 3}, {2, 4}})) == 0);      // crossing hybrid
    CHECK(gamma_index(one_bb(6, {{1, 3}, {2, 4}, {5, 6}})) == 1); // contains H-pseudoknot
    CHECK(is_gamma_structure(two_bb(4, 2, {{1, 3}, {2, 4}}), 0));
    CHECK_FALSE(is_gamma_structure(one_bb(4, {{1, 3}, {2, 4}}), 0));
}

TEST_CASE("genus by decomposition") {
    const Diagram ch = two_bb(4, 2, {{1, 3}, {2, 4}});
    CHECK(genus_by_decomposition(ch) == 0);
    CHECK(genus(ch) == 0);

    const Diagram chch = product_bullet(ch, ch);
    CHECK(genus_by_decomposition(chch) == 1);
    CHECK(genus(chch) == 1);

    // an I2^0 entry (genus 1, alpha-delta 0) composed with an I2^1 entry
    // (genus 0): total 1 + (0+1) = 2
    const Diagram k_cut1 = two_bb(6, 1, {{1, 4}, {2, 5}, {3, 6}});
    CHECK(genus(k_cut1) == 1);
    CHECK(genus(glue_alpha(k_cut1)) == 1); // delta 0
    const Diagram mix = product_bullet(k_cut1, ch);
    const auto dec = irreducible_shadows(mix);
    CHECK(dec.i2_0.size() == 1);
    CHECK(dec.i2_1.size() == 1);
    CHECK(genus_by_decomposition(mix) == 2);
    CHECK(genus(mix) == 2);

    // nested hybrid: exterior arcs but no irreducible two-backbone shadow
    CHECK_THROWS_AS(genus_by_decomposition(two_bb(4, 2, {{1, 4}, {2, 3}})), InputError);
}

TEST_CASE("decomposition genus equals the projected genus on random diagrams") {
    // The class formula reads off the irreducible shadows, so it computes the
    // genus of sigma(d); for junction-clean diagrams this equals genus(d).
    std::mt19937_64 rng(37);
    int checked = 0;
    for (int t = 0; t < 20000 && checked < 500; ++t) {
        const Diagram d = testhelpers::random_diagram(rng, 8);
        if (d.backbone_count() != 2) continue;
        try {
            const int by_dec = genus_by_decomposition(d);
            ++checked;
            CHECK(by_dec == genus(shadow(d)));
        } catch (const InputError&) {
            // precondition not met
        }
    }
    CHECK(checked >= 500);
}
