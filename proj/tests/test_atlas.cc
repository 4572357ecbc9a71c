#include <doctest.h>

#include <algorithm>
#include <map>

#include "ixfold/atlas.hh"
#include "ixfold/shadow.hh"
#include "ixfold/topology.hh"

using namespace ixfold;

TEST_CASE("one-backbone atlas, genus 0 and 1") {
    CHECK(enumerate_shadows_one_backbone(0).empty());

    const auto g1 = enumerate_shadows_one_backbone(1);
    CHECK(g1.size() == 4);
    std::map<int, int> hist;
    for (const auto& e : g1) {
        CHECK(e.genus == 1);
        CHECK(e.arcs >= 2);
        CHECK(e.arcs <= 4);
        CHECK(e.irreducible);
        hist[e.arcs]++;
    }
    CHECK(hist[2] == 1);
    CHECK(hist[3] == 2);
    CHECK(hist[4] == 1);

    CHECK_THROWS_AS(enumerate_shadows_one_backbone(4), ResourceLimit);
}

TEST_CASE("inserted-arc shadow family") {
    const Diagram s2 = construct_s_sequence(1, 2);
    CHECK(s2.arcs == std::vector<Arc>{{1, 3}, {2, 4}});
    const auto rep = boundary_components(s2);
    CHECK(rep.boundary_lengths == std::vector<int>{4});

    const Diagram s3 = construct_s_sequence(1, 3);
    CHECK(genus(s3) == 1);
    CHECK(s3.arcs.size() == 3);

    const Diagram t4 = construct_s_sequence(2, 4);
    CHECK(genus(t4) == 2);
    CHECK(boundary_components(t4).r == 1);

    const Diagram t10 = construct_s_sequence(2, 10);
    CHECK(genus(t10) == 2);
    CHECK(t10.arcs.size() == 10);
    const auto lens = boundary_components(t10).boundary_lengths;
    CHECK(std::count(lens.begin(), lens.end(), 2) == 1);
    CHECK(std::count(lens.begin(), lens.end(), 3) == static_cast<int>(lens.size()) - 1);

    // construction members appear in the enumerated atlas
    const auto g1 = enumerate_shadows_one_backbone(1);
    for (int ell = 2; ell <= 4; ++ell) {
        const Diagram s = construct_s_sequence(1, ell);
        bool found = false;
        for (const auto& e : g1)
            if (same_labeled_diagram(e.shadow, s)) found = true;
        CHECK(found);
    }

    CHECK_THROWS_AS(construct_s_sequence(1, 5), InputError);
    CHECK_THROWS_AS(construct_s_sequence(0, 1), InputError);
}

TEST_CASE("backbone cutting") {
    const Diagram h = build_diagram(4, {Interval{1, 4}}, {{1, 3}, {2, 4}});
    const Diagram mid = cut_backbone(h, 2);
    CHECK(mid.backbone_count() == 2);
    CHECK(genus(mid) == 0); // crossing hybrid

    const Diagram left = cut_backbone(h, 1);
    const int g = genus(left);
    CHECK(g >= 0);
    CHECK(g <= 1);

    // cut-then-glue round trip preserves the arc set
    for (int pos = 1; pos < 4; ++pos) CHECK(glue_alpha(cut_backbone(h, pos)).arcs == h.arcs);

    CHECK_THROWS_AS(cut_backbone(h, 0), InputError);
    CHECK_THROWS_AS(cut_backbone(h, 4), InputError);
}

TEST_CASE("two-backbone atlas at genus one stays within the arc bounds") {
    // derived by cutting the complete one-backbone atlases of genus 1 and 2;
    // the genus-2 enumeration makes this the slowest unit test
    const auto atlas = enumerate_irreducible_two_backbone(1);
    CHECK(atlas.size() > 0);
    for (const auto& e : atlas) {
        CHECK(e.genus == 1);
        CHECK(e.irreducible);
        CHECK(e.arcs >= 3);
        CHECK(e.arcs <= 10);
        CHECK(same_labeled_diagram(shadow(e.shadow), e.shadow));
    }
    CHECK_THROWS_AS(enumerate_irreducible_two_backbone(2), ResourceLimit);
}

TEST_CASE("seven irreducible two-backbone shadows of genus zero") {
    const auto atlas = enumerate_irreducible_two_backbone(0);
    CHECK(atlas.size() == 7);
    std::map<int, int> by_arcs;
    for (const auto& e : atlas) {
        CHECK(e.genus == 0);
        CHECK(e.irreducible);
        CHECK(e.arcs >= 2);
        CHECK(e.arcs <= 4);
        by_arcs[e.arcs]++;
        CHECK(same_labeled_diagram(shadow(e.shadow), e.shadow));
    }
    CHECK(by_arcs[2] >= 1);
    CHECK(by_arcs[3] >= 1);
    CHECK(by_arcs[4] >= 1);

    // equal to the set derived by cutting the four genus-1 shadows
    std::vector<Diagram> cut_derived;
    for (const auto& src : enumerate_shadows_one_backbone(1))
        for (int pos = 1; pos < src.shadow.n; ++pos) {
            const Diagram d = cut_backbone(src.shadow, pos);
            bool nontrivial = true;
            for (const auto& bb : d.backbones)
                if (bb.empty()) nontrivial = false;
            if (!nontrivial || !is_irreducible(d) || genus(d) != 0) continue;
            if (!same_labeled_diagram(shadow(d), d)) continue;
            cut_derived.push_back(d);
        }
    CHECK(cut_derived.size() == 7);
    for (const auto& d : cut_derived) {
        bool found = false;
        for (const auto& e : atlas)
            if (same_labeled_diagram(e.shadow, d)) found = true;
        CHECK(found);
    }
}
