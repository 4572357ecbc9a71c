#include <doctest.h>

#include <random>

#include "ixfold/diagram.hh"
#include "helpers.hh"

using namespace ixfold;

TEST_CASE("build_diagram validates input") {
    CHECK_NOTHROW(build_diagram(4, {Interval{1, 4}}, {{1, 3}, {2, 4}}));
    CHECK_THROWS_AS(build_diagram(4, {Interval{1, 2}, Interval{3, 4}}, {{1, 3}, {1, 4}}), InputError);
    CHECK_THROWS_AS(build_diagram(4, {Interval{1, 4}}, {{0, 2}}), InputError);
    CHECK_THROWS_AS(build_diagram(4, {Interval{1, 4}}, {{2, 5}}), InputError);
    CHECK_THROWS_AS(build_diagram(4, {Interval{1, 2}, Interval{4, 4}}, {}), InputError);
    CHECK_THROWS_AS(build_diagram(6, {Interval{1, 2}, Interval{3, 4}, Interval{5, 6}}, {}), InputError);

    const Diagram two = build_diagram(4, {Interval{1, 2}, Interval{3, 4}}, {{1, 3}, {2, 4}});
    CHECK(two.kind({1, 3}) == ArcKind::Exterior);
    CHECK(two.kind({2, 4}) == ArcKind::Exterior);
}

TEST_CASE("arcs_cross") {
    CHECK(arcs_cross({1, 3}, {2, 4}));
    CHECK_FALSE(arcs_cross({1, 4}, {2, 3}));
    CHECK_FALSE(arcs_cross({1, 2}, {3, 4}));
    // symmetric, irreflexive
    std::mt19937_64 rng(7);
    for (int t = 0; t < 200; ++t) {
        int a = 1 + rng() % 10, b = 1 + rng() % 10, c = 1 + rng() % 10, d = 1 + rng() % 10;
        if (a == b || c == d) continue;
        Arc x{std::min(a, b), std::max(a, b)}, y{std::min(c, d), std::max(c, d)};
        CHECK(arcs_cross(x, y) == arcs_cross(y, x));
        CHECK_FALSE(arcs_cross(x, x));
    }
}

TEST_CASE("zig-zag detection") {
    // interior arcs R1R4 and S2S5, exterior R2S1, R3S3, R6S4: dependent through
    // R3S3, not subsumed either way
    const int nr = 6;
    auto S = [&](int k) { return nr + k; };
    const Diagram d = build_diagram(12, {Interval{1, 6}, Interval{7, 12}},
                                    {{1, 4}, {S(2), S(5)}, {2, S(1)}, {3, S(3)}, {6, S(4)}});
    auto z = detect_zigzag(d);
    REQUIRE(z.has_value());
    CHECK(z->r_interior == Arc{1, 4});
    CHECK(z->s_interior == Arc{S(2), S(5)});
    CHECK(z->exterior == Arc{3, S(3)});

    // no interior arcs at all
    const Diagram plain = build_diagram(4, {Interval{1, 2}, Interval{3, 4}}, {{1, 3}, {2, 4}});
    CHECK_FALSE(detect_zigzag(plain).has_value());

    // one interior arc per backbone, dependent, all exterior feet inside both:
    // subsumption holds, no zig-zag
    const Diagram sub = build_diagram(12, {Interval{1, 6}, Interval{7, 12}},
                                      {{1, 6}, {S(1), S(6)}, {2, S(2)}, {3, S(3)}, {4, S(4)}});
    CHECK_FALSE(detect_zigzag(sub).has_value());

    CHECK_THROWS_AS(detect_zigzag(build_diagram(2, {Interval{1, 2}}, {})), InputError);
}

TEST_CASE("AP classification") {
    // crossing hybrid: 0-structure but not AP (clause 2)
    const Diagram ch = build_diagram(4, {Interval{1, 2}, Interval{3, 4}}, {{1, 3}, {2, 4}});
    const auto rep = is_ap_structure(ch);
    CHECK_FALSE(rep.ok);
    CHECK(rep.violated_clause == 2);

    // single nested hybrid: AP
    const Diagram nh = build_diagram(4, {Interval{1, 2}, Interval{3, 4}}, {{1, 4}, {2, 3}});
    CHECK(is_ap_structure(nh).ok);

    // crossing interior arcs on one strand: clause 1
    const Diagram pk = build_diagram(6, {Interval{1, 4}, Interval{5, 6}}, {{1, 3}, {2, 4}});
    const auto rep1 = is_ap_structure(pk);
    CHECK_FALSE(rep1.ok);
    CHECK(rep1.violated_clause == 1);
}

TEST_CASE("dot-bracket parse and render") {
    const Diagram a = parse_structure("((..))");
    CHECK(a.n == 6);
    CHECK(a.backbone_count() == 1);
    CHECK(a.arcs == std::vector<Arc>{{1, 6}, {2, 5}});

    const Diagram b = parse_structure("([&)]");
    CHECK(b.backbone_count() == 2);
    CHECK(b.arcs == std::vector<Arc>{{1, 3}, {2, 4}});

    CHECK(render_structure(parse_structure("((&))")) == "((&))");

    CHECK_THROWS_AS(parse_structure("(("), InputError);
    CHECK_THROWS_AS(parse_structure("))"), InputError);

    // five mutually crossing arcs need five layers
    std::vector<Arc> five;
    for (int t = 1; t <= 5; ++t) five.emplace_back(t, t + 5);
    const Diagram k5 = build_diagram(10, {Interval{1, 10}}, five);
    CHECK_THROWS_AS(render_structure(k5), ResourceLimit);

    // round trip on random diagrams
    std::mt19937_64 rng(11);
    for (int t = 0; t < 300; ++t) {
        const Diagram d = testhelpers::random_diagram(rng, 6);
        try {
            const std::string text = render_structure(d);
            const Diagram back = parse_structure(text);
            CHECK(back.n == d.n);
            CHECK(back.arcs == d.arcs);
        } catch (const ResourceLimit&) {
            // layer overflow is a legal outcome for dense crossing graphs
        }
    }
}

TEST_CASE("AP verdict implies zig-zag freedom") {
    std::mt19937_64 rng(57);
    for (int t = 0; t < 500; ++t) {
        const Diagram d = testhelpers::random_diagram(rng, 8);
        if (d.backbone_count() != 2) continue;
        if (is_ap_structure(d).ok) CHECK_FALSE(detect_zigzag(d).has_value());
    }
}

TEST_CASE("sequence normalization") {
    const auto p = make_sequence_pair("acgt", "TTT");
    CHECK(p.r == "ACGU");
    CHECK(p.s == "UUU");
    CHECK_THROWS_AS(make_sequence_pair("ACGX", ""), InputError);
}
