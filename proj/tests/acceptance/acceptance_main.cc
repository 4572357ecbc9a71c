// Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "ixfold/atlas.hh"
#include "ixfold/fold.hh"
#include "ixfold/json_io.hh"
#include "ixfold/oracle.hh"
#include "ixfold/shadow.hh"
#include "ixfold/topology.hh"

using namespace ixfold;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion, detail.c_str());
    if (!ok) ++g_failures;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

Diagram random_diagram(std::mt19937_64& rng, int max_arcs) {
    const int b = 1 + static_cast<int>(rng() % 2);
    const int arcs = static_cast<int>(rng() % (max_arcs + 1));
    const int extra = static_cast<int>(rng() % 5);
    const int n = 2 * arcs + extra;
    std::vector<int> verts(n);
    for (int i = 0; i < n; ++i) verts[i] = i + 1;
    std::shuffle(verts.begin(), verts.end(), rng);
    std::vector<Arc> as;
    for (int k = 0; k < arcs; ++k) {
        int u = verts[2 * k], v = verts[2 * k + 1];
        if (u > v) std::swap(u, v);
        as.emplace_back(u, v);
    }
    std::vector<Interval> bbs;
    if (b == 1) {
        bbs = {{1, n}};
    } else if (n == 0) {
        bbs = {{1, 0}, {1, 0}};
    } else {
        const int cut = 1 + static_cast<int>(rng() % n);
        bbs = {{1, cut}, {cut + 1, n}};
    }
    return build_diagram(n, bbs, std::move(as));
}

std::string random_seq(std::mt19937_64& rng, int len) {
    static const char* a = "ACGU";
    std::string s;
    for (int i = 0; i < len; ++i) s += a[rng() % 4];
    return s;
}

void criterion_1() {
    const auto t0 = Clock::now();
    const auto g1 = enumerate_shadows_one_backbone(1);
    const auto tb2 = enumerate_irreducible_two_backbone(0);

    bool ok = g1.size() == 4 && tb2.size() == 7;
    // cut-derived comparison
    std::vector<Diagram> cuts;
    for (const auto& src : g1)
        for (int pos = 1; pos < src.shadow.n; ++pos) {
            const Diagram d = cut_backbone(src.shadow, pos);
            bool nontrivial = true;
            for (const auto& bb : d.backbones)
                if (bb.empty()) nontrivial = false;
            if (!nontrivial || !is_irreducible(d) || genus(d) != 0) continue;
            if (!same_labeled_diagram(shadow(d), d)) continue;
            cuts.push_back(d);
        }
    ok = ok && cuts.size() == 7;
    for (const auto& d : cuts) {
        bool found = false;
        for (const auto& e : tb2)
            if (same_labeled_diagram(e.shadow, d)) found = true;
        ok = ok && found;
    }
    const double dt = seconds_since(t0);
    ok = ok && dt < 10.0;
    std::ostringstream msg;
    msg << "atlas counts: one-backbone g=1 -> " << g1.size() << " (want 4), two-backbone g=0 -> " << tb2.size()
        << " (want 7, cut-derived " << cuts.size() << "), " << dt << " s";
    report(1, ok, msg.str());
}

void criterion_2() {
    const auto t0 = Clock::now();
    bool ok = true;
    std::ostringstream msg;
    for (int g : {1, 2}) {
        const auto atlas = enumerate_shadows_one_backbone(g);
        std::set<int> counts;
        for (const auto& e : atlas) {
            if (e.arcs < 2 * g || e.arcs > 6 * g - 2) ok = false;
            if (e.genus != g) ok = false;
            counts.insert(e.arcs);
        }
        for (int m = 2 * g; m <= 6 * g - 2; ++m)
            if (!counts.count(m)) ok = false;
        msg << "g=" << g << ": " << atlas.size() << " shadows, arc counts " << *counts.begin() << ".."
            << *counts.rbegin() << "; ";

        // inserted-arc family: genus, membership and the boundary split pattern
        for (int ell = 2 * g; ell <= 6 * g - 2; ++ell) {
            const Diagram s = construct_s_sequence(g, ell);
            if (genus(s) != g || static_cast<int>(s.arcs.size()) != ell) ok = false;
            bool found = false;
            for (const auto& e : atlas)
                if (same_labeled_diagram(e.shadow, s)) found = true;
            if (!found) ok = false;
            // expected boundary multiset: {4g - i} plus i cycles of length 3
            const int i = ell - 2 * g;
            std::multiset<int> expect{4 * g - i};
            for (int t = 0; t < i; ++t) expect.insert(3);
            const auto lens = boundary_components(s).boundary_lengths;
            std::multiset<int> got(lens.begin(), lens.end());
            if (got != expect) ok = false;
        }
    }
    const double dt = seconds_since(t0);
    ok = ok && dt < 120.0;
    msg << dt << " s";
    report(2, ok, "shadow bounds and inserted-arc family: " + msg.str());
}

void criteria_3_4() {
    std::mt19937_64 rng(1009);
    bool ok3 = true;
    int glue_checked = 0, idem_bad = 0, genus_bad = 0, genus_bad_one_bb = 0;
    for (int t = 0; t < 10000; ++t) {
        const Diagram d = random_diagram(rng, 12);
        const auto rep = boundary_components(d);
        int sides = 0;
        for (int l : rep.boundary_lengths) sides += l;
        if (sides != 2 * static_cast<int>(d.arcs.size())) ok3 = false;
        if (rep.r < 1) ok3 = false;
        // per component 2 - 2g - r = b - n demands an even, nonnegative handle count;
        // cross-check the whole invariant against the independent inflated walk
        for (int g : rep.genus_per_component)
            if (g < 0) ok3 = false;
        if (genus_inflated(d) != rep.genus_total) ok3 = false;
        if (d.backbone_count() == 2) {
            const int delta = genus(glue_alpha(d)) - rep.genus_total;
            ++glue_checked;
            if (delta != 0 && delta != 1) ok3 = false;
        }
        const Diagram s = shadow(d);
        if (!same_labeled_diagram(shadow(s), s)) ++idem_bad;
        if (genus(s) != rep.genus_total) {
            ++genus_bad;
            if (d.backbone_count() == 1) ++genus_bad_one_bb;
        }
    }
    report(3, ok3, "Euler and boundary identities on 10000 random diagrams (glue checked on " +
                       std::to_string(glue_checked) + ")");
    const bool ok4 = idem_bad == 0 && genus_bad == 0;
    std::ostringstream m4;
    m4 << "shadow projection on the same diagrams: idempotence violations " << idem_bad
       << ", genus-preservation violations " << genus_bad << " (one-backbone: " << genus_bad_one_bb << ")";
    if (genus_bad > 0 && genus_bad_one_bb == 0)
        m4 << " -- all violations are two-backbone diagrams with junction-wrapping non-crossing exterior "
              "arcs, where the source claim fails; see the decisions ledger";
    report(4, ok4, m4.str());
}

void criterion_5() {
    std::mt19937_64 rng(2003);
    int checked = 0, direct_bad = 0, projected_bad = 0;
    int attempts = 0;
    while (checked < 1000 && attempts < 400000) {
        ++attempts;
        const Diagram d = random_diagram(rng, 9);
        if (d.backbone_count() != 2) continue;
        try {
            const int by_dec = genus_by_decomposition(d);
            ++checked;
            if (by_dec != genus(d)) ++direct_bad;
            if (by_dec != genus(shadow(d))) ++projected_bad;
        } catch (const InputError&) {
        }
    }
    const bool ok = checked >= 1000 && direct_bad == 0;
    std::ostringstream msg;
    msg << "decomposition genus formula on " << checked << " two-backbone diagrams: " << direct_bad
        << " disagreements with the direct genus";
    if (direct_bad > 0)
        msg << " (formula equals the projected genus in " << (checked - projected_bad) << "/" << checked
            << " cases; the stated identity fails exactly on junction-wrapping free exterior arcs, see "
               "the decisions ledger)";
    report(5, ok, msg.str());
}

void criterion_6() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(3001);
    EnergyModel m;
    bool ok = true;
    int done = 0, mismatch = 0;
    std::ostringstream bad;
    for (int t = 0; t < 200; ++t) {
        int total;
        if (t < 140)
            total = 2 + static_cast<int>(rng() % 9); // 2..10
        else if (t < 180)
            total = 11 + static_cast<int>(rng() % 2); // 11..12
        else
            total = 13 + static_cast<int>(rng() % 2); // 13..14
        const int nr = 1 + static_cast<int>(rng() % (total - 1));
        const int ns = total - nr;
        const SequencePair p{random_seq(rng, nr), random_seq(rng, ns)};
        FoldEngine eng(p, m);
        const auto oracle = enumerate_structures(p, m, false);
        const bool count_ok = eng.count_structures() == oracle.count;
        const double q = eng.partition_function();
        const bool q_ok = std::abs(q - oracle.q) <= 1e-9 * std::max(1.0, std::abs(oracle.q));
        auto [e, s] = eng.mfe();
        (void)e;
        bool sound = is_valid_interaction_structure(s, p, m);
        for (const auto& smp : eng.boltzmann_sample(5, 99 + t))
            if (!is_valid_interaction_structure(smp, p, m)) sound = false;
        if (!(count_ok && q_ok && sound)) {
            ok = false;
            if (++mismatch <= 3) bad << " [" << p.r << "&" << p.s << "]";
        }
        ++done;
    }
    const double dt = seconds_since(t0);
    ok = ok && dt < 600.0;
    std::ostringstream msg;
    msg << "grammar vs oracle on " << done << " pairs (<=14 nt), emitted structures sound, " << dt << " s"
        << bad.str();
    report(6, ok, msg.str());
}

void criterion_7() {
    std::mt19937_64 rng(4001);
    EnergyModel m;
    bool ok = true;
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); };
    for (int t = 0; t < 50; ++t) {
        const int total = 2 + static_cast<int>(rng() % 11); // 2..12
        const int nr = 1 + static_cast<int>(rng() % (total - 1));
        const SequencePair p{random_seq(rng, nr), random_seq(rng, total - nr)};
        FoldEngine eng(p, m);
        const auto pp = eng.pairing_probabilities();
        const auto oracle = enumerate_structures(p, m, false);
        for (size_t k = 0; k < pp.ext.size(); ++k)
            if (!close(pp.ext[k], oracle.ext[k])) ok = false;
        for (size_t k = 0; k < pp.int_r.size(); ++k)
            if (!close(pp.int_r[k], oracle.int_r[k])) ok = false;
        for (size_t k = 0; k < pp.int_s.size(); ++k)
            if (!close(pp.int_s[k], oracle.int_s[k])) ok = false;
        if (pp.hybrid.size() != oracle.hybrid.size()) ok = false;
        for (const auto& [k, v] : oracle.hybrid)
            if (!pp.hybrid.count(k) || !close(pp.hybrid.at(k), v)) ok = false;
        if (pp.gap_r.size() != oracle.gap_r.size() || pp.gap_s.size() != oracle.gap_s.size()) ok = false;
        for (const auto& [k, v] : oracle.gap_r)
            if (!pp.gap_r.count(k) || !close(pp.gap_r.at(k), v)) ok = false;
        for (const auto& [k, v] : oracle.gap_s)
            if (!pp.gap_s.count(k) || !close(pp.gap_s.at(k), v)) ok = false;
        for (const auto& [k, v] : oracle.target)
            if (!pp.target.count(k) || !close(pp.target.at(k), v)) ok = false;
    }
    report(7, ok, "pair, hybrid, gap and target marginals match the oracle on 50 pairs (<=12 nt)");
}

void criterion_8() {
    EnergyModel m;
    m.interior = {0, 0, 0};
    m.exterior = {0, 0, 0};
    FoldEngine eng({"AA", "UU"}, m);
    const int k = 70000;
    const auto samples = eng.boltzmann_sample(k, 2024);
    std::map<std::string, int> freq;
    for (const auto& s : samples) freq[render_structure(s.to_diagram())]++;
    bool ok = freq.size() == 7;
    const double p = 1.0 / 7.0;
    const double sigma = std::sqrt(k * p * (1 - p));
    std::ostringstream msg;
    for (const auto& [str, c] : freq) {
        if (std::abs(c - k * p) > 3 * sigma) ok = false;
        msg << " " << str << ":" << c;
    }
    // determinism: same seed, byte-identical serialization
    const auto again = eng.boltzmann_sample(200, 777);
    const auto again2 = eng.boltzmann_sample(200, 777);
    std::string s1, s2;
    for (const auto& s : again) s1 += to_json(s).dump();
    for (const auto& s : again2) s2 += to_json(s).dump();
    ok = ok && s1 == s2;
    report(8, ok, "uniform sampling within 3 sigma at k=70000 and seed-reproducible;" + msg.str());
}

void criterion_9() {
    std::mt19937_64 rng(5001);
    EnergyModel m;
    auto time_fill = [&](int n) {
        const SequencePair p{random_seq(rng, n), random_seq(rng, n)};
        const auto t0 = Clock::now();
        FoldEngine eng(p, m);
        eng.partition_function();
        return seconds_since(t0);
    };
    double t10 = 1e9, t20 = 0, t30 = 0;
    for (int rep = 0; rep < 3; ++rep) t10 = std::min(t10, time_fill(10));
    t20 = time_fill(20);
    t30 = time_fill(30);
    const double ratio = t20 / std::max(t10, 0.01);
    const bool ok = t20 < 60.0 && t30 < 900.0 && ratio <= 100.0;
    std::ostringstream msg;
    msg << "fill times: 10+10 " << t10 << " s, 20+20 " << t20 << " s, 30+30 " << t30 << " s; ratio "
        << ratio << " (<=100); all DP tables indexed by two interval ranges (4 indices)";
    report(9, ok, msg.str());
}

void criterion_10() {
    // crossing hybrid: 0-structure over two backbones, not AP
    const Diagram ch = build_diagram(4, {Interval{1, 2}, Interval{3, 4}}, {{1, 3}, {2, 4}});
    bool ok = is_gamma_structure(ch, 0);
    const auto ap = is_ap_structure(ch);
    ok = ok && !ap.ok && ap.violated_clause == 2;

    // covering-arc instance: four concatenated two-backbone shadows under a
    // tight interior arc; AP clauses pass but gamma >= 1
    const Diagram t1 = build_diagram(4, {Interval{1, 1}, Interval{2, 4}}, {{1, 3}, {2, 4}});
    Diagram comp = t1;
    for (int k = 1; k < 4; ++k) comp = product_bullet(comp, t1);
    const int nr = comp.backbones[0].size();
    std::vector<Arc> arcs;
    for (const auto& a : comp.arcs) {
        auto shift = [&](int v) { return v <= nr ? v + 1 : v + 2; };
        arcs.emplace_back(shift(a.first), shift(a.second));
    }
    arcs.emplace_back(1, nr + 2);
    const Diagram covered =
        build_diagram(comp.n + 2, {Interval{1, nr + 2}, Interval{nr + 3, comp.n + 2}}, arcs);
    const auto ap2 = is_ap_structure(covered);
    const int gamma = gamma_index(covered);
    ok = ok && ap2.ok && gamma >= 1;
    std::ostringstream msg;
    msg << "crossing hybrid: 0-structure, AP clause " << ap.violated_clause
        << " violated; covering instance: AP-compatible, gamma = " << gamma;
    report(10, ok, msg.str());
}

} // namespace

int main() {
    criterion_1();
    criterion_2();
    criteria_3_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    if (g_failures) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
