#include "ixfold/oracle.hh"

#include <algorithm>
#include <cmath>

#include "ixfold/shadow.hh"

namespace ixfold {

namespace {

struct Kahan {
    double sum = 0.0, c = 0.0;
    void add(double x) {
        const double y = x - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

struct Enumerator {
    const SequencePair& pair;
    const EnergyModel& em;
    int nr = 0, ns = 0, n = 0;
    bool keep = true;

    Enumerator(const SequencePair& p, const EnergyModel& m, bool k)
        : pair(p), em(m), nr(static_cast<int>(p.r.size())), ns(static_cast<int>(p.s.size())), n(nr + ns), keep(k) {}

    OracleResult res;
    Kahan q;
    std::map<BlockKey, Kahan> hyb, gr, gs;
    std::vector<Kahan> extk, intrk, intsk;

    std::vector<std::pair<Arc, ArcKind>> arcs;
    std::vector<char> used;

    char letter(int v) const { return v <= nr ? pair.r[v - 1] : pair.s[v - nr - 1]; }
    bool in_r(int v) const { return v <= nr; }

    void run() {
        used.assign(n + 1, 0);
        extk.assign(static_cast<size_t>(nr) * ns, {});
        intrk.assign(static_cast<size_t>(nr) * nr, {});
        intsk.assign(static_cast<size_t>(ns) * ns, {});
        visit(); // every recursion node is one candidate structure
        rec(1);
        res.q = q.sum;
        for (size_t k = 0; k < extk.size(); ++k) res.ext.push_back(extk[k].sum / q.sum);
        for (size_t k = 0; k < intrk.size(); ++k) res.int_r.push_back(intrk[k].sum / q.sum);
        for (size_t k = 0; k < intsk.size(); ++k) res.int_s.push_back(intsk[k].sum / q.sum);
        for (auto& [k, v] : hyb) res.hybrid[k] = v.sum / q.sum;
        for (auto& [k, v] : gr) res.gap_r[k] = v.sum / q.sum;
        for (auto& [k, v] : gs) res.gap_s[k] = v.sum / q.sum;
        for (const auto& [k, v] : res.hybrid) res.target[{k.idx[0], k.idx[1]}] += v;
        for (const auto& [k, v] : res.gap_r) res.paring_r[{k.idx[0], k.idx[1]}] += v;
        for (const auto& [k, v] : res.gap_s) res.paring_s[{k.idx[0], k.idx[1]}] += v;
    }

    void rec(int p) {
        while (p <= n && used[p]) ++p;
        if (p > n) return;
        used[p] = 1;
        for (int v = p + 1; v <= n; ++v) {
            if (used[v]) continue;
            if (!pair_class(letter(p), letter(v))) continue;
            const ArcKind kind = in_r(p) == in_r(v)
                                     ? (in_r(p) ? ArcKind::InteriorR : ArcKind::InteriorS)
                                     : ArcKind::Exterior;
            used[v] = 1;
            arcs.push_back({{p, v}, kind});
            visit();
            rec(p + 1);
            arcs.pop_back();
            used[v] = 0;
        }
        used[p] = 0;
        // p unpaired
        used[p] = 2;
        rec(p + 1);
        used[p] = 0;
    }

    bool theta_ok() const {
        for (const auto& [a, kind] : arcs) {
            if (kind == ArcKind::Exterior) continue;
            if (a.second - a.first > em.theta) continue;
            bool exempt = false;
            for (const auto& [b, kind2] : arcs) {
                if (kind2 != ArcKind::Exterior) continue;
                if ((a.first < b.first && b.first < a.second) || (a.first < b.second && b.second < a.second))
                    exempt = true;
            }
            if (!exempt) return false;
        }
        return true;
    }

    void visit() {
        if (!theta_ok()) return;
        InteractionStructure s;
        s.n_r = nr;
        s.n_s = ns;
        s.arcs = arcs;
        std::sort(s.arcs.begin(), s.arcs.end());
        if (!is_gamma_structure(s.to_diagram(), 0)) return;

        s.energy = structure_energy(s, pair, em);
        const double w = std::exp(-s.energy / em.rt);
        res.count += 1;
        q.add(w);
        if (keep) res.structures.push_back(s);

        for (const auto& [a, kind] : s.arcs) {
            switch (kind) {
                case ArcKind::Exterior: extk[(a.first - 1) * ns + (a.second - nr - 1)].add(w); break;
                case ArcKind::InteriorR: intrk[(a.first - 1) * nr + (a.second - 1)].add(w); break;
                case ArcKind::InteriorS:
                    intsk[(a.first - nr - 1) * ns + (a.second - nr - 1)].add(w);
                    break;
            }
        }

        // maximal pure hybrid runs: chains of consecutively nested exterior
        // arcs with all-unpaired separations on both backbones
        std::vector<Arc> exts;
        std::vector<char> paired(n + 1, 0);
        for (const auto& [a, kind] : s.arcs) {
            paired[a.first] = paired[a.second] = 1;
            if (kind == ArcKind::Exterior) exts.push_back(a);
        }
        std::sort(exts.begin(), exts.end());
        auto bare = [&](int lo, int hi) { // open interval all unpaired
            for (int v = lo + 1; v < hi; ++v)
                if (paired[v]) return false;
            return true;
        };
        std::vector<char> taken(exts.size(), 0);
        for (size_t a0 = 0; a0 < exts.size(); ++a0) {
            if (taken[a0]) continue;
            size_t first = a0, last = a0;
            taken[a0] = 1;
            while (last + 1 < exts.size()) {
                const Arc& o = exts[last];
                const Arc& in = exts[last + 1];
                if (!(o.first < in.first && in.second < o.second)) break;
                if (!bare(o.first, in.first) || !bare(in.second, o.second)) break;
                ++last;
                taken[last] = 1;
            }
            const Arc outer = exts[first], inner = exts[last];
            hyb[{{outer.first, inner.first, inner.second - nr, outer.second - nr}}].add(w);
        }

        // gap tubes: per tight component and backbone, the nested chain of
        // interior arcs that cross exterior arcs of the component
        const Diagram d = s.to_diagram();
        for (const auto& comp : crossing_components(d)) {
            if (comp.size() < 2) continue;
            for (int bb = 0; bb < 2; ++bb) {
                std::vector<Arc> tube;
                for (int k : comp) {
                    const Arc& a = d.arcs[k];
                    const bool fr = a.first <= nr, sr2 = a.second <= nr;
                    if (fr && sr2 && bb == 0) tube.push_back(a);
                    if (!fr && !sr2 && bb == 1) tube.push_back(a);
                }
                if (tube.empty()) continue;
                std::sort(tube.begin(), tube.end());
                const Arc outer = tube.front(), inner = tube.back();
                if (bb == 0)
                    gr[{{outer.first, inner.first, inner.second, outer.second}}].add(w);
                else
                    gs[{{outer.first - nr, inner.first - nr, inner.second - nr, outer.second - nr}}].add(w);
            }
        }
    }
};

} // namespace

OracleResult enumerate_structures(const SequencePair& rawpair, const EnergyModel& model, bool keep_structures) {
    model.validate();
    const SequencePair pair = make_sequence_pair(rawpair.r, rawpair.s);
    const int nr = static_cast<int>(pair.r.size()), ns = static_cast<int>(pair.s.size());
    if (nr + ns > model.oracle_cap)
        throw ResourceLimit("LengthCap: oracle enumeration capped at n_R + n_S = " +
                            std::to_string(model.oracle_cap));
    Enumerator en(pair, model, keep_structures);
    en.res.n_r = nr;
    en.res.n_s = ns;
    en.run();
    return en.res;
}

} // namespace ixfold
