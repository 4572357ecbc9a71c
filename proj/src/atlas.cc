#include "ixfold/atlas.hh"

#include <algorithm>
#include <atomic>
#include <thread>

#include "ixfold/shadow.hh"
#include "ixfold/topology.hh"

namespace ixfold {

namespace {

// Backtracking enumeration of perfect matchings on 2m points. A branch dies
// as soon as any fixed arc is sealed (no unused vertex inside) while still
// crossing nothing, or as soon as a stack of size two appears. Incremental
// per-arc bookkeeping keeps the node cost at O(m).
constexpr int kMaxArcs = 12;
constexpr int kMaxVerts = 2 * kMaxArcs;

struct MatchingEnum {
    int n2 = 0;
    bool prune_stacks = true; // off for two-backbone use: a straddling pair is not a stack
    int m = 0;
    Arc arcs[kMaxArcs];
    char used[kMaxVerts + 2];
    int inside_unused[kMaxArcs]; // unused vertices under each fixed arc
    char crossed[kMaxArcs];      // whether each fixed arc crosses something yet
    int newly[kMaxArcs][kMaxArcs];
    int nnewly[kMaxArcs];

    template <class Sink>
    void run(Sink&& sink, int forced_first_partner = 0) {
        m = 0;
        for (int v = 0; v <= n2 + 1; ++v) used[v] = 0;
        if (forced_first_partner > 0) {
            if (!push_arc(1, forced_first_partner)) return;
            rec(sink);
            pop_arc();
            return;
        }
        rec(sink);
    }

    bool push_arc(int p, int q) {
        const Arc a{p, q};
        if (prune_stacks)
            for (int k = 0; k < m; ++k)
                if ((arcs[k].first == p - 1 && arcs[k].second == q + 1) ||
                    (arcs[k].first == p + 1 && arcs[k].second == q - 1))
                    return false; // stack of size two
        int inside = 0;
        for (int v = p + 1; v < q; ++v)
            if (!used[v]) ++inside;
        int nn = 0;
        bool cr = false;
        for (int k = 0; k < m; ++k)
            if (arcs_cross(a, arcs[k])) {
                cr = true;
                if (!crossed[k]) {
                    crossed[k] = 1;
                    newly[m][nn++] = k;
                }
            }
        auto revert_cross = [&]() {
            for (int t = 0; t < nn; ++t) crossed[newly[m][t]] = 0;
        };
        if (inside == 0 && !cr) {
            revert_cross();
            return false; // sealed and mute forever
        }
        bool dead = false;
        for (int k = 0; k < m; ++k) {
            if (arcs[k].first < p && p < arcs[k].second) --inside_unused[k];
            if (arcs[k].first < q && q < arcs[k].second) --inside_unused[k];
            if (inside_unused[k] == 0 && !crossed[k]) dead = true;
        }
        if (dead) {
            for (int k = 0; k < m; ++k) {
                if (arcs[k].first < p && p < arcs[k].second) ++inside_unused[k];
                if (arcs[k].first < q && q < arcs[k].second) ++inside_unused[k];
            }
            revert_cross();
            return false;
        }
        used[p] = used[q] = 1;
        arcs[m] = a;
        inside_unused[m] = inside;
        crossed[m] = cr ? 1 : 0;
        nnewly[m] = nn;
        ++m;
        return true;
    }

    void pop_arc() {
        --m;
        const Arc a = arcs[m];
        for (int t = 0; t < nnewly[m]; ++t) crossed[newly[m][t]] = 0;
        used[a.first] = used[a.second] = 0;
        for (int k = 0; k < m; ++k) {
            if (arcs[k].first < a.first && a.first < arcs[k].second) ++inside_unused[k];
            if (arcs[k].first < a.second && a.second < arcs[k].second) ++inside_unused[k];
        }
    }

    template <class Sink>
    void rec(Sink&& sink) {
        int p = 0;
        for (int v = 1; v <= n2; ++v)
            if (!used[v]) {
                p = v;
                break;
            }
        if (p == 0) {
            sink(arcs, m);
            return;
        }
        for (int q = p + 1; q <= n2; ++q) {
            if (used[q]) continue;
            if (!push_arc(p, q)) continue;
            rec(sink);
            pop_arc();
        }
    }
};

// Genus of a perfect matching over one backbone, no allocations. Every
// position 1..2m is an arc endpoint, so the vertex rotation is position order.
int matching_genus(const Arc* arcs, int m) {
    int half_at[kMaxVerts + 2];
    for (int k = 0; k < m; ++k) {
        half_at[arcs[k].first] = 2 * k;
        half_at[arcs[k].second] = 2 * k + 1;
    }
    int pos_of[kMaxVerts];
    for (int v = 1; v <= 2 * m; ++v) pos_of[half_at[v]] = v;
    char seen[kMaxVerts] = {0};
    int r = 0;
    for (int h = 0; h < 2 * m; ++h) {
        if (seen[h]) continue;
        ++r;
        int cur = h;
        while (!seen[cur]) {
            seen[cur] = 1;
            const int v = pos_of[cur ^ 1];
            cur = half_at[v % (2 * m) + 1];
        }
    }
    return (1 + m - r) / 2;
}

bool is_one_backbone_shadow(const std::vector<Arc>& arcs, int n2) {
    (void)n2;
    for (size_t a = 0; a < arcs.size(); ++a) {
        bool crossing = false;
        for (size_t b = 0; b < arcs.size() && !crossing; ++b)
            if (a != b && arcs_cross(arcs[a], arcs[b])) crossing = true;
        if (!crossing) return false;
    }
    for (const auto& x : arcs) {
        const Arc inner{x.first + 1, x.second - 1};
        if (inner.first < inner.second && std::binary_search(arcs.begin(), arcs.end(), inner)) return false;
    }
    return true;
}

} // namespace

std::vector<AtlasEntry> enumerate_shadows_one_backbone(int g, int threads) {
    if (g < 0) throw InputError("OutOfRange: genus must be nonnegative");
    if (g == 0) return {};
    if (g > 3) throw ResourceLimit("ResourceLimit: one-backbone shadow atlas capped at genus 3");

    std::vector<AtlasEntry> out;
    for (int m = 2 * g; m <= 6 * g - 2; ++m) {
        const int n2 = 2 * m;
        if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
        if (threads < 1) threads = 1;

        // parallel over the partner of vertex 1
        std::vector<std::vector<std::vector<Arc>>> found(n2 + 1);
        std::vector<std::thread> pool;
        std::vector<int> partners;
        for (int q = 2; q <= n2; ++q) partners.push_back(q);
        std::atomic<size_t> next{0};
        auto worker = [&]() {
            auto me = std::make_unique<MatchingEnum>();
            me->n2 = n2;
            while (true) {
                const size_t t = next.fetch_add(1);
                if (t >= partners.size()) break;
                const int q = partners[t];
                me->run(
                    [&](const Arc* arcs, int ma) {
                        // the pruning already guarantees a stack-free matching
                        // in which every arc crosses; only the genus is left
                        if (matching_genus(arcs, ma) != g) return;
                        std::vector<Arc> sorted(arcs, arcs + ma);
                        std::sort(sorted.begin(), sorted.end());
                        if (!is_one_backbone_shadow(sorted, n2)) return; // cheap double check
                        found[q].push_back(std::move(sorted));
                    },
                    q);
            }
        };
        const int nt = std::min<int>(threads, static_cast<int>(partners.size()));
        for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();

        for (int q = 2; q <= n2; ++q)
            for (auto& arcs : found[q]) {
                AtlasEntry e;
                e.shadow = build_diagram(n2, {Interval{1, n2}}, arcs);
                e.genus = g;
                e.arcs = m;
                e.irreducible = is_irreducible(e.shadow);
                e.provenance = "enumerated";
                out.push_back(std::move(e));
            }
    }
    return out;
}

namespace {

// One 5'-end insertion: new leftmost vertex paired after old position `gap`.
Diagram insert_from_five_prime(const Diagram& cur, int gap) {
    std::vector<Arc> na;
    na.emplace_back(1, gap + 2);
    for (const auto& a : cur.arcs)
        na.emplace_back(a.first + 1 + (a.first > gap ? 1 : 0), a.second + 1 + (a.second > gap ? 1 : 0));
    for (auto& a : na)
        if (a.first > a.second) std::swap(a.first, a.second);
    return build_diagram(cur.n + 2, {Interval{1, cur.n + 2}}, na);
}

// Depth-first search over insertion points: every step must split the tracked
// boundary component (length L) into lengths 3 and L-1 and keep a shadow.
bool extend_s_sequence(const Diagram& cur, int tracked_len, int steps_left, Diagram& out) {
    if (steps_left == 0) {
        out = cur;
        return true;
    }
    const auto before = boundary_components(cur).boundary_lengths;
    std::vector<int> expect = before;
    const auto it = std::find(expect.begin(), expect.end(), tracked_len);
    if (it == expect.end()) return false;
    expect.erase(it);
    expect.push_back(3);
    expect.push_back(tracked_len - 1);
    std::sort(expect.begin(), expect.end());
    for (int gap = 1; gap <= cur.n; ++gap) {
        const Diagram cand = insert_from_five_prime(cur, gap);
        if (!same_labeled_diagram(shadow(cand), cand)) continue;
        if (boundary_components(cand).boundary_lengths != expect) continue;
        if (extend_s_sequence(cand, tracked_len - 1, steps_left - 1, out)) return true;
    }
    return false;
}

} // namespace

Diagram construct_s_sequence(int g, int ell) {
    if (g < 1 || ell < 2 * g || ell > 6 * g - 2)
        throw InputError("OutOfRange: construct_s_sequence needs g >= 1 and 2g <= ell <= 6g-2");

    // S_{2g}: 2g mutually crossing arcs (t, t+2g), one boundary of length 4g.
    std::vector<Arc> arcs;
    for (int t = 1; t <= 2 * g; ++t) arcs.emplace_back(t, t + 2 * g);
    const Diagram base = build_diagram(4 * g, {Interval{1, 4 * g}}, arcs);

    Diagram out;
    if (!extend_s_sequence(base, 4 * g, ell - 2 * g, out))
        throw Error(ErrorClass::Resource, "construct_s_sequence: no insertion chain found");
    return out;
}

Diagram cut_backbone(const Diagram& s, int pos) {
    if (s.backbone_count() != 1) throw InputError("cut_backbone: input must have one backbone");
    if (pos <= 0 || pos >= s.n) throw InputError("OutOfRange: cut position");
    return build_diagram(s.n, {Interval{1, pos}, Interval{pos + 1, s.n}}, s.arcs);
}

bool same_labeled_diagram(const Diagram& a, const Diagram& b) {
    if (a.n != b.n || a.backbone_count() != b.backbone_count() || a.arcs != b.arcs) return false;
    for (int t = 0; t < a.backbone_count(); ++t) {
        if (a.backbones[t].size() != b.backbones[t].size()) return false;
        if (!a.backbones[t].empty() && (a.backbones[t].lo != b.backbones[t].lo || a.backbones[t].hi != b.backbones[t].hi))
            return false;
    }
    return true;
}

namespace {

bool is_two_backbone_shadow(const Diagram& d) {
    for (size_t a = 0; a < d.arcs.size(); ++a) {
        bool crossing = false;
        for (size_t b = 0; b < d.arcs.size() && !crossing; ++b)
            if (a != b && arcs_cross(d.arcs[a], d.arcs[b])) crossing = true;
        if (!crossing) return false;
    }
    for (const auto& x : d.arcs) {
        const Arc inner{x.first + 1, x.second - 1};
        if (inner.first >= inner.second) continue;
        if (d.backbone_of(x.first) != d.backbone_of(inner.first)) continue;
        if (d.backbone_of(inner.second) != d.backbone_of(x.second)) continue;
        if (std::binary_search(d.arcs.begin(), d.arcs.end(), inner)) return false;
    }
    bool nontrivial = true;
    for (const auto& bb : d.backbones)
        if (bb.empty()) nontrivial = false;
    return nontrivial;
}

} // namespace

std::vector<AtlasEntry> enumerate_irreducible_two_backbone(int g) {
    if (g < 0) throw InputError("OutOfRange: genus must be nonnegative");
    if (g > 1) throw ResourceLimit("ResourceLimit: two-backbone atlas capped at genus 1");

    std::vector<AtlasEntry> out;
    auto push = [&](const Diagram& d, const std::string& prov) {
        for (const auto& e : out)
            if (same_labeled_diagram(e.shadow, d)) return;
        AtlasEntry e;
        e.shadow = d;
        e.genus = g;
        e.arcs = static_cast<int>(d.arcs.size());
        e.irreducible = true;
        e.provenance = prov;
        out.push_back(std::move(e));
    };

    if (g == 0) {
        // direct brute force: 2..4 arcs, every cut position
        for (int m = 2; m <= 4; ++m) {
            const int n2 = 2 * m;
            auto me = std::make_unique<MatchingEnum>();
            me->n2 = n2;
            me->prune_stacks = false; // a parallel pair straddling the cut is no stack
            me->run([&](const Arc* raw, int ma) {
                std::vector<Arc> arcs(raw, raw + ma);
                std::sort(arcs.begin(), arcs.end());
                for (int pos = 1; pos < n2; ++pos) {
                    Diagram d = build_diagram(n2, {Interval{1, pos}, Interval{pos + 1, n2}}, arcs);
                    if (!is_two_backbone_shadow(d)) continue;
                    if (!is_irreducible(d)) continue;
                    if (genus(d) != 0) continue;
                    push(d, "enumerated");
                }
            });
        }
    } else {
        // every two-backbone shadow of genus g is a cut of a one-backbone
        // shadow of genus g or g+1
        for (int gs : {g, g + 1}) {
            for (const auto& src : enumerate_shadows_one_backbone(gs)) {
                for (int pos = 1; pos < src.shadow.n; ++pos) {
                    Diagram d = cut_backbone(src.shadow, pos);
                    if (!is_two_backbone_shadow(d)) continue;
                    if (!is_irreducible(d)) continue;
                    if (genus(d) != g) continue;
                    push(d, "cut-from");
                }
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const AtlasEntry& a, const AtlasEntry& b) {
        if (a.arcs != b.arcs) return a.arcs < b.arcs;
        if (a.shadow.backbones[0].size() != b.shadow.backbones[0].size())
            return a.shadow.backbones[0].size() < b.shadow.backbones[0].size();
        return a.shadow.arcs < b.shadow.arcs;
    });
    return out;
}

} // namespace ixfold
