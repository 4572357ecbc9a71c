#include "ixfold/shadow.hh"

#include <algorithm>
#include <functional>
#include <numeric>

#include "ixfold/topology.hh"

namespace ixfold {

namespace {

// Rebuild a diagram keeping only vertices in `keep` (sorted), relabeling
// 1..n' and preserving the backbone partition (backbones may become empty).
Diagram restrict_to(const Diagram& d, const std::vector<int>& keep, const std::vector<Arc>& arcs) {
    std::vector<int> newlabel(d.n + 1, 0);
    for (size_t t = 0; t < keep.size(); ++t) newlabel[keep[t]] = static_cast<int>(t) + 1;
    std::vector<Interval> bbs;
    int next = 1;
    for (const auto& bb : d.backbones) {
        int cnt = 0;
        for (int v : keep)
            if (bb.contains(v)) ++cnt;
        bbs.push_back({next, next + cnt - 1});
        next += cnt;
    }
    std::vector<Arc> na;
    na.reserve(arcs.size());
    for (const auto& a : arcs) na.emplace_back(newlabel[a.first], newlabel[a.second]);
    return build_diagram(static_cast<int>(keep.size()), bbs, std::move(na));
}

std::vector<int> endpoint_list(const std::vector<Arc>& arcs) {
    std::vector<int> v;
    v.reserve(arcs.size() * 2);
    for (const auto& a : arcs) {
        v.push_back(a.first);
        v.push_back(a.second);
    }
    std::sort(v.begin(), v.end());
    return v;
}

bool same_backbone(const Diagram& d, int u, int v) { return d.backbone_of(u) == d.backbone_of(v); }

// One round of stack collapse: drop every arc lying directly inside another
// at adjacent positions (within backbones). Returns false if nothing changed.
bool collapse_stacks_once(Diagram& d) {
    std::vector<char> drop(d.arcs.size(), 0);
    for (size_t k = 0; k < d.arcs.size(); ++k) {
        const Arc inner{d.arcs[k].first + 1, d.arcs[k].second - 1};
        if (inner.first >= inner.second) continue;
        if (!same_backbone(d, d.arcs[k].first, inner.first)) continue;
        if (!same_backbone(d, inner.second, d.arcs[k].second)) continue;
        auto it = std::lower_bound(d.arcs.begin(), d.arcs.end(), inner);
        if (it != d.arcs.end() && *it == inner) drop[it - d.arcs.begin()] = 1;
    }
    if (std::find(drop.begin(), drop.end(), 1) == drop.end()) return false;
    std::vector<Arc> kept;
    for (size_t k = 0; k < d.arcs.size(); ++k)
        if (!drop[k]) kept.push_back(d.arcs[k]);
    d = restrict_to(d, endpoint_list(kept), kept);
    return true;
}

std::vector<char> crossing_flags(const std::vector<Arc>& arcs) {
    std::vector<char> crossing(arcs.size(), 0);
    for (size_t a = 0; a < arcs.size(); ++a)
        for (size_t b = a + 1; b < arcs.size(); ++b)
            if (arcs_cross(arcs[a], arcs[b])) crossing[a] = crossing[b] = 1;
    return crossing;
}

} // namespace

Diagram shadow(const Diagram& d) {
    Diagram cur = d;
    bool changed = true;
    while (changed) {
        changed = false;
        const auto crossing = crossing_flags(cur.arcs);
        std::vector<Arc> kept;
        for (size_t k = 0; k < cur.arcs.size(); ++k)
            if (crossing[k]) kept.push_back(cur.arcs[k]);
        if (kept.size() != cur.arcs.size() || static_cast<int>(kept.size()) * 2 != cur.n) {
            cur = restrict_to(cur, endpoint_list(kept), kept);
            changed = true;
        }
        while (collapse_stacks_once(cur)) changed = true;
    }
    return cur;
}

std::vector<std::vector<int>> crossing_components(const Diagram& d) {
    const int m = static_cast<int>(d.arcs.size());
    std::vector<int> parent(m);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b)
            if (arcs_cross(d.arcs[a], d.arcs[b])) parent[find(a)] = find(b);
    std::vector<std::vector<int>> comps;
    std::vector<int> root_of(m, -1);
    for (int a = 0; a < m; ++a) {
        int r = find(a);
        if (root_of[r] < 0) {
            root_of[r] = static_cast<int>(comps.size());
            comps.emplace_back();
        }
        comps[root_of[r]].push_back(a);
    }
    return comps;
}

bool is_irreducible(const Diagram& d) {
    if (d.arcs.size() < 2) return false;
    if (crossing_components(d).size() != 1) return false;
    if (d.backbone_count() == 2) {
        // diagram connectivity: both backbones nonempty requires an exterior arc
        bool first = false, second = false;
        for (const auto& bb : {d.backbones[0], d.backbones[1]})
            (void)bb;
        first = !d.backbones[0].empty();
        second = !d.backbones[1].empty();
        if (first && second && !d.has_exterior_arc()) return false;
    }
    return true;
}

namespace {

// Extract one crossing component as a standalone diagram (over 1 or 2
// backbones depending on the arcs it touches) and project to its shadow.
ShadowInfo component_shadow(const Diagram& d, const std::vector<int>& comp) {
    std::vector<Arc> arcs;
    for (int k : comp) arcs.push_back(d.arcs[k]);
    std::sort(arcs.begin(), arcs.end());
    const auto keep = endpoint_list(arcs);

    bool spans = false;
    if (d.backbone_count() == 2) {
        bool in0 = false, in1 = false;
        for (int v : keep)
            (d.backbone_of(v) == 0 ? in0 : in1) = true;
        spans = in0 && in1;
    }
    Diagram sub;
    if (spans) {
        sub = restrict_to(d, keep, arcs);
    } else {
        // confined to one backbone: standalone one-backbone diagram
        std::vector<int> newlabel(d.n + 1, 0);
        for (size_t t = 0; t < keep.size(); ++t) newlabel[keep[t]] = static_cast<int>(t) + 1;
        std::vector<Arc> na;
        for (const auto& a : arcs) na.emplace_back(newlabel[a.first], newlabel[a.second]);
        sub = build_diagram(static_cast<int>(keep.size()), {Interval{1, static_cast<int>(keep.size())}},
                            std::move(na));
    }
    ShadowInfo info;
    info.diagram = shadow(sub);
    info.irreducible = is_irreducible(info.diagram);
    info.genus = genus(info.diagram);
    info.nontrivial = true;
    for (const auto& bb : info.diagram.backbones)
        if (bb.empty()) info.nontrivial = false;
    return info;
}

} // namespace

IrreducibleDecomposition irreducible_shadows(const Diagram& d) {
    IrreducibleDecomposition out;

    // Classification comes from the crossing components of the full diagram;
    // singleton components are the non-crossing arcs sigma removes.
    for (const auto& comp : crossing_components(d)) {
        if (comp.size() < 2) continue;
        ShadowInfo info = component_shadow(d, comp);
        if (info.diagram.backbone_count() == 1) {
            out.i1.push_back(info);
        } else {
            const int delta = genus(glue_alpha(info.diagram)) - info.genus;
            (delta == 0 ? out.i2_0 : out.i2_1).push_back(info);
        }
    }

    // Removal trace on sigma(d), in the prescribed order, with original labels.
    Diagram cur = shadow(d);
    std::vector<int> orig(cur.n + 1);
    {
        // shadow() relabels; recover original labels by replaying the projection
        // on a tagged copy: simplest is to recompute sigma while tracking kept vertices.
        Diagram tmp = d;
        std::vector<int> tag(tmp.n + 1);
        std::iota(tag.begin(), tag.end(), 0);
        bool changed = true;
        while (changed) {
            changed = false;
            const auto crossing = crossing_flags(tmp.arcs);
            std::vector<Arc> kept;
            for (size_t k = 0; k < tmp.arcs.size(); ++k)
                if (crossing[k]) kept.push_back(tmp.arcs[k]);
            auto keepv = endpoint_list(kept);
            if (kept.size() != tmp.arcs.size() || static_cast<int>(keepv.size()) != tmp.n) {
                std::vector<int> ntag(keepv.size() + 1);
                for (size_t t = 0; t < keepv.size(); ++t) ntag[t + 1] = tag[keepv[t]];
                tmp = restrict_to(tmp, keepv, kept);
                tag = ntag;
                changed = true;
            }
            while (true) {
                // collapse with tag maintenance
                std::vector<char> drop(tmp.arcs.size(), 0);
                for (size_t k = 0; k < tmp.arcs.size(); ++k) {
                    const Arc inner{tmp.arcs[k].first + 1, tmp.arcs[k].second - 1};
                    if (inner.first >= inner.second) continue;
                    if (tmp.backbone_of(tmp.arcs[k].first) != tmp.backbone_of(inner.first)) continue;
                    if (tmp.backbone_of(inner.second) != tmp.backbone_of(tmp.arcs[k].second)) continue;
                    auto it = std::lower_bound(tmp.arcs.begin(), tmp.arcs.end(), inner);
                    if (it != tmp.arcs.end() && *it == inner) drop[it - tmp.arcs.begin()] = 1;
                }
                if (std::find(drop.begin(), drop.end(), 1) == drop.end()) break;
                std::vector<Arc> kept2;
                for (size_t k = 0; k < tmp.arcs.size(); ++k)
                    if (!drop[k]) kept2.push_back(tmp.arcs[k]);
                auto keepv2 = endpoint_list(kept2);
                std::vector<int> ntag(keepv2.size() + 1);
                for (size_t t = 0; t < keepv2.size(); ++t) ntag[t + 1] = tag[keepv2[t]];
                tmp = restrict_to(tmp, keepv2, kept2);
                tag = ntag;
                changed = true;
            }
        }
        cur = tmp;
        orig = tag;
    }

    int step = 0;
    auto record_remove = [&](const std::vector<int>& comp, int nbb) {
        RemovalStep st;
        st.step = step++;
        st.action = "remove";
        for (int k : comp) st.arcs.emplace_back(orig[cur.arcs[k].first], orig[cur.arcs[k].second]);
        st.backbones_spanned = nbb;
        out.trace.push_back(st);
    };
    auto erase_component = [&](const std::vector<int>& comp) {
        std::vector<char> dead(cur.arcs.size(), 0);
        for (int k : comp) dead[k] = 1;
        std::vector<Arc> kept;
        for (size_t k = 0; k < cur.arcs.size(); ++k)
            if (!dead[k]) kept.push_back(cur.arcs[k]);
        auto keepv = endpoint_list(kept);
        std::vector<int> ntag(keepv.size() + 1);
        for (size_t t = 0; t < keepv.size(); ++t) ntag[t + 1] = orig[keepv[t]];
        cur = restrict_to(cur, keepv, kept);
        orig = ntag;
        // induced stacks are collapsed and logged
        while (true) {
            std::vector<char> drop(cur.arcs.size(), 0);
            for (size_t k = 0; k < cur.arcs.size(); ++k) {
                const Arc inner{cur.arcs[k].first + 1, cur.arcs[k].second - 1};
                if (inner.first >= inner.second) continue;
                if (cur.backbone_of(cur.arcs[k].first) != cur.backbone_of(inner.first)) continue;
                if (cur.backbone_of(inner.second) != cur.backbone_of(cur.arcs[k].second)) continue;
                auto it = std::lower_bound(cur.arcs.begin(), cur.arcs.end(), inner);
                if (it != cur.arcs.end() && *it == inner) drop[it - cur.arcs.begin()] = 1;
            }
            if (std::find(drop.begin(), drop.end(), 1) == drop.end()) break;
            RemovalStep st;
            st.step = step++;
            st.action = "collapse";
            std::vector<Arc> kept2;
            for (size_t k = 0; k < cur.arcs.size(); ++k) {
                if (drop[k])
                    st.arcs.emplace_back(orig[cur.arcs[k].first], orig[cur.arcs[k].second]);
                else
                    kept2.push_back(cur.arcs[k]);
            }
            out.trace.push_back(st);
            auto keepv2 = endpoint_list(kept2);
            std::vector<int> ntag2(keepv2.size() + 1);
            for (size_t t = 0; t < keepv2.size(); ++t) ntag2[t + 1] = orig[keepv2[t]];
            cur = restrict_to(cur, keepv2, kept2);
            orig = ntag2;
        }
    };

    // Phase 1: one-backbone components, outermost-available first (no arc of
    // the chosen one nested strictly inside an arc of another remaining
    // component), leftmost endpoint breaking ties.
    while (true) {
        auto comps = crossing_components(cur);
        std::vector<std::vector<int>> one_bb;
        for (auto& comp : comps) {
            if (comp.size() < 2) continue;
            bool single = true;
            if (cur.backbone_count() == 2) {
                int bb = cur.backbone_of(cur.arcs[comp[0]].first);
                for (int k : comp)
                    if (cur.backbone_of(cur.arcs[k].first) != bb || cur.backbone_of(cur.arcs[k].second) != bb)
                        single = false;
            }
            if (single) one_bb.push_back(comp);
        }
        if (one_bb.empty()) break;
        // "bottom to top" among the one-backbone shadows themselves
        auto nested_inside_other = [&](const std::vector<int>& comp) {
            for (const auto& other : one_bb) {
                if (other == comp) continue;
                for (int k : comp)
                    for (int k2 : other)
                        if (arc_inside(cur.arcs[k], cur.arcs[k2])) return true;
            }
            return false;
        };
        std::vector<int>* chosen = nullptr;
        int best_left = 0;
        for (auto& comp : one_bb) {
            if (nested_inside_other(comp)) continue;
            int left = cur.arcs[*std::min_element(comp.begin(), comp.end())].first;
            for (int k : comp) left = std::min(left, cur.arcs[k].first);
            if (!chosen || left < best_left) {
                chosen = &comp;
                best_left = left;
            }
        }
        if (!chosen) chosen = &one_bb.front(); // cyclic nesting cannot occur; safety net
        record_remove(*chosen, 1);
        erase_component(*chosen);
    }

    // Phase 2: two-backbone components, starting with the one containing the
    // leftmost vertex of the second backbone, iteratively.
    while (true) {
        auto comps = crossing_components(cur);
        std::vector<std::vector<int>> multi;
        for (auto& comp : comps)
            if (comp.size() >= 2) multi.push_back(comp);
        if (multi.empty()) break;
        const int s_lo = cur.backbones.size() == 2 ? cur.backbones[1].lo : 1;
        std::vector<int>* chosen = nullptr;
        int best = 0;
        for (auto& comp : multi) {
            int lead = cur.n + 1;
            for (int k : comp) {
                if (cur.arcs[k].second >= s_lo) lead = std::min(lead, cur.arcs[k].second);
                if (cur.arcs[k].first >= s_lo) lead = std::min(lead, cur.arcs[k].first);
            }
            if (!chosen || lead < best) {
                chosen = &comp;
                best = lead;
            }
        }
        record_remove(*chosen, 2);
        erase_component(*chosen);
    }

    return out;
}

int gamma_index(const Diagram& d) {
    int g = 0;
    for (const auto& comp : crossing_components(d)) {
        if (comp.size() < 2) continue;
        g = std::max(g, component_shadow(d, comp).genus);
    }
    return g;
}

bool is_gamma_structure(const Diagram& d, int gamma) { return gamma_index(d) <= gamma; }

int genus_by_decomposition(const Diagram& e) {
    if (e.backbone_count() != 2) throw InputError("NotTwoBackbones: genus_by_decomposition needs two backbones");
    const auto dec = irreducible_shadows(e);
    if (dec.i2_0.empty() && dec.i2_1.empty())
        throw InputError("NoExteriorIrreducible: no irreducible two-backbone shadow");
    int g = 0;
    for (const auto& s : dec.i1) g += s.genus;
    for (const auto& s : dec.i2_0) g += s.genus;
    for (const auto& s : dec.i2_1) g += s.genus + 1;
    if (dec.i2_0.empty()) g -= 1;
    return g;
}

} // namespace ixfold
