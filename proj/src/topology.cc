#include "ixfold/topology.hh"

#include <algorithm>
#include <map>
#include <numeric>

namespace ixfold {

namespace {

struct DSU {
    std::vector<int> p;
    explicit DSU(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
    void unite(int a, int b) { p[find(a)] = find(b); }
};

} // namespace

FatgraphReport boundary_components(const Diagram& d) {
    const int m = static_cast<int>(d.arcs.size());
    const int b = d.backbone_count();

    // Half-edge 2*k = left end of arc k, 2*k+1 = right end.
    // Per backbone, endpoints in left-to-right order give the cyclic successor.
    std::vector<int> succ(2 * m, -1);
    std::vector<int> he_backbone(2 * m, -1);
    std::vector<std::vector<std::pair<int, int>>> ends(b); // (position, half-edge)
    for (int k = 0; k < m; ++k) {
        ends[d.backbone_of(d.arcs[k].first)].emplace_back(d.arcs[k].first, 2 * k);
        ends[d.backbone_of(d.arcs[k].second)].emplace_back(d.arcs[k].second, 2 * k + 1);
    }
    for (int bb = 0; bb < b; ++bb) {
        auto& v = ends[bb];
        std::sort(v.begin(), v.end());
        const int q = static_cast<int>(v.size());
        for (int t = 0; t < q; ++t) {
            succ[v[t].second] = v[(t + 1) % q].second;
            he_backbone[v[t].second] = bb;
        }
    }

    // Connected components of (backbones as nodes, arcs as edges).
    DSU dsu(b);
    for (const auto& a : d.arcs) dsu.unite(d.backbone_of(a.first), d.backbone_of(a.second));

    FatgraphReport rep;
    rep.chi = b - m;

    // Faces: orbits of phi = succ o involution.
    std::vector<char> seen(2 * m, 0);
    std::map<int, int> faces_per_comp, arcs_per_comp, backs_per_comp;
    for (int bb = 0; bb < b; ++bb) backs_per_comp[dsu.find(bb)]++;
    for (int k = 0; k < m; ++k) arcs_per_comp[dsu.find(d.backbone_of(d.arcs[k].first))]++;

    for (int h = 0; h < 2 * m; ++h) {
        if (seen[h]) continue;
        int len = 0, cur = h;
        while (!seen[cur]) {
            seen[cur] = 1;
            ++len;
            cur = succ[cur ^ 1]; // involution flips to the partner end, then successor
        }
        rep.boundary_lengths.push_back(len);
        faces_per_comp[dsu.find(he_backbone[h])]++;
    }
    // An empty backbone (no arc endpoints) is its own disc: one boundary of length 0.
    for (int bb = 0; bb < b; ++bb)
        if (ends[bb].empty()) {
            rep.boundary_lengths.push_back(0);
            faces_per_comp[dsu.find(bb)]++;
        }

    std::sort(rep.boundary_lengths.begin(), rep.boundary_lengths.end());
    rep.r = static_cast<int>(rep.boundary_lengths.size());

    for (const auto& [root, nb] : backs_per_comp) {
        const int arcs_c = arcs_per_comp.count(root) ? arcs_per_comp[root] : 0;
        const int r_c = faces_per_comp[root];
        // 2 - 2g - r = b - n per connected component
        const int twog = 2 - r_c - (nb - arcs_c);
        rep.genus_per_component.push_back(twog / 2);
        rep.genus_total += twog / 2;
    }
    return rep;
}

int genus(const Diagram& d) { return boundary_components(d).genus_total; }

int genus_inflated(const Diagram& d) {
    // Explicit model: every vertex kept, backbone edges between consecutive
    // vertices of a backbone, arcs on top. Half-edge cyclic order at a vertex
    // (counterclockwise in the upper-half-plane drawing): right, arc, left.
    struct HalfEdge {
        int twin = -1, succ = -1;
    };
    std::vector<HalfEdge> hes;
    auto add_edge = [&]() {
        const int id = static_cast<int>(hes.size());
        hes.push_back({});
        hes.push_back({});
        hes[id].twin = id + 1;
        hes[id + 1].twin = id;
        return id;
    };
    const int n = d.n;
    std::vector<int> left_he(n + 1, -1), right_he(n + 1, -1), arc_he(n + 1, -1);
    for (const auto& bbiv : d.backbones)
        for (int v = bbiv.lo; v < bbiv.hi; ++v) {
            const int e = add_edge();
            right_he[v] = e;        // half-edge at v toward v+1
            left_he[v + 1] = e + 1; // half-edge at v+1 toward v
        }
    for (const auto& a : d.arcs) {
        const int e = add_edge();
        arc_he[a.first] = e;
        arc_he[a.second] = e + 1;
    }
    DSU dsu(n + 1);
    for (const auto& bbiv : d.backbones)
        for (int v = bbiv.lo; v < bbiv.hi; ++v) dsu.unite(v, v + 1);
    for (const auto& a : d.arcs) dsu.unite(a.first, a.second);

    std::vector<int> vert_of_he(hes.size(), -1);
    for (int v = 1; v <= n; ++v) {
        std::vector<int> cyc; // ccw: right, arc, left
        if (right_he[v] >= 0) cyc.push_back(right_he[v]);
        if (arc_he[v] >= 0) cyc.push_back(arc_he[v]);
        if (left_he[v] >= 0) cyc.push_back(left_he[v]);
        for (size_t t = 0; t < cyc.size(); ++t) {
            hes[cyc[t]].succ = cyc[(t + 1) % cyc.size()];
            vert_of_he[cyc[t]] = v;
        }
    }

    std::map<int, int> v_c, e_c, f_c;
    for (int v = 1; v <= n; ++v) v_c[dsu.find(v)]++;
    for (const auto& bbiv : d.backbones)
        for (int v = bbiv.lo; v < bbiv.hi; ++v) e_c[dsu.find(v)]++;
    for (const auto& a : d.arcs) e_c[dsu.find(a.first)]++;

    std::vector<char> seen(hes.size(), 0);
    for (size_t h = 0; h < hes.size(); ++h) {
        if (seen[h]) continue;
        int cur = static_cast<int>(h);
        while (!seen[cur]) {
            seen[cur] = 1;
            cur = hes[hes[cur].twin].succ;
        }
        f_c[dsu.find(vert_of_he[h])]++;
    }

    int total = 0;
    for (const auto& [root, vc] : v_c) {
        if (vc == 1 && e_c.find(root) == e_c.end()) continue; // isolated vertex: disc, genus 0
        const int ec = e_c.count(root) ? e_c[root] : 0;
        const int fc = f_c.count(root) ? f_c[root] : (vc > 0 ? 1 : 0);
        const int twog = 2 - fc - (vc - ec);
        total += twog / 2;
    }
    return total;
}

Diagram glue_alpha(const Diagram& e) {
    if (e.backbone_count() != 2) throw InputError("NotTwoBackbones: glue_alpha needs two backbones");
    return build_diagram(e.n, {Interval{1, e.n}}, e.arcs);
}

Diagram product_bullet(const Diagram& e1, const Diagram& e2) {
    if (e1.backbone_count() != 2 || e2.backbone_count() != 2)
        throw InputError("NotTwoBackbones: product needs two-backbone diagrams");
    const int r1 = e1.backbones[0].size(), s1 = e1.backbones[1].size();
    const int r2 = e2.backbones[0].size(), s2 = e2.backbones[1].size();
    const int nr = r1 + r2, ns = s1 + s2;

    // Old label -> new label. R = R1.R2, S = S2.S1.
    auto map1 = [&](int v) { return v <= r1 ? v : nr + s2 + (v - r1); };
    auto map2 = [&](int v) { return v <= r2 ? r1 + v : nr + (v - r2); };

    std::vector<Arc> arcs;
    for (const auto& a : e1.arcs) arcs.emplace_back(map1(a.first), map1(a.second));
    for (const auto& a : e2.arcs) arcs.emplace_back(map2(a.first), map2(a.second));
    for (auto& a : arcs)
        if (a.first > a.second) std::swap(a.first, a.second);
    return build_diagram(nr + ns, {Interval{1, nr}, Interval{nr + 1, nr + ns}}, std::move(arcs));
}

} // namespace ixfold
