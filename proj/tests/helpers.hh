#ifndef IXFOLD_TESTS_HELPERS_HH
#define IXFOLD_TESTS_HELPERS_HH

#include <random>

#include "ixfold/diagram.hh"

namespace ixfold::testhelpers {

// Random diagram over 1 or 2 backbones with at most max_arcs arcs.
inline Diagram random_diagram(std::mt19937_64& rng, int max_arcs = 12) {
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
    if (b == 1 || n == 0) {
        bbs = b == 1 ? std::vector<Interval>{{1, n}} : std::vector<Interval>{{1, 0}, {1, 0}};
        if (b == 2 && n == 0) bbs = {{1, 0}, {1, 0}};
    } else {
        const int cut = 1 + static_cast<int>(rng() % n); // 1..n, allowing an empty second backbone
        bbs = {{1, cut}, {cut + 1, n}};
    }
    return build_diagram(n, bbs, std::move(as));
}

inline std::string random_sequence(std::mt19937_64& rng, int len) {
    static const char* alpha = "ACGU";
    std::string s;
    for (int i = 0; i < len; ++i) s += alpha[rng() % 4];
    return s;
}

} // namespace ixfold::testhelpers

#endif
