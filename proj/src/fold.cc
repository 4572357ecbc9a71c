#include "ixfold/fold.hh"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <random>

#include "ixfold/shadow.hh"
#include "ixfold/topology.hh"

namespace ixfold {

namespace {

// ------------------------------------------------------------------ context

struct Ctx {
    SequencePair pair;
    EnergyModel em;
    int nr = 0, ns = 0;

    char rch(int i) const { return pair.r[i - 1]; }
    char sch(int i) const { return pair.s[i - 1]; }

    bool can_int_r(int a, int b) const { return pair_class(rch(a), rch(b)).has_value(); }
    bool can_int_s(int a, int b) const { return pair_class(sch(a), sch(b)).has_value(); }
    bool can_ext(int r, int s) const { return pair_class(rch(r), sch(s)).has_value(); }

    double e_int_r(int a, int b) const { return em.interior_energy(rch(a), rch(b)); }
    double e_int_s(int a, int b) const { return em.interior_energy(sch(a), sch(b)); }
    double e_ext(int r, int s) const { return em.exterior_energy(rch(r), sch(s)); }

    // interval id: 1 <= i <= n+1, i-1 <= j <= n
    std::vector<int> off_r, off_s;
    int pr = 0, ps = 0; // interval counts

    void init_intervals() {
        auto mk = [](int n, std::vector<int>& off) {
            off.assign(n + 2, 0);
            int c = 0;
            for (int i = 1; i <= n + 1; ++i) {
                off[i] = c;
                c += n - i + 2;
            }
            return c;
        };
        pr = mk(nr, off_r);
        ps = mk(ns, off_s);
    }
    int ivr(int i, int j) const { return off_r[i] + (j - i + 1); }
    int ivs(int h, int l) const { return off_s[h] + (l - h + 1); }
    int ivb(int bkb, int i, int j) const { return bkb == 0 ? ivr(i, j) : ivs(i, j); }
};

// ------------------------------------------------------------------- tables

enum Tab : uint8_t {
    T_SECC_R, T_SECNS_R, T_SEC_R, T_SECP_R,
    T_SECC_S, T_SECNS_S, T_SEC_S, T_SECP_S,
    T_GS_R, T_G_R, T_V_R,
    T_GS_S, T_G_S, T_V_S,
    T_HYS, T_HY, T_HSTEP, T_HS, T_U, T_X, T_W, T_Y, T_Z, T_TT, T_PTT, T_PTH, T_J, T_I,
    T_COUNT
};

inline bool tab_is_sec(Tab t) { return t <= T_SECP_S; }
inline bool tab_is_one_bb(Tab t) { return t >= T_GS_R && t <= T_V_S; }
inline int sec_backbone(Tab t) { return t <= T_SECP_R ? 0 : 1; }
inline int one_bb_backbone(Tab t) { return t <= T_V_R ? 0 : 1; }

struct CellId {
    Tab t;
    int a, b, c, d; // 2-index tables use (a,b) only
};

struct Prod {
    CellId fac[3];
    int nf = 0;
    double energy = 0.0;
    bool has_arc = false;
    int ax = 0, ay = 0;
    ArcKind akind = ArcKind::Exterior;
};

inline CellId c2(Tab t, int a, int b) { return {t, a, b, 0, 0}; }
inline CellId c4(Tab t, int a, int b, int c, int d) { return {t, a, b, c, d}; }

size_t table_size(const Ctx& cx, Tab t) {
    if (tab_is_sec(t)) return static_cast<size_t>(sec_backbone(t) == 0 ? cx.pr : cx.ps);
    if (tab_is_one_bb(t)) {
        const size_t p = one_bb_backbone(t) == 0 ? cx.pr : cx.ps;
        return p * p;
    }
    return static_cast<size_t>(cx.pr) * cx.ps;
}

size_t cell_index(const Ctx& cx, const CellId& c) {
    if (tab_is_sec(c.t)) return static_cast<size_t>(cx.ivb(sec_backbone(c.t), c.a, c.b));
    if (tab_is_one_bb(c.t)) {
        const int bb = one_bb_backbone(c.t);
        const size_t p = bb == 0 ? cx.pr : cx.ps;
        return static_cast<size_t>(cx.ivb(bb, c.a, c.b)) * p + cx.ivb(bb, c.c, c.d);
    }
    return static_cast<size_t>(cx.ivr(c.a, c.b)) * cx.ps + cx.ivs(c.c, c.d);
}

// --------------------------------------------------------------- the grammar
//
// Two-backbone cells are (R-interval [a..b]; S-interval [c..d]), empty
// intervals as [x, x-1]. One-backbone four-index cells are (wing [a..b],
// wing [c..d]) on the tagged backbone with b < c. Every production lists
// its factor cells, the emitted arc (at most one) and an energy term.

template <class F>
void sec_prods(const Ctx& cx, const CellId& c, F&& f) {
    const int bb = sec_backbone(c.t);
    const int n = bb == 0 ? cx.nr : cx.ns;
    const int i = c.a, j = c.b;
    const Tab SECC = bb == 0 ? T_SECC_R : T_SECC_S;
    const Tab SECNS = bb == 0 ? T_SECNS_R : T_SECNS_S;
    const Tab SEC = bb == 0 ? T_SEC_R : T_SEC_S;
    const Tab SECP = bb == 0 ? T_SECP_R : T_SECP_S;
    auto pairable = [&](int a, int b2) {
        if (b2 - a <= cx.em.theta) return false;
        return bb == 0 ? cx.can_int_r(a, b2) : cx.can_int_s(a, b2);
    };
    auto energy = [&](int a, int b2) { return bb == 0 ? cx.e_int_r(a, b2) : cx.e_int_s(a, b2); };
    const ArcKind kind = bb == 0 ? ArcKind::InteriorR : ArcKind::InteriorS;

    switch (c.t) {
        case T_SECC_R:
        case T_SECC_S: {
            if (i < 1 || j > n || !pairable(i, j)) return;
            Prod p;
            p.energy = energy(i, j);
            p.has_arc = true;
            p.ax = i;
            p.ay = j;
            p.akind = kind;
            p.nf = 1;
            p.fac[0] = c2(SECC, i + 1, j - 1);
            Prod ps2 = p;
            p.energy += cx.em.stack_bonus;
            f(p);
            ps2.fac[0] = c2(SECNS, i + 1, j - 1);
            f(ps2);
            return;
        }
        case T_SECNS_R:
        case T_SECNS_S: {
            if (j < i) { // empty
                Prod p;
                f(p);
                return;
            }
            {
                Prod p;
                p.nf = 1;
                p.fac[0] = c2(SEC, i, j - 1);
                f(p);
            }
            for (int k = i + 1; k <= j; ++k) {
                if (!pairable(k, j)) continue;
                Prod p;
                p.nf = 2;
                p.fac[0] = c2(SEC, i, k - 1);
                p.fac[1] = c2(SECC, k, j);
                f(p);
            }
            return;
        }
        case T_SEC_R:
        case T_SEC_S: {
            if (j < i) {
                Prod p;
                f(p);
                return;
            }
            {
                Prod p;
                p.nf = 1;
                p.fac[0] = c2(SECNS, i, j);
                f(p);
            }
            if (pairable(i, j)) {
                Prod p;
                p.nf = 1;
                p.fac[0] = c2(SECC, i, j);
                f(p);
            }
            return;
        }
        case T_SECP_R:
        case T_SECP_S: {
            if (j < i) return;
            {
                Prod p;
                p.nf = 1;
                p.fac[0] = c2(SECP, i, j - 1);
                f(p);
            }
            for (int k = i; k <= j; ++k) {
                if (!pairable(k, j)) continue;
                Prod p;
                p.nf = 2;
                p.fac[0] = c2(SEC, i, k - 1);
                p.fac[1] = c2(SECC, k, j);
                f(p);
            }
            return;
        }
        default: return;
    }
}

template <class F>
void one_bb_prods(const Ctx& cx, const CellId& c, F&& f) {
    const int bb = one_bb_backbone(c.t);
    const int n = bb == 0 ? cx.nr : cx.ns;
    const int i = c.a, j = c.b, h = c.c, l = c.d;
    if (!(1 <= i && i <= j && j < h && h <= l && l <= n)) return;
    const Tab SEC = bb == 0 ? T_SEC_R : T_SEC_S;
    const Tab GS = bb == 0 ? T_GS_R : T_GS_S;
    const Tab G = bb == 0 ? T_G_R : T_G_S;
    auto pairable = [&](int a, int b2) { return bb == 0 ? cx.can_int_r(a, b2) : cx.can_int_s(a, b2); };
    auto energy = [&](int a, int b2) { return bb == 0 ? cx.e_int_r(a, b2) : cx.e_int_s(a, b2); };
    const ArcKind kind = bb == 0 ? ArcKind::InteriorR : ArcKind::InteriorS;

    switch (c.t) {
        case T_GS_R:
        case T_GS_S:
        case T_G_R:
        case T_G_S: {
            // gap tube: outer arc (i,l) required, theta-exempt (its loop holds
            // the partner-backbone interaction)
            if (!pairable(i, l)) return;
            if (i == j && h == l) {
                Prod p;
                p.energy = energy(i, l);
                p.has_arc = true;
                p.ax = i;
                p.ay = l;
                p.akind = kind;
                f(p);
                return;
            }
            if (i == j || h == l) return;
            for (int a = i + 1; a <= j; ++a)
                for (int b = h; b <= l - 1; ++b) {
                    Prod p;
                    p.energy = energy(i, l) + ((a == i + 1 && b == l - 1) ? cx.em.stack_bonus : 0.0);
                    p.has_arc = true;
                    p.ax = i;
                    p.ay = l;
                    p.akind = kind;
                    p.nf = 3;
                    p.fac[0] = c2(SEC, i + 1, a - 1);
                    p.fac[1] = c2(SEC, b + 1, l - 1);
                    p.fac[2] = c4(GS, a, j, h, b);
                    f(p);
                }
            return;
        }
        case T_V_R:
        case T_V_S: {
            for (int a = i; a <= j; ++a)
                for (int b = h; b <= l; ++b) {
                    Prod p;
                    p.nf = 3;
                    p.fac[0] = c4(G, i, a, b, l);
                    p.fac[1] = c2(SEC, a + 1, j);
                    p.fac[2] = c2(SEC, h, b - 1);
                    f(p);
                }
            return;
        }
        default: return;
    }
}

template <class F>
void two_bb_prods(const Ctx& cx, const CellId& c, F&& f) {
    const int i = c.a, j = c.b, h = c.c, l = c.d;
    const bool r_empty = j < i, s_empty = l < h;

    switch (c.t) {
        case T_HYS:
        case T_HY: {
            if (r_empty || s_empty) return;
            if (!cx.can_ext(i, l)) return;
            if (i == j && h == l) {
                Prod p;
                p.energy = cx.e_ext(i, l);
                p.has_arc = true;
                p.ax = i;
                p.ay = l;
                p.akind = ArcKind::Exterior;
                f(p);
                return;
            }
            if (i == j || h == l) return;
            for (int i2 = i + 1; i2 <= j; ++i2)
                for (int l2 = h; l2 <= l - 1; ++l2) {
                    Prod p;
                    p.energy = cx.e_ext(i, l) + ((i2 == i + 1 && l2 == l - 1) ? cx.em.stack_bonus : 0.0);
                    p.has_arc = true;
                    p.ax = i;
                    p.ay = l;
                    p.akind = ArcKind::Exterior;
                    p.nf = 1;
                    p.fac[0] = c4(T_HYS, i2, j, h, l2);
                    f(p);
                }
            return;
        }
        case T_HSTEP: {
            // leading maximal pure run + a separation holding at least one pair
            if (r_empty || s_empty) return;
            for (int a = i; a <= j; ++a)
                for (int b = h; b <= l; ++b) {
                    Prod p;
                    p.nf = 3;
                    p.fac[0] = c4(T_HY, i, a, b, l);
                    p.fac[1] = c2(T_SECP_R, a + 1, j);
                    p.fac[2] = c2(T_SEC_S, h, b - 1);
                    f(p);
                    Prod q;
                    q.nf = 2;
                    q.fac[0] = c4(T_HY, i, a, b, l);
                    q.fac[1] = c2(T_SECP_S, h, b - 1);
                    f(q);
                }
            return;
        }
        case T_HS: {
            if (r_empty || s_empty) return;
            {
                Prod p;
                p.nf = 1;
                p.fac[0] = c4(T_HY, i, j, h, l);
                f(p);
            }
            for (int i2 = i + 1; i2 <= j; ++i2)
                for (int l2 = h; l2 <= l - 1; ++l2) {
                    Prod p;
                    p.nf = 2;
                    p.fac[0] = c4(T_HSTEP, i, i2 - 1, l2 + 1, l);
                    p.fac[1] = c4(T_HS, i2, j, h, l2);
                    f(p);
                }
            return;
        }
        case T_U: {
            if (r_empty || s_empty) return;
            for (int a = i; a <= j; ++a)
                for (int b = h; b <= l; ++b) {
                    Prod p;
                    p.nf = 3;
                    p.fac[0] = c4(T_HS, i, a, h, b);
                    p.fac[1] = c2(T_SEC_R, a + 1, j);
                    p.fac[2] = c2(T_SEC_S, b + 1, l);
                    f(p);
                }
            return;
        }
        case T_X: {
            if (r_empty || s_empty) return;
            for (int p2 = i; p2 <= j - 1; ++p2)
                for (int q2 = h; q2 <= l - 1; ++q2) {
                    Prod p;
                    p.nf = 2;
                    p.fac[0] = c4(T_U, i, p2, h, q2);
                    p.fac[1] = c4(T_HS, p2 + 1, j, q2 + 1, l);
                    f(p);
                }
            return;
        }
        case T_W:
        case T_Y: {
            if (r_empty || s_empty) return;
            const Tab inner = c.t == T_W ? T_HS : T_X;
            for (int p2 = i + 1; p2 <= j - 1; ++p2)
                for (int q2 = p2; q2 <= j - 1; ++q2) {
                    Prod p;
                    p.nf = 2;
                    p.fac[0] = c4(T_V_R, i, p2 - 1, q2 + 1, j);
                    p.fac[1] = c4(inner, p2, q2, h, l);
                    f(p);
                }
            return;
        }
        case T_Z: {
            if (r_empty || s_empty) return;
            for (Tab t : {T_HS, T_X, T_W, T_Y}) {
                Prod p;
                p.nf = 1;
                p.fac[0] = c4(t, i, j, h, l);
                f(p);
            }
            return;
        }
        case T_TT: {
            if (r_empty || s_empty) return;
            for (Tab t : {T_X, T_W, T_Y}) {
                Prod p;
                p.nf = 1;
                p.fac[0] = c4(t, i, j, h, l);
                f(p);
            }
            for (int u = h + 1; u <= l - 1; ++u)
                for (int v = u; v <= l - 1; ++v) {
                    Prod p;
                    p.nf = 2;
                    p.fac[0] = c4(T_Z, i, j, u, v);
                    p.fac[1] = c4(T_V_S, h, u - 1, v + 1, l);
                    f(p);
                }
            return;
        }
        case T_PTT:
        case T_PTH: {
            if (r_empty || s_empty) return;
            const Tab corner = c.t == T_PTT ? T_TT : T_HY;
            const Tab rest = c.t == T_PTT ? T_I : T_J;
            for (int i1 = i; i1 <= j; ++i1)
                for (int l1 = h; l1 <= l; ++l1) {
                    Prod p;
                    p.nf = 2;
                    p.fac[0] = c4(corner, i1, j, h, l1);
                    p.fac[1] = c4(rest, i, i1 - 1, l1 + 1, l);
                    f(p);
                }
            return;
        }
        case T_J:
        case T_I: {
            {
                Prod p;
                p.nf = 2;
                p.fac[0] = c2(T_SEC_R, i, j);
                p.fac[1] = c2(T_SEC_S, h, l);
                f(p);
            }
            if (r_empty || s_empty) return;
            for (int j2 = i; j2 <= j; ++j2)
                for (int h2 = h; h2 <= l; ++h2) {
                    // hybrid corner first, mirroring the dichotomy of the
                    // pre-tight decomposition (exterior corner pair or not)
                    if (c.t == T_I) {
                        Prod p;
                        p.nf = 3;
                        p.fac[0] = c4(T_PTH, i, j2, h2, l);
                        p.fac[1] = c2(T_SEC_R, j2 + 1, j);
                        p.fac[2] = c2(T_SEC_S, h, h2 - 1);
                        f(p);
                    } else {
                        // no-hug remainder: the strips around a corner hybrid
                        // must contain at least one pair, else the peeled run
                        // was not maximal
                        Prod p;
                        p.nf = 3;
                        p.fac[0] = c4(T_PTH, i, j2, h2, l);
                        p.fac[1] = c2(T_SECP_R, j2 + 1, j);
                        p.fac[2] = c2(T_SEC_S, h, h2 - 1);
                        f(p);
                        Prod q;
                        q.nf = 2;
                        q.fac[0] = c4(T_PTH, i, j2, h2, l);
                        q.fac[1] = c2(T_SECP_S, h, h2 - 1);
                        f(q);
                    }
                    {
                        Prod p;
                        p.nf = 3;
                        p.fac[0] = c4(T_PTT, i, j2, h2, l);
                        p.fac[1] = c2(T_SEC_R, j2 + 1, j);
                        p.fac[2] = c2(T_SEC_S, h, h2 - 1);
                        f(p);
                    }
                }
            return;
        }
        default: return;
    }
}

template <class F>
void for_each_prod(const Ctx& cx, const CellId& c, F&& f) {
    if (tab_is_sec(c.t))
        sec_prods(cx, c, f);
    else if (tab_is_one_bb(c.t))
        one_bb_prods(cx, c, f);
    else
        two_bb_prods(cx, c, f);
}

// ---------------------------------------------------------------- semirings

struct CountSR {
    using V = BigInt;
    static V zero() { return V(0); }
    static V one() { return V(1); }
    static bool is_zero(const V& v) { return v == 0; }
    static void add_in(V& a, const V& b) { a += b; }
    static V mul(const V& a, const V& b) { return a * b; }
    static V from_energy(const Ctx&, double) { return V(1); }
};

struct MinPlusSR {
    using V = double;
    static V zero() { return std::numeric_limits<double>::infinity(); }
    static V one() { return 0.0; }
    static bool is_zero(V v) { return std::isinf(v); }
    static void add_in(V& a, V b) { a = std::min(a, b); }
    static V mul(V a, V b) { return a + b; }
    static V from_energy(const Ctx&, double e) { return e; }
};

struct BoltzSR {
    using V = double;
    static V zero() { return 0.0; }
    static V one() { return 1.0; }
    static bool is_zero(V v) { return v == 0.0; }
    static void add_in(V& a, V b) { a += b; }
    static V mul(V a, V b) { return a * b; }
    static V from_energy(const Ctx& cx, double e) { return std::exp(-e / cx.em.rt); }
};

// ------------------------------------------------------------------- filler

const Tab kTwoBbOrder[] = {T_HYS, T_HY, T_HSTEP, T_HS, T_U, T_X, T_W, T_Y, T_Z, T_TT, T_PTT, T_PTH, T_J, T_I};

template <class SR>
struct Tables {
    const Ctx& cx;
    std::array<std::vector<typename SR::V>, T_COUNT> t;

    explicit Tables(const Ctx& c) : cx(c) {
        for (int k = 0; k < T_COUNT; ++k) t[k].assign(table_size(cx, static_cast<Tab>(k)), SR::zero());
    }

    const typename SR::V& at(const CellId& c) const { return t[c.t][cell_index(cx, c)]; }
    typename SR::V& ref(const CellId& c) { return t[c.t][cell_index(cx, c)]; }

    typename SR::V term_value(const Prod& p) const {
        typename SR::V v = SR::from_energy(cx, p.energy);
        for (int k = 0; k < p.nf; ++k) {
            const auto& fv = at(p.fac[k]);
            if (SR::is_zero(fv)) return SR::zero();
            v = SR::mul(v, fv);
        }
        return v;
    }

    void fill_cell(const CellId& c) {
        typename SR::V acc = SR::zero();
        for_each_prod(cx, c, [&](const Prod& p) {
            auto tv = term_value(p);
            if (!SR::is_zero(tv)) SR::add_in(acc, tv);
        });
        ref(c) = std::move(acc);
    }

    void fill() {
        // secondary-structure family, by interval length
        for (int bb = 0; bb < 2; ++bb) {
            const int n = bb == 0 ? cx.nr : cx.ns;
            const Tab order[] = {bb == 0 ? T_SECC_R : T_SECC_S, bb == 0 ? T_SECNS_R : T_SECNS_S,
                                 bb == 0 ? T_SEC_R : T_SEC_S, bb == 0 ? T_SECP_R : T_SECP_S};
            for (int len = 0; len <= n; ++len)
                for (Tab tb : order)
                    for (int i = 1; i + len - 1 <= n && i <= n + 1; ++i) {
                        if (len == 0 && i > n + 1) break;
                        fill_cell(c2(tb, i, i + len - 1));
                    }
        }
        // gap family, by combined wing size
        for (int bb = 0; bb < 2; ++bb) {
            const int n = bb == 0 ? cx.nr : cx.ns;
            const Tab order[] = {bb == 0 ? T_GS_R : T_GS_S, bb == 0 ? T_G_R : T_G_S, bb == 0 ? T_V_R : T_V_S};
            for (int total = 2; total <= n; ++total)
                for (Tab tb : order)
                    for (int rl = 1; rl <= total - 1; ++rl) {
                        const int ll = total - rl;
                        for (int i = 1; i + rl - 1 <= n; ++i) {
                            const int j = i + rl - 1;
                            for (int h = j + 1; h + ll - 1 <= n; ++h) fill_cell(c4(tb, i, j, h, h + ll - 1));
                        }
                    }
        }
        // two-backbone family, by combined interval size
        for (int total = 0; total <= cx.nr + cx.ns; ++total)
            for (Tab tb : kTwoBbOrder)
                for (int rl = std::max(0, total - cx.ns); rl <= std::min(total, cx.nr); ++rl) {
                    const int sl = total - rl;
                    for (int i = 1; i + rl - 1 <= cx.nr && i <= cx.nr + 1; ++i) {
                        const int j = i + rl - 1;
                        for (int h = 1; h + sl - 1 <= cx.ns && h <= cx.ns + 1; ++h)
                            fill_cell(c4(tb, i, j, h, h + sl - 1));
                    }
                }
    }

    CellId root() const { return c4(T_I, 1, cx.nr, 1, cx.ns); }
};

// -------------------------------------------------------------- decomposers

// Generic top-down walk shared by MFE traceback and stochastic sampling:
// `choose` picks one production of the popped block.
template <class SR, class Chooser>
std::vector<std::pair<Arc, ArcKind>> decompose(const Ctx& cx, const Tables<SR>& tb, Chooser&& choose) {
    std::vector<std::pair<Arc, ArcKind>> arcs;
    std::vector<CellId> stack{tb.root()};
    while (!stack.empty()) {
        const CellId c = stack.back();
        stack.pop_back();
        if (SR::is_zero(tb.at(c))) throw Error(ErrorClass::Mismatch, "decompose: zero-valued block");
        Prod chosen = choose(c);
        for (int k = 0; k < chosen.nf; ++k) stack.push_back(chosen.fac[k]);
        if (chosen.has_arc) {
            Arc g;
            switch (chosen.akind) {
                case ArcKind::InteriorR: g = {chosen.ax, chosen.ay}; break;
                case ArcKind::InteriorS: g = {cx.nr + chosen.ax, cx.nr + chosen.ay}; break;
                case ArcKind::Exterior: g = {chosen.ax, cx.nr + chosen.ay}; break;
            }
            arcs.emplace_back(g, chosen.akind);
        }
    }
    std::sort(arcs.begin(), arcs.end());
    return arcs;
}

// ------------------------------------------------------------- outside pass

struct Outside {
    std::array<std::vector<double>, T_COUNT> out;
    std::vector<double> ext, int_r, int_s; // arc marginal accumulators (unnormalized)

    Outside(const Ctx& cx, const Tables<BoltzSR>& in) {
        for (int k = 0; k < T_COUNT; ++k) out[k].assign(table_size(cx, static_cast<Tab>(k)), 0.0);
        ext.assign(static_cast<size_t>(cx.nr) * cx.ns, 0.0);
        int_r.assign(static_cast<size_t>(cx.nr) * cx.nr, 0.0);
        int_s.assign(static_cast<size_t>(cx.ns) * cx.ns, 0.0);
        out[T_I][cell_index(cx, in.root())] = 1.0;

        auto process = [&](const CellId& c) {
            const double oc = out[c.t][cell_index(cx, c)];
            if (oc == 0.0) return;
            for_each_prod(cx, c, [&](const Prod& p) {
                const double w = BoltzSR::from_energy(cx, p.energy);
                double invals[3];
                double full = w;
                for (int k = 0; k < p.nf; ++k) {
                    invals[k] = in.at(p.fac[k]);
                    full *= invals[k];
                }
                if (full == 0.0) return;
                const double contrib = oc * full;
                for (int k = 0; k < p.nf; ++k) {
                    double rest = oc * w;
                    for (int m = 0; m < p.nf; ++m)
                        if (m != k) rest *= invals[m];
                    out[p.fac[k].t][cell_index(cx, p.fac[k])] += rest;
                }
                if (p.has_arc) {
                    switch (p.akind) {
                        case ArcKind::InteriorR: int_r[(p.ax - 1) * cx.nr + (p.ay - 1)] += contrib; break;
                        case ArcKind::InteriorS: int_s[(p.ax - 1) * cx.ns + (p.ay - 1)] += contrib; break;
                        case ArcKind::Exterior: ext[(p.ax - 1) * cx.ns + (p.ay - 1)] += contrib; break;
                    }
                }
            });
        };

        // exact reverse of the fill order
        for (int total = cx.nr + cx.ns; total >= 0; --total)
            for (int ti = static_cast<int>(std::size(kTwoBbOrder)) - 1; ti >= 0; --ti) {
                const Tab tb = kTwoBbOrder[ti];
                for (int rl = std::max(0, total - cx.ns); rl <= std::min(total, cx.nr); ++rl) {
                    const int sl = total - rl;
                    for (int i = 1; i + rl - 1 <= cx.nr && i <= cx.nr + 1; ++i)
                        for (int h = 1; h + sl - 1 <= cx.ns && h <= cx.ns + 1; ++h)
                            process(c4(tb, i, i + rl - 1, h, h + sl - 1));
                }
            }
        for (int bb = 0; bb < 2; ++bb) {
            const int n = bb == 0 ? cx.nr : cx.ns;
            const Tab order[] = {bb == 0 ? T_V_R : T_V_S, bb == 0 ? T_G_R : T_G_S, bb == 0 ? T_GS_R : T_GS_S};
            for (int total = n; total >= 2; --total)
                for (Tab tb : order)
                    for (int rl = 1; rl <= total - 1; ++rl) {
                        const int ll = total - rl;
                        for (int i = 1; i + rl - 1 <= n; ++i) {
                            const int j = i + rl - 1;
                            for (int h = j + 1; h + ll - 1 <= n; ++h) process(c4(tb, i, j, h, h + ll - 1));
                        }
                    }
        }
        for (int bb = 0; bb < 2; ++bb) {
            const int n = bb == 0 ? cx.nr : cx.ns;
            const Tab order[] = {bb == 0 ? T_SECP_R : T_SECP_S, bb == 0 ? T_SEC_R : T_SEC_S,
                                 bb == 0 ? T_SECNS_R : T_SECNS_S, bb == 0 ? T_SECC_R : T_SECC_S};
            for (int len = n; len >= 0; --len)
                for (Tab tb : order)
                    for (int i = 1; i + len - 1 <= n && i <= n + 1; ++i) process(c2(tb, i, i + len - 1));
        }
    }
};

} // namespace

// ----------------------------------------------------------------- plumbing

Diagram InteractionStructure::to_diagram() const {
    std::vector<Arc> as;
    for (const auto& [a, k] : arcs) as.push_back(a);
    return build_diagram(n_r + n_s, {Interval{1, n_r}, Interval{n_r + 1, n_r + n_s}}, std::move(as));
}

double structure_energy(const InteractionStructure& s, const SequencePair& pair, const EnergyModel& m) {
    double e = 0.0;
    auto letter = [&](int v) { return v <= s.n_r ? pair.r[v - 1] : pair.s[v - s.n_r - 1]; };
    for (const auto& [a, kind] : s.arcs) {
        if (kind == ArcKind::Exterior)
            e += m.exterior_energy(letter(a.first), letter(a.second));
        else
            e += m.interior_energy(letter(a.first), letter(a.second));
    }
    // stacking: adjacent parallel same-kind pairs, adjacency within backbones
    auto same_bb = [&](int u, int v) { return (u <= s.n_r) == (v <= s.n_r); };
    for (const auto& [a, kind] : s.arcs)
        for (const auto& [b, kind2] : s.arcs)
            if (kind == kind2 && b.first == a.first + 1 && b.second == a.second - 1 &&
                same_bb(a.first, b.first) && same_bb(b.second, a.second))
                e += m.stack_bonus;
    return e;
}

bool is_valid_interaction_structure(const InteractionStructure& s, const SequencePair& pair,
                                    const EnergyModel& m, std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    const int n = s.n_r + s.n_s;
    std::vector<char> used(n + 1, 0);
    auto letter = [&](int v) { return v <= s.n_r ? pair.r[v - 1] : pair.s[v - s.n_r - 1]; };
    std::vector<std::pair<int, int>> ext_feet;
    for (const auto& [a, kind] : s.arcs) {
        if (a.first < 1 || a.second > n || a.first >= a.second) return fail("arc out of range");
        if (used[a.first] || used[a.second]) return fail("shared vertex");
        used[a.first] = used[a.second] = 1;
        const bool fr = a.first <= s.n_r, sr = a.second <= s.n_r;
        const ArcKind want = fr && sr ? ArcKind::InteriorR : (!fr && !sr ? ArcKind::InteriorS : ArcKind::Exterior);
        if (want != kind) return fail("arc kind inconsistent with positions");
        if (!pair_class(letter(a.first), letter(a.second))) return fail("pairing rule violated");
        if (kind == ArcKind::Exterior) ext_feet.push_back({a.first, a.second});
    }
    for (const auto& [a, kind] : s.arcs) {
        if (kind == ArcKind::Exterior) continue;
        if (a.second - a.first > m.theta) continue;
        bool exempt = false;
        for (const auto& [r, s2] : ext_feet)
            if ((a.first < r && r < a.second) || (a.first < s2 && s2 < a.second)) exempt = true;
        if (!exempt) return fail("theta violated");
    }
    if (!is_gamma_structure(s.to_diagram(), 0)) return fail("not a 0-structure over two backbones");
    return true;
}

// -------------------------------------------------------------------- engine

struct FoldEngine::Impl {
    Ctx cx;
    std::unique_ptr<Tables<CountSR>> count;
    std::unique_ptr<Tables<MinPlusSR>> minplus;
    std::unique_ptr<Tables<BoltzSR>> boltz;
    std::unique_ptr<Outside> outside;

    Tables<BoltzSR>& boltz_tables() {
        if (!boltz) {
            boltz = std::make_unique<Tables<BoltzSR>>(cx);
            boltz->fill();
            const double q = boltz->at(boltz->root());
            if (!std::isfinite(q))
                throw Error(ErrorClass::Resource,
                            "Overflow: partition weights exceed double range; rescale energies or RT");
        }
        return *boltz;
    }
    Outside& outside_pass() {
        auto& tb = boltz_tables();
        if (!outside) outside = std::make_unique<Outside>(cx, tb);
        return *outside;
    }
};

FoldEngine::FoldEngine(SequencePair pair, EnergyModel model) : impl_(std::make_unique<Impl>()) {
    model.validate();
    impl_->cx.pair = make_sequence_pair(pair.r, pair.s);
    impl_->cx.em = model;
    impl_->cx.nr = static_cast<int>(impl_->cx.pair.r.size());
    impl_->cx.ns = static_cast<int>(impl_->cx.pair.s.size());
    if (impl_->cx.nr > model.max_side || impl_->cx.ns > model.max_side)
        throw ResourceLimit("LengthCap: sequence longer than max_side = " + std::to_string(model.max_side));
    impl_->cx.init_intervals();
}

FoldEngine::~FoldEngine() = default;
FoldEngine::FoldEngine(FoldEngine&&) noexcept = default;
FoldEngine& FoldEngine::operator=(FoldEngine&&) noexcept = default;

const SequencePair& FoldEngine::pair() const { return impl_->cx.pair; }
const EnergyModel& FoldEngine::model() const { return impl_->cx.em; }

BigInt FoldEngine::count_structures() {
    if (!impl_->count) {
        impl_->count = std::make_unique<Tables<CountSR>>(impl_->cx);
        impl_->count->fill();
    }
    return impl_->count->at(impl_->count->root());
}

std::pair<double, InteractionStructure> FoldEngine::mfe() {
    if (!impl_->minplus) {
        impl_->minplus = std::make_unique<Tables<MinPlusSR>>(impl_->cx);
        impl_->minplus->fill();
    }
    auto& tb = *impl_->minplus;
    const Ctx& cx = impl_->cx;
    auto chooser = [&](const CellId& c) {
        const double target = tb.at(c);
        Prod best;
        bool found = false;
        for_each_prod(cx, c, [&](const Prod& p) {
            if (found) return;
            if (tb.term_value(p) == target) {
                best = p;
                found = true;
            }
        });
        if (!found) throw Error(ErrorClass::Mismatch, "mfe traceback failed to reproduce cell value");
        return best;
    };
    InteractionStructure s;
    s.n_r = cx.nr;
    s.n_s = cx.ns;
    s.arcs = decompose(cx, tb, chooser);
    s.energy = tb.at(tb.root());
    return {s.energy, s};
}

double FoldEngine::partition_function() {
    auto& tb = impl_->boltz_tables();
    return tb.at(tb.root());
}

PairProbabilities FoldEngine::pairing_probabilities() {
    const Ctx& cx = impl_->cx;
    auto& tb = impl_->boltz_tables();
    auto& os = impl_->outside_pass();
    const double q = tb.at(tb.root());

    PairProbabilities pp;
    pp.n_r = cx.nr;
    pp.n_s = cx.ns;
    pp.q = q;
    pp.ext.assign(os.ext.size(), 0.0);
    pp.int_r.assign(os.int_r.size(), 0.0);
    pp.int_s.assign(os.int_s.size(), 0.0);
    for (size_t k = 0; k < os.ext.size(); ++k) pp.ext[k] = os.ext[k] / q;
    for (size_t k = 0; k < os.int_r.size(); ++k) pp.int_r[k] = os.int_r[k] / q;
    for (size_t k = 0; k < os.int_s.size(); ++k) pp.int_s[k] = os.int_s[k] / q;

    auto block_marg = [&](Tab t, std::map<BlockKey, double>& dst, int n1, int n2, bool one_bb) {
        for (int i = 1; i <= n1; ++i)
            for (int j = i; j <= n1; ++j)
                for (int h = one_bb ? j + 1 : 1; h <= n2; ++h)
                    for (int l = h; l <= n2; ++l) {
                        const CellId c = c4(t, i, j, h, l);
                        const double v = tb.at(c) * os.out[t][cell_index(cx, c)];
                        if (v > 0.0) dst[{{i, j, h, l}}] += v / q;
                    }
    };
    block_marg(T_HY, pp.hybrid, cx.nr, cx.ns, false);
    block_marg(T_G_R, pp.gap_r, cx.nr, cx.nr, true);
    block_marg(T_G_S, pp.gap_s, cx.ns, cx.ns, true);
    for (const auto& [k, v] : pp.hybrid) pp.target[{k.idx[0], k.idx[1]}] += v;
    for (const auto& [k, v] : pp.gap_r) pp.paring_r[{k.idx[0], k.idx[1]}] += v;
    for (const auto& [k, v] : pp.gap_s) pp.paring_s[{k.idx[0], k.idx[1]}] += v;
    return pp;
}

std::vector<InteractionStructure> FoldEngine::boltzmann_sample(int k, uint64_t seed) {
    if (k < 1) throw InputError("boltzmann_sample: k must be >= 1");
    const Ctx& cx = impl_->cx;
    auto& tb = impl_->boltz_tables();
    std::mt19937_64 rng(seed);
    auto unit = [&]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

    std::vector<InteractionStructure> out;
    out.reserve(k);
    for (int t = 0; t < k; ++t) {
        auto chooser = [&](const CellId& c) {
            const double total = tb.at(c);
            const double u = unit() * total;
            double cum = 0.0;
            Prod picked;
            bool found = false, any = false;
            for_each_prod(cx, c, [&](const Prod& p) {
                if (found) return;
                const double tv = tb.term_value(p);
                if (tv <= 0.0) return;
                picked = p;
                any = true;
                cum += tv;
                if (u < cum) found = true;
            });
            if (!found && !any) throw Error(ErrorClass::Mismatch, "sample: no admissible production");
            return picked; // found, or fp rounding fell past the last term
        };
        InteractionStructure s;
        s.n_r = cx.nr;
        s.n_s = cx.ns;
        s.arcs = decompose(cx, tb, chooser);
        s.energy = structure_energy(s, cx.pair, cx.em);
        s.probability = std::exp(-s.energy / cx.em.rt) / tb.at(tb.root());
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<std::tuple<std::array<int, 4>, double>> FoldEngine::cell_marginals(Nonterminal n, int backbone) {
    const Ctx& cx = impl_->cx;
    auto& tb = impl_->boltz_tables();
    auto& os = impl_->outside_pass();
    const double q = tb.at(tb.root());

    std::vector<Tab> tabs;
    switch (n) {
        case Nonterminal::I: tabs = {T_I}; break;
        case Nonterminal::PT: tabs = {T_PTT, T_PTH}; break;
        case Nonterminal::T: tabs = {T_TT}; break;
        case Nonterminal::Hs: tabs = {T_HS}; break;
        case Nonterminal::Hy: tabs = {T_HY}; break;
        case Nonterminal::HyStar: tabs = {T_HYS}; break;
        case Nonterminal::G: tabs = {backbone == 0 ? T_G_R : T_G_S}; break;
        case Nonterminal::GStar: tabs = {backbone == 0 ? T_GS_R : T_GS_S}; break;
        case Nonterminal::U: tabs = {T_U}; break;
        case Nonterminal::V: tabs = {backbone == 0 ? T_V_R : T_V_S}; break;
        case Nonterminal::W: tabs = {T_W}; break;
        case Nonterminal::X: tabs = {T_X}; break;
        case Nonterminal::Y: tabs = {T_Y}; break;
    }
    std::map<std::array<int, 4>, double> acc;
    for (Tab t : tabs) {
        const bool one_bb = tab_is_one_bb(t);
        const int n1 = one_bb ? (one_bb_backbone(t) == 0 ? cx.nr : cx.ns) : cx.nr;
        const int n2 = one_bb ? n1 : cx.ns;
        for (int i = 1; i <= n1; ++i)
            for (int j = i; j <= n1; ++j)
                for (int h = one_bb ? j + 1 : 1; h <= n2; ++h)
                    for (int l = h; l <= n2; ++l) {
                        const CellId c = c4(t, i, j, h, l);
                        const double v = tb.at(c) * os.out[t][cell_index(cx, c)];
                        if (v > 0.0) acc[{i, j, h, l}] += v / q;
                    }
    }
    std::vector<std::tuple<std::array<int, 4>, double>> out;
    out.reserve(acc.size());
    for (const auto& [k, v] : acc) out.emplace_back(k, v);
    return out;
}

} // namespace ixfold
