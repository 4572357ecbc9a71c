#include "ixfold/diagram.hh"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>

namespace ixfold {

int Diagram::backbone_of(int v) const {
    for (int b = 0; b < backbone_count(); ++b)
        if (backbones[b].contains(v)) return b;
    throw InputError("backbone_of: vertex " + std::to_string(v) + " outside all backbones");
}

ArcKind Diagram::kind(const Arc& a) const {
    if (backbone_count() == 1) return ArcKind::InteriorR;
    const int bi = backbone_of(a.first), bj = backbone_of(a.second);
    if (bi != bj) return ArcKind::Exterior;
    return bi == 0 ? ArcKind::InteriorR : ArcKind::InteriorS;
}

bool Diagram::has_arc_at(int v) const { return partner(v).has_value(); }

std::optional<int> Diagram::partner(int v) const {
    for (const auto& a : arcs) {
        if (a.first == v) return a.second;
        if (a.second == v) return a.first;
    }
    return std::nullopt;
}

bool Diagram::has_exterior_arc() const {
    if (backbone_count() < 2) return false;
    for (const auto& a : arcs)
        if (kind(a) == ArcKind::Exterior) return true;
    return false;
}

Diagram build_diagram(int n, const std::vector<Interval>& backbones, std::vector<Arc> arcs) {
    if (n < 0) throw InputError("BadPartition: negative vertex count");
    if (backbones.empty() || backbones.size() > 2)
        throw InputError("BadPartition: need 1 or 2 backbones, got " + std::to_string(backbones.size()));
    int expect = 1;
    for (const auto& b : backbones) {
        if (b.empty()) continue;
        if (b.lo != expect) throw InputError("BadPartition: backbones must be contiguous and in order");
        expect = b.hi + 1;
    }
    if (expect != n + 1) throw InputError("BadPartition: backbones must cover 1.." + std::to_string(n));

    std::vector<char> used(static_cast<size_t>(n) + 1, 0);
    for (auto& a : arcs) {
        if (a.first > a.second) std::swap(a.first, a.second);
        if (a.first < 1 || a.second > n || a.first == a.second)
            throw InputError("OutOfRange: arc (" + std::to_string(a.first) + "," + std::to_string(a.second) + ")");
        for (int v : {a.first, a.second}) {
            if (used[v]) throw InputError("SharedVertex: vertex " + std::to_string(v) + " in two arcs");
            used[v] = 1;
        }
    }
    std::sort(arcs.begin(), arcs.end());

    Diagram d;
    d.n = n;
    d.backbones = backbones;
    d.arcs = std::move(arcs);
    return d;
}

bool arcs_cross(const Arc& a, const Arc& b) {
    return (a.first < b.first && b.first < a.second && a.second < b.second) ||
           (b.first < a.first && a.first < b.second && b.second < a.second);
}

bool arc_inside(const Arc& inner, const Arc& outer) {
    return outer.first < inner.first && inner.second < outer.second;
}

namespace {

// r subsumed in s: every exterior arc with R-foot strictly inside r has its
// S-foot strictly inside s.
bool subsumed(const Arc& r, const Arc& s, const std::vector<Arc>& exterior, bool r_is_first) {
    for (const auto& x : exterior) {
        const int rfoot = x.first, sfoot = x.second;
        if (r_is_first) {
            if (r.first < rfoot && rfoot < r.second && !(s.first < sfoot && sfoot < s.second)) return false;
        } else {
            // roles flipped: r lives on the second backbone
            if (r.first < sfoot && sfoot < r.second && !(s.first < rfoot && rfoot < s.second)) return false;
        }
    }
    return true;
}

} // namespace

std::optional<ZigzagWitness> detect_zigzag(const Diagram& d) {
    if (d.backbone_count() != 2) throw InputError("NotTwoBackbones: zig-zag needs two backbones");
    std::vector<Arc> ir, is, ex;
    for (const auto& a : d.arcs) {
        switch (d.kind(a)) {
            case ArcKind::InteriorR: ir.push_back(a); break;
            case ArcKind::InteriorS: is.push_back(a); break;
            case ArcKind::Exterior: ex.push_back(a); break;
        }
    }
    for (const auto& r : ir)
        for (const auto& s : is) {
            // dependence: some exterior arc with one foot inside each
            const Arc* dep = nullptr;
            for (const auto& x : ex)
                if (r.first < x.first && x.first < r.second && s.first < x.second && x.second < s.second) {
                    dep = &x;
                    break;
                }
            if (!dep) continue;
            if (!subsumed(r, s, ex, true) && !subsumed(s, r, ex, false))
                return ZigzagWitness{r, s, *dep};
        }
    return std::nullopt;
}

ApReport is_ap_structure(const Diagram& d) {
    if (d.backbone_count() != 2) throw InputError("NotTwoBackbones: AP classification needs two backbones");
    std::vector<Arc> ir, is, ex;
    for (const auto& a : d.arcs) {
        switch (d.kind(a)) {
            case ArcKind::InteriorR: ir.push_back(a); break;
            case ArcKind::InteriorS: is.push_back(a); break;
            case ArcKind::Exterior: ex.push_back(a); break;
        }
    }
    auto crossing_within = [](const std::vector<Arc>& v) -> std::optional<std::pair<Arc, Arc>> {
        for (size_t i = 0; i < v.size(); ++i)
            for (size_t j = i + 1; j < v.size(); ++j)
                if (arcs_cross(v[i], v[j])) return std::make_pair(v[i], v[j]);
        return std::nullopt;
    };
    if (auto c = crossing_within(ir)) {
        return {false, 1, "crossing interior arcs on first backbone"};
    }
    if (auto c = crossing_within(is)) {
        return {false, 1, "crossing interior arcs on second backbone"};
    }
    // Exterior conflict (over-under sense): parallel-orientation binding,
    // i.e. a crossing pair in the linear layout.
    if (auto c = crossing_within(ex)) {
        return {false, 2, "crossing exterior arcs (parallel-orientation binding)"};
    }
    if (detect_zigzag(d)) {
        return {false, 3, "zig-zag motif"};
    }
    return {true, 0, ""};
}

namespace {

const std::array<char, 4> kOpen = {'(', '[', '{', '<'};
const std::array<char, 4> kClose = {')', ']', '}', '>'};

int open_layer(char c) {
    for (int k = 0; k < 4; ++k)
        if (kOpen[k] == c) return k;
    return -1;
}
int close_layer(char c) {
    for (int k = 0; k < 4; ++k)
        if (kClose[k] == c) return k;
    return -1;
}

} // namespace

Diagram parse_structure(const std::string& text) {
    std::vector<Interval> backbones;
    std::vector<Arc> arcs;
    std::array<std::vector<int>, 4> stacks;
    int pos = 0, seg_start = 1;
    for (char c : text) {
        if (c == '&') {
            backbones.push_back({seg_start, pos});
            seg_start = pos + 1;
            continue;
        }
        ++pos;
        if (c == '.') continue;
        if (int k = open_layer(c); k >= 0) {
            stacks[k].push_back(pos);
            continue;
        }
        if (int k = close_layer(c); k >= 0) {
            if (stacks[k].empty()) throw InputError("UnbalancedBrackets: unmatched '" + std::string(1, c) + "'");
            arcs.emplace_back(stacks[k].back(), pos);
            stacks[k].pop_back();
            continue;
        }
        throw InputError("UnbalancedBrackets: unexpected character '" + std::string(1, c) + "'");
    }
    backbones.push_back({seg_start, pos});
    for (const auto& st : stacks)
        if (!st.empty()) throw InputError("UnbalancedBrackets: unclosed bracket");
    return build_diagram(pos, backbones, std::move(arcs));
}

std::string render_structure(const Diagram& d) {
    // Greedy first-fit coloring of the crossing graph, arcs in left-to-right order.
    std::vector<int> layer(d.arcs.size(), -1);
    for (size_t i = 0; i < d.arcs.size(); ++i) {
        bool taken[4] = {false, false, false, false};
        for (size_t j = 0; j < i; ++j)
            if (arcs_cross(d.arcs[i], d.arcs[j])) taken[layer[j]] = true;
        int k = 0;
        while (k < 4 && taken[k]) ++k;
        if (k == 4) throw ResourceLimit("LayerOverflow: crossing graph needs more than 4 bracket layers");
        layer[i] = k;
    }
    std::string out(static_cast<size_t>(d.n), '.');
    for (size_t i = 0; i < d.arcs.size(); ++i) {
        out[d.arcs[i].first - 1] = kOpen[layer[i]];
        out[d.arcs[i].second - 1] = kClose[layer[i]];
    }
    std::string withsep;
    for (int b = 0; b < d.backbone_count(); ++b) {
        if (b) withsep += '&';
        const auto& iv = d.backbones[b];
        if (!iv.empty()) withsep += out.substr(iv.lo - 1, iv.size());
    }
    return withsep;
}

SequencePair make_sequence_pair(const std::string& r, const std::string& s) {
    auto normalize = [](const std::string& in) {
        std::string out;
        out.reserve(in.size());
        for (char c : in) {
            char u = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
            if (u == 'T') u = 'U';
            if (u != 'A' && u != 'C' && u != 'G' && u != 'U')
                throw InputError("InvalidAlphabet: character '" + std::string(1, c) + "'");
            out += u;
        }
        return out;
    };
    return {normalize(r), normalize(s)};
}

} // namespace ixfold
