#ifndef IXFOLD_DIAGRAM_HH
#define IXFOLD_DIAGRAM_HH

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ixfold/errors.hh"

namespace ixfold {

// Arc (i,j) with 1-based vertex labels, i < j.
using Arc = std::pair<int, int>;

struct Interval {
    int lo = 1, hi = 0; // empty iff hi < lo
    bool empty() const { return hi < lo; }
    int size() const { return empty() ? 0 : hi - lo + 1; }
    bool contains(int v) const { return lo <= v && v <= hi; }
};

enum class ArcKind { InteriorR, InteriorS, Exterior };

// Vertices 1..n laid out left to right, partitioned into 1 or 2 backbones
// (each 5'->3'); arcs form a partial matching drawn in the upper half-plane.
// Immutable after construction.
struct Diagram {
    int n = 0;
    std::vector<Interval> backbones; // ordered, disjoint, cover 1..n (may be empty)
    std::vector<Arc> arcs;           // sorted by (i,j)

    int backbone_count() const { return static_cast<int>(backbones.size()); }
    int backbone_of(int v) const;                  // 0-based index
    ArcKind kind(const Arc& a) const;              // requires 2 backbones
    bool has_arc_at(int v) const;
    std::optional<int> partner(int v) const;
    bool has_exterior_arc() const;
};

// Validating constructor. Throws InputError (SharedVertex, OutOfRange,
// BadPartition) on malformed input; rejects more than two backbones.
Diagram build_diagram(int n, const std::vector<Interval>& backbones, std::vector<Arc> arcs);

bool arcs_cross(const Arc& a, const Arc& b);
// Nested: one arc strictly inside the other.
bool arc_inside(const Arc& inner, const Arc& outer);

struct ZigzagWitness {
    Arc r_interior; // on first backbone
    Arc s_interior; // on second backbone
    Arc exterior;   // establishes dependence
};

// Two dependent interior arcs, neither subsuming the other.
std::optional<ZigzagWitness> detect_zigzag(const Diagram& d);

struct ApReport {
    bool ok = true;
    int violated_clause = 0; // 1 = strand pseudoknot, 2 = crossing exterior arcs, 3 = zig-zag
    std::string detail;
};

// Alkan-Pervouchine class: pseudoknot-free strands, non-crossing exterior
// arcs, no zig-zag. Reports the first violated clause.
ApReport is_ap_structure(const Diagram& d);

// Extended dot-bracket with layers ()[]{}<>, '.' unpaired, '&' separating
// backbones. Layers are assigned by greedy coloring of the crossing graph.
Diagram parse_structure(const std::string& text);
std::string render_structure(const Diagram& d);

struct SequencePair {
    std::string r, s;
};

// Uppercases, normalizes T->U, rejects anything outside {A,C,G,U,T}.
SequencePair make_sequence_pair(const std::string& r, const std::string& s);

} // namespace ixfold

#endif
