#ifndef IXFOLD_TOPOLOGY_HH
#define IXFOLD_TOPOLOGY_HH

#include <vector>

#include "ixfold/diagram.hh"

namespace ixfold {

struct FatgraphReport {
    int r = 0;                          // boundary components, length-0 cycles of empty backbones included
    std::vector<int> boundary_lengths;  // arc-sides per cycle (collapsed model); empty backbones contribute 0
    int chi = 0;                        // b - #arcs
    int genus_total = 0;
    std::vector<int> genus_per_component; // one entry per connected component
};

// Boundary traversal of the collapsed polygonal model: each backbone is one
// fattened vertex whose half-edge cyclic order is the left-to-right order of
// its arc endpoints; faces are orbits of (vertex successor) o (arc involution).
FatgraphReport boundary_components(const Diagram& d);

// Total genus, summed over connected components.
int genus(const Diagram& d);

// Same invariant computed on the inflated model (explicit backbone edges);
// used to cross-check the collapsed walk.
int genus_inflated(const Diagram& d);

// Glue the 3' end of the first backbone to the 5' end of the second; arcs kept.
Diagram glue_alpha(const Diagram& e);

// E1 * E2: R-backbone R1.R2, S-backbone S2.S1 (E2 inserted into the gap of E1).
// Associative, unit = empty two-backbone diagram, not commutative.
Diagram product_bullet(const Diagram& e1, const Diagram& e2);

} // namespace ixfold

#endif
