#ifndef IXFOLD_ATLAS_HH
#define IXFOLD_ATLAS_HH

#include <string>
#include <vector>

#include "ixfold/diagram.hh"

namespace ixfold {

struct AtlasEntry {
    Diagram shadow;
    int genus = 0;
    int arcs = 0;
    bool irreducible = false;
    std::string provenance; // "enumerated" | "constructed" | "cut-from"
};

// All one-backbone shadows of genus g (labeled, duplicate-free). Complete
// brute force over perfect matchings within the arc-count window.
// g = 0 yields no non-trivial shadows. Throws ResourceLimit for g > 3.
std::vector<AtlasEntry> enumerate_shadows_one_backbone(int g, int threads = 0);

// The inserted-arc family: 2g mutually crossing arcs for ell = 2g, then one
// crossing arc added from the 5' end per step, splitting the tracked boundary
// component into lengths 3 and (previous - 1). Valid for 2g <= ell <= 6g-2.
Diagram construct_s_sequence(int g, int ell);

// Split one backbone between position `pos` and `pos`+1 (0 < pos < n).
Diagram cut_backbone(const Diagram& s, int pos);

// Irreducible two-backbone shadows of genus g. g = 0 is direct brute force;
// g = 1 is derived by cutting the complete one-backbone atlases of genus 1
// and 2 (every two-backbone shadow arises from such a cut). g > 1 throws.
std::vector<AtlasEntry> enumerate_irreducible_two_backbone(int g);

// Same diagram up to nothing: exact labeled equality (arcs + backbones).
bool same_labeled_diagram(const Diagram& a, const Diagram& b);

} // namespace ixfold

#endif
