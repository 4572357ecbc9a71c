#ifndef IXFOLD_SHADOW_HH
#define IXFOLD_SHADOW_HH

#include <string>
#include <vector>

#include "ixfold/diagram.hh"

namespace ixfold {

// Shadow projection: iterate (remove non-crossing arcs, drop isolated
// vertices, collapse stacks) to a fixed point. Preserves genus and the
// number of backbones; a pure secondary input yields an empty diagram.
Diagram shadow(const Diagram& d);

// Partition of arc indices into connected components of the crossing graph.
std::vector<std::vector<int>> crossing_components(const Diagram& d);

// Irreducible: crossing graph connected, at least two arcs, and (over two
// backbones) the diagram itself connected.
bool is_irreducible(const Diagram& d);

struct ShadowInfo {
    Diagram diagram;
    bool nontrivial = false;
    bool irreducible = false;
    int genus = 0;
};

struct RemovalStep {
    int step = 0;
    std::string action;            // "remove" or "collapse"
    std::vector<Arc> arcs;         // original labels
    int backbones_spanned = 1;
};

struct IrreducibleDecomposition {
    std::vector<ShadowInfo> i1;   // one-backbone irreducibles
    std::vector<ShadowInfo> i2_0; // two-backbone, g(alpha(S')) = g(S')
    std::vector<ShadowInfo> i2_1; // two-backbone, g(alpha(S')) = g(S') + 1
    std::vector<RemovalStep> trace;
};

IrreducibleDecomposition irreducible_shadows(const Diagram& d);

// Max genus over irreducible shadows (0 if none).
int gamma_index(const Diagram& d);
bool is_gamma_structure(const Diagram& d, int gamma);

// Genus from the decomposition classes; requires at least one irreducible
// two-backbone shadow, else throws InputError (NoExteriorIrreducible).
int genus_by_decomposition(const Diagram& e);

} // namespace ixfold

#endif
