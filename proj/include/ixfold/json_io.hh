#ifndef IXFOLD_JSON_IO_HH
#define IXFOLD_JSON_IO_HH

#include <json.hpp> // vendored nlohmann/json single header

#include "ixfold/atlas.hh"
#include "ixfold/fold.hh"
#include "ixfold/oracle.hh"
#include "ixfold/shadow.hh"
#include "ixfold/topology.hh"

namespace ixfold {

using Json = nlohmann::json;

// {"n":int, "backbones":[[lo,hi],...], "arcs":[[i,j],...]}
Json to_json(const Diagram& d);
Diagram diagram_from_json(const Json& j);

Json to_json(const FatgraphReport& r);
Json to_json(const ShadowInfo& s);
Json to_json(const IrreducibleDecomposition& dec);
Json to_json(const AtlasEntry& e);
Json to_json(const InteractionStructure& s);
Json to_json(const PairProbabilities& p);
Json to_json(const OracleResult& o);

} // namespace ixfold

#endif
