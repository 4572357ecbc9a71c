#include "ixfold/json_io.hh"

#include <sstream>

namespace ixfold {

Json to_json(const Diagram& d) {
    Json j;
    j["n"] = d.n;
    j["backbones"] = Json::array();
    for (const auto& b : d.backbones) j["backbones"].push_back({b.lo, b.hi});
    j["arcs"] = Json::array();
    for (const auto& a : d.arcs) j["arcs"].push_back({a.first, a.second});
    return j;
}

Diagram diagram_from_json(const Json& j) {
    if (!j.contains("n") || !j.contains("backbones") || !j.contains("arcs"))
        throw InputError("diagram JSON needs fields n, backbones, arcs");
    std::vector<Interval> bbs;
    for (const auto& b : j["backbones"]) bbs.push_back({b.at(0).get<int>(), b.at(1).get<int>()});
    std::vector<Arc> arcs;
    for (const auto& a : j["arcs"]) arcs.emplace_back(a.at(0).get<int>(), a.at(1).get<int>());
    return build_diagram(j["n"].get<int>(), bbs, std::move(arcs));
}

Json to_json(const FatgraphReport& r) {
    return Json{{"r", r.r},
                {"boundary_lengths", r.boundary_lengths},
                {"chi", r.chi},
                {"genus_total", r.genus_total},
                {"genus_per_component", r.genus_per_component}};
}

Json to_json(const ShadowInfo& s) {
    return Json{{"diagram", to_json(s.diagram)},
                {"nontrivial", s.nontrivial},
                {"irreducible", s.irreducible},
                {"genus", s.genus}};
}

Json to_json(const IrreducibleDecomposition& dec) {
    Json j;
    j["I1"] = Json::array();
    for (const auto& s : dec.i1) j["I1"].push_back(to_json(s));
    j["I2_0"] = Json::array();
    for (const auto& s : dec.i2_0) j["I2_0"].push_back(to_json(s));
    j["I2_1"] = Json::array();
    for (const auto& s : dec.i2_1) j["I2_1"].push_back(to_json(s));
    j["trace"] = Json::array();
    for (const auto& st : dec.trace) {
        Json e{{"step", st.step}, {"action", st.action}, {"backbones", st.backbones_spanned}};
        e["arcs"] = Json::array();
        for (const auto& a : st.arcs) e["arcs"].push_back({a.first, a.second});
        j["trace"].push_back(e);
    }
    return j;
}

Json to_json(const AtlasEntry& e) {
    return Json{{"diagram", to_json(e.shadow)},
                {"structure", render_structure(e.shadow)},
                {"genus", e.genus},
                {"arcs", e.arcs},
                {"irreducible", e.irreducible},
                {"provenance", e.provenance}};
}

Json to_json(const InteractionStructure& s) {
    Json j;
    j["n_r"] = s.n_r;
    j["n_s"] = s.n_s;
    j["arcs"] = Json::array();
    for (const auto& [a, k] : s.arcs) {
        const char* kind = k == ArcKind::Exterior ? "exterior" : (k == ArcKind::InteriorR ? "interior-R" : "interior-S");
        j["arcs"].push_back({{"i", a.first}, {"j", a.second}, {"kind", kind}});
    }
    j["energy"] = s.energy;
    if (s.probability) j["probability"] = *s.probability;
    j["structure"] = render_structure(s.to_diagram());
    return j;
}

namespace {

Json block_map_json(const std::map<BlockKey, double>& m) {
    Json arr = Json::array();
    for (const auto& [k, v] : m)
        arr.push_back({{"i", k.idx[0]}, {"j", k.idx[1]}, {"h", k.idx[2]}, {"l", k.idx[3]}, {"p", v}});
    return arr;
}

Json interval_map_json(const std::map<std::pair<int, int>, double>& m) {
    Json arr = Json::array();
    for (const auto& [k, v] : m) arr.push_back({{"i", k.first}, {"j", k.second}, {"p", v}});
    return arr;
}

} // namespace

Json to_json(const PairProbabilities& p) {
    Json j;
    j["q"] = p.q;
    j["n_r"] = p.n_r;
    j["n_s"] = p.n_s;
    j["exterior"] = p.ext;
    j["interior_r"] = p.int_r;
    j["interior_s"] = p.int_s;
    j["hybrid"] = block_map_json(p.hybrid);
    j["gap_r"] = block_map_json(p.gap_r);
    j["gap_s"] = block_map_json(p.gap_s);
    j["target"] = interval_map_json(p.target);
    j["paring_r"] = interval_map_json(p.paring_r);
    j["paring_s"] = interval_map_json(p.paring_s);
    return j;
}

Json to_json(const OracleResult& o) {
    Json j;
    std::ostringstream cnt;
    cnt << o.count;
    j["count"] = cnt.str();
    j["q"] = o.q;
    j["n_r"] = o.n_r;
    j["n_s"] = o.n_s;
    j["exterior"] = o.ext;
    j["interior_r"] = o.int_r;
    j["interior_s"] = o.int_s;
    j["hybrid"] = block_map_json(o.hybrid);
    j["gap_r"] = block_map_json(o.gap_r);
    j["gap_s"] = block_map_json(o.gap_s);
    j["target"] = interval_map_json(o.target);
    j["paring_r"] = interval_map_json(o.paring_r);
    j["paring_s"] = interval_map_json(o.paring_s);
    Json arr = Json::array();
    for (const auto& s : o.structures) arr.push_back(to_json(s));
    j["structures"] = arr;
    return j;
}

} // namespace ixfold
