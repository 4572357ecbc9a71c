#include <atomic>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "ixfold/atlas.hh"
#include "ixfold/json_io.hh"
#include "ixfold/oracle.hh"

using namespace ixfold;

namespace {

struct CommonOpts {
    std::string format = "text"; // text | json
    std::string energy_config;
    std::string structure;      // dot-bracket
    std::string structure_json; // JSON diagram (inline or @file)
    std::string seq_r, seq_s, fasta, pairs_file;
    int jobs = 1;
    uint64_t seed = 1;
};

EnergyModel model_of(const CommonOpts& o) {
    std::string path = o.energy_config;
    if (path.empty())
        if (const char* env = std::getenv("IXFOLD_ENERGY")) path = env;
    if (!path.empty()) return load_energy_config(path);
    return EnergyModel{};
}

Diagram diagram_of(const CommonOpts& o) {
    if (!o.structure.empty()) return parse_structure(o.structure);
    if (!o.structure_json.empty()) {
        std::string text = o.structure_json;
        if (text.size() > 1 && text[0] == '@') {
            std::ifstream in(text.substr(1));
            if (!in) throw InputError("cannot open " + text.substr(1));
            std::stringstream ss;
            ss << in.rdbuf();
            text = ss.str();
        }
        return diagram_from_json(Json::parse(text));
    }
    throw InputError("no structure given; use --structure or --structure-json");
}

SequencePair fasta_pair(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open FASTA file " + path);
    std::vector<std::string> seqs;
    std::string line, cur;
    bool started = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '>') {
            if (started) seqs.push_back(cur);
            cur.clear();
            started = true;
            continue;
        }
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) cur += c;
    }
    if (started) seqs.push_back(cur);
    if (seqs.size() != 2) throw InputError("FASTA must contain exactly two records");
    return make_sequence_pair(seqs[0], seqs[1]);
}

std::vector<SequencePair> input_pairs(const CommonOpts& o) {
    if (!o.pairs_file.empty()) {
        std::ifstream in(o.pairs_file);
        if (!in) throw InputError("cannot open pairs file " + o.pairs_file);
        std::vector<SequencePair> out;
        std::string r, s;
        while (in >> r >> s) out.push_back(make_sequence_pair(r, s));
        if (out.empty()) throw InputError("pairs file is empty");
        return out;
    }
    if (!o.fasta.empty()) return {fasta_pair(o.fasta)};
    if (o.seq_r.empty() && o.seq_s.empty())
        throw InputError("no sequences given; use --seq-r/--seq-s, --fasta or --pairs");
    return {make_sequence_pair(o.seq_r, o.seq_s)};
}

// fan a per-pair action out over --jobs threads, print results in input order
void run_over_pairs(const CommonOpts& o, const std::function<std::string(const SequencePair&)>& action) {
    const auto pairs = input_pairs(o);
    std::vector<std::string> results(pairs.size());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const size_t t = next.fetch_add(1);
            if (t >= pairs.size()) break;
            results[t] = action(pairs[t]);
        }
    };
    const int nt = std::max(1, std::min<int>(o.jobs, static_cast<int>(pairs.size())));
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    for (const auto& r : results) std::cout << r << "\n";
}

void add_structure_opts(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--structure", o.structure, "extended dot-bracket, '&' separates backbones");
    cmd->add_option("--structure-json", o.structure_json, "JSON diagram (inline or @file)");
    cmd->add_option("--format", o.format, "text | json");
}

void add_seq_opts(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--seq-r", o.seq_r, "first sequence (5'->3')");
    cmd->add_option("--seq-s", o.seq_s, "second sequence (5'->3')");
    cmd->add_option("--fasta", o.fasta, "FASTA file with exactly two records");
    cmd->add_option("--pairs", o.pairs_file, "file of whitespace-separated R S pairs, one per line");
    cmd->add_option("--jobs", o.jobs, "worker threads over input pairs");
    cmd->add_option("--energy-config", o.energy_config, "energy model file (default $IXFOLD_ENERGY)");
    cmd->add_option("--format", o.format, "text | json");
}

std::string kind_name(ArcKind k) {
    return k == ArcKind::Exterior ? "exterior" : (k == ArcKind::InteriorR ? "interior-R" : "interior-S");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"topological analysis and genus-zero folding of RNA-RNA interaction structures"};
    app.require_subcommand(1);

    CommonOpts o;
    int atlas_backbones = 1, atlas_genus = 1;
    bool atlas_irreducible = false;
    int sample_k = 10;
    bool fold_with_count = false;
    std::string probs_table = "summary";
    double check_tol = 1e-9;

    auto* c_genus = app.add_subcommand("genus", "fatgraph boundary components and genus of a diagram");
    add_structure_opts(c_genus, o);
    auto* c_shadow = app.add_subcommand("shadow", "shadow projection of a diagram");
    add_structure_opts(c_shadow, o);
    auto* c_dec = app.add_subcommand("decompose", "irreducible shadow decomposition");
    add_structure_opts(c_dec, o);
    auto* c_cls = app.add_subcommand("classify", "gamma, AP verdict and zig-zag witness");
    add_structure_opts(c_cls, o);

    auto* c_atlas = app.add_subcommand("atlas", "enumerate shadows of fixed genus");
    c_atlas->add_option("--backbones", atlas_backbones, "1 or 2")->required();
    c_atlas->add_option("--genus", atlas_genus, "genus")->required();
    c_atlas->add_flag("--irreducible", atlas_irreducible, "irreducible entries only");
    c_atlas->add_option("--format", o.format, "text | json");

    auto* c_fold = app.add_subcommand("fold", "minimum free energy interaction structure");
    add_seq_opts(c_fold, o);
    c_fold->add_flag("--count", fold_with_count, "also report the exact structure count");
    auto* c_part = app.add_subcommand("partition", "partition function");
    add_seq_opts(c_part, o);
    auto* c_probs = app.add_subcommand("probs", "pairing, hybrid and gap probabilities");
    add_seq_opts(c_probs, o);
    c_probs->add_option("--table", probs_table,
                        "summary | tsv-pairs | tsv-hybrid | tsv-gap-r | tsv-gap-s | tsv-<nonterminal>");
    auto* c_sample = app.add_subcommand("sample", "Boltzmann samples");
    add_seq_opts(c_sample, o);
    c_sample->add_option("--num", sample_k, "number of samples");
    c_sample->add_option("--seed", o.seed, "RNG seed");
    auto* c_check = app.add_subcommand("oracle-check", "diff engine against the brute-force oracle");
    add_seq_opts(c_check, o);
    c_check->add_option("--tol", check_tol, "relative tolerance for Q and marginals");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*c_genus) {
            const Diagram d = diagram_of(o);
            const auto rep = boundary_components(d);
            if (o.format == "json")
                std::cout << to_json(rep).dump(2) << "\n";
            else {
                std::cout << "genus " << rep.genus_total << "\nboundary components " << rep.r << "\nlengths";
                for (int l : rep.boundary_lengths) std::cout << " " << l;
                std::cout << "\nchi " << rep.chi << "\n";
            }
        } else if (*c_shadow) {
            const Diagram sh = shadow(diagram_of(o));
            ShadowInfo info;
            info.diagram = sh;
            info.irreducible = is_irreducible(sh);
            info.genus = genus(sh);
            info.nontrivial = !sh.backbones.empty();
            for (const auto& bb : sh.backbones)
                if (bb.empty()) info.nontrivial = false;
            if (o.format == "json")
                std::cout << to_json(info).dump(2) << "\n";
            else
                std::cout << render_structure(sh) << "\n";
        } else if (*c_dec) {
            std::cout << to_json(irreducible_shadows(diagram_of(o))).dump(2) << "\n";
        } else if (*c_cls) {
            const Diagram d = diagram_of(o);
            Json j;
            j["genus"] = genus(d);
            j["gamma"] = gamma_index(d);
            j["zero_structure"] = is_gamma_structure(d, 0);
            if (d.backbone_count() == 2) {
                const auto ap = is_ap_structure(d);
                j["ap"] = ap.ok;
                if (!ap.ok) {
                    j["ap_violated_clause"] = ap.violated_clause;
                    j["ap_detail"] = ap.detail;
                }
                if (auto z = detect_zigzag(d)) {
                    j["zigzag"] = {{"interior_r", {z->r_interior.first, z->r_interior.second}},
                                   {"interior_s", {z->s_interior.first, z->s_interior.second}},
                                   {"exterior", {z->exterior.first, z->exterior.second}}};
                }
            }
            if (o.format == "json")
                std::cout << j.dump(2) << "\n";
            else
                std::cout << j.dump() << "\n";
        } else if (*c_atlas) {
            std::vector<AtlasEntry> entries;
            if (atlas_backbones == 1) {
                entries = enumerate_shadows_one_backbone(atlas_genus);
                if (atlas_irreducible) {
                    std::vector<AtlasEntry> keep;
                    for (auto& e : entries)
                        if (e.irreducible) keep.push_back(e);
                    entries = keep;
                }
            } else if (atlas_backbones == 2) {
                entries = enumerate_irreducible_two_backbone(atlas_genus);
            } else {
                throw InputError("atlas: --backbones must be 1 or 2");
            }
            if (o.format == "json") {
                Json arr = Json::array();
                for (const auto& e : entries) arr.push_back(to_json(e));
                std::cout << arr.dump(2) << "\n";
            } else {
                for (const auto& e : entries)
                    std::cout << render_structure(e.shadow) << "  arcs=" << e.arcs << " genus=" << e.genus
                              << (e.irreducible ? " irreducible" : "") << "\n";
                std::cout << entries.size() << " entries\n";
            }
        } else if (*c_fold) {
            const EnergyModel em = model_of(o);
            run_over_pairs(o, [&](const SequencePair& p) {
                FoldEngine eng(p, em);
                auto [e, s] = eng.mfe();
                Json j = to_json(s);
                if (fold_with_count) {
                    std::ostringstream cs;
                    cs << eng.count_structures();
                    j["count"] = cs.str();
                }
                if (o.format == "json") return j.dump();
                std::ostringstream t;
                t << p.r << "&" << p.s << "\n" << j["structure"].get<std::string>() << "\nenergy " << e;
                if (fold_with_count) t << "\ncount " << j["count"].get<std::string>();
                return t.str();
            });
        } else if (*c_part) {
            const EnergyModel em = model_of(o);
            run_over_pairs(o, [&](const SequencePair& p) {
                FoldEngine eng(p, em);
                const double q = eng.partition_function();
                if (o.format == "json") return Json{{"q", q}}.dump();
                std::ostringstream t;
                t.precision(15);
                t << "Q " << q;
                return t.str();
            });
        } else if (*c_probs) {
            const EnergyModel em = model_of(o);
            const auto pairs = input_pairs(o);
            if (pairs.size() != 1) throw InputError("probs: one pair at a time");
            FoldEngine eng(pairs[0], em);
            if (probs_table == "summary") {
                std::cout << to_json(eng.pairing_probabilities()).dump(2) << "\n";
            } else if (probs_table.rfind("tsv-", 0) == 0) {
                const std::string what = probs_table.substr(4);
                const auto pp = eng.pairing_probabilities();
                std::cout.precision(17);
                auto dump_blocks = [&](const std::map<BlockKey, double>& m) {
                    for (const auto& [k, v] : m)
                        std::cout << k.idx[0] << "\t" << k.idx[1] << "\t" << k.idx[2] << "\t" << k.idx[3]
                                  << "\t" << v << "\n";
                };
                if (what == "pairs") {
                    for (int r = 1; r <= pp.n_r; ++r)
                        for (int s = 1; s <= pp.n_s; ++s)
                            if (pp.ext_at(r, s) > 0)
                                std::cout << "exterior\t" << r << "\t" << s << "\t" << pp.ext_at(r, s) << "\n";
                    for (int a = 1; a <= pp.n_r; ++a)
                        for (int b = a + 1; b <= pp.n_r; ++b)
                            if (pp.int_r[(a - 1) * pp.n_r + (b - 1)] > 0)
                                std::cout << "interior-R\t" << a << "\t" << b << "\t"
                                          << pp.int_r[(a - 1) * pp.n_r + (b - 1)] << "\n";
                    for (int a = 1; a <= pp.n_s; ++a)
                        for (int b = a + 1; b <= pp.n_s; ++b)
                            if (pp.int_s[(a - 1) * pp.n_s + (b - 1)] > 0)
                                std::cout << "interior-S\t" << a << "\t" << b << "\t"
                                          << pp.int_s[(a - 1) * pp.n_s + (b - 1)] << "\n";
                } else if (what == "hybrid") {
                    dump_blocks(pp.hybrid);
                } else if (what == "gap-r") {
                    dump_blocks(pp.gap_r);
                } else if (what == "gap-s") {
                    dump_blocks(pp.gap_s);
                } else {
                    static const std::map<std::string, Nonterminal> names = {
                        {"I", Nonterminal::I},   {"PT", Nonterminal::PT}, {"T", Nonterminal::T},
                        {"Hs", Nonterminal::Hs}, {"Hy", Nonterminal::Hy}, {"HyStar", Nonterminal::HyStar},
                        {"G", Nonterminal::G},   {"GStar", Nonterminal::GStar}, {"U", Nonterminal::U},
                        {"V", Nonterminal::V},   {"W", Nonterminal::W},   {"X", Nonterminal::X},
                        {"Y", Nonterminal::Y}};
                    auto it = names.find(what);
                    if (it == names.end()) throw InputError("probs: unknown table '" + what + "'");
                    for (const auto& [idx, p] : eng.cell_marginals(it->second))
                        std::cout << idx[0] << "\t" << idx[1] << "\t" << idx[2] << "\t" << idx[3] << "\t" << p
                                  << "\n";
                }
            } else {
                throw InputError("probs: unknown --table value");
            }
        } else if (*c_sample) {
            const EnergyModel em = model_of(o);
            const auto pairs = input_pairs(o);
            if (pairs.size() != 1) throw InputError("sample: one pair at a time");
            FoldEngine eng(pairs[0], em);
            for (const auto& s : eng.boltzmann_sample(sample_k, o.seed)) std::cout << to_json(s).dump() << "\n";
        } else if (*c_check) {
            const EnergyModel em = model_of(o);
            bool all_ok = true;
            run_over_pairs(o, [&](const SequencePair& p) {
                FoldEngine eng(p, em);
                const auto oracle = enumerate_structures(p, em, false);
                const BigInt dp_count = eng.count_structures();
                const double dp_q = eng.partition_function();
                const auto pp = eng.pairing_probabilities();
                auto rel = [](double a, double b) {
                    const double den = std::max({std::abs(a), std::abs(b), 1.0});
                    return std::abs(a - b) / den;
                };
                bool ok = dp_count == oracle.count && rel(dp_q, oracle.q) <= check_tol;
                for (size_t k = 0; k < pp.ext.size() && ok; ++k) ok = rel(pp.ext[k], oracle.ext[k]) <= check_tol;
                for (size_t k = 0; k < pp.int_r.size() && ok; ++k)
                    ok = rel(pp.int_r[k], oracle.int_r[k]) <= check_tol;
                for (size_t k = 0; k < pp.int_s.size() && ok; ++k)
                    ok = rel(pp.int_s[k], oracle.int_s[k]) <= check_tol;
                if (!ok) all_ok = false;
                std::ostringstream t;
                t << "count dp=" << dp_count << " oracle=" << oracle.count << " q dp=" << dp_q
                  << " oracle=" << oracle.q << (ok ? " OK" : " MISMATCH");
                return t.str();
            });
            if (!all_ok) throw Error(ErrorClass::Mismatch, "oracle-check: engine disagrees with oracle");
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.cls());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
