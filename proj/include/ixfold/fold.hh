#ifndef IXFOLD_FOLD_HH
#define IXFOLD_FOLD_HH

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <tuple>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ixfold/diagram.hh"
#include "ixfold/energy.hh"

namespace ixfold {

using BigInt = boost::multiprecision::cpp_int;

// Grammar block symbols. PT, G, GStar and V are families: PT is the sum of
// its two corner cases, G/GStar/V live once per backbone.
enum class Nonterminal { I, PT, T, Hs, Hy, HyStar, G, GStar, U, V, W, X, Y };

// A concrete fold output. Arc coordinates are global diagram labels:
// R = 1..n_r, S = n_r+1..n_r+n_s.
struct InteractionStructure {
    int n_r = 0, n_s = 0;
    std::vector<std::pair<Arc, ArcKind>> arcs;
    double energy = 0.0;
    std::optional<double> probability;

    Diagram to_diagram() const;
};

// Arc-additive energy plus the stacking bonus per adjacent parallel
// same-kind pair.
double structure_energy(const InteractionStructure& s, const SequencePair& pair, const EnergyModel& m);

// Validity: partial matching, pairing rules, theta rule (interior arcs whose
// span holds no exterior endpoint), and gamma = 0.
bool is_valid_interaction_structure(const InteractionStructure& s, const SequencePair& pair,
                                    const EnergyModel& m, std::string* why = nullptr);

struct BlockKey {
    std::array<int, 4> idx; // (i,j;h,l)
    bool operator<(const BlockKey& o) const { return idx < o.idx; }
};

struct PairProbabilities {
    int n_r = 0, n_s = 0;
    double q = 0.0;
    std::vector<double> ext;   // (r-1)*n_s + (s-1)
    std::vector<double> int_r; // (a-1)*n_r + (b-1)
    std::vector<double> int_s;
    std::map<BlockKey, double> hybrid; // maximal hybrid extents (i,j;h,l)
    std::map<BlockKey, double> gap_r, gap_s;
    std::map<std::pair<int, int>, double> target;             // sum_h,l P^Hy(i,j;h,l)
    std::map<std::pair<int, int>, double> paring_r, paring_s; // sum over right wing of P^G

    double ext_at(int r, int s) const { return ext[(r - 1) * n_s + (s - 1)]; }
};

class FoldEngine {
public:
    FoldEngine(SequencePair pair, EnergyModel model);
    ~FoldEngine();
    FoldEngine(FoldEngine&&) noexcept;
    FoldEngine& operator=(FoldEngine&&) noexcept;

    const SequencePair& pair() const;
    const EnergyModel& model() const;

    BigInt count_structures();
    std::pair<double, InteractionStructure> mfe();
    double partition_function();
    PairProbabilities pairing_probabilities();
    std::vector<InteractionStructure> boltzmann_sample(int k, uint64_t seed);

    // inside * outside / Q for every cell of one nonterminal table;
    // backbone picks the member for the per-backbone families (0 = R, 1 = S).
    std::vector<std::tuple<std::array<int, 4>, double>> cell_marginals(Nonterminal n, int backbone = 0);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace ixfold

#endif
