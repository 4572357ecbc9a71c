#ifndef IXFOLD_ORACLE_HH
#define IXFOLD_ORACLE_HH

#include <map>

#include "ixfold/fold.hh"

namespace ixfold {

// Ground truth by exhaustion: every partial matching obeying the pairing and
// theta rules whose diagram is a 0-structure over two backbones. Shares no
// code with the grammar; validity goes through the shadow machinery.
struct OracleResult {
    BigInt count = 0;
    double q = 0.0;
    std::vector<InteractionStructure> structures; // kept when keep_structures
    // marginals, same keying as PairProbabilities
    std::vector<double> ext, int_r, int_s;
    std::map<BlockKey, double> hybrid, gap_r, gap_s;
    std::map<std::pair<int, int>, double> target, paring_r, paring_s;
    int n_r = 0, n_s = 0;

    double ext_at(int r, int s) const { return ext[(r - 1) * n_s + (s - 1)]; }
};

OracleResult enumerate_structures(const SequencePair& pair, const EnergyModel& model,
                                  bool keep_structures = true);

} // namespace ixfold

#endif
