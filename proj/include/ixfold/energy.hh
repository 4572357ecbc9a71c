#ifndef IXFOLD_ENERGY_HH
#define IXFOLD_ENERGY_HH

#include <array>
#include <optional>
#include <string>

#include "ixfold/errors.hh"

namespace ixfold {

// Watson-Crick + wobble pair classes.
enum class PairClass { GC, AU, GU };

std::optional<PairClass> pair_class(char a, char b);

// Arc-additive energies in kcal/mol, separately configurable for interior and
// exterior arcs, plus an optional bonus per adjacent parallel same-kind pair.
struct EnergyModel {
    std::array<double, 3> interior = {-3.0, -2.0, -1.0}; // GC, AU, GU
    std::array<double, 3> exterior = {-3.0, -2.0, -1.0};
    double stack_bonus = 0.0;
    double rt = 0.6;       // kcal/mol
    int theta = 3;         // minimum interior separation, j - i > theta
    int theta_ext = 0;     // across backbones
    int max_side = 40;     // per-sequence length cap for table filling
    int oracle_cap = 16;   // n_R + n_S cap for exhaustive enumeration

    void validate() const;

    double interior_energy(char a, char b) const;
    double exterior_energy(char a, char b) const;
};

// key = value file, '#' comments. Keys: interior.GC, interior.AU, interior.GU,
// exterior.GC, exterior.AU, exterior.GU, stack_bonus, RT, theta, theta_ext,
// max_side, oracle_cap.
EnergyModel load_energy_config(const std::string& path);

} // namespace ixfold

#endif
