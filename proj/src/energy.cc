#include "ixfold/energy.hh"

#include <cmath>
#include <fstream>
#include <sstream>

namespace ixfold {

std::optional<PairClass> pair_class(char a, char b) {
    auto is = [&](char x, char y) { return (a == x && b == y) || (a == y && b == x); };
    if (is('G', 'C')) return PairClass::GC;
    if (is('A', 'U')) return PairClass::AU;
    if (is('G', 'U')) return PairClass::GU;
    return std::nullopt;
}

void EnergyModel::validate() const {
    for (double e : interior)
        if (!std::isfinite(e)) throw InputError("energy model: non-finite interior energy");
    for (double e : exterior)
        if (!std::isfinite(e)) throw InputError("energy model: non-finite exterior energy");
    if (!std::isfinite(stack_bonus)) throw InputError("energy model: non-finite stacking bonus");
    if (!(rt > 0)) throw InputError("energy model: RT must be positive");
    if (theta < 0 || theta_ext < 0) throw InputError("energy model: theta must be nonnegative");
}

double EnergyModel::interior_energy(char a, char b) const {
    auto pc = pair_class(a, b);
    if (!pc) throw InputError("interior_energy: not a pairable combination");
    return interior[static_cast<int>(*pc)];
}

double EnergyModel::exterior_energy(char a, char b) const {
    auto pc = pair_class(a, b);
    if (!pc) throw InputError("exterior_energy: not a pairable combination");
    return exterior[static_cast<int>(*pc)];
}

EnergyModel load_energy_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open energy config: " + path);
    EnergyModel m;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string key, eq, val;
        std::istringstream ls(line);
        if (!(ls >> key)) continue;
        const auto eqpos = key.find('=');
        if (eqpos != std::string::npos) {
            val = key.substr(eqpos + 1);
            key = key.substr(0, eqpos);
            if (val.empty()) ls >> val;
        } else {
            ls >> eq;
            if (eq != "=") throw InputError("energy config line " + std::to_string(lineno) + ": expected key = value");
            ls >> val;
        }
        if (val.empty()) throw InputError("energy config line " + std::to_string(lineno) + ": missing value");
        double x = 0;
        try {
            x = std::stod(val);
        } catch (...) {
            throw InputError("energy config line " + std::to_string(lineno) + ": bad number '" + val + "'");
        }
        if (key == "interior.GC")
            m.interior[0] = x;
        else if (key == "interior.AU")
            m.interior[1] = x;
        else if (key == "interior.GU")
            m.interior[2] = x;
        else if (key == "exterior.GC")
            m.exterior[0] = x;
        else if (key == "exterior.AU")
            m.exterior[1] = x;
        else if (key == "exterior.GU")
            m.exterior[2] = x;
        else if (key == "stack_bonus")
            m.stack_bonus = x;
        else if (key == "RT" || key == "rt")
            m.rt = x;
        else if (key == "theta")
            m.theta = static_cast<int>(x);
        else if (key == "theta_ext")
            m.theta_ext = static_cast<int>(x);
        else if (key == "max_side")
            m.max_side = static_cast<int>(x);
        else if (key == "oracle_cap")
            m.oracle_cap = static_cast<int>(x);
        else
            throw InputError("energy config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    m.validate();
    return m;
}

} // namespace ixfold
