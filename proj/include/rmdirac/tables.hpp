#pragma once

// Reference spectra at m = 1, V1 = 1, V2 = -1, alpha = 0.25, r_e = 2.197224577
// (C_s = 0, C_ps = -6), quoted at H = 0.5 and H = 0. Radial indices are the
// printed ones; from_printed_index() gives the index of the energy equation.

#include <optional>
#include <vector>

#include "rmdirac/dirac_rm.hpp"

namespace rmdirac {

struct ReferenceLevel
{
    int printed_n;
    int kappa;
    double e_h;  ///< at H = 0.5
    double e_h0; ///< at H = 0
};

inline std::vector<ReferenceLevel> const& reference_levels(Symmetry sym)
{
    static std::vector<ReferenceLevel> const spin{
        {0, -2, 0.1483955852, 0.3935828782}, {0, 1, 0.6582373104, 0.3935828782},
        {0, -3, 0.6582373104, 0.9333946490}, {0, 2, 1.214682872, 0.9333946490},
        {0, -4, 1.214682872, 1.499799551},   {0, 3, 1.787442858, 1.499799551},
        {0, -5, 1.787442858, 2.076830625},   {0, 4, 2.367468347, 2.076830625},
        {1, -2, 0.2663841239, 0.5510806494}, {1, 1, 0.8381866907, 0.5510806494},
        {1, -3, 0.8381866907, 1.127479271},  {1, 2, 1.418299684, 1.127479271},
        {1, -4, 1.418299684, 1.710188317},   {1, 3, 2.002843683, 1.710188317},
        {1, -5, 2.002843683, 2.296064965},   {1, 4, 2.589714652, 2.296064965},
    };
    static std::vector<ReferenceLevel> const pspin{
        {1, -1, -1.903134794, -1.738772757},   {0, 2, -1.538608678, -1.738772757},
        {1, -2, -1.538608678, -1.313563183},   {0, 3, -1.071543282, -1.313563183},
        {1, -3, -1.071543282, -0.8177171059},  {0, 4, -0.5554514514, -0.8177171059},
        {1, -4, -0.5554514514, -0.2869876340}, {0, 5, -0.01385847616, -0.2869876340},
        {2, -1, -1.921760586, -1.745387730},   {1, 2, -1.521903111, -1.745387730},
        {2, -2, -1.521903111, -1.273143731},   {1, 3, -1.01005856, -1.273143731},
        {2, -3, -1.010058564, -0.7382341146},  {1, 4, -0.4607283791, -0.7382341146},
        {2, -4, -0.4607283791, -0.1793345097}, {1, 5, 0.1048326489, -0.1793345097},
    };
    return sym == Symmetry::spin ? spin : pspin;
}

/// Reference value for a state at H = 0.5 or H = 0, if listed.
inline std::optional<double> reference_energy(QuantumNumbers const& qn, Symmetry sym, double h)
{
    if (h != 0.5 && h != 0.0) {
        return std::nullopt;
    }
    for (auto const& lv : reference_levels(sym)) {
        QuantumNumbers const q = from_printed_index(lv.printed_n, lv.kappa, sym);
        if (q.n == qn.n && q.kappa == qn.kappa) {
            return h == 0.5 ? lv.e_h : lv.e_h0;
        }
    }
    return std::nullopt;
}

/// Highest admissible root, the one followed across parameter sweeps.
inline std::optional<BoundState> solve_level(QuantumNumbers const& qn, ModelParams const& p, SolveOptions const& opt = {})
{
    auto const all = solve_levels(qn, p, opt);
    if (all.empty()) {
        return std::nullopt;
    }
    return all.back();
}

} // namespace rmdirac
