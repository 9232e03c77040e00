#pragma once

// Numerical checks that do not share code paths with the closed forms:
// finite-difference residuals, node counting and a shooting eigen-solver.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rmdirac/dirac_rm.hpp"
#include "rmdirac/grid.hpp"
#include "rmdirac/pekeris.hpp"
#include "rmdirac/specfun.hpp"

namespace rmdirac {

enum class OracleMode
{
    pekeris,
    exact
};

inline char const* to_string(OracleMode m) { return m == OracleMode::pekeris ? "pekeris" : "exact"; }

enum class ShootStatus
{
    found,
    not_found,
    continuum
};

inline char const* to_string(ShootStatus s)
{
    switch (s) {
    case ShootStatus::found: return "found";
    case ShootStatus::not_found: return "not_found";
    default: return "continuum";
    }
}

struct ShootResult
{
    ShootStatus status = ShootStatus::not_found;
    double energy = std::numeric_limits<double>::quiet_NaN();
};

struct OracleReport
{
    OracleMode mode = OracleMode::pekeris;
    double e_analytic = 0.0;
    ShootResult numeric;
    double max_ode_residual = 0.0;
    int nodes = 0;
};

class GridTooCoarse : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// The Rosen-Morse shape entering the sum (spin) or difference (pseudospin)
/// potential, with x = e^{-2 alpha r}.
inline double rosen_morse(double r, ModelParams const& p)
{
    // Written in u = x / (1 + x) so that it stays finite for r -> -inf.
    double const u = pekeris_variable(r, p.alpha);
    return -4.0 * p.v1 * u * (1.0 - u) + p.v2 * (1.0 - 2.0 * u);
}

/// Coefficient W in y'' = W y for the solved component; inv_r2 is either
/// 1/r^2 or its Pekeris approximant.
inline double potential_term(double energy, double inv_r2, double rm, ModelParams const& p, double omega)
{
    double const m = p.mass;
    if (p.symmetry == Symmetry::spin) {
        return omega * inv_r2 + (m + energy - p.symmetry_constant) * (m - energy + rm);
    }
    return omega * inv_r2 + (m - energy + p.symmetry_constant) * (m + energy - rm);
}

namespace detail {

inline double solved_component(BoundState const& s, double r)
{
    auto const c = raw_components(s, r);
    return s.params.symmetry == Symmetry::spin ? c.f : c.g;
}

} // namespace detail

/// max |y'' - W y| / max |y''| over the interior of the grid, with y'' from a
/// five-point stencil of the closed-form solved component (F for spin, G for
/// pseudospin) and W built from the Pekeris approximant.
inline double ode_residual(BoundState const& s, RadialGrid const& grid)
{
    grid.validate();
    if (grid.points < 5) {
        throw GridTooCoarse("ode_residual: need at least 5 grid points");
    }
    double const h = grid.spacing();
    auto const n = static_cast<std::size_t>(grid.points);
    std::vector<double> y(n), w(n);
    double w_max = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double const r = grid.at(static_cast<int>(i));
        y[i] = detail::solved_component(s, r);
        w[i] = potential_term(s.energy, approx_inverse_r2(r, s.coeffs), rosen_morse(r, s.params), s.params, s.omega);
        w_max = std::max(w_max, std::abs(w[i]));
    }
    if (h * std::sqrt(w_max) > 0.5) {
        throw GridTooCoarse("ode_residual: h * sqrt(max|W|) exceeds 0.5");
    }
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 2; i + 2 < n; ++i) {
        double const d2 = (-y[i - 2] + 16.0 * y[i - 1] - 30.0 * y[i] + 16.0 * y[i + 1] - y[i + 2]) / (12.0 * h * h);
        num = std::max(num, std::abs(d2 - w[i] * y[i]));
        den = std::max(den, std::abs(d2));
    }
    if (!(den > 0.0)) {
        throw GridTooCoarse("ode_residual: second derivative vanishes on the grid");
    }
    return num / den;
}

/// Strict sign changes, ignoring samples within 1e-12 max|f| of zero.
/// The first and last samples are not used.
inline int count_nodes(std::vector<double> const& f)
{
    if (f.size() < 3) {
        return 0;
    }
    double peak = 0.0;
    for (double v : f) {
        peak = std::max(peak, std::abs(v));
    }
    double const floor = 1e-12 * peak;
    int nodes = 0;
    int last = 0;
    for (std::size_t i = 1; i + 1 < f.size(); ++i) {
        int const sign = f[i] > floor ? 1 : (f[i] < -floor ? -1 : 0);
        if (sign != 0) {
            if (last != 0 && sign != last) {
                ++nodes;
            }
            last = sign;
        }
    }
    return nodes;
}

/// Samples the solved component of a state on a grid.
inline std::vector<double> sample_solved(BoundState const& s, RadialGrid const& grid)
{
    std::vector<double> out(static_cast<std::size_t>(grid.points));
    for (int i = 0; i < grid.points; ++i) {
        out[static_cast<std::size_t>(i)] = detail::solved_component(s, grid.at(i));
    }
    return out;
}

namespace detail {

// Mesh with W-independent pieces stored at nodes and midpoints, so that one
// RK4 sweep per trial energy costs no transcendental calls.
struct ShootMesh
{
    std::vector<double> r;      // 2k: nodes, 2k+1: midpoints
    std::vector<double> inv_r2; // same layout
    std::vector<double> rm;     // same layout
    std::size_t match = 0;      // node index closest to r_e

    std::size_t nodes() const { return (r.size() + 1) / 2; }
};

template <class StepRule>
ShootMesh build_mesh(double lo, double hi, double r_match, StepRule const& step_at, ModelParams const& p,
                     OracleMode mode, PekerisCoefficients const& k)
{
    std::vector<double> nodes{lo};
    while (nodes.back() < hi) {
        double const h = step_at(nodes.back());
        nodes.push_back(std::min(hi, nodes.back() + h));
    }
    ShootMesh mesh;
    auto push = [&](double r) {
        mesh.r.push_back(r);
        mesh.inv_r2.push_back(mode == OracleMode::pekeris ? approx_inverse_r2_unchecked(r, k) : 1.0 / (r * r));
        mesh.rm.push_back(rosen_morse(r, p));
    };
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (i > 0) {
            push(0.5 * (nodes[i - 1] + nodes[i]));
        }
        push(nodes[i]);
        if (std::abs(nodes[i] - r_match) < best) {
            best = std::abs(nodes[i] - r_match);
            mesh.match = i;
        }
    }
    return mesh;
}

struct ShootState
{
    double y;
    double dy;
};

// Integrates y'' = W y between mesh node indices; direction from the sign of
// (to - from). Rescales when |y| grows past 1e100, which keeps signs.
inline ShootState integrate_rk4(ShootMesh const& mesh, std::size_t from, std::size_t to, ShootState st, double energy,
                                ModelParams const& p, double omega, int* sign_changes = nullptr)
{
    auto w_at = [&](std::size_t j) { return potential_term(energy, mesh.inv_r2[j], mesh.rm[j], p, omega); };
    int const dir = to > from ? 1 : -1;
    for (std::size_t i = from; i != to; i = static_cast<std::size_t>(static_cast<long>(i) + dir)) {
        std::size_t const j0 = 2 * i;
        std::size_t const j2 = 2 * static_cast<std::size_t>(static_cast<long>(i) + dir);
        std::size_t const j1 = (j0 + j2) / 2;
        double const h = mesh.r[j2] - mesh.r[j0];
        double const w0 = w_at(j0), w1 = w_at(j1), w2 = w_at(j2);

        double const k1y = st.dy, k1d = w0 * st.y;
        double const k2y = st.dy + 0.5 * h * k1d, k2d = w1 * (st.y + 0.5 * h * k1y);
        double const k3y = st.dy + 0.5 * h * k2d, k3d = w1 * (st.y + 0.5 * h * k2y);
        double const k4y = st.dy + h * k3d, k4d = w2 * (st.y + h * k3y);
        double const before = st.y;
        st.y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        if (sign_changes && (before < 0.0) != (st.y < 0.0)) {
            ++*sign_changes;
        }
        st.dy += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
        double const big = std::max(std::abs(st.y), std::abs(st.dy));
        if (big > 1e100) {
            st.y /= big;
            st.dy /= big;
        }
    }
    return st;
}

// Asymptotic W on either side, without the centrifugal part for exact mode.
struct Asymptotes
{
    double left;  // r -> -inf (pekeris) ; unused in exact mode
    double right; // r -> +inf
};

inline Asymptotes asymptotes(double energy, ModelParams const& p, PekerisCoefficients const& k, double omega,
                             OracleMode mode)
{
    double const re2 = k.r_e * k.r_e;
    double const g_left = mode == OracleMode::pekeris ? k.sum() / re2 : 0.0;
    double const g_right = mode == OracleMode::pekeris ? k.d0 / re2 : 0.0;
    // Rosen-Morse shape tends to -V2 on the far left and +V2 on the right.
    return {potential_term(energy, g_left, -p.v2, p, omega), potential_term(energy, g_right, p.v2, p, omega)};
}

} // namespace detail

struct ShootOptions
{
    double tol = 1e-10;
    int scan_segments = 40;
    double r_min = 1e-4; ///< exact mode only
};

/// Shooting eigenvalue of y'' = W y for the solved component.
///
/// pekeris: the approximated equation lives on the whole real line; both
///          ends start on their decaying exponentials.
/// exact:   half line, y ~ r^{s0} at r_min with s0 = (1 + sqrt(1 + 4 omega))/2,
///          decaying exponential at large r with k_inf^2 = W(r -> inf).
/// The normalized Wronskian at r_e is scanned across the window and each sign
/// change is refined by bisection; the result is the root with qn.n nodes.
inline ShootResult shoot_eigenvalue(ModelParams const& p, QuantumNumbers const& qn, OracleMode mode,
                                    std::pair<double, double> window, ShootOptions const& opt = {})
{
    p.validate();
    qn.validate();
    auto const [e_lo, e_hi] = window;
    if (!(e_lo < e_hi) || !(opt.tol > 0.0) || opt.scan_segments < 1) {
        throw std::domain_error("shoot_eigenvalue: invalid window or options");
    }
    PekerisCoefficients const k = pekeris_coefficients(p.alpha, p.r_e);
    double const omega = coupling_omega(qn.kappa, p.tensor_h, p.symmetry);
    if (mode == OracleMode::exact && 1.0 + 4.0 * omega < 0.0) {
        throw std::domain_error("shoot_eigenvalue: omega < -1/4 has no regular solution at the origin");
    }

    // Slowest decay over the window sets the domain length.
    std::vector<double> probes;
    for (int i = 0; i <= 8; ++i) {
        probes.push_back(e_lo + (e_hi - e_lo) * i / 8.0);
    }
    double k_min = std::numeric_limits<double>::infinity();
    double rm_term = 0.0;
    bool any_bound = false;
    for (double e : probes) {
        auto const a = detail::asymptotes(e, p, k, omega, mode);
        if (a.right > 0.0 && (mode == OracleMode::exact || a.left > 0.0)) {
            any_bound = true;
            k_min = std::min(k_min, std::sqrt(a.right));
            if (mode == OracleMode::pekeris) {
                k_min = std::min(k_min, std::sqrt(a.left));
            }
        }
        double const span = std::abs(p.v1) * 1.0 + std::abs(p.v2) + std::abs(p.mass) + std::abs(e) +
                            std::abs(p.symmetry_constant);
        rm_term = std::max(rm_term, span * span);
    }
    if (!any_bound) {
        return {ShootStatus::continuum, std::numeric_limits<double>::quiet_NaN()};
    }
    double const reach = std::clamp(45.0 / k_min, 40.0, 400.0);
    double const r_match = p.r_e;
    double const lo = mode == OracleMode::pekeris ? r_match - reach : opt.r_min;
    double const hi = r_match + reach;

    double const g_max = mode == OracleMode::pekeris ? std::max(k.sum(), k.d0) / (k.r_e * k.r_e) * 4.0 : 0.0;
    auto step_at = [&](double r) {
        double w = rm_term + std::abs(omega) * g_max;
        if (mode == OracleMode::exact) {
            w += std::abs(omega) / (r * r);
        }
        double h = std::min(0.002, 1.0 / (50.0 * std::sqrt(w)));
        if (mode == OracleMode::exact) {
            h = std::min(h, 0.02 * r);
        }
        return h;
    };
    detail::ShootMesh const mesh = detail::build_mesh(lo, hi, r_match, step_at, p, mode, k);
    std::size_t const last = mesh.nodes() - 1;
    double const s0 = 0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 + 4.0 * omega)));

    struct Match
    {
        double wronskian;
        int nodes;
    };
    auto mismatch = [&](double e) -> std::optional<Match> {
        auto const a = detail::asymptotes(e, p, k, omega, mode);
        if (!(a.right > 0.0) || (mode == OracleMode::pekeris && !(a.left > 0.0))) {
            return std::nullopt;
        }
        detail::ShootState left;
        if (mode == OracleMode::pekeris) {
            left = {1e-30, std::sqrt(a.left) * 1e-30};
        } else {
            left = {std::pow(opt.r_min, s0), s0 * std::pow(opt.r_min, s0 - 1.0)};
        }
        detail::ShootState right{1e-30, -std::sqrt(a.right) * 1e-30};
        int nodes = 0;
        left = detail::integrate_rk4(mesh, 0, mesh.match, left, e, p, omega, &nodes);
        right = detail::integrate_rk4(mesh, last, mesh.match, right, e, p, omega, &nodes);
        double const wr = left.dy * right.y - left.y * right.dy;
        double const scale = std::hypot(left.y, left.dy) * std::hypot(right.y, right.dy);
        return Match{wr / scale, nodes};
    };

    // Every sign change in the window is refined; the root whose solution has
    // qn.n nodes is returned.
    int const segs = opt.scan_segments;
    std::vector<std::pair<double, double>> brackets;
    double prev_e = e_lo;
    auto prev = mismatch(e_lo);
    for (int i = 1; i <= segs; ++i) {
        double const e = e_lo + (e_hi - e_lo) * i / segs;
        auto const cur = mismatch(e);
        if (cur && prev && ((cur->wronskian < 0.0) != (prev->wronskian < 0.0))) {
            brackets.emplace_back(prev_e, e);
        }
        prev = cur;
        prev_e = e;
    }
    for (auto [a, b] : brackets) {
        double fa = mismatch(a)->wronskian;
        bool ok = true;
        while (b - a > opt.tol) {
            double const mid = 0.5 * (a + b);
            auto const fm = mismatch(mid);
            if (!fm) {
                ok = false;
                break;
            }
            if ((fm->wronskian < 0.0) == (fa < 0.0)) {
                a = mid;
                fa = fm->wronskian;
            } else {
                b = mid;
            }
        }
        double const root = 0.5 * (a + b);
        auto const at = mismatch(root);
        if (ok && at && at->nodes == qn.n) {
            return {ShootStatus::found, root};
        }
    }
    return {ShootStatus::not_found, std::numeric_limits<double>::quiet_NaN()};
}

/// Full report for one analytic state; the shooting window is E +/- half_width.
inline OracleReport oracle_report(BoundState const& s, OracleMode mode, double half_width = 0.01,
                                  ShootOptions const& opt = {})
{
    OracleReport rep;
    rep.mode = mode;
    rep.e_analytic = s.energy;
    rep.numeric = shoot_eigenvalue(s.params, s.qn, mode, {s.energy - half_width, s.energy + half_width}, opt);
    RadialGrid const grid = default_grid(s);
    rep.max_ode_residual = ode_residual(s, grid);
    rep.nodes = count_nodes(sample_solved(s, grid));
    return rep;
}

} // namespace rmdirac
