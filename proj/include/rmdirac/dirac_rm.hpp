#pragma once

// Dirac bound states of the Rosen-Morse potential with a Coulomb-like tensor
// term, in the exact spin and pseudospin symmetry limits. Units: hbar = c = 1,
// energies in fm^-1, lengths in fm.
//
// Under the Pekeris replacement of 1/r^2 and z = -e^{-2 alpha r}, the upper
// (spin) or lower (pseudospin) radial component obeys a hypergeometric-type
// equation with coefficients beta1, beta2 and eps^2. Quantization reads
//
//   (eps + n + delta + 1)^2 = beta1,   delta (delta + 1) = K / 4 - 1/4,
//
// where delta is one of the two roots. RootBranch selects which root:
//
//   printed      delta = (-1 + sqrt K) / 2 > 0, eps = sqrt(beta1) - (n + delta + 1).
//   normalizable delta = (-1 - sqrt K) / 2 < 0, eps + n + delta + 1 = -sqrt(beta1).
//
// Only the second root yields solutions that decay at both ends of the
// extended line on which the approximated equation lives, and it is the one
// that agrees with direct numerical integration (see oracle.hpp).

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rmdirac/grid.hpp"
#include "rmdirac/pekeris.hpp"
#include "rmdirac/specfun.hpp"

namespace rmdirac {

enum class Symmetry
{
    spin,
    pseudospin
};

/// Which V-coefficient enters the bracket of the closed energy equation.
/// derivation: -2 V2 (m + E - C_s), as obtained from the beta/eps algebra.
/// printed:    -2 V1 (m + E - C_s), as the closed form is usually quoted.
enum class EnergyVariant
{
    derivation,
    printed
};

enum class RootBranch
{
    normalizable,
    printed
};

inline char const* to_string(Symmetry s) { return s == Symmetry::spin ? "spin" : "pspin"; }
inline char const* to_string(EnergyVariant v) { return v == EnergyVariant::derivation ? "derivation" : "printed"; }
inline char const* to_string(RootBranch b) { return b == RootBranch::normalizable ? "normalizable" : "printed"; }

struct ModelParams
{
    double mass = 1.0;          ///< fm^-1
    double v1 = 1.0;            ///< well depth, fm^-1
    double v2 = -1.0;           ///< asymmetry strength, fm^-1
    double alpha = 0.25;        ///< fm^-1
    double r_e = 2.197224577;   ///< fm
    double tensor_h = 0.5;      ///< dimensionless
    Symmetry symmetry = Symmetry::spin;
    double symmetry_constant = 0.0; ///< C_s (spin) or C_ps (pseudospin), fm^-1

    void validate() const
    {
        bool const finite = std::isfinite(mass) && std::isfinite(v1) && std::isfinite(v2) && std::isfinite(alpha) &&
                            std::isfinite(r_e) && std::isfinite(tensor_h) && std::isfinite(symmetry_constant);
        if (!finite || !(mass > 0.0) || !(alpha > 0.0) || !(r_e > 0.0)) {
            throw std::domain_error("ModelParams: require finite values with m, alpha, r_e > 0");
        }
    }

    /// Parameter set of the tabulated spectra.
    static ModelParams reference(Symmetry sym)
    {
        ModelParams p;
        p.symmetry = sym;
        p.symmetry_constant = sym == Symmetry::spin ? 0.0 : -6.0;
        return p;
    }
};

struct QuantumNumbers
{
    int n = 0;     ///< radial index entering the energy equation
    int kappa = -1;

    void validate() const
    {
        if (n < 0 || kappa == 0) {
            throw std::domain_error("QuantumNumbers: require n >= 0 and kappa != 0");
        }
    }

    /// Orbital angular momentum of the upper component.
    int l() const { return kappa < 0 ? -kappa - 1 : kappa; }
    /// Pseudo-orbital angular momentum (that of the lower component).
    int l_tilde() const { return kappa < 0 ? -kappa : kappa - 1; }
    int twice_j() const { return 2 * std::abs(kappa) - 1; }
};

inline double coupling_omega(int kappa, double h, Symmetry sym)
{
    double const k = kappa + h;
    return sym == Symmetry::spin ? k * (k + 1.0) : k * (k - 1.0);
}

/// Energy-dependent coefficients of the reduced equation at one trial E.
struct LevelTerms
{
    double mass_factor; ///< m + E - C_s (spin) or m - E + C_ps (pseudospin)
    double omega;
    double epsilon_sq;
    double beta1;
    double beta2;
    double radicand; ///< K = 1 + (omega D2 / r_e^2 + 4 V1~) / alpha^2
    double exponent; ///< delta (spin) or eta (pseudospin) on the chosen branch
    double shift;    ///< n + exponent + 1
    double lhs;      ///< left side of the closed energy equation
    double bracket_derivation;
    double bracket_printed;
};

/// Evaluates the reduced-equation coefficients at a given coupling omega, or
/// std::nullopt when eps^2 < 0 or K < 0 (no real candidate at this energy).
inline std::optional<LevelTerms>
level_terms(double energy, int n, double omega, ModelParams const& p, PekerisCoefficients const& k, RootBranch branch)
{
    double const m = p.mass;
    double const four_a2 = 4.0 * p.alpha * p.alpha;
    double const re2 = k.r_e * k.r_e;

    LevelTerms t{};
    t.omega = omega;
    double e2, v1t, v2t;
    if (p.symmetry == Symmetry::spin) {
        t.mass_factor = m + energy - p.symmetry_constant;
        e2 = t.mass_factor * (energy - m);
        v1t = p.v1 * t.mass_factor;
        v2t = p.v2 * t.mass_factor;
        t.lhs = t.mass_factor * (m - energy + p.v2);
    } else {
        t.mass_factor = m - energy + p.symmetry_constant;
        double const shifted = energy - m - p.symmetry_constant;
        e2 = shifted * (energy + m);
        v1t = p.v1 * shifted;
        v2t = p.v2 * shifted;
        t.lhs = t.mass_factor * (m + energy - p.v2);
    }

    t.epsilon_sq = (omega * k.d0 / re2 - e2 + v2t) / four_a2;
    t.beta1 = (omega * k.sum() / re2 - e2 - v2t) / four_a2;
    t.beta2 = (omega * (2.0 * k.d0 + k.d1) / re2 - 2.0 * e2 - 4.0 * v1t) / four_a2;
    t.radicand = 1.0 + (omega * k.d2 / re2 + 4.0 * v1t) / (p.alpha * p.alpha);
    if (t.epsilon_sq < 0.0 || t.radicand < 0.0) {
        return std::nullopt;
    }
    double const root = std::sqrt(t.radicand);
    t.exponent = branch == RootBranch::printed ? 0.5 * (-1.0 + root) : 0.5 * (-1.0 - root);
    t.shift = n + t.exponent + 1.0;

    double const tail = omega * (k.d1 + k.d2) / re2;
    double const sgn = p.symmetry == Symmetry::spin ? -2.0 : 2.0;
    t.bracket_derivation = (sgn * p.v2 * t.mass_factor + tail) / (four_a2 * t.shift) - t.shift;
    t.bracket_printed = (sgn * p.v1 * t.mass_factor + tail) / (four_a2 * t.shift) - t.shift;
    return t;
}

inline std::optional<LevelTerms>
level_terms(double energy, QuantumNumbers const& qn, ModelParams const& p, PekerisCoefficients const& k,
            RootBranch branch)
{
    return level_terms(energy, qn.n, coupling_omega(qn.kappa, p.tensor_h, p.symmetry), p, k, branch);
}

/// Residual of the energy equation at trial energy E, or std::nullopt where a
/// radicand is negative.
///
/// derivation: eps + (n + delta + 1) -/+ sqrt(beta1), the sign fixed by the
///             branch so that roots are exactly the quantized energies.
/// printed:    closed form LHS + omega D0 / r_e^2 - alpha^2 [bracket]^2 with
///             -2 V1 (spin) / +2 V1 (pseudospin) inside the bracket.
inline std::optional<double>
energy_residual(double energy, int n, double omega, ModelParams const& p, PekerisCoefficients const& k,
                EnergyVariant variant, RootBranch branch = RootBranch::normalizable)
{
    if (std::isnan(energy)) {
        throw std::domain_error("energy_residual: energy is NaN");
    }
    auto const t = level_terms(energy, n, omega, p, k, branch);
    if (!t) {
        return std::nullopt;
    }
    if (variant == EnergyVariant::derivation) {
        if (t->beta1 < 0.0) {
            return std::nullopt;
        }
        double const sign = branch == RootBranch::printed ? 1.0 : -1.0;
        return std::sqrt(t->epsilon_sq) + t->shift - sign * std::sqrt(t->beta1);
    }
    if (t->shift == 0.0) {
        return std::nullopt;
    }
    double const re2 = k.r_e * k.r_e;
    double const a2 = p.alpha * p.alpha;
    return t->lhs + t->omega * k.d0 / re2 - a2 * t->bracket_printed * t->bracket_printed;
}

inline std::optional<double>
energy_residual(double energy, QuantumNumbers const& qn, ModelParams const& p, PekerisCoefficients const& k,
                EnergyVariant variant, RootBranch branch = RootBranch::normalizable)
{
    return energy_residual(energy, qn.n, coupling_omega(qn.kappa, p.tensor_h, p.symmetry), p, k, variant, branch);
}

struct BoundState
{
    double energy = 0.0;
    double epsilon = 0.0;
    double exponent = 0.0; ///< delta (spin) or eta (pseudospin)
    double omega = 0.0;
    PekerisCoefficients coeffs;
    QuantumNumbers qn;
    ModelParams params;
    EnergyVariant variant = EnergyVariant::derivation;
    RootBranch branch = RootBranch::normalizable;
    double norm = 0.0; ///< 0 until normalize() has run

    double mass_factor() const
    {
        return params.symmetry == Symmetry::spin ? params.mass + energy - params.symmetry_constant
                                                 : params.mass - energy + params.symmetry_constant;
    }
};

/// Builds the state data at an arbitrary energy without checking quantization.
/// Used for solved levels and for perturbation probes.
inline std::optional<BoundState> make_state(double energy, QuantumNumbers const& qn, ModelParams const& p,
                                            PekerisCoefficients const& k, EnergyVariant variant, RootBranch branch)
{
    auto const t = level_terms(energy, qn, p, k, branch);
    if (!t) {
        return std::nullopt;
    }
    BoundState s;
    s.energy = energy;
    s.epsilon = std::sqrt(t->epsilon_sq);
    s.exponent = t->exponent;
    s.omega = t->omega;
    s.coeffs = k;
    s.qn = qn;
    s.params = p;
    s.variant = variant;
    s.branch = branch;
    return s;
}

struct SolveOptions
{
    std::optional<std::pair<double, double>> window; ///< default [-m-|C|-10, m+|C|+10]
    double step = 1e-3;
    double tol = 1e-10;
    EnergyVariant variant = EnergyVariant::derivation;
    RootBranch branch = RootBranch::normalizable;
};

inline std::pair<double, double> default_window(ModelParams const& p)
{
    double const c = std::abs(p.symmetry_constant);
    return {-p.mass - c - 10.0, p.mass + c + 10.0};
}

namespace detail {

inline bool admissible(BoundState const& s, LevelTerms const& t)
{
    if (!(s.epsilon > 0.0) || s.mass_factor() == 0.0) {
        return false;
    }
    if (s.branch == RootBranch::printed && !(s.exponent > 0.0)) {
        return false;
    }
    if (s.branch == RootBranch::normalizable && !(s.epsilon + t.shift < 0.0)) {
        return false;
    }
    // The squared closed form also admits bracket = -2 eps; reject it.
    if (s.variant == EnergyVariant::printed && !(t.bracket_printed > 0.0)) {
        return false;
    }
    return true;
}

} // namespace detail

/// All admissible roots of energy_residual in the window, sorted by energy.
/// Brackets come from a uniform scan and are refined by bisection.
inline std::vector<BoundState> solve_levels(QuantumNumbers const& qn, ModelParams const& p, SolveOptions const& opt = {})
{
    qn.validate();
    p.validate();
    auto const [lo, hi] = opt.window.value_or(default_window(p));
    if (!(lo < hi) || !(opt.step > 0.0) || !(opt.tol > 0.0)) {
        throw std::domain_error("solve_levels: invalid window, step or tolerance");
    }
    PekerisCoefficients const k = pekeris_coefficients(p.alpha, p.r_e);
    auto residual = [&](double e) { return energy_residual(e, qn, p, k, opt.variant, opt.branch); };

    std::vector<BoundState> out;
    auto const count = static_cast<long>(std::ceil((hi - lo) / opt.step));
    double prev_e = lo;
    std::optional<double> prev_r = residual(lo);
    for (long i = 1; i <= count; ++i) {
        double const e = std::min(hi, lo + static_cast<double>(i) * opt.step);
        std::optional<double> const r = residual(e);
        if (r && prev_r && ((*r < 0.0) != (*prev_r < 0.0))) {
            double a = prev_e, b = e;
            double ra = *prev_r;
            double const bound = std::max(std::abs(*prev_r), std::abs(*r));
            bool ok = true;
            while (b - a > opt.tol) {
                double const mid = 0.5 * (a + b);
                auto const rm = residual(mid);
                if (!rm) {
                    ok = false;
                    break;
                }
                if ((*rm < 0.0) == (ra < 0.0)) {
                    a = mid;
                    ra = *rm;
                } else {
                    b = mid;
                }
            }
            double const root = 0.5 * (a + b);
            auto const r_root = residual(root);
            // A sign flip across a pole of the closed form leaves |R| large.
            if (ok && r_root && std::abs(*r_root) <= bound) {
                auto const t = level_terms(root, qn, p, k, opt.branch);
                auto const s = make_state(root, qn, p, k, opt.variant, opt.branch);
                if (t && s && detail::admissible(*s, *t)) {
                    out.push_back(*s);
                }
            }
        }
        prev_e = e;
        prev_r = r;
    }
    std::sort(out.begin(), out.end(), [](auto const& x, auto const& y) { return x.energy < y.energy; });
    return out;
}

/// Upper and lower radial components.
struct RadialPair
{
    double f;
    double g;
};

namespace detail {

/// Unnormalized components. The solved component is
/// x^eps (1+x)^(exponent+1) 2F1(-n, n + 2 eps + 2 exponent + 2; 2 eps + 1; -x)
/// with x = e^{-2 alpha r}; the other follows from the first-order coupling,
/// including the tensor shift kappa -> kappa + H.
inline RadialPair raw_components(BoundState const& s, double r)
{
    int const n = s.qn.n;
    double const a = s.params.alpha;
    double const x = std::exp(-2.0 * a * r);
    double const eps = s.epsilon;
    double const lam = s.exponent + 1.0;
    double const b = n + 2.0 * eps + 2.0 * lam;
    double const c = 2.0 * eps + 1.0;

    double const envelope = std::pow(x, eps) * std::pow(1.0 + x, lam);
    double const h0 = hyp2f1_terminating(n, b, c, -x);
    double const h1 = n > 0 ? hyp2f1_terminating(n - 1, b + 1.0, c + 1.0, -x) : 0.0;

    double const main = envelope * h0;
    double const dmain =
        envelope * ((-2.0 * a * eps - 2.0 * a * lam * x / (1.0 + x)) * h0 - 2.0 * a * x * (n * b / c) * h1);
    double const coupling = (s.qn.kappa + s.params.tensor_h) / r;
    double const mf = s.mass_factor();
    if (s.params.symmetry == Symmetry::spin) {
        return {main, (dmain + coupling * main) / mf};
    }
    return {(dmain - coupling * main) / mf, main};
}

} // namespace detail

class StateError : public std::logic_error
{
  public:
    using std::logic_error::logic_error;
};

class NonNormalizableError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Normalized components at r > 0. Requires a normalized state.
inline RadialPair radial_components(BoundState const& s, double r)
{
    if (!(s.norm > 0.0)) {
        throw StateError("radial_components: state is not normalized");
    }
    if (!(r > 0.0)) {
        throw std::domain_error("radial_components: r must be positive");
    }
    auto const raw = detail::raw_components(s, r);
    return {s.norm * raw.f, s.norm * raw.g};
}

/// Radial grid fitted to a state: tail of F^2 + G^2 below 1e-24 of its scale.
inline RadialGrid default_grid(BoundState const& s, int points = 8000)
{
    RadialGrid g;
    g.r_min = 1e-4;
    g.r_max = std::max(40.0, 12.0 * std::log(10.0) / (2.0 * s.params.alpha * s.epsilon));
    g.points = points;
    return g;
}

namespace detail {

inline std::vector<double> quadrature_breaks(RadialGrid const& grid)
{
    std::vector<double> b{grid.r_min};
    for (double r = grid.r_min * 10.0; r < std::min(1.0, grid.r_max); r *= 10.0) {
        b.push_back(r);
    }
    double r = std::max(1.0, b.back());
    if (r < grid.r_max && r > b.back()) {
        b.push_back(r);
    }
    for (r += 2.0; r < grid.r_max; r += 2.0) {
        b.push_back(r);
    }
    b.push_back(grid.r_max);
    return b;
}

} // namespace detail

/// Returns a copy with norm set so that the integral of F^2 + G^2 over
/// [grid.r_min, grid.r_max] equals one.
inline BoundState normalize(BoundState s, RadialGrid const& grid)
{
    grid.validate();
    auto density = [&s](double r) {
        auto const c = detail::raw_components(s, r);
        return c.f * c.f + c.g * c.g;
    };
    double integral = 0.0;
    try {
        integral = integrate_pieces(density, detail::quadrature_breaks(grid), 1e-12);
    } catch (AccuracyError const& e) {
        throw NonNormalizableError(std::string("normalize: ") + e.what());
    }
    if (!std::isfinite(integral) || !(integral > 0.0)) {
        throw NonNormalizableError("normalize: density integral is not finite and positive");
    }
    s.norm = 1.0 / std::sqrt(integral);
    return s;
}

/// Radial index as printed in spectroscopic notation. For pseudospin doublet
/// partners with kappa > 0 the printed index is one less than the index
/// entering the energy equation, so that (n, kappa) and (n, 1 - kappa) share
/// the same energy at H = 0.
inline int printed_radial_index(QuantumNumbers const& qn, Symmetry sym)
{
    return (sym == Symmetry::pseudospin && qn.kappa > 0) ? qn.n - 1 : qn.n;
}

inline QuantumNumbers from_printed_index(int printed_n, int kappa, Symmetry sym)
{
    QuantumNumbers qn{printed_n, kappa};
    if (sym == Symmetry::pseudospin && kappa > 0) {
        qn.n = printed_n + 1;
    }
    return qn;
}

namespace detail {

inline constexpr char orbital_letters[] = "spdfghijklmnopqrstuvwxyz";

inline char orbital_letter(int l)
{
    if (l < 0 || l >= static_cast<int>(sizeof(orbital_letters) - 1)) {
        throw std::domain_error("orbital_letter: l out of range");
    }
    return orbital_letters[l];
}

} // namespace detail

/// "N l_{j}", e.g. "0p_{3/2}". Letters continue alphabetically past i.
inline std::string spectroscopic_label(QuantumNumbers const& qn, Symmetry sym)
{
    qn.validate();
    int const printed = printed_radial_index(qn, sym);
    if (printed < 0) {
        throw std::domain_error("spectroscopic_label: pseudospin kappa > 0 requires n >= 1");
    }
    return std::to_string(printed) + detail::orbital_letter(qn.l()) + "_{" + std::to_string(qn.twice_j()) + "/2}";
}

/// Compact form "0p3/2" used in CSV output and on the command line.
inline std::string compact_label(QuantumNumbers const& qn, Symmetry sym)
{
    qn.validate();
    int const printed = printed_radial_index(qn, sym);
    if (printed < 0) {
        throw std::domain_error("compact_label: pseudospin kappa > 0 requires n >= 1");
    }
    return std::to_string(printed) + detail::orbital_letter(qn.l()) + std::to_string(qn.twice_j()) + "/2";
}

/// Parses "1d5/2" or "1d_{5/2}". A repeated letter resolves to the lowest l.
inline QuantumNumbers parse_label(std::string const& label, Symmetry sym)
{
    std::string s;
    for (char ch : label) {
        if (ch != '_' && ch != '{' && ch != '}' && ch != ' ') {
            s.push_back(ch);
        }
    }
    std::size_t pos = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
        ++pos;
    }
    if (pos == 0 || pos >= s.size()) {
        throw std::invalid_argument("parse_label: malformed label '" + label + "'");
    }
    int const printed = std::stoi(s.substr(0, pos));
    std::string const letters = detail::orbital_letters;
    auto const where = letters.find(s[pos]);
    if (where == std::string::npos) {
        throw std::invalid_argument("parse_label: unknown orbital letter in '" + label + "'");
    }
    int const l = static_cast<int>(where);
    std::string const rest = s.substr(pos + 1);
    auto const slash = rest.find('/');
    if (slash == std::string::npos || rest.substr(slash + 1) != "2") {
        throw std::invalid_argument("parse_label: j must be written as k/2 in '" + label + "'");
    }
    int const twice_j = std::stoi(rest.substr(0, slash));
    int kappa = 0;
    if (twice_j == 2 * l + 1) {
        kappa = -(l + 1);
    } else if (twice_j == 2 * l - 1 && l > 0) {
        kappa = l;
    } else {
        throw std::invalid_argument("parse_label: j inconsistent with l in '" + label + "'");
    }
    return from_printed_index(printed, kappa, sym);
}

} // namespace rmdirac
