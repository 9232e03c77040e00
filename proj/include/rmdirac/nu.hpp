#pragma once

// Parametric Nikiforov-Uvarov engine for equations of the form
//
//   psi'' + (c1 - c2 s) / (s (c3 - c4 s)) psi'
//         + (-A s^2 + B s - C) / (s^2 (c3 - c4 s)^2) psi = 0.
//
// The two square roots sqrt(c9) and sqrt(c10) are taken with a selectable
// sign. The textbook choice (both positive) is the one that makes tau' < 0.

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "rmdirac/specfun.hpp"

namespace rmdirac {

struct NuInput
{
    double c1 = 1.0;
    double c2 = 1.0;
    double c3 = 1.0;
    double c4 = 1.0;
    double a = 0.0; ///< coefficient of -s^2 in sigma-tilde
    double b = 0.0; ///< coefficient of +s
    double c = 0.0; ///< constant term, entering as -C
};

/// Sign applied to sqrt(c9) and sqrt(c10).
struct NuRootChoice
{
    int sign_c9 = +1;
    int sign_c10 = +1;
};

/// Derived constants c5..c16. Entries that are undefined on the current
/// branch (c4 == 0 for c12 and c14) hold a quiet NaN.
struct NuDerived
{
    double c5, c6, c7, c8, c9, c10;
    double c11, c12, c13, c14, c15, c16;
    double sqrt_c9;  ///< signed root actually used
    double sqrt_c10; ///< signed root actually used
};

struct NuDiagnostics
{
    double pi_const;
    double pi_slope;
    double k;
    double tau_const;
    double tau_slope;
    double tau_prime;

    bool valid() const { return tau_prime < 0.0; }
};

/// Returns std::nullopt when c9 < 0 or c10 < 0 (no real NU solution at this
/// parameter point). c8 uses 2 c5 c6 - B, the form that reproduces the
/// standard reduction c8 = -B for c1 = c3.
inline std::optional<NuDerived> derive_constants(NuInput const& in, NuRootChoice roots = {})
{
    if (in.c3 == 0.0) {
        throw std::domain_error("derive_constants: c3 must be nonzero");
    }
    double const nan = std::numeric_limits<double>::quiet_NaN();
    NuDerived d{};
    d.c5 = 0.5 * (in.c3 - in.c1);
    d.c6 = 0.5 * (in.c2 - 2.0 * in.c4);
    d.c7 = d.c6 * d.c6 + in.a;
    d.c8 = 2.0 * d.c5 * d.c6 - in.b;
    d.c9 = d.c5 * d.c5 + in.c;
    d.c10 = in.c4 * (in.c3 * d.c8 + in.c4 * d.c9) + in.c3 * in.c3 * d.c7;
    if (d.c9 < 0.0 || d.c10 < 0.0) {
        return std::nullopt;
    }
    d.sqrt_c9 = roots.sign_c9 * std::sqrt(d.c9);
    d.sqrt_c10 = roots.sign_c10 * std::sqrt(d.c10);

    double const shift = d.sqrt_c10 - in.c4 * d.c5 - in.c3 * d.c6;
    d.c11 = 2.0 * d.sqrt_c9 / in.c3;
    d.c12 = in.c4 != 0.0 ? 2.0 * d.sqrt_c10 / (in.c3 * in.c4) : nan;
    d.c13 = (d.c5 + d.sqrt_c9) / in.c3;
    d.c14 = in.c4 != 0.0 ? shift / (in.c3 * in.c4) : nan;
    d.c15 = 2.0 * d.sqrt_c10 / in.c3;
    d.c16 = shift / in.c3;
    return d;
}

/// Left-hand side of the NU energy equation; zero when quantized.
inline double quantization_residual(NuInput const& in, NuDerived const& d, int n)
{
    if (n < 0) {
        throw std::domain_error("quantization_residual: n must be nonnegative");
    }
    double const two_n1 = 2.0 * n + 1.0;
    return in.c2 * n - two_n1 * d.c6 + two_n1 * (d.sqrt_c10 + in.c4 * d.sqrt_c9) / in.c3 +
           n * (n - 1.0) * in.c4 +
           (in.c3 * d.c8 + 2.0 * in.c4 * d.c9 + 2.0 * d.sqrt_c9 * d.sqrt_c10) / (in.c3 * in.c3);
}

inline NuDiagnostics nu_diagnostics(NuInput const& in, NuDerived const& d)
{
    NuDiagnostics g{};
    g.pi_const = d.c5 + d.sqrt_c9;
    g.pi_slope = -(in.c4 * d.sqrt_c9 + d.sqrt_c10 - in.c3 * d.c6) / in.c3;
    g.k = -(in.c3 * d.c8 + 2.0 * in.c4 * d.c9 + 2.0 * d.sqrt_c9 * d.sqrt_c10) / in.c3;
    g.tau_const = in.c3 + 2.0 * d.sqrt_c9;
    g.tau_slope = -2.0 * (in.c3 * in.c4 + in.c4 * d.sqrt_c9 + d.sqrt_c10) / in.c3;
    g.tau_prime = g.tau_slope;
    return g;
}

/// Unnormalized psi(s) = phi(s) y_n(s) in closed form.
///
/// Jacobi branch (c4 != 0): s^c13 (c3 - c4 s)^c14 P_n^{(c11,c12)}(c3 - 2 c4 s).
/// Laguerre branch (c4 == 0): s^c13 exp(-c16 s) L_n^{c11}(c15 s).
/// The Laguerre form keeps the s^c13 factor, which survives the c4 -> 0 limit.
class WavefunctionForm
{
  public:
    WavefunctionForm(NuInput const& in, NuDerived const& d, int n)
        : in_(in)
        , d_(d)
        , n_(n)
    {
    }

    bool laguerre_branch() const { return in_.c4 == 0.0; }
    int degree() const { return n_; }

    /// Weight function rho(s) = s^c11 (c3 - c4 s)^c12 (Jacobi branch only).
    double rho(double s) const { return std::pow(s, d_.c11) * std::pow(in_.c3 - in_.c4 * s, d_.c12); }

    double phi(double s) const
    {
        if (laguerre_branch()) {
            return std::pow(s, d_.c13) * std::exp(-d_.c16 * s);
        }
        return std::pow(s, d_.c13) * std::pow(in_.c3 - in_.c4 * s, d_.c14);
    }

    double polynomial(double s) const
    {
        if (laguerre_branch()) {
            return laguerre(n_, d_.c11, d_.c15 * s);
        }
        return jacobi_p(n_, d_.c11, d_.c12, in_.c3 - 2.0 * in_.c4 * s).value;
    }

    double operator()(double s) const { return phi(s) * polynomial(s); }

  private:
    NuInput in_;
    NuDerived d_;
    int n_;
};

/// Returns std::nullopt ("non-normalizable") when c13 <= 0, c14 <= 0 (Jacobi
/// branch), c16 <= 0 (Laguerre branch), or a polynomial parameter is <= -1.
inline std::optional<WavefunctionForm> assemble_wavefunction(NuInput const& in, NuDerived const& d, int n)
{
    if (n < 0) {
        throw std::domain_error("assemble_wavefunction: n must be nonnegative");
    }
    if (!(d.c13 > 0.0) || !(d.c11 > -1.0)) {
        return std::nullopt;
    }
    if (in.c4 == 0.0) {
        if (!(d.c16 > 0.0)) {
            return std::nullopt;
        }
    } else if (!(d.c14 > 0.0) || !(d.c12 > -1.0)) {
        return std::nullopt;
    }
    return WavefunctionForm(in, d, n);
}

} // namespace rmdirac
