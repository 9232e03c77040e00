#pragma once

// Pekeris-type replacement of the centrifugal factor 1/r^2 by a quadratic in
// u(r) = e^{-2 alpha r} / (1 + e^{-2 alpha r}), matched to second order at r_e.

#include <array>
#include <cmath>
#include <stdexcept>

namespace rmdirac {

/// Dimensionless constants of 1/r^2 ~ (D0 + D1 u + D2 u^2) / r_e^2.
struct PekerisCoefficients
{
    double d0 = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
    double alpha = 0.0; ///< fm^-1
    double r_e = 0.0;   ///< fm

    double sum() const { return d0 + d1 + d2; }
};

/// u(r) = 1 / (1 + e^{2 alpha r}); valid for any real r.
inline double pekeris_variable(double r, double alpha)
{
    double const t = 2.0 * alpha * r;
    if (t > 0.0) {
        double const x = std::exp(-t);
        return x / (1.0 + x);
    }
    return 1.0 / (1.0 + std::exp(t));
}

inline PekerisCoefficients pekeris_coefficients(double alpha, double r_e)
{
    if (!(alpha > 0.0) || !(r_e > 0.0)) {
        throw std::domain_error("pekeris_coefficients: alpha and r_e must be positive");
    }
    double const u = pekeris_variable(r_e, alpha);
    double const c = 2.0 * alpha * r_e;
    double const w = u * (1.0 - u);

    PekerisCoefficients out;
    out.alpha = alpha;
    out.r_e = r_e;
    out.d2 = (3.0 - c * (1.0 - 2.0 * u)) / (c * c * w * w);
    out.d1 = 2.0 / (c * w) - 2.0 * out.d2 * u;
    out.d0 = 1.0 - out.d1 * u - out.d2 * u * u;
    return out;
}

/// The approximant evaluated on the extended line; r may be any real.
inline double approx_inverse_r2_unchecked(double r, PekerisCoefficients const& k)
{
    double const u = pekeris_variable(r, k.alpha);
    return (k.d0 + u * (k.d1 + k.d2 * u)) / (k.r_e * k.r_e);
}

inline double approx_inverse_r2(double r, PekerisCoefficients const& k)
{
    if (!(r > 0.0)) {
        throw std::domain_error("approx_inverse_r2: r must be positive");
    }
    return approx_inverse_r2_unchecked(r, k);
}

/// Value, first and second derivative mismatch g^(i)(r_e) - f^(i)(r_e),
/// each scaled by the magnitude of f^(i)(r_e).
inline std::array<double, 3> matching_residuals(PekerisCoefficients const& k)
{
    double const r = k.r_e;
    double const u = pekeris_variable(r, k.alpha);
    double const du = -2.0 * k.alpha * u * (1.0 - u);
    double const d2u = 4.0 * k.alpha * k.alpha * u * (1.0 - u) * (1.0 - 2.0 * u);
    double const s = 1.0 / (r * r);

    double const g0 = s * (k.d0 + k.d1 * u + k.d2 * u * u);
    double const g1 = s * (k.d1 + 2.0 * k.d2 * u) * du;
    double const g2 = s * (2.0 * k.d2 * du * du + (k.d1 + 2.0 * k.d2 * u) * d2u);

    double const f0 = s;
    double const f1 = -2.0 * s / r;
    double const f2 = 6.0 * s * s;
    return {(g0 - f0) / f0, (g1 - f1) / std::abs(f1), (g2 - f2) / f2};
}

} // namespace rmdirac
