#pragma once

// Orthogonal polynomials, terminating hypergeometric series and an adaptive
// Gauss-Legendre quadrature. Everything here is pure and thread-safe.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace rmdirac {

/// Value of a polynomial together with its derivative in the argument.
struct PolynomialEval
{
    double value;
    double derivative;
};

/// Raised when adaptive quadrature exhausts its panel budget.
/// Carries the best estimate reached so far.
class AccuracyError : public std::runtime_error
{
  public:
    AccuracyError(std::string const& what, double best_estimate, double error_estimate)
        : std::runtime_error(what)
        , best_estimate_(best_estimate)
        , error_estimate_(error_estimate)
    {
    }

    double best_estimate() const noexcept { return best_estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }

  private:
    double best_estimate_;
    double error_estimate_;
};

namespace detail {

inline double jacobi_value(int n, double a, double b, double x)
{
    if (n == 0) {
        return 1.0;
    }
    double p_prev = 1.0;
    double p = 0.5 * (a - b + (a + b + 2.0) * x);
    for (int k = 2; k <= n; ++k) {
        double const s = 2.0 * k + a + b;
        double const lhs = 2.0 * k * (k + a + b) * (s - 2.0);
        double const c1 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
        double const c2 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
        double const p_next = (c1 * p - c2 * p_prev) / lhs;
        p_prev = p;
        p = p_next;
    }
    return p;
}

inline void require_jacobi_params(int n, double a, double b)
{
    if (n < 0) {
        throw std::domain_error("jacobi_p: degree must be nonnegative");
    }
    if (!(a > -1.0) || !(b > -1.0)) {
        throw std::domain_error("jacobi_p: parameters must exceed -1");
    }
}

} // namespace detail

/// Jacobi polynomial P_n^{(a,b)}(x) by three-term recurrence, with the
/// derivative from dP_n^{(a,b)}/dx = (n+a+b+1)/2 * P_{n-1}^{(a+1,b+1)}(x).
inline PolynomialEval jacobi_p(int n, double a, double b, double x)
{
    detail::require_jacobi_params(n, a, b);
    double const value = detail::jacobi_value(n, a, b, x);
    double const derivative =
        n == 0 ? 0.0 : 0.5 * (n + a + b + 1.0) * detail::jacobi_value(n - 1, a + 1.0, b + 1.0, x);
    return {value, derivative};
}

/// 2F1(-n, b; c; x) summed exactly over its n+1 terms.
inline double hyp2f1_terminating(int n, double b, double c, double x)
{
    if (n < 0) {
        throw std::domain_error("hyp2f1_terminating: n must be nonnegative");
    }
    // A pole in (c)_k is reached before the series terminates.
    if (c <= 0.0 && c == std::floor(c) && -c < n) {
        throw std::domain_error("hyp2f1_terminating: c hits a pole before termination");
    }
    double term = 1.0;
    double sum = 1.0;
    for (int k = 0; k < n; ++k) {
        term *= (k - n) * (b + k) / ((c + k) * (k + 1.0)) * x;
        sum += term;
    }
    return sum;
}

/// Generalized Laguerre polynomial L_n^{(a)}(x).
inline double laguerre(int n, double a, double x)
{
    if (n < 0) {
        throw std::domain_error("laguerre: degree must be nonnegative");
    }
    if (!(a > -1.0)) {
        throw std::domain_error("laguerre: parameter must exceed -1");
    }
    if (n == 0) {
        return 1.0;
    }
    double l_prev = 1.0;
    double l = 1.0 + a - x;
    for (int k = 1; k < n; ++k) {
        double const l_next = ((2.0 * k + 1.0 + a - x) * l - (k + a) * l_prev) / (k + 1.0);
        l_prev = l;
        l = l_next;
    }
    return l;
}

namespace detail {

// 10-point Gauss-Legendre rule on [-1, 1]; exact through degree 19.
inline constexpr std::array<double, 5> gl10_nodes = {
    0.1488743389816312108848260, 0.4333953941292471907992659, 0.6794095682990244062343274,
    0.8650633666889845107320967, 0.9739065285171717200779640};
inline constexpr std::array<double, 5> gl10_weights = {
    0.2955242247147528701738930, 0.2692667193099963550912269, 0.2190863625159820439955349,
    0.1494513491505805931457763, 0.0666713443086881375935688};

template <class F>
double gauss_legendre_panel(F const& f, double lo, double hi)
{
    double const mid = 0.5 * (lo + hi);
    double const half = 0.5 * (hi - lo);
    double sum = 0.0;
    for (std::size_t i = 0; i < gl10_nodes.size(); ++i) {
        double const dx = half * gl10_nodes[i];
        sum += gl10_weights[i] * (f(mid - dx) + f(mid + dx));
    }
    return sum * half;
}

} // namespace detail

/// Quadrature degree of exactness of a single panel.
inline constexpr int quadrature_exact_degree = 19;

/// Adaptive composite Gauss-Legendre quadrature of f over [lo, hi].
///
/// Each panel is estimated by the 10-point rule on its two halves and its
/// error by the difference with the whole-panel rule. The panel with the
/// largest error is bisected until the summed error drops below
/// rel_tol * |integral|. Panel selection is deterministic.
template <class F>
double integrate(F const& f, double lo, double hi, double rel_tol = 1e-10, std::size_t max_panels = 20000)
{
    if (!(lo < hi)) {
        throw std::domain_error("integrate: require lo < hi");
    }

    struct Panel
    {
        double lo, hi, estimate, error;
        bool operator<(Panel const& other) const { return error < other.error; }
    };

    auto make_panel = [&f](double a, double b) {
        double const m = 0.5 * (a + b);
        double const whole = detail::gauss_legendre_panel(f, a, b);
        double const halves = detail::gauss_legendre_panel(f, a, m) + detail::gauss_legendre_panel(f, m, b);
        return Panel{a, b, halves, std::abs(halves - whole)};
    };

    std::priority_queue<Panel> panels;
    Panel const first = make_panel(lo, hi);
    panels.push(first);
    double total = first.estimate;
    double error = first.error;

    while (true) {
        if (!std::isfinite(total)) {
            throw AccuracyError("integrate: non-finite integrand", total, error);
        }
        if (error <= rel_tol * std::abs(total) || error <= std::numeric_limits<double>::min()) {
            return total;
        }
        if (panels.size() >= max_panels) {
            throw AccuracyError("integrate: panel budget exhausted", total, error);
        }
        Panel const worst = panels.top();
        panels.pop();
        double const m = 0.5 * (worst.lo + worst.hi);
        Panel const left = make_panel(worst.lo, m);
        Panel const right = make_panel(m, worst.hi);
        total += left.estimate + right.estimate - worst.estimate;
        error += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
        // Running sums drift; refresh them from the queue now and then.
        if (panels.size() % 256 == 0) {
            auto copy = panels;
            total = 0.0;
            error = 0.0;
            while (!copy.empty()) {
                total += copy.top().estimate;
                error += copy.top().error;
                copy.pop();
            }
        }
    }
}

/// Integrates over consecutive breakpoints, each piece to rel_tol.
template <class F>
double integrate_pieces(F const& f, std::vector<double> const& breakpoints, double rel_tol = 1e-10)
{
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (breakpoints[i + 1] > breakpoints[i]) {
            sum += integrate(f, breakpoints[i], breakpoints[i + 1], rel_tol);
        }
    }
    return sum;
}

} // namespace rmdirac
