#ifndef OQO_SPECIAL_HPP
#define OQO_SPECIAL_HPP

// Special functions and quadrature rules used by the measurement models:
// log-gamma and gamma ratios, the noise-shifted Hermite polynomials that
// define the position/momentum OQOs, Kummer's confluent hypergeometric M,
// periodic rectangle quadrature and Gauss-Laguerre rules.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "oqo/types.hpp"

namespace oqo {

/// Kahan-compensated accumulator. Works for scalars and for Eigen dense
/// objects (elementwise), so quadrature sums over large grids stay
/// independent of summation order to well below 1e-13.
template <typename T>
class CompensatedSum {
public:
    CompensatedSum() = default;
    explicit CompensatedSum(T zero) : sum_(zero), carry_(zero) {}

    void add(const T& x)
    {
        T y = x - carry_;
        T t = sum_ + y;
        carry_ = (t - sum_) - y;
        sum_ = std::move(t);
    }

    const T& value() const { return sum_; }

private:
    T sum_{};
    T carry_{};
};

template <typename Real>
Real ln_gamma(Real x)
{
    if (!(x > Real(0))) {
        throw InvalidArgument("ln_gamma: argument must be positive");
    }
    return std::lgamma(x);
}

namespace detail {

// Tail of Stirling's series, lnGamma(x) - [(x-1/2)ln x - x + ln(2pi)/2], for x >= 10.
template <typename Real>
Real stirling_tail(Real x)
{
    const Real r = Real(1) / x;
    const Real r2 = r * r;
    return r *
           (Real(1) / 12 +
            r2 * (Real(-1) / 360 +
                  r2 * (Real(1) / 1260 +
                        r2 * (Real(-1) / 1680 +
                              r2 * (Real(1) / 1188 + r2 * (Real(-691) / 360360 + r2 * (Real(1) / 156)))))));
}

}  // namespace detail

/// ln(Gamma(a) / Gamma(b)) without forming either log-gamma separately when
/// the arguments are large, so the result is accurate relative to the
/// difference rather than to lnGamma itself.
template <typename Real>
Real log_gamma_ratio(Real a, Real b)
{
    if (!(a > Real(0)) || !(b > Real(0))) {
        throw InvalidArgument("gamma_ratio: arguments must be positive");
    }
    if (a == b) {
        return Real(0);
    }
    constexpr Real kShift = 10;
    if (a < kShift && b < kShift) {
        return std::lgamma(a) - std::lgamma(b);
    }
    // lnGamma(x) = lnGamma(x + k) - ln(x (x+1) ... (x+k-1))
    Real prod_a = 1;
    Real prod_b = 1;
    while (a < kShift) {
        prod_a *= a;
        a += 1;
    }
    while (b < kShift) {
        prod_b *= b;
        b += 1;
    }
    const Real d = a - b;
    const Real core = (a - Real(0.5)) * std::log1p(d / b) + d * (std::log(b) - Real(1));
    return core + detail::stirling_tail(a) - detail::stirling_tail(b) - std::log(prod_a) + std::log(prod_b);
}

template <typename Real>
Real gamma_ratio(Real a, Real b)
{
    return std::exp(log_gamma_ratio(a, b));
}

/// Real coefficients, index = power of x.
template <typename Real>
struct PolyCoeffs {
    std::vector<Real> coefficients;

    int degree() const { return static_cast<int>(coefficients.size()) - 1; }

    Real operator()(Real x) const
    {
        Real acc = 0;
        for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) {
            acc = acc * x + *it;
        }
        return acc;
    }
};

inline constexpr int kMaxHermiteOrder = 30;

/// Coefficients of x -> (s/(2i))^n H_n(i x / s).
///
/// With sigma^2 = s^2/2 these polynomials obey P_{n+1} = x P_n + n sigma^2 P_{n-1},
/// i.e. they are the moments E[(x + Z)^n] of x smeared by a centred Gaussian Z of
/// variance sigma^2. All coefficients are nonnegative.
template <typename Real>
PolyCoeffs<Real> hermite_mod_coeffs(int n, Real s)
{
    if (n < 0 || n > kMaxHermiteOrder) {
        throw InvalidArgument("hermite_mod_coeffs: order must lie in [0, 30]");
    }
    if (!(s > Real(0))) {
        throw InvalidArgument("hermite_mod_coeffs: scale must be positive");
    }
    const Real var = s * s / 2;
    std::vector<Real> prev{Real(1)};
    if (n == 0) {
        return {prev};
    }
    std::vector<Real> cur{Real(0), Real(1)};
    for (int k = 1; k < n; ++k) {
        std::vector<Real> next(k + 2, Real(0));
        for (int j = 0; j <= k; ++j) {
            next[j + 1] += cur[j];
        }
        for (int j = 0; j <= k - 1; ++j) {
            next[j] += Real(k) * var * prev[j];
        }
        prev = std::move(cur);
        cur = std::move(next);
    }
    return {cur};
}

/// Horner evaluation of a real polynomial at a square matrix argument.
template <typename Real, typename Derived>
FockMatrix<Real> apply_polynomial(const PolyCoeffs<Real>& poly, const Eigen::MatrixBase<Derived>& x)
{
    const Index d = x.rows();
    FockMatrix<Real> acc = FockMatrix<Real>::Zero(d, d);
    for (auto it = poly.coefficients.rbegin(); it != poly.coefficients.rend(); ++it) {
        acc = (acc * x).eval();
        acc.diagonal().array() += Complex<Real>(*it);
    }
    return acc;
}

namespace detail {

template <typename Real>
struct SeriesResult {
    Real value;
    Real condition;  // max |term| / |sum|
    bool converged;
};

// Plain Kummer series sum_k (a)_k / (b)_k x^k / k!.
template <typename Real>
SeriesResult<Real> kummer_series(Real a, Real b, Real x)
{
    constexpr int kMaxTerms = 20000;
    const Real eps = std::numeric_limits<Real>::epsilon();
    CompensatedSum<Real> sum(Real(0));
    Real term = 1;
    Real max_term = 1;
    sum.add(term);
    for (int k = 0; k < kMaxTerms; ++k) {
        term *= (a + k) / (b + k) * x / Real(k + 1);
        sum.add(term);
        max_term = std::max(max_term, std::abs(term));
        if (term == Real(0)) {
            return {sum.value(), max_term / std::abs(sum.value()), true};
        }
        // Terms decrease monotonically once the ratio drops below one.
        const Real ratio = std::abs((a + k + 1) / (b + k + 1) * x / Real(k + 2));
        if (ratio < Real(1) && std::abs(term) < eps * std::abs(sum.value()) * (Real(1) - ratio)) {
            const Real s = sum.value();
            return {s, s == Real(0) ? std::numeric_limits<Real>::infinity() : max_term / std::abs(s), true};
        }
    }
    return {sum.value(), std::numeric_limits<Real>::infinity(), false};
}

}  // namespace detail

/// Kummer's confluent hypergeometric function M(a, b, x) for real arguments,
/// |x| <= 500. For negative x the Kummer transform
/// M(a, b, x) = e^x M(b - a, b, -x) is used whenever it is better conditioned.
template <typename Real>
Real confluent_M(Real a, Real b, Real x)
{
    if (b <= Real(0) && std::floor(b) == b) {
        throw InvalidArgument("confluent_M: b must not be a nonpositive integer");
    }
    if (!(std::abs(x) <= Real(500))) {
        throw InvalidArgument("confluent_M: |x| must not exceed 500");
    }
    if (x == Real(0)) {
        return Real(1);
    }
    constexpr Real kMaxCondition = 1e5;  // keeps ~1e-11 relative accuracy in double
    auto direct = detail::kummer_series(a, b, x);
    if (x > Real(0)) {
        if (!direct.converged || !(direct.condition < kMaxCondition)) {
            throw NonConvergence("confluent_M: series did not converge to working precision");
        }
        return direct.value;
    }
    auto kummer = detail::kummer_series(b - a, b, -x);
    const bool use_kummer = kummer.converged && (!direct.converged || kummer.condition <= direct.condition);
    const auto& best = use_kummer ? kummer : direct;
    if (!best.converged || !(best.condition < kMaxCondition)) {
        throw NonConvergence("confluent_M: series did not converge to working precision");
    }
    return use_kummer ? std::exp(x) * kummer.value : direct.value;
}

/// Rectangle rule over one period of a uniform grid. Exact for e^{ik phi}
/// whenever k is not a nonzero multiple of N; higher frequencies alias.
template <typename Real>
Real periodic_quadrature(std::span<const Real> samples)
{
    const auto n = samples.size();
    if (n < 4) {
        throw InvalidArgument("periodic_quadrature: need at least 4 samples");
    }
    CompensatedSum<Real> sum(Real(0));
    for (Real v : samples) {
        sum.add(v);
    }
    return Real(2) * std::numbers::pi_v<Real> / Real(n) * sum.value();
}

/// Uniform grid phi_j = phi0 + 2 pi j / N, j = 0..N-1.
template <typename Real>
RealVector<Real> periodic_grid(Index n, Real phi0)
{
    RealVector<Real> phi(n);
    for (Index j = 0; j < n; ++j) {
        phi(j) = phi0 + Real(2) * std::numbers::pi_v<Real> * Real(j) / Real(n);
    }
    return phi;
}

template <typename Real>
struct QuadratureRule {
    RealVector<Real> nodes;
    RealVector<Real> weights;
};

/// Gauss-Laguerre rule for the weight x^alpha e^{-x} on [0, inf).
///
/// Nodes come from the Golub-Welsch eigenproblem and are polished by Newton
/// steps on L_n^(alpha). Weights use the closed form
///   w_i = Gamma(n+alpha+1) x_i / (n! (n+1)^2 L_{n+1}(x_i)^2)
/// evaluated in log space, which keeps the tiny weights at large nodes
/// accurate in the relative sense (eigenvector components do not).
template <typename Real>
QuadratureRule<Real> gauss_laguerre(int n, Real alpha = Real(0))
{
    if (n < 1) {
        throw InvalidArgument("gauss_laguerre: need at least one node");
    }
    if (!(alpha > Real(-1))) {
        throw InvalidArgument("gauss_laguerre: alpha must exceed -1");
    }
    RealMatrix<Real> jacobi = RealMatrix<Real>::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        jacobi(k, k) = Real(2 * k + 1) + alpha;
        if (k + 1 < n) {
            const Real off = std::sqrt(Real(k + 1) * (Real(k + 1) + alpha));
            jacobi(k, k + 1) = off;
            jacobi(k + 1, k) = off;
        }
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix<Real>> solver(jacobi, Eigen::EigenvaluesOnly);
    RealVector<Real> x = solver.eigenvalues();

    // Returns {L_n(x), L_n'(x), L_{n+1}(x)} via the three-term recurrence.
    auto laguerre = [n, alpha](Real t) {
        Real l_prev = 1;
        Real l = 1 + alpha - t;
        for (int k = 1; k < n; ++k) {
            Real l_next = ((Real(2 * k + 1) + alpha - t) * l - (Real(k) + alpha) * l_prev) / Real(k + 1);
            l_prev = l;
            l = l_next;
        }
        // n = 1 special-cases: l holds L_1, l_prev holds L_0.
        const Real deriv = (Real(n) * l - (Real(n) + alpha) * l_prev) / t;
        const Real l_next = ((Real(2 * n + 1) + alpha - t) * l - (Real(n) + alpha) * l_prev) / Real(n + 1);
        return std::array<Real, 3>{l, deriv, l_next};
    };

    RealVector<Real> w(n);
    const Real log_norm = std::lgamma(Real(n) + alpha + 1) - std::lgamma(Real(n) + 1) - 2 * std::log(Real(n + 1));
    for (int i = 0; i < n; ++i) {
        for (int it = 0; it < 3; ++it) {
            auto v = laguerre(x(i));
            if (v[1] == Real(0)) {
                break;
            }
            x(i) -= v[0] / v[1];
        }
        const auto v = laguerre(x(i));
        w(i) = std::exp(log_norm + std::log(x(i)) - 2 * std::log(std::abs(v[2])));
    }
    return {x, w};
}

/// Composite trapezoid rule on [lo, hi] with n >= 2 equally spaced points.
template <typename Real>
QuadratureRule<Real> trapezoid_rule(Index n, Real lo, Real hi)
{
    if (n < 2) {
        throw InvalidArgument("trapezoid_rule: need at least two points");
    }
    QuadratureRule<Real> rule{RealVector<Real>(n), RealVector<Real>(n)};
    const Real h = (hi - lo) / Real(n - 1);
    for (Index j = 0; j < n; ++j) {
        rule.nodes(j) = lo + h * Real(j);
        rule.weights(j) = (j == 0 || j == n - 1) ? h / 2 : h;
    }
    return rule;
}

}  // namespace oqo

#endif  // OQO_SPECIAL_HPP
