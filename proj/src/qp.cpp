#include "oqo/qp.hpp"

#include <cmath>
#include <numbers>

#include "oqo/format.hpp"
#include "oqo/special.hpp"

namespace oqo {

double default_half_width(Index dim, double nbar)
{
    return std::max(6.0, std::sqrt(2.0 * double(dim) + 1.0) + 8.0 * std::sqrt(nbar + 0.5) + 2.0);
}

void validate(const QpModel& model)
{
    require_dim(model.dim);
    if (!(model.nbar >= 0.0) || !std::isfinite(model.nbar)) {
        throw InvalidArgument("nbar must be a finite nonnegative number");
    }
    if (model.grid_points < 3) {
        throw InvalidArgument("qp grid needs at least 3 points per axis");
    }
    if (model.half_width < 0.0) {
        throw InvalidArgument("qp grid half-width must be positive");
    }
}

FilterFamily qp_filter(const QpModel& model)
{
    validate(model);
    const double half = model.half_width > 0.0 ? model.half_width : default_half_width(model.dim, model.nbar);
    const auto rule = trapezoid_rule<double>(model.grid_points, -half, half);
    const Index n = model.grid_points;

    FilterFamily family;
    family.dim = model.dim;
    family.points.resize(n * n, 2);
    family.weights.resize(n * n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            const Index idx = i * n + j;
            family.points(idx, 0) = rule.nodes(i);
            family.points(idx, 1) = rule.nodes(j);
            family.weights(idx) = rule.weights(i) * rule.weights(j);
        }
    }
    const double nbar = model.nbar;
    const MatrixXd pts = family.points;
    family.element = [pts, nbar](Index point, Index block) {
        const cdouble alpha = cdouble(pts(point, 0), pts(point, 1)) / std::numbers::sqrt2;
        return displaced_thermal_block<double>(alpha, nbar, block, block);
    };
    family.k = normalization_constant(family);
    const double expected = 0.5 / std::numbers::pi;
    if (std::abs(family.k - expected) > kNormalizationTol) {
        throw GridCoverage("qp filter normalization k = " + format_number(family.k) + " differs from 1/(2 pi)");
    }
    return family;
}

FockOperator qp_filter_origin(const QpModel& model)
{
    validate(model);
    const auto ops = build_operators(model.dim);
    const FockOperator gen = (ops.Q * ops.Q + ops.P * ops.P - FockOperator::Identity(model.dim, model.dim)) / 2.0;
    const double nbar = model.nbar;
    const double ratio = nbar / (nbar + 1.0);
    return hermitian_function(gen, [nbar, ratio](double x) {
        if (nbar == 0.0) {
            // 0^x with x an integer eigenvalue: only the ground level survives
            return std::abs(x) < 1e-9 ? 1.0 : 0.0;
        }
        return std::pow(ratio, x) / (nbar + 1.0);
    });
}

cdouble zf_closed_form(const State& rho, const QpModel& model, double lambda, double mu)
{
    validate(model);
    if (rho.dim() != model.dim) {
        throw DimensionMismatch("state and model dimensions differ");
    }
    const double spread = (lambda * lambda + mu * mu) / 2.0;
    if (spread > double(model.dim) / 4.0) {
        throw CutoffUnfaithful("characteristic-function displacement too large for the Fock dimension");
    }
    const auto ops = build_operators(model.dim);
    const cdouble i(0.0, 1.0);
    const FockOperator gen = i * lambda * ops.Q - i * mu * ops.P;
    const cdouble intrinsic = expectation(rho, matrix_exp(gen));
    return intrinsic * std::exp(-0.25 * (2.0 * model.nbar + 1.0) * (lambda * lambda + mu * mu));
}

cdouble zf_numeric(const PropensityGrid& pr, double lambda, double mu)
{
    const cdouble l[2] = {cdouble(0.0, lambda), cdouble(0.0, -mu)};
    return generating_ZF(pr, l);
}

FockOperator hermite_oqo(const QpModel& model, Axis axis, int n)
{
    validate(model);
    if (n < 0 || n > kMaxInversionOrder) {
        throw InvalidArgument("hermite_oqo: order must lie in [0, 10]");
    }
    const auto ops = build_operators(model.dim);
    const auto poly = hermite_mod_coeffs<double>(n, std::sqrt(2.0 * model.nbar + 1.0));
    return apply_polynomial(poly, axis == Axis::q ? ops.Q : ops.P);
}

std::vector<double> operational_from_intrinsic(std::span<const double> intrinsic, double nbar)
{
    const int order = static_cast<int>(intrinsic.size());
    if (order > kMaxInversionOrder) {
        throw InvalidArgument("moment maps support at most 10 orders");
    }
    const double s = std::sqrt(2.0 * nbar + 1.0);
    // x[0] = 1 is the zeroth moment.
    std::vector<double> x(order + 1, 1.0);
    std::copy(intrinsic.begin(), intrinsic.end(), x.begin() + 1);
    std::vector<double> out(order);
    for (int n = 1; n <= order; ++n) {
        const auto c = hermite_mod_coeffs<double>(n, s).coefficients;
        double acc = 0.0;
        for (int j = 0; j <= n; ++j) {
            acc += c[j] * x[j];
        }
        out[n - 1] = acc;
    }
    return out;
}

std::vector<double> intrinsic_from_operational(std::span<const double> measured, double nbar)
{
    const int order = static_cast<int>(measured.size());
    if (order > kMaxInversionOrder) {
        throw InvalidArgument("moment maps support at most 10 orders");
    }
    if (!(nbar >= 0.0)) {
        throw InvalidArgument("nbar must be nonnegative");
    }
    const double s = std::sqrt(2.0 * nbar + 1.0);
    std::vector<double> x(order + 1, 1.0);
    for (int n = 1; n <= order; ++n) {
        const auto c = hermite_mod_coeffs<double>(n, s).coefficients;  // monic
        double acc = measured[n - 1];
        for (int j = 0; j < n; ++j) {
            acc -= c[j] * x[j];
        }
        x[n] = acc;
    }
    return {x.begin() + 1, x.end()};
}

SpreadReport spreads_from_propensity(const State& rho, const PropensityGrid& pr, double nbar)
{
    const auto ops = build_operators(rho.dim());
    SpreadReport r;
    const double mq = classical_moment(pr, 1, 0);
    const double mp = classical_moment(pr, 1, 1);
    r.dq = std::sqrt(std::max(0.0, classical_moment(pr, 2, 0) - mq * mq));
    r.dp = std::sqrt(std::max(0.0, classical_moment(pr, 2, 1) - mp * mp));
    const double q1 = expectation(rho, ops.Q).real();
    const double p1 = expectation(rho, ops.P).real();
    const FockOperator q2 = ops.Q * ops.Q;
    const FockOperator p2 = ops.P * ops.P;
    r.DQ = std::sqrt(std::max(0.0, expectation(rho, q2).real() - q1 * q1));
    r.DP = std::sqrt(std::max(0.0, expectation(rho, p2).real() - p1 * p1));
    r.lhs = r.dq * r.dp;
    r.rhs = nbar + 1.0;
    r.margin = r.lhs - r.rhs;
    r.holds = r.margin >= -kBoundTol;
    const double vac = std::sqrt(0.5);
    r.equality = std::abs(r.DQ - vac) < kBoundTol && std::abs(r.DP - vac) < kBoundTol;
    return r;
}

SpreadReport spreads_and_bound(const State& rho, const QpModel& model)
{
    validate(model);
    if (rho.dim() != model.dim) {
        throw DimensionMismatch("state and model dimensions differ");
    }
    return spreads_from_propensity(rho, propensity(rho, qp_filter(model)), model.nbar);
}

}  // namespace oqo
