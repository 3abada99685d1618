#include "oqo/measurement.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "oqo/format.hpp"
#include "oqo/special.hpp"

namespace oqo {

double PropensityGrid::total() const
{
    CompensatedSum<double> sum(0.0);
    for (Index j = 0; j < size(); ++j) {
        sum.add(weights(j) * values(j));
    }
    return sum.value();
}

double normalization_constant(const FilterFamily& family)
{
    CompensatedSum<double> sum(0.0);
    for (Index j = 0; j < family.size(); ++j) {
        sum.add(family.weights(j) * family.element(j, 1)(0, 0).real());
    }
    if (!(sum.value() > 0.0)) {
        throw GridCoverage("filter family has zero vacuum weight on its grid");
    }
    return 1.0 / sum.value();
}

PropensityGrid propensity(const State& rho, const FilterFamily& family)
{
    if (rho.dim() != family.dim) {
        throw DimensionMismatch("state and filter family live on different Fock dimensions");
    }
    // F(a) is only needed on the block where rho has weight.
    const Index r = rho.support();
    const FockOperator rho_t = rho.matrix().topLeftCorner(r, r).transpose();

    PropensityGrid pr{family.points, family.weights, VectorXd(family.size()), family.periodic};
    for (Index j = 0; j < family.size(); ++j) {
        const FockOperator f = family.element(j, r);
        pr.values(j) = family.k * (rho_t.array() * f.array()).sum().real();
    }
    const double total = pr.total();
    if (std::abs(total - 1.0) > kNormalizationTol) {
        throw GridCoverage("propensity integrates to " + format_number(total) + " on the grid, expected 1");
    }
    return pr;
}

double classical_moment(const PropensityGrid& pr, int n, Index axis)
{
    if (axis < 0 || axis >= pr.coords()) {
        throw InvalidArgument("classical_moment: axis out of range");
    }
    if (n < 0) {
        throw InvalidArgument("classical_moment: order must be nonnegative");
    }
    CompensatedSum<double> sum(0.0);
    for (Index j = 0; j < pr.size(); ++j) {
        sum.add(pr.weights(j) * std::pow(pr.points(j, axis), n) * pr.values(j));
    }
    return sum.value();
}

std::vector<FockOperator> oqo_moments(const FilterFamily& family, int max_n, Index axis)
{
    if (max_n < 0) {
        throw InvalidArgument("oqo_moments: order must be nonnegative");
    }
    if (axis < 0 || axis >= family.points.cols()) {
        throw InvalidArgument("oqo_moments: axis out of range");
    }
    const Index d = family.dim;
    std::vector<CompensatedSum<FockOperator>> sums(max_n + 1, CompensatedSum<FockOperator>(FockOperator::Zero(d, d)));
    for (Index j = 0; j < family.size(); ++j) {
        const FockOperator f = family.element(j, d);
        const double a = family.points(j, axis);
        double wa = family.weights(j);
        for (int n = 0; n <= max_n; ++n) {
            sums[n].add(wa * f);
            wa *= a;
        }
    }
    std::vector<FockOperator> out;
    out.reserve(max_n + 1);
    for (auto& s : sums) {
        out.push_back(family.k * s.value());
    }
    const double dev = max_abs(out[0] - FockOperator::Identity(d, d));
    if (dev > kCoverageTol) {
        throw GridCoverage("filter grid does not resolve the identity (max deviation " + format_number(dev) +
                           "); widen the grid");
    }
    return out;
}

FockOperator oqo_moment(const FilterFamily& family, int n, Index axis)
{
    return oqo_moments(family, n, axis).back();
}

cdouble generating_Z(const State& rho, const FockOperator& a, cdouble lambda)
{
    if (a.rows() != rho.dim() || a.cols() != rho.dim()) {
        throw DimensionMismatch("operator dimension does not match the state");
    }
    const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
    if (std::abs(lambda) * norm1 > 700.0) {
        throw Overflow("generating_Z: |lambda| ||A|| too large for a finite exponential");
    }
    const FockOperator e = matrix_exp((lambda * a).eval());
    return expectation(rho, e);
}

cdouble generating_ZF(const PropensityGrid& pr, std::span<const cdouble> lambda)
{
    if (static_cast<Index>(lambda.size()) != pr.coords()) {
        throw InvalidArgument("generating_ZF: need one lambda component per coordinate");
    }
    const VectorXd lo = pr.points.colwise().minCoeff();
    const VectorXd hi = pr.points.colwise().maxCoeff();
    CompensatedSum<cdouble> sum(cdouble(0.0));
    double edge = 0.0;
    for (Index j = 0; j < pr.size(); ++j) {
        cdouble expo(0.0);
        bool on_edge = false;
        for (Index c = 0; c < pr.coords(); ++c) {
            const double a = pr.points(j, c);
            expo += lambda[c] * a;
            on_edge = on_edge || a == lo(c) || a == hi(c);
        }
        const cdouble term = pr.weights(j) * std::exp(expo) * pr.values(j);
        sum.add(term);
        if (on_edge) {
            edge = std::max(edge, std::abs(std::exp(expo) * pr.values(j)));
        }
    }
    const cdouble z = sum.value();
    if (!pr.periodic && edge > kCoverageTol * std::max(std::abs(z), 1e-300)) {
        throw GridCoverage("generating_ZF: integrand is not negligible at the grid edge");
    }
    return z;
}

double min_povm_eigenvalue(const FilterFamily& family, Index block)
{
    double lo = std::numeric_limits<double>::infinity();
    for (Index j = 0; j < family.size(); ++j) {
        const FockOperator f = family.element(j, block);
        const FockOperator h = (f + f.adjoint()) / 2.0;
        Eigen::SelfAdjointEigenSolver<FockOperator> es(h, Eigen::EigenvaluesOnly);
        lo = std::min(lo, family.k * family.weights(j) * es.eigenvalues().minCoeff());
    }
    return lo;
}

void write_propensity_csv(std::ostream& os, const PropensityGrid& pr)
{
    for (Index c = 0; c < pr.coords(); ++c) {
        os << 'a' << (c + 1) << ',';
    }
    os << "weight,pr\n";
    for (Index j = 0; j < pr.size(); ++j) {
        for (Index c = 0; c < pr.coords(); ++c) {
            os << format_number(pr.points(j, c)) << ',';
        }
        os << format_number(pr.weights(j)) << ',' << format_number(pr.values(j)) << '\n';
    }
}

}  // namespace oqo
