#ifndef OQO_MEASUREMENT_HPP
#define OQO_MEASUREMENT_HPP

// Generic filter / propensity / operational-observable machinery.
//
// A FilterFamily is a quadrature grid of classical outcomes a together with
// positive operators F(a) and a normalization k, so that k w_j F(a_j) is a
// discretized POVM. Everything here is done by brute-force quadrature on
// purpose: closed forms elsewhere are checked against it.

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "oqo/fock.hpp"

namespace oqo {

using State = DensityState<double>;

/// Sampled classical density Pr(a) with quadrature weights.
struct PropensityGrid {
    MatrixXd points;  // one row per grid point, one column per coordinate
    VectorXd weights;
    VectorXd values;
    bool periodic = false;  // 1-D periodic grids have no tails

    Index size() const { return points.rows(); }
    Index coords() const { return points.cols(); }
    double total() const;
};

struct FilterFamily {
    Index dim = 0;
    MatrixXd points;
    VectorXd weights;
    double k = 1.0;
    bool periodic = false;
    /// Top-left block x block corner of F(a_j).
    std::function<FockOperator(Index point, Index block)> element;

    Index size() const { return points.rows(); }
    FockOperator op_at(Index point) const { return element(point, dim); }
};

inline constexpr double kNormalizationTol = 1e-6;
inline constexpr double kCoverageTol = 1e-8;

/// 1 / sum_j w_j <0|F(a_j)|0>, the normalization that makes vacuum propensities integrate to one.
double normalization_constant(const FilterFamily& family);

/// Pr(a_j) = k Tr(rho F(a_j)). Throws GridCoverage when the result does not
/// integrate to 1 within 1e-6.
PropensityGrid propensity(const State& rho, const FilterFamily& family);

/// sum_j w_j a_j^n Pr(a_j) along one coordinate.
double classical_moment(const PropensityGrid& pr, int n, Index axis = 0);

/// k sum_j w_j a_j^n F(a_j) for n = 0..max_n in one sweep. The n = 0 member
/// must reproduce the identity within 1e-8 on all levels, else GridCoverage.
std::vector<FockOperator> oqo_moments(const FilterFamily& family, int max_n, Index axis = 0);

FockOperator oqo_moment(const FilterFamily& family, int n, Index axis = 0);

/// Tr(rho exp(lambda A)).
cdouble generating_Z(const State& rho, const FockOperator& a, cdouble lambda);

/// sum_j w_j exp(lambda . a_j) Pr(a_j); one lambda component per coordinate.
cdouble generating_ZF(const PropensityGrid& pr, std::span<const cdouble> lambda);

/// Minimum eigenvalue of k w_j F(a_j) over the grid (POVM positivity).
double min_povm_eigenvalue(const FilterFamily& family, Index block);

/// CSV with columns a1[,a2],weight,pr.
void write_propensity_csv(std::ostream& os, const PropensityGrid& pr);

}  // namespace oqo

#endif  // OQO_MEASUREMENT_HPP
