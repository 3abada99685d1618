#ifndef OQO_QP_HPP
#define OQO_QP_HPP

// Position/momentum measurement against a thermal reference oscillator.
//
// The reference oscillator holds nbar thermal quanta and is displaced to
// (q, p); the filter is the displaced thermal state. Operationally measured
// moments carry Gaussian noise of variance nbar + 1/2 per quadrature.

#include <span>
#include <string>
#include <vector>

#include "oqo/measurement.hpp"

namespace oqo {

enum class Axis { q = 0, p = 1 };

struct QpModel {
    double nbar = 0.0;
    Index dim = 80;
    Index grid_points = 129;  // per axis
    double half_width = 0.0;  // 0 selects default_half_width(dim, nbar)
};

/// Half-width L of the square [-L, L]^2 grid that resolves every level of
/// a dim-level space: the classical turning point sqrt(2 dim + 1) of the top
/// level plus eight noise standard deviations.
double default_half_width(Index dim, double nbar);

void validate(const QpModel& model);

/// F(q, p) = D(q, p) rho_th(nbar) D(q, p)^dag on a trapezoid grid, k computed
/// numerically and required to match 1/(2 pi) within 1e-6.
FilterFamily qp_filter(const QpModel& model);

/// F(0, 0) = (1/(nbar+1)) (nbar/(nbar+1))^{(Q^2 + P^2 - 1)/2} built from the
/// truncated quadrature operators. Exact on all levels below the top one.
FockOperator qp_filter_origin(const QpModel& model);

/// <exp(i lambda Q - i mu P)> exp(-(2 nbar + 1)(lambda^2 + mu^2)/4).
cdouble zf_closed_form(const State& rho, const QpModel& model, double lambda, double mu);

/// The numeric counterpart: integral of exp(i lambda q - i mu p) Pr(q, p).
cdouble zf_numeric(const PropensityGrid& pr, double lambda, double mu);

/// ((1/2i) sqrt(2 nbar + 1))^n H_n(i X / sqrt(2 nbar + 1)), X = Q or P.
FockOperator hermite_oqo(const QpModel& model, Axis axis, int n);

inline constexpr int kMaxInversionOrder = 10;

/// Operational moments m_1..m_N from intrinsic moments <X>, ..., <X^N>.
std::vector<double> operational_from_intrinsic(std::span<const double> intrinsic, double nbar);

/// Inverse of operational_from_intrinsic (triangular solve).
std::vector<double> intrinsic_from_operational(std::span<const double> measured, double nbar);

struct SpreadReport {
    double dq = 0;
    double dp = 0;
    double DQ = 0;
    double DP = 0;
    double lhs = 0;  // dq * dp
    double rhs = 0;  // nbar + 1
    double margin = 0;
    bool holds = false;     // lhs >= rhs - 1e-6
    bool equality = false;  // DQ and DP within 1e-6 of 1/sqrt(2)
};

inline constexpr double kBoundTol = 1e-6;

SpreadReport spreads_and_bound(const State& rho, const QpModel& model);

/// Same report from an already computed propensity grid.
SpreadReport spreads_from_propensity(const State& rho, const PropensityGrid& pr, double nbar);

}  // namespace oqo

#endif  // OQO_QP_HPP
