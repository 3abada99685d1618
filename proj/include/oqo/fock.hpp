#ifndef OQO_FOCK_HPP
#define OQO_FOCK_HPP

// Truncated Fock-space linear algebra: ladder and quadrature operators,
// density states, displacement, expectations and hermitean spectra.
//
// Conventions: b|m> = sqrt(m)|m-1>, Q = (b + b^dag)/sqrt(2),
// P = (b - b^dag)/(i sqrt(2)), so [Q, P] = i and Q^2 + P^2 - 1 = 2 b^dag b
// away from the cutoff.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "oqo/types.hpp"

namespace oqo {

template <typename Real>
struct Ladder {
    FockMatrix<Real> b;
    FockMatrix<Real> b_dag;
    FockMatrix<Real> num;
    FockMatrix<Real> Q;
    FockMatrix<Real> P;
};

inline void require_dim(Index dim)
{
    if (dim < 2) {
        throw InvalidDimension("Fock dimension must be at least 2, got " + std::to_string(dim));
    }
}

template <typename Real = double>
Ladder<Real> build_operators(Index dim)
{
    require_dim(dim);
    using C = Complex<Real>;
    Ladder<Real> ops;
    ops.b = FockMatrix<Real>::Zero(dim, dim);
    for (Index m = 1; m < dim; ++m) {
        ops.b(m - 1, m) = C(std::sqrt(Real(m)));
    }
    ops.b_dag = ops.b.adjoint();
    ops.num = ops.b_dag * ops.b;
    const Real r = std::sqrt(Real(0.5));
    ops.Q = r * (ops.b + ops.b_dag);
    ops.P = (r * (ops.b - ops.b_dag)) * C(0, -1);
    return ops;
}

/// Entrywise max-norm, the residual measure used throughout.
template <typename Derived>
typename Derived::RealScalar max_abs(const Eigen::MatrixBase<Derived>& m)
{
    return m.size() == 0 ? typename Derived::RealScalar(0) : m.cwiseAbs().maxCoeff();
}

template <typename Derived>
typename Derived::RealScalar hermiticity_residual(const Eigen::MatrixBase<Derived>& m)
{
    return max_abs(m - m.adjoint());
}

/// Number of low levels that count as "faithful" (the low 80%).
inline Index low_block(Index dim)
{
    return (dim * 4) / 5;
}

/// Coherent-state amplitudes e^{-|alpha|^2/2} alpha^m / sqrt(m!), m < dim,
/// without truncation renormalization.
template <typename Real>
FockVector<Real> coherent_amplitudes(Complex<Real> alpha, Index dim)
{
    FockVector<Real> c(dim);
    c(0) = Complex<Real>(std::exp(-std::norm(alpha) / 2));
    for (Index m = 1; m < dim; ++m) {
        c(m) = c(m - 1) * alpha / std::sqrt(Real(m));
    }
    return c;
}

/// Top-left rows x cols block of the displaced thermal state
/// D(alpha) rho_th(nbar) D(alpha)^dag, computed exactly (no truncation of
/// the infinite-dimensional operator) from the intertwining relation
/// (b - alpha) rho = c rho (b - alpha), c = nbar/(nbar+1):
///   rho_{m+1,n} = [alpha (1-c) rho_{m,n} + c sqrt(n) rho_{m,n-1}] / sqrt(m+1)
/// seeded by rho_{0,n} = conj(alpha)^n e^{-|alpha|^2/(1+nbar)} / ((1+nbar)^{n+1} sqrt(n!)).
/// Both recurrence terms share a phase, so there is no cancellation.
template <typename Real>
FockMatrix<Real> displaced_thermal_block(Complex<Real> alpha, Real nbar, Index rows, Index cols)
{
    if (!(nbar >= Real(0))) {
        throw InvalidArgument("thermal occupation must be nonnegative");
    }
    using C = Complex<Real>;
    const Real one_plus = Real(1) + nbar;
    const Real c = nbar / one_plus;
    FockMatrix<Real> rho(rows, cols);
    if (rows == 0 || cols == 0) {
        return rho;
    }
    rho(0, 0) = C(std::exp(-std::norm(alpha) / one_plus) / one_plus);
    const C step = std::conj(alpha) / one_plus;
    for (Index n = 1; n < cols; ++n) {
        rho(0, n) = rho(0, n - 1) * step / std::sqrt(Real(n));
    }
    const C a1 = alpha * (Real(1) - c);
    for (Index m = 0; m + 1 < rows; ++m) {
        const Real inv = Real(1) / std::sqrt(Real(m + 1));
        rho(m + 1, 0) = a1 * rho(m, 0) * inv;
        for (Index n = 1; n < cols; ++n) {
            rho(m + 1, n) = (a1 * rho(m, n) + c * std::sqrt(Real(n)) * rho(m, n - 1)) * inv;
        }
    }
    return rho;
}

/// Matrix exponential (Pade scaling-and-squaring).
template <typename Derived>
auto matrix_exp(const Eigen::MatrixBase<Derived>& x)
{
    using Plain = typename Derived::PlainObject;
    Plain result = x.derived().exp();
    if (!result.allFinite()) {
        throw Overflow("matrix exponential overflowed");
    }
    return result;
}

/// D(q, p) = exp(i p Q - i q P) = exp(alpha b^dag - conj(alpha) b), alpha = (q + i p)/sqrt(2).
///
/// The generator is anti-hermitean, so the truncated exponential is exactly
/// unitary; it reproduces the true displacement only on low levels, and
/// |alpha|^2 > dim/4 is rejected.
template <typename Real = double>
FockMatrix<Real> displacement(Real q, Real p, Index dim)
{
    require_dim(dim);
    if (!std::isfinite(q) || !std::isfinite(p)) {
        throw InvalidArgument("displacement: q and p must be finite");
    }
    const Real alpha2 = (q * q + p * p) / 2;
    if (alpha2 > Real(dim) / 4) {
        throw CutoffUnfaithful("displacement |alpha|^2 = " + std::to_string(alpha2) +
                               " too large for Fock dimension " + std::to_string(dim));
    }
    const auto ops = build_operators<Real>(dim);
    const Complex<Real> i(0, 1);
    FockMatrix<Real> gen = i * p * ops.Q - i * q * ops.P;
    return matrix_exp(gen);
}

/// Hermitean, unit-trace, positive matrix on a truncated Fock space.
template <typename Real>
class DensityState {
public:
    static constexpr Real kHermTol = 1e-12;
    static constexpr Real kTraceTol = 1e-12;
    static constexpr Real kPosTol = 1e-10;
    static constexpr Real kFaithfulTail = 1e-8;

    /// Validates the invariants; throws InvalidState on violation.
    explicit DensityState(FockMatrix<Real> rho) : rho_(std::move(rho))
    {
        if (rho_.rows() != rho_.cols()) {
            throw InvalidState("density matrix must be square");
        }
        require_dim(rho_.rows());
        if (!rho_.allFinite()) {
            throw InvalidState("density matrix has non-finite entries");
        }
        if (hermiticity_residual(rho_) > kHermTol) {
            throw InvalidState("density matrix is not hermitean");
        }
        if (std::abs(rho_.trace() - Complex<Real>(1)) > kTraceTol) {
            throw InvalidState("density matrix trace differs from 1");
        }
        Eigen::SelfAdjointEigenSolver<FockMatrix<Real>> es(rho_, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -kPosTol) {
            throw InvalidState("density matrix has a negative eigenvalue");
        }
        const Index top = std::max<Index>(1, (dim() + 9) / 10);
        tail_mass_ = rho_.diagonal().real().tail(top).sum();
        if (tail_mass_ < Real(0)) {
            tail_mass_ = Real(0);
        }
    }

    /// Normalizes an arbitrary positive matrix (hermitean part, unit trace).
    static DensityState normalized(const FockMatrix<Real>& m)
    {
        FockMatrix<Real> h = (m + m.adjoint()) / Real(2);
        const Real tr = h.trace().real();
        if (!(tr > Real(0))) {
            throw InvalidState("cannot normalize a matrix with nonpositive trace");
        }
        h /= tr;
        h.diagonal() = h.diagonal().real().template cast<Complex<Real>>();
        return DensityState(std::move(h));
    }

    static DensityState pure(const FockVector<Real>& psi)
    {
        const Real nrm = psi.norm();
        if (!(nrm > Real(0))) {
            throw InvalidState("zero state vector");
        }
        const FockVector<Real> v = psi / nrm;
        return normalized(v * v.adjoint());
    }

    Index dim() const { return rho_.rows(); }
    const FockMatrix<Real>& matrix() const { return rho_; }
    Real tail_mass() const { return tail_mass_; }
    bool faithful() const { return tail_mass_ < kFaithfulTail; }
    Real purity() const { return (rho_ * rho_).trace().real(); }

    /// Largest level index with a nonzero row or column, plus one.
    Index support() const
    {
        for (Index m = dim(); m > 0; --m) {
            if (rho_.row(m - 1).cwiseAbs().maxCoeff() != Real(0)) {
                return m;
            }
        }
        return 1;
    }

private:
    FockMatrix<Real> rho_;
    Real tail_mass_ = 0;
};

enum class StateKind { fock, coherent, thermal, displaced_thermal, random_mixed };

/// Parameters by kind:
///   fock: n; coherent: alpha; thermal: nbar; displaced_thermal: nbar, alpha;
///   random_mixed: seed, support (levels 0..support-1), rank (0 = support).
struct StateSpec {
    StateKind kind = StateKind::fock;
    Index dim = 2;
    Index n = 0;
    std::complex<double> alpha{0.0, 0.0};
    double nbar = 0.0;
    std::uint64_t seed = 0;
    Index support = 6;
    Index rank = 0;
};

namespace detail {

// Standard normal deviates from the raw (fully specified) mt19937_64 stream,
// so random states are reproducible across standard libraries.
class Gaussian {
public:
    explicit Gaussian(std::uint64_t seed) : engine_(seed) {}

    double operator()()
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

private:
    double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace detail

template <typename Real = double>
DensityState<Real> make_state(const StateSpec& spec)
{
    using C = Complex<Real>;
    const Index dim = spec.dim;
    require_dim(dim);
    const Real alpha2 = Real(std::norm(spec.alpha));
    switch (spec.kind) {
    case StateKind::fock: {
        if (spec.n < 0 || spec.n >= dim) {
            throw InvalidArgument("fock level n must satisfy 0 <= n < dim");
        }
        FockMatrix<Real> rho = FockMatrix<Real>::Zero(dim, dim);
        rho(spec.n, spec.n) = C(1);
        return DensityState<Real>(std::move(rho));
    }
    case StateKind::coherent: {
        if (alpha2 > Real(dim) / 4) {
            throw CutoffUnfaithful("coherent |alpha|^2 exceeds dim/4");
        }
        const C alpha(Real(spec.alpha.real()), Real(spec.alpha.imag()));
        return DensityState<Real>::pure(coherent_amplitudes<Real>(alpha, dim));
    }
    case StateKind::thermal: {
        if (!(spec.nbar >= 0.0)) {
            throw InvalidArgument("thermal occupation must be nonnegative");
        }
        const Real nbar = Real(spec.nbar);
        FockMatrix<Real> rho = FockMatrix<Real>::Zero(dim, dim);
        Real p = Real(1) / (nbar + 1);
        const Real ratio = nbar / (nbar + 1);
        for (Index m = 0; m < dim; ++m) {
            rho(m, m) = C(p);
            p *= ratio;
        }
        return DensityState<Real>::normalized(rho);
    }
    case StateKind::displaced_thermal: {
        if (!(spec.nbar >= 0.0)) {
            throw InvalidArgument("thermal occupation must be nonnegative");
        }
        if (alpha2 > Real(dim) / 4) {
            throw CutoffUnfaithful("displacement |alpha|^2 exceeds dim/4");
        }
        const C alpha(Real(spec.alpha.real()), Real(spec.alpha.imag()));
        return DensityState<Real>::normalized(displaced_thermal_block<Real>(alpha, Real(spec.nbar), dim, dim));
    }
    case StateKind::random_mixed: {
        const Index support = spec.support;
        if (support < 1 || support > dim) {
            throw InvalidArgument("random_mixed support must lie in [1, dim]");
        }
        const Index rank = spec.rank == 0 ? support : spec.rank;
        if (rank < 1) {
            throw InvalidArgument("random_mixed rank must be positive");
        }
        detail::Gaussian gauss(spec.seed);
        FockMatrix<Real> g = FockMatrix<Real>::Zero(dim, rank);
        for (Index j = 0; j < rank; ++j) {
            for (Index m = 0; m < support; ++m) {
                const Real re = Real(gauss());
                const Real im = Real(gauss());
                g(m, j) = C(re, im);
            }
        }
        return DensityState<Real>::normalized(g * g.adjoint());
    }
    }
    throw InvalidArgument("unknown state kind");
}

template <typename Real, typename Derived>
Complex<Real> expectation(const DensityState<Real>& rho, const Eigen::MatrixBase<Derived>& a)
{
    if (a.rows() != rho.dim() || a.cols() != rho.dim()) {
        throw DimensionMismatch("operator dimension does not match the state");
    }
    // Tr(rho A) = sum_{mn} rho_{mn} A_{nm}
    return (rho.matrix().transpose().array() * a.array()).sum();
}

template <typename Real>
struct Spectrum {
    RealVector<Real> eigenvalues;    // ascending
    FockMatrix<Real> eigenvectors;  // orthonormal columns
    Real max_residual = 0;          // max_k |A v_k - lambda_k v_k|_2
};

template <typename Real>
Spectrum<Real> hermitian_spectrum(const FockMatrix<Real>& a)
{
    if (a.rows() != a.cols()) {
        throw DimensionMismatch("hermitian_spectrum needs a square matrix");
    }
    if (hermiticity_residual(a) > Real(1e-10)) {
        throw NotHermitian("hermitian_spectrum: input is not hermitean");
    }
    const FockMatrix<Real> h = (a + a.adjoint()) / Real(2);
    Eigen::SelfAdjointEigenSolver<FockMatrix<Real>> es(h);
    if (es.info() != Eigen::Success) {
        throw NonConvergence("hermitian eigensolver failed");
    }
    Spectrum<Real> s{es.eigenvalues(), es.eigenvectors(), Real(0)};
    const FockVector<Real> lambda = s.eigenvalues.template cast<Complex<Real>>();
    const FockMatrix<Real> resid = a * s.eigenvectors - s.eigenvectors * lambda.asDiagonal();
    s.max_residual = resid.colwise().norm().maxCoeff();
    return s;
}

/// f(A) for hermitean A through its eigendecomposition.
template <typename Real, typename F>
FockMatrix<Real> hermitian_function(const FockMatrix<Real>& a, F&& f)
{
    const auto s = hermitian_spectrum(a);
    FockVector<Real> fv(s.eigenvalues.size());
    for (Index k = 0; k < fv.size(); ++k) {
        fv(k) = Complex<Real>(f(s.eigenvalues(k)));
    }
    return s.eigenvectors * fv.asDiagonal() * s.eigenvectors.adjoint();
}

}  // namespace oqo

#endif  // OQO_FOCK_HPP
