#ifndef OQO_TYPES_HPP
#define OQO_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace oqo {

using Index = Eigen::Index;

template <typename Real>
using Complex = std::complex<Real>;

// Dense operators on the truncated Fock space, column-major like the rest of Eigen.
template <typename Real>
using FockMatrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using FockVector = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
template <typename Real>
using RealMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

using FockOperator = FockMatrix<double>;
using StateVector = FockVector<double>;
using VectorXd = Eigen::VectorXd;
using MatrixXd = Eigen::MatrixXd;
using cdouble = std::complex<double>;

// Error taxonomy. Each maps onto one failure class named by the module contracts.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidDimension : Error {
    using Error::Error;
};
struct InvalidState : Error {
    using Error::Error;
};
struct InvalidArgument : Error {
    using Error::Error;
};
struct DimensionMismatch : Error {
    using Error::Error;
};
struct CutoffUnfaithful : Error {
    using Error::Error;
};
struct NotHermitian : Error {
    using Error::Error;
};
struct GridCoverage : Error {
    using Error::Error;
};
struct NonConvergence : Error {
    using Error::Error;
};
struct Overflow : Error {
    using Error::Error;
};

}  // namespace oqo

#endif  // OQO_TYPES_HPP
