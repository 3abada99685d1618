#ifndef OQO_PHASE_HPP
#define OQO_PHASE_HPP

// Operational phase from the radially integrated Husimi function.
//
// Pr(phi) = (1/2pi) int_0^inf dI <beta|rho|beta>, beta = sqrt(I) e^{i phi}.
// The phasors E^(n) are the operators whose expectations are the circular
// moments of Pr(phi); every periodic observable is a Fourier sum of them.

#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "oqo/measurement.hpp"

namespace oqo {

enum class Smoothing { none, cesaro };

std::string to_string(Smoothing s);
Smoothing parse_smoothing(const std::string& s);

struct PhaseOpConfig {
    double phi0 = -std::numbers::pi;
    int n_max = 400;
    Smoothing smoothing = Smoothing::none;
};

inline constexpr Index kDefaultPhiPoints = 512;

/// Fourier coefficients of the phase propensity: Pr(phi) = (1/2pi) sum_d c_d e^{i d phi}
/// with c_d = sum_m rho_{m,m+d} Gamma(m + d/2 + 1) / sqrt(m! (m+d)!), d in [-(D-1), D-1].
/// Entry d + D - 1 holds c_d.
std::vector<cdouble> phase_fourier_coefficients(const State& rho);

/// Closed-form Pr(phi) on phi_j = phi0 + 2 pi j / n_phi, periodic rectangle weights.
PropensityGrid phase_propensity(const State& rho, Index n_phi = kDefaultPhiPoints,
                                double phi0 = -std::numbers::pi);

/// Pr at arbitrary angles, closed form.
VectorXd phase_propensity_at(const State& rho, const VectorXd& phi);

/// Pr at arbitrary angles by numeric radial integration of the Husimi function.
/// The integrand splits into an even part (polynomial in I) and an odd part
/// (sqrt(I) times a polynomial); each is integrated with its own
/// Gauss-Laguerre rule (alpha = 0 and alpha = 1/2), which are exact once
/// nodes >= dim.
VectorXd phase_propensity_radial_quadrature(const State& rho, const VectorXd& phi, int nodes = 128);

/// Phase filter family F(phi) = int_0^inf dI |beta><beta| on a periodic grid.
FilterFamily phase_filter(Index dim, Index n_phi = kDefaultPhiPoints, double phi0 = -std::numbers::pi);

/// E^(n) = (b^dag b + n/2)! / (b^dag b + n)! b^n; negative n gives the adjoint.
FockOperator phasor(int n, Index dim);

inline constexpr int kMaxHypergeometricOrder = 8;
inline constexpr Index kMaxHypergeometricDim = 120;

/// E^(n) = (n/2)!/n! :M(n/2, n+1, -b^dag b): b^n, with :(b^dag b)^k: mapped to
/// the falling factorial of the number operator. The alternating series is
/// summed in extended precision; NonConvergence is thrown if its conditioning
/// exceeds what that precision resolves to 1e-10 on the low 80% block.
FockOperator phasor_hypergeometric(int n, Index dim);

struct PhasorSet {
    Index dim = 0;
    int n_max = 0;
    std::vector<FockOperator> ops;  // index n + n_max

    const FockOperator& operator[](int n) const { return ops.at(static_cast<std::size_t>(n + n_max)); }
};

PhasorSet make_phasor_set(Index dim, int n_max);

/// sum_n c_n E^(n). With require_hermitian, c_{-n} must equal conj(c_n).
FockOperator periodic_oqo(const std::map<int, cdouble>& coeffs, Index dim, bool require_hermitian = true);

FockOperator cosine_oqo(Index dim);
FockOperator cosine_squared_oqo(Index dim);

/// Fourier weights of the sawtooth equal to phi on (phi0, phi0 + 2pi), optionally Fejer-damped.
std::map<int, cdouble> phase_operator_coefficients(const PhaseOpConfig& cfg, Index dim);

FockOperator phase_operator(const PhaseOpConfig& cfg, Index dim);

struct PhaseSpectrumReport {
    PhaseOpConfig config;
    Index dim = 0;
    VectorXd eigenvalues;
    FockOperator eigenvectors;
    double excess = 0;  // max(0, phi0 - lambda_min, lambda_max - phi0 - 2pi)
    double max_residual = 0;
    double hermiticity = 0;
    std::vector<int> histogram;  // eigenvalue counts over equal bins of the window
};

PhaseSpectrumReport phase_spectrum_report(const PhaseOpConfig& cfg, Index dim, int bins = 16);

/// Classical windowed mean int_{phi0}^{phi0+2pi} phi Pr(phi) d phi by the
/// closed-interval trapezoid rule on n_points.
double windowed_phase_mean(const State& rho, double phi0, Index n_points = 8193);

}  // namespace oqo

#endif  // OQO_PHASE_HPP
