#include "oqo/phase.hpp"

#include <cmath>
#include <limits>

#include "oqo/format.hpp"
#include "oqo/special.hpp"

namespace oqo {

namespace {

#if defined(__SIZEOF_FLOAT128__)
using WideReal = __float128;
constexpr double kWideEpsilon = 1.93e-34;
#else
using WideReal = long double;
constexpr double kWideEpsilon = static_cast<double>(std::numeric_limits<long double>::epsilon());
#endif

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Gamma((m+n)/2 + 1) / sqrt(m! n!), the radial moment of <beta|m><n|beta>.
double radial_moment(Index m, Index n)
{
    const double s1 = 0.5 * double(m + n) + 1.0;
    return std::exp(0.5 * log_gamma_ratio(s1, double(m + 1)) + 0.5 * log_gamma_ratio(s1, double(n + 1)));
}

MatrixXd radial_moment_table(Index dim)
{
    MatrixXd g(dim, dim);
    for (Index m = 0; m < dim; ++m) {
        for (Index n = m; n < dim; ++n) {
            g(m, n) = g(n, m) = radial_moment(m, n);
        }
    }
    return g;
}

void check_phasor_order(int n, Index dim)
{
    require_dim(dim);
    if (std::abs(n) >= dim) {
        throw InvalidArgument("phasor order |n| = " + std::to_string(std::abs(n)) +
                              " must be below the Fock dimension " + std::to_string(dim));
    }
}

}  // namespace

std::string to_string(Smoothing s)
{
    return s == Smoothing::cesaro ? "cesaro" : "none";
}

Smoothing parse_smoothing(const std::string& s)
{
    if (s == "none") {
        return Smoothing::none;
    }
    if (s == "cesaro") {
        return Smoothing::cesaro;
    }
    throw InvalidArgument("unknown smoothing '" + s + "' (expected none or cesaro)");
}

std::vector<cdouble> phase_fourier_coefficients(const State& rho)
{
    const Index dim = rho.dim();
    const auto& r = rho.matrix();
    std::vector<cdouble> c(2 * dim - 1, cdouble(0.0));
    for (Index d = 0; d < dim; ++d) {
        CompensatedSum<cdouble> up(cdouble(0.0));
        for (Index m = 0; m + d < dim; ++m) {
            up.add(r(m, m + d) * radial_moment(m, m + d));
        }
        c[dim - 1 + d] = up.value();
        // Hermiticity of rho gives c_{-d} = conj(c_d).
        c[dim - 1 - d] = std::conj(up.value());
    }
    c[dim - 1] = cdouble(c[dim - 1].real(), 0.0);
    return c;
}

VectorXd phase_propensity_at(const State& rho, const VectorXd& phi)
{
    const Index dim = rho.dim();
    const auto c = phase_fourier_coefficients(rho);
    VectorXd out(phi.size());
    for (Index j = 0; j < phi.size(); ++j) {
        CompensatedSum<double> sum(0.0);
        sum.add(c[dim - 1].real());
        for (Index d = 1; d < dim; ++d) {
            sum.add(2.0 * (c[dim - 1 + d] * std::polar(1.0, double(d) * phi(j))).real());
        }
        out(j) = sum.value() / kTwoPi;
    }
    return out;
}

PropensityGrid phase_propensity(const State& rho, Index n_phi, double phi0)
{
    if (n_phi < 4) {
        throw InvalidArgument("phase grid needs at least 4 points");
    }
    if (!rho.faithful()) {
        throw CutoffUnfaithful("state has too much weight near the Fock cutoff (tail mass " +
                               format_number(rho.tail_mass()) + ")");
    }
    const VectorXd phi = periodic_grid<double>(n_phi, phi0);
    PropensityGrid pr{phi, VectorXd::Constant(n_phi, kTwoPi / double(n_phi)), phase_propensity_at(rho, phi), true};
    const double total = pr.total();
    if (std::abs(total - 1.0) > kNormalizationTol) {
        throw GridCoverage("phase propensity integrates to " + format_number(total));
    }
    return pr;
}

VectorXd phase_propensity_radial_quadrature(const State& rho, const VectorXd& phi, int nodes)
{
    const Index r = rho.support();
    const FockOperator rho_r = rho.matrix().topLeftCorner(r, r);
    const auto even = gauss_laguerre<double>(nodes, 0.0);
    const auto odd = gauss_laguerre<double>(nodes, 0.5);

    // e^{I} <beta|rho|beta> with unnormalized amplitudes beta^m / sqrt(m!).
    auto husimi_scaled = [&](cdouble beta) {
        StateVector c(r);
        c(0) = 1.0;
        for (Index m = 1; m < r; ++m) {
            c(m) = c(m - 1) * beta / std::sqrt(double(m));
        }
        return (c.adjoint() * rho_r * c)(0, 0).real();
    };

    VectorXd out(phi.size());
    for (Index j = 0; j < phi.size(); ++j) {
        const cdouble dir = std::polar(1.0, phi(j));
        CompensatedSum<double> sum(0.0);
        for (int i = 0; i < nodes; ++i) {
            const double root = std::sqrt(even.nodes(i));
            const double plus = husimi_scaled(root * dir);
            const double minus = husimi_scaled(-root * dir);
            sum.add(even.weights(i) * 0.5 * (plus + minus));
        }
        for (int i = 0; i < nodes; ++i) {
            const double root = std::sqrt(odd.nodes(i));
            const double plus = husimi_scaled(root * dir);
            const double minus = husimi_scaled(-root * dir);
            sum.add(odd.weights(i) * 0.5 * (plus - minus) / root);
        }
        out(j) = sum.value() / kTwoPi;
    }
    return out;
}

FilterFamily phase_filter(Index dim, Index n_phi, double phi0)
{
    require_dim(dim);
    if (n_phi < 4) {
        throw InvalidArgument("phase grid needs at least 4 points");
    }
    FilterFamily family;
    family.dim = dim;
    family.periodic = true;
    family.points = periodic_grid<double>(n_phi, phi0);
    family.weights = VectorXd::Constant(n_phi, kTwoPi / double(n_phi));
    const MatrixXd g = radial_moment_table(dim);
    const VectorXd phi = family.points.col(0);
    family.element = [g, phi](Index point, Index block) {
        FockOperator f(block, block);
        for (Index n = 0; n < block; ++n) {
            for (Index m = 0; m < block; ++m) {
                f(m, n) = g(m, n) * std::polar(1.0, double(m - n) * phi(point));
            }
        }
        return f;
    };
    family.k = normalization_constant(family);
    return family;
}

FockOperator phasor(int n, Index dim)
{
    check_phasor_order(n, dim);
    const Index shift = std::abs(n);
    FockOperator e = FockOperator::Zero(dim, dim);
    for (Index m = 0; m + shift < dim; ++m) {
        const double top = double(m) + 0.5 * double(shift) + 1.0;
        const double v =
            std::exp(0.5 * log_gamma_ratio(top, double(m + 1)) + 0.5 * log_gamma_ratio(top, double(m + shift + 1)));
        if (n >= 0) {
            e(m, m + shift) = v;
        } else {
            e(m + shift, m) = v;
        }
    }
    return e;
}

FockOperator phasor_hypergeometric(int n, Index dim)
{
    if (n < 0 || n > kMaxHypergeometricOrder) {
        throw InvalidArgument("phasor_hypergeometric: order must lie in [0, 8]");
    }
    if (dim > kMaxHypergeometricDim) {
        throw InvalidArgument("phasor_hypergeometric: dimension must not exceed 120");
    }
    check_phasor_order(n, dim);
    const WideReal a = WideReal(n) / 2;
    const WideReal b = WideReal(n) + 1;
    const double prefactor = std::exp(std::lgamma(0.5 * n + 1.0) - std::lgamma(n + 1.0));
    const Index checked = low_block(dim);

    FockOperator e = FockOperator::Zero(dim, dim);
    for (Index m = 0; m + n < dim; ++m) {
        // <m| :M(a, b, -b^dag b): |m> = sum_k (a)_k / ((b)_k k!) (-1)^k m!/(m-k)!
        CompensatedSum<WideReal> sum(WideReal(0));
        WideReal term = 1;
        double largest = 1.0;
        sum.add(term);
        for (Index k = 0; k < m; ++k) {
            term *= -(a + WideReal(k)) / (b + WideReal(k)) * WideReal(m - k) / WideReal(k + 1);
            sum.add(term);
            largest = std::max(largest, std::abs(static_cast<double>(term)));
        }
        const double diag = static_cast<double>(sum.value());
        const double error_bound = largest * kWideEpsilon * double(m + 1);
        if (m < checked && !(error_bound < 1e-10 * std::abs(diag))) {
            throw NonConvergence("phasor_hypergeometric: normal-ordered series too ill-conditioned at level " +
                                 std::to_string(m));
        }
        // b^n |m+n> = sqrt((m+n)!/m!) |m>
        const double lift = std::exp(0.5 * (std::lgamma(double(m + n) + 1.0) - std::lgamma(double(m) + 1.0)));
        e(m, m + n) = prefactor * diag * lift;
    }
    return e;
}

PhasorSet make_phasor_set(Index dim, int n_max)
{
    if (n_max < 0) {
        throw InvalidArgument("phasor set order must be nonnegative");
    }
    check_phasor_order(n_max, dim);
    PhasorSet set{dim, n_max, {}};
    set.ops.reserve(2 * n_max + 1);
    for (int n = -n_max; n <= n_max; ++n) {
        set.ops.push_back(phasor(n, dim));
    }
    return set;
}

FockOperator periodic_oqo(const std::map<int, cdouble>& coeffs, Index dim, bool require_hermitian)
{
    require_dim(dim);
    if (require_hermitian) {
        for (const auto& [n, c] : coeffs) {
            const auto it = coeffs.find(-n);
            const cdouble partner = it == coeffs.end() ? cdouble(0.0) : it->second;
            if (std::abs(partner - std::conj(c)) > 1e-14 * std::max(1.0, std::abs(c))) {
                throw InvalidArgument("periodic_oqo: coefficients are not conjugate-symmetric");
            }
        }
    }
    FockOperator g = FockOperator::Zero(dim, dim);
    for (const auto& [n, c] : coeffs) {
        if (std::abs(n) >= dim || c == cdouble(0.0)) {
            continue;  // phasors beyond the cutoff vanish
        }
        g += c * phasor(n, dim);
    }
    return g;
}

FockOperator cosine_oqo(Index dim)
{
    return periodic_oqo({{1, 0.5}, {-1, 0.5}}, dim);
}

FockOperator cosine_squared_oqo(Index dim)
{
    return periodic_oqo({{2, 0.25}, {0, 0.5}, {-2, 0.25}}, dim);
}

std::map<int, cdouble> phase_operator_coefficients(const PhaseOpConfig& cfg, Index dim)
{
    if (cfg.n_max < 1) {
        throw InvalidArgument("phase operator needs n_max >= 1");
    }
    if (!std::isfinite(cfg.phi0)) {
        throw InvalidArgument("phi0 must be finite");
    }
    std::map<int, cdouble> c;
    c[0] = cfg.phi0 + std::numbers::pi;
    const int top = static_cast<int>(std::min<Index>(cfg.n_max, dim - 1));
    for (int n = 1; n <= top; ++n) {
        const double damp = cfg.smoothing == Smoothing::cesaro ? 1.0 - double(n) / double(cfg.n_max + 1) : 1.0;
        const cdouble cn = damp * cdouble(0.0, 1.0 / n) * std::polar(1.0, -n * cfg.phi0);
        c[n] = cn;
        c[-n] = std::conj(cn);
    }
    return c;
}

FockOperator phase_operator(const PhaseOpConfig& cfg, Index dim)
{
    return periodic_oqo(phase_operator_coefficients(cfg, dim), dim);
}

PhaseSpectrumReport phase_spectrum_report(const PhaseOpConfig& cfg, Index dim, int bins)
{
    if (bins < 1) {
        throw InvalidArgument("histogram needs at least one bin");
    }
    const FockOperator phi_op = phase_operator(cfg, dim);
    const auto spec = hermitian_spectrum(phi_op);

    PhaseSpectrumReport rep;
    rep.config = cfg;
    rep.dim = dim;
    rep.eigenvalues = spec.eigenvalues;
    rep.eigenvectors = spec.eigenvectors;
    rep.max_residual = spec.max_residual;
    rep.hermiticity = hermiticity_residual(phi_op);
    const double lo = cfg.phi0;
    const double hi = cfg.phi0 + kTwoPi;
    rep.excess = std::max({0.0, lo - spec.eigenvalues.minCoeff(), spec.eigenvalues.maxCoeff() - hi});
    rep.histogram.assign(bins, 0);
    for (Index k = 0; k < spec.eigenvalues.size(); ++k) {
        const double t = (spec.eigenvalues(k) - lo) / (hi - lo);
        const int bin = std::clamp(static_cast<int>(std::floor(t * bins)), 0, bins - 1);
        ++rep.histogram[bin];
    }
    return rep;
}

double windowed_phase_mean(const State& rho, double phi0, Index n_points)
{
    const auto rule = trapezoid_rule<double>(n_points, phi0, phi0 + kTwoPi);
    const VectorXd pr = phase_propensity_at(rho, rule.nodes);
    CompensatedSum<double> sum(0.0);
    for (Index j = 0; j < n_points; ++j) {
        sum.add(rule.weights(j) * rule.nodes(j) * pr(j));
    }
    return sum.value();
}

}  // namespace oqo
