#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oqo/fock.hpp"
#include "oqo/special.hpp"

using namespace oqo;

namespace {

double integrate_periodic(const VectorXd& v)
{
    return periodic_quadrature<double>({v.data(), static_cast<std::size_t>(v.size())});
}

}  // namespace

TEST_CASE("ln_gamma")
{
    CHECK(ln_gamma(1.0) == 0.0);
    CHECK(ln_gamma(1.5) == doctest::Approx(std::log(std::sqrt(std::numbers::pi) / 2.0)).epsilon(1e-15));
    CHECK(ln_gamma(1.5) == doctest::Approx(-0.1207822376352452).epsilon(1e-14));
    CHECK(ln_gamma(11.0) == doctest::Approx(std::log(3628800.0)).epsilon(1e-15));
    CHECK_THROWS_AS(ln_gamma(0.0), InvalidArgument);
    CHECK_THROWS_AS(ln_gamma(-2.5), InvalidArgument);
}

TEST_CASE("gamma_ratio")
{
    CHECK(gamma_ratio(1.5, 2.0) == doctest::Approx(std::sqrt(std::numbers::pi) / 2.0).epsilon(1e-15));
    CHECK(gamma_ratio(7.3, 7.3) == 1.0);
    CHECK(gamma_ratio(101.0, 100.0) == doctest::Approx(100.0).epsilon(1e-13));
    CHECK(gamma_ratio(2.5, 0.5) == doctest::Approx(0.75).epsilon(1e-15));
    // mpmath, 30 digits
    CHECK(log_gamma_ratio(150.3, 7.2) == doctest::Approx(594.555112753648039).epsilon(1e-14));
    CHECK(log_gamma_ratio(10000.5, 10000.0) == doctest::Approx(4.60515768598809658).epsilon(1e-13));
    CHECK_THROWS_AS(gamma_ratio(0.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(gamma_ratio(1.0, -1.0), InvalidArgument);
}

TEST_CASE("gamma_ratio recurrence on random arguments")
{
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.5, 200.0);
    int tested = 0;
    while (tested < 500) {
        const double a = u(rng), b = u(rng);
        if (std::abs(log_gamma_ratio(a, b)) > 700.0 || std::abs(log_gamma_ratio(a + 1.0, b)) > 700.0) {
            continue;
        }
        ++tested;
        CHECK(std::abs(gamma_ratio(a + 1.0, b) / gamma_ratio(a, b) / a - 1.0) < 1e-12);
    }
    // log form stays accurate where the ratio itself would over- or underflow
    std::uniform_real_distribution<double> wide(0.5, 1e4);
    for (int t = 0; t < 200; ++t) {
        const double a = wide(rng), b = wide(rng);
        CHECK(std::abs(log_gamma_ratio(a + 1.0, b) - log_gamma_ratio(a, b) - std::log(a)) < 1e-9);
    }
}

TEST_CASE("hermite_mod_coeffs")
{
    const auto h0 = hermite_mod_coeffs(0, 1.7);
    CHECK(h0.degree() == 0);
    CHECK(h0.coefficients[0] == 1.0);

    const auto h1 = hermite_mod_coeffs(1, 3.0);
    CHECK(h1.degree() == 1);
    CHECK(h1.coefficients[0] == 0.0);
    CHECK(h1.coefficients[1] == 1.0);

    // n̄ = 0: x^2 + 1/2
    const auto h2 = hermite_mod_coeffs(2, 1.0);
    CHECK(h2.coefficients[0] == doctest::Approx(0.5));
    CHECK(h2.coefficients[1] == 0.0);
    CHECK(h2.coefficients[2] == 1.0);

    // x^4 + 6 v x^2 + 3 v^2 with v = s^2 / 2
    const double s = 1.9, v = s * s / 2.0;
    const auto h4 = hermite_mod_coeffs(4, s);
    CHECK(h4.coefficients[4] == 1.0);
    CHECK(h4.coefficients[2] == doctest::Approx(6.0 * v).epsilon(1e-15));
    CHECK(h4.coefficients[0] == doctest::Approx(3.0 * v * v).epsilon(1e-15));
    CHECK(h4.coefficients[1] == 0.0);
    CHECK(h4.coefficients[3] == 0.0);

    CHECK_THROWS_AS(hermite_mod_coeffs(31, 1.0), InvalidArgument);
    CHECK_THROWS_AS(hermite_mod_coeffs(3, 0.0), InvalidArgument);
    CHECK_THROWS_AS(hermite_mod_coeffs(-1, 1.0), InvalidArgument);
}

TEST_CASE("hermite_mod_coeffs against the physicists' Hermite recurrence")
{
    // ((s / 2i)^n) H_n(i x / s) evaluated through H_{n+1}(y) = 2y H_n(y) - 2n H_{n-1}(y) in complex arithmetic
    for (double s : {0.6, 1.0, 2.4}) {
        for (double x : {-1.3, 0.2, 2.1}) {
            const cdouble y(0.0, x / s);
            cdouble hm(1.0), h(2.0 * y);
            for (int n = 0; n <= 20; ++n) {
                const cdouble hn = n == 0 ? cdouble(1.0) : h;
                const cdouble ref = std::pow(cdouble(0.0, -s / 2.0), n) * hn;
                const double got = hermite_mod_coeffs(n, s)(x);
                CHECK(std::abs(got - ref.real()) <= 1e-11 * std::max(1.0, std::abs(ref)));
                CHECK(std::abs(ref.imag()) <= 1e-11 * std::max(1.0, std::abs(ref)));
                if (n >= 1) {
                    const cdouble next = 2.0 * y * h - 2.0 * double(n) * hm;
                    hm = h;
                    h = next;
                }
            }
        }
    }
}

TEST_CASE("apply_polynomial on an operator")
{
    const auto ops = build_operators(20);
    const auto poly = hermite_mod_coeffs(2, 1.0);
    const FockOperator got = apply_polynomial(poly, ops.Q);
    const FockOperator ref = ops.Q * ops.Q + 0.5 * FockOperator::Identity(20, 20);
    CHECK(max_abs(got - ref) < 1e-14);
}

TEST_CASE("confluent_M")
{
    CHECK(confluent_M(0.7, 1.3, 0.0) == 1.0);
    CHECK(confluent_M(1.0, 1.0, 1.0) == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
    // mpmath hyp1f1, 30 digits
    CHECK(confluent_M(0.5, 2.0, -1.0) == doctest::Approx(0.801456073634021765).epsilon(1e-14));
    CHECK(confluent_M(1.5, 3.0, -20.0) == doctest::Approx(0.0242525362768911037).epsilon(1e-12));
    CHECK(confluent_M(-2.5, 1.5, 7.0) == doctest::Approx(2.96883059899624772).epsilon(1e-12));
    // Kummer transform consistency: M(a,b,-x) = e^{-x} M(b-a,b,x)
    CHECK(confluent_M(0.3, 2.2, -5.0) == doctest::Approx(std::exp(-5.0) * confluent_M(1.9, 2.2, 5.0)).epsilon(1e-12));
    CHECK_THROWS_AS(confluent_M(1.0, -2.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(confluent_M(1.0, 0.0, 1.0), InvalidArgument);
}

TEST_CASE("periodic quadrature")
{
    const Index n = 64;
    const VectorXd phi = periodic_grid<double>(n, -std::numbers::pi);
    CHECK(phi(0) == -std::numbers::pi);
    CHECK(phi(n - 1) < std::numbers::pi);

    CHECK(integrate_periodic(VectorXd::Constant(n, 1.0 / (2.0 * std::numbers::pi))) ==
          doctest::Approx(1.0).epsilon(1e-15));
    CHECK(integrate_periodic(phi.array().cos().square().matrix()) == doctest::Approx(std::numbers::pi).epsilon(1e-14));

    // cos(33 phi) aliases to cos(31 phi) which averages to zero; cos(64 phi) aliases to a constant
    CHECK(std::abs(integrate_periodic((33.0 * phi.array()).cos().matrix())) < 1e-12);
    CHECK(integrate_periodic((64.0 * phi.array()).cos().matrix()) == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-12));

    for (int k = 1; k < 32; ++k) {
        CHECK(std::abs(integrate_periodic((double(k) * phi.array()).sin().matrix())) < 1e-12);
    }
    CHECK_THROWS_AS(integrate_periodic(VectorXd::Ones(3)), InvalidArgument);
}

TEST_CASE("gauss_laguerre integrates polynomials exactly")
{
    for (double alpha : {0.0, 0.5}) {
        const auto rule = gauss_laguerre<double>(128, alpha);
        CHECK(rule.nodes.size() == 128);
        for (int k = 0; k <= 12; ++k) {
            // int x^{k+alpha} e^{-x} dx = Gamma(k + alpha + 1)
            double sum = 0.0;
            for (Index i = 0; i < rule.nodes.size(); ++i) {
                sum += rule.weights(i) * std::pow(rule.nodes(i), k);
            }
            CHECK(sum == doctest::Approx(std::tgamma(k + alpha + 1.0)).epsilon(1e-11));
        }
    }
    CHECK_THROWS_AS(gauss_laguerre<double>(0), InvalidArgument);
}

TEST_CASE("trapezoid rule")
{
    const auto rule = trapezoid_rule<double>(101, 0.0, 1.0);
    CHECK(rule.weights.sum() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(rule.nodes(0) == 0.0);
    CHECK(rule.nodes(100) == doctest::Approx(1.0));
    CHECK((rule.weights.array() * rule.nodes.array().square()).sum() == doctest::Approx(1.0 / 3.0).epsilon(1e-4));
}

TEST_CASE("compensated summation")
{
    CompensatedSum<double> s(0.0);
    s.add(1.0);
    for (int i = 0; i < 1000000; ++i) {
        s.add(1e-16);
    }
    CHECK(s.value() == doctest::Approx(1.0 + 1e-10).epsilon(1e-15));
}
