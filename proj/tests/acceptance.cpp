// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oqo/phase.hpp"
#include "oqo/qp.hpp"
#include "oqo/special.hpp"

using namespace oqo;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::string detail;
};

void require(Outcome& o, const std::string& what, double value, double tol, bool upper = true)
{
    const bool ok = upper ? value < tol : value > tol;
    o.pass = o.pass && ok;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s%s=%.3g%s%.0e", o.detail.empty() ? "" : "; ", what.c_str(), value,
                  upper ? "<" : ">", tol);
    o.detail += buf;
}

std::vector<State> random_set(Index dim, int count, std::uint64_t base)
{
    std::vector<State> out;
    for (int i = 0; i < count; ++i) {
        StateSpec s;
        s.kind = StateKind::random_mixed;
        s.dim = dim;
        s.seed = base + static_cast<std::uint64_t>(i);
        s.support = 6;
        s.rank = 1 + i % 6;
        out.push_back(make_state(s));
    }
    return out;
}

State named(StateKind kind, Index dim, Index n = 0, cdouble alpha = 0.0, double nbar = 0.0)
{
    StateSpec s;
    s.kind = kind;
    s.dim = dim;
    s.n = n;
    s.alpha = alpha;
    s.nbar = nbar;
    return make_state(s);
}

cdouble circular_moment(const PropensityGrid& pr, int n)
{
    VectorXd re(pr.size()), im(pr.size());
    for (Index j = 0; j < pr.size(); ++j) {
        const cdouble z = std::polar(1.0, n * pr.points(j, 0)) * pr.values(j);
        re(j) = z.real();
        im(j) = z.imag();
    }
    return {periodic_quadrature<double>({re.data(), static_cast<std::size_t>(re.size())}),
            periodic_quadrature<double>({im.data(), static_cast<std::size_t>(im.size())})};
}

constexpr Index kQpDim = 40;
constexpr Index kPhaseDim = 60;
const std::vector<double> kNbars{0.0, 0.5, 2.0};

Outcome defining_property()
{
    Outcome o;
    const auto states = random_set(kQpDim, 20, 100);
    double qp_err = 0.0;
    for (double nbar : kNbars) {
        const auto family = qp_filter({nbar, kQpDim});
        for (Index axis = 0; axis < 2; ++axis) {
            const auto ops = oqo_moments(family, 3, axis);
            for (const auto& s : states) {
                const auto pr = propensity(s, family);
                for (int n = 0; n <= 3; ++n) {
                    qp_err = std::max(qp_err, std::abs(classical_moment(pr, n, axis) - expectation(s, ops[n]).real()));
                }
            }
        }
    }
    const auto states_phi = random_set(kPhaseDim, 20, 100);
    const auto family = phase_filter(kPhaseDim);
    const auto ops = oqo_moments(family, 3);
    double ph_err = 0.0;
    for (const auto& s : states_phi) {
        const auto pr = propensity(s, family);
        for (int n = 0; n <= 3; ++n) {
            ph_err = std::max(ph_err, std::abs(classical_moment(pr, n) - expectation(s, ops[n]).real()));
        }
    }
    require(o, "qp", qp_err, 1e-7);
    require(o, "phase", ph_err, 1e-7);
    return o;
}

Outcome noise_factorization()
{
    Outcome o;
    auto states = random_set(kQpDim, 10, 200);
    states.push_back(named(StateKind::coherent, kQpDim, 0, {1.2, -0.7}));
    states.push_back(named(StateKind::fock, kQpDim, 3));
    double err = 0.0;
    for (double nbar : kNbars) {
        const QpModel model{nbar, kQpDim};
        const auto family = qp_filter(model);
        for (const auto& s : states) {
            const auto pr = propensity(s, family);
            for (int i = -2; i <= 2; ++i) {
                for (int j = -2; j <= 2; ++j) {
                    err = std::max(err, std::abs(zf_numeric(pr, i, j) - zf_closed_form(s, model, i, j)));
                }
            }
        }
    }
    require(o, "max|ZF-closed|", err, 1e-6);
    return o;
}

Outcome moment_inversion()
{
    Outcome o;
    const auto states = random_set(kQpDim, 50, 300);
    const auto ops = build_operators(kQpDim);
    double shift = 0.0, trip = 0.0;
    for (double nbar : kNbars) {
        const auto family = qp_filter({nbar, kQpDim});
        for (const auto& s : states) {
            const auto r = spreads_from_propensity(s, propensity(s, family), nbar);
            shift = std::max({shift, std::abs(r.dq * r.dq - r.DQ * r.DQ - (nbar + 0.5)),
                              std::abs(r.dp * r.dp - r.DP * r.DP - (nbar + 0.5))});
        }
        for (const auto& s : states) {
            std::vector<double> intrinsic;
            FockOperator power = FockOperator::Identity(kQpDim, kQpDim);
            for (int n = 1; n <= 6; ++n) {
                power = (power * ops.Q).eval();
                intrinsic.push_back(expectation(s, power).real());
            }
            const auto back = intrinsic_from_operational(operational_from_intrinsic(intrinsic, nbar), nbar);
            for (std::size_t k = 0; k < back.size(); ++k) {
                trip = std::max(trip, std::abs(back[k] - intrinsic[k]) / std::max(1.0, std::abs(intrinsic[k])));
            }
        }
    }
    require(o, "shift", shift, 1e-6);
    require(o, "round_trip", trip, 1e-10);
    return o;
}

Outcome uncertainty_bound()
{
    Outcome o;
    const auto states = random_set(kQpDim, 50, 400);
    double op_margin = 1e300, intr_margin = 1e300, equality = 0.0;
    for (double nbar : kNbars) {
        const QpModel model{nbar, kQpDim};
        const auto family = qp_filter(model);
        for (const auto& s : states) {
            const auto r = spreads_from_propensity(s, propensity(s, family), nbar);
            op_margin = std::min(op_margin, r.lhs - r.rhs);
            intr_margin = std::min(intr_margin, r.DQ * r.DP - 0.5);
        }
        for (cdouble alpha : {cdouble(0.0), cdouble(1.0, 0.0), cdouble(-0.8, 1.5)}) {
            const auto r = spreads_and_bound(named(StateKind::coherent, kQpDim, 0, alpha), model);
            equality = std::max(equality, std::abs(r.lhs - r.rhs));
        }
    }
    require(o, "min(dq*dp-(nbar+1))", op_margin, -1e-6, false);
    require(o, "coherent|lhs-rhs|", equality, 1e-6);
    require(o, "min(DQ*DP-1/2)", intr_margin, -1e-8, false);
    return o;
}

Outcome phasor_forms()
{
    Outcome o;
    const Index block = low_block(kPhaseDim);
    double err = 0.0;
    for (int n = 0; n <= 6; ++n) {
        err = std::max(err, max_abs((phasor(n, kPhaseDim) - phasor_hypergeometric(n, kPhaseDim)).topLeftCorner(block, block)));
    }
    require(o, "entrywise", err, 1e-9);
    return o;
}

Outcome phasor_defining()
{
    Outcome o;
    const auto states = random_set(kPhaseDim, 20, 500);
    const VectorXd phi = periodic_grid<double>(64, -std::numbers::pi);
    double def = 0.0, radial = 0.0;
    for (const auto& s : states) {
        const auto pr = phase_propensity(s);
        for (int n = -6; n <= 6; ++n) {
            def = std::max(def, std::abs(circular_moment(pr, n) - expectation(s, phasor(n, kPhaseDim))));
        }
        radial = std::max(radial, (phase_propensity_at(s, phi) - phase_propensity_radial_quadrature(s, phi)).cwiseAbs().maxCoeff());
    }
    require(o, "defining", def, 1e-8);
    require(o, "radial_oracle", radial, 1e-7);
    return o;
}

Outcome phase_operator_checks()
{
    Outcome o;
    PhaseOpConfig cfg;
    cfg.n_max = 400;
    const FockOperator phi_op = phase_operator(cfg, kPhaseDim);
    require(o, "hermiticity", hermiticity_residual(phi_op), 1e-10);
    const State coh = named(StateKind::coherent, kPhaseDim, 0, 2.0);
    const double mean = windowed_phase_mean(coh, cfg.phi0);
    require(o, "coherent|<Phi>-mean|", std::abs(expectation(coh, phi_op).real() - mean), 5e-3);
    const State vac = named(StateKind::fock, kPhaseDim, 0);
    require(o, "vacuum", std::abs(expectation(vac, phi_op).real() - (cfg.phi0 + std::numbers::pi)), 1e-12);
    return o;
}

Outcome spectral_window()
{
    Outcome o;
    PhaseOpConfig cfg;
    cfg.n_max = 400;
    cfg.smoothing = Smoothing::cesaro;
    const auto t0 = std::chrono::steady_clock::now();
    const auto rep = phase_spectrum_report(cfg, kPhaseDim);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    require(o, "excess", rep.excess, 1e-6);
    require(o, "residual", rep.max_residual, 1e-9);
    require(o, "seconds", secs, 60.0);
    return o;
}

Outcome propensity_sanity()
{
    Outcome o;
    std::vector<State> states = random_set(kQpDim, 10, 600);
    states.push_back(named(StateKind::fock, kQpDim, 0));
    states.push_back(named(StateKind::fock, kQpDim, 5));
    states.push_back(named(StateKind::coherent, kQpDim, 0, {1.0, 1.0}));
    states.push_back(named(StateKind::thermal, kQpDim, 0, 0.0, 0.7));
    states.push_back(named(StateKind::displaced_thermal, kQpDim, 0, {0.5, -1.0}, 0.4));
    double norm = 0.0, neg = 0.0;
    auto track = [&](const PropensityGrid& pr) {
        norm = std::max(norm, std::abs(pr.total() - 1.0));
        neg = std::min(neg, pr.values.minCoeff());
    };
    for (double nbar : kNbars) {
        const auto family = qp_filter({nbar, kQpDim});
        for (const auto& s : states) {
            track(propensity(s, family));
        }
    }
    for (const auto& s : states) {
        track(phase_propensity(s));
    }
    double flat = 0.0;
    for (Index n : {0, 1, 2, 7, 20}) {
        const auto pr = phase_propensity(named(StateKind::fock, kPhaseDim, n));
        track(pr);
        flat = std::max(flat, (pr.values.array() - 1.0 / kTwoPi).abs().maxCoeff());
    }
    require(o, "normalization", norm, 1e-6);
    require(o, "min_pr", neg, -1e-12, false);
    require(o, "fock_flat", flat, 1e-10);
    return o;
}

Outcome non_factorization()
{
    Outcome o;
    const Index d = 40;
    const FockOperator c1 = cosine_oqo(d);
    require(o, "max|C2-C1^2|", max_abs(cosine_squared_oqo(d) - c1 * c1), 0.01, false);
    return o;
}

}  // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"oqo defining property", defining_property},
        {"noise factorization", noise_factorization},
        {"moment inversion", moment_inversion},
        {"operational uncertainty bound", uncertainty_bound},
        {"phasor form equivalence", phasor_forms},
        {"phasor defining property", phasor_defining},
        {"phase operator", phase_operator_checks},
        {"spectral window", spectral_window},
        {"propensity sanity", propensity_sanity},
        {"non-factorization", non_factorization},
    };
    int failed = 0;
    int index = 0;
    for (const auto& [name, run] : criteria) {
        ++index;
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            o = run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s [%2d] %-30s %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", index, name.c_str(), o.detail.c_str(), secs);
        failed += o.pass ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
