// oqo: batch front end for operational observables of a truncated oscillator.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "oqo/format.hpp"
#include "oqo/phase.hpp"
#include "oqo/qp.hpp"
#include "oqo/report.hpp"
#include "oqo/state_spec.hpp"
#include "oqo/verify.hpp"

using nlohmann::json;
using namespace oqo;

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string command;
    std::string state_text;
    std::string config_path;
    Index dim = 80;
    double nbar = 0.0;
    Index grid = 129;
    double half_width = 0.0;
    Index nphi = kDefaultPhiPoints;
    double phi0 = -std::numbers::pi;
    int nmax = -1;  // per-command default
    int max_moment = 4;
    std::string smoothing = "none";
    std::string format;
    std::string out;
    std::uint64_t seed = 7;
    Index verify_dim = 60;
    int states = 20;
    int bins = 16;
};

Index default_dim()
{
    const char* env = std::getenv("OQO_DEFAULT_DIM");
    if (env == nullptr || *env == '\0') {
        return 80;
    }
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 2) {
        throw ConfigError("OQO_DEFAULT_DIM must be an integer >= 2, got '" + std::string(env) + "'");
    }
    return v;
}

std::optional<StateSpec> resolve_state(const Options& o, bool required)
{
    if (!o.state_text.empty() && !o.config_path.empty()) {
        throw ConfigError("give either --state or --config, not both");
    }
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path);
        if (!in) {
            throw ConfigError("cannot read config file '" + o.config_path + "'");
        }
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw ConfigError("config file is not valid JSON: " + std::string(e.what()));
        }
        return state_spec_from_json(j.contains("state") ? j.at("state") : j, o.dim);
    }
    if (!o.state_text.empty()) {
        return parse_state_spec(o.state_text, o.dim);
    }
    if (required) {
        throw ConfigError(o.command + " needs --state or --config");
    }
    return std::nullopt;
}

State build_state(const StateSpec& spec)
{
    State rho = make_state(spec);
    if (!rho.faithful()) {
        throw ConfigError("state " + to_json(spec).dump() + " is not faithfully represented at dim " +
                          std::to_string(spec.dim) + " (tail mass " + format_number(rho.tail_mass()) + ")");
    }
    return rho;
}

json base_config(const Options& o, const std::optional<StateSpec>& spec)
{
    json c;
    c["tool"] = "oqo";
    c["version"] = kToolVersion;
    c["command"] = o.command;
    c["dim"] = o.dim;
    if (spec) {
        c["state"] = to_json(*spec);
    }
    return c;
}

class Output {
public:
    explicit Output(const std::string& path)
    {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) {
                throw ConfigError("cannot open output file '" + path + "'");
            }
        }
    }

    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

void emit_json(Output& out, const json& j) { out.stream() << j.dump(2) << '\n'; }

void emit_csv_config(Output& out, const json& config) { out.stream() << "# config: " << config.dump() << '\n'; }

json grid_json(const PropensityGrid& pr, const std::vector<std::string>& names)
{
    json rows = json::array();
    for (Index j = 0; j < pr.size(); ++j) {
        json r;
        for (Index c = 0; c < pr.coords(); ++c) {
            r[names[c]] = round_significant(pr.points(j, c));
        }
        r["weight"] = round_significant(pr.weights(j));
        r["pr"] = round_significant(pr.values(j));
        rows.push_back(r);
    }
    return rows;
}

QpModel qp_model(const Options& o)
{
    QpModel m;
    m.nbar = o.nbar;
    m.dim = o.dim;
    m.grid_points = o.grid;
    m.half_width = o.half_width;
    try {
        validate(m);
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    if (m.half_width == 0.0) {
        m.half_width = default_half_width(m.dim, m.nbar);
    }
    return m;
}

json qp_config(const Options& o, const std::optional<StateSpec>& spec, const QpModel& m)
{
    json c = base_config(o, spec);
    c["nbar"] = m.nbar;
    c["grid"] = m.grid_points;
    c["half_width"] = round_significant(m.half_width);
    return c;
}

int cmd_qp_propensity(const Options& o)
{
    const auto spec = resolve_state(o, true);
    const State rho = build_state(*spec);
    const QpModel m = qp_model(o);
    const auto pr = propensity(rho, qp_filter(m));
    const json config = qp_config(o, spec, m);
    Output out(o.out);
    if (o.format == "json") {
        emit_json(out, {{"config", config}, {"total", round_significant(pr.total())}, {"grid", grid_json(pr, {"q", "p"})}});
    } else {
        emit_csv_config(out, config);
        out.stream() << "q,p,weight,pr\n";
        for (Index j = 0; j < pr.size(); ++j) {
            out.stream() << format_number(pr.points(j, 0)) << ',' << format_number(pr.points(j, 1)) << ','
                         << format_number(pr.weights(j)) << ',' << format_number(pr.values(j)) << '\n';
        }
    }
    return 0;
}

int cmd_qp_moments(const Options& o)
{
    if (o.max_moment < 1 || o.max_moment > kMaxInversionOrder) {
        throw ConfigError("--max-moment must lie in 1.." + std::to_string(kMaxInversionOrder));
    }
    const auto spec = resolve_state(o, true);
    const State rho = build_state(*spec);
    const QpModel m = qp_model(o);
    const auto family = qp_filter(m);
    const auto pr = propensity(rho, family);
    const auto ops = build_operators(o.dim);

    json rows = json::array();
    for (const Axis axis : {Axis::q, Axis::p}) {
        const Index ax = static_cast<Index>(axis);
        const FockOperator& x = axis == Axis::q ? ops.Q : ops.P;
        std::vector<double> measured, direct;
        FockOperator power = FockOperator::Identity(o.dim, o.dim);
        for (int n = 1; n <= o.max_moment; ++n) {
            power = (power * x).eval();
            measured.push_back(classical_moment(pr, n, ax));
            direct.push_back(expectation(rho, power).real());
        }
        const auto recovered = intrinsic_from_operational(measured, m.nbar);
        for (int n = 1; n <= o.max_moment; ++n) {
            rows.push_back({{"axis", axis == Axis::q ? "q" : "p"},
                            {"n", n},
                            {"operational", measured[n - 1]},
                            {"oqo", expectation(rho, hermite_oqo(m, axis, n)).real()},
                            {"intrinsic_recovered", recovered[n - 1]},
                            {"intrinsic", direct[n - 1]}});
        }
    }

    json config = qp_config(o, spec, m);
    config["max_moment"] = o.max_moment;
    Output out(o.out);
    const std::vector<std::string> cols{"operational", "oqo", "intrinsic_recovered", "intrinsic"};
    if (o.format == "json") {
        for (auto& r : rows) {
            for (const auto& c : cols) {
                r[c] = round_significant(r[c].get<double>());
            }
        }
        emit_json(out, {{"config", config}, {"moments", rows}});
    } else {
        emit_csv_config(out, config);
        out.stream() << "axis,n,operational,oqo,intrinsic_recovered,intrinsic\n";
        for (const auto& r : rows) {
            out.stream() << r["axis"].get<std::string>() << ',' << r["n"].get<int>();
            for (const auto& c : cols) {
                out.stream() << ',' << format_number(r[c].get<double>());
            }
            out.stream() << '\n';
        }
    }
    return 0;
}

int cmd_qp_spreads(const Options& o)
{
    const auto spec = resolve_state(o, true);
    const State rho = build_state(*spec);
    const QpModel m = qp_model(o);
    const SpreadReport r = spreads_and_bound(rho, m);
    const json config = qp_config(o, spec, m);
    Output out(o.out);
    if (o.format == "csv") {
        emit_csv_config(out, config);
        out.stream() << "dq,dp,DQ,DP,lhs,rhs,margin,holds,equality\n";
        out.stream() << format_number(r.dq) << ',' << format_number(r.dp) << ',' << format_number(r.DQ) << ','
                     << format_number(r.DP) << ',' << format_number(r.lhs) << ',' << format_number(r.rhs) << ','
                     << format_number(r.margin) << ',' << (r.holds ? "true" : "false") << ','
                     << (r.equality ? "true" : "false") << '\n';
    } else {
        json j = to_json(r);
        j["config"] = config;
        emit_json(out, j);
    }
    return 0;
}

int cmd_phase_propensity(const Options& o)
{
    if (o.nphi < 4) {
        throw ConfigError("--nphi must be at least 4");
    }
    const auto spec = resolve_state(o, true);
    const State rho = build_state(*spec);
    const auto pr = phase_propensity(rho, o.nphi, o.phi0);
    json config = base_config(o, spec);
    config["nphi"] = o.nphi;
    config["phi0"] = round_significant(o.phi0);
    Output out(o.out);
    if (o.format == "json") {
        emit_json(out, {{"config", config}, {"total", round_significant(pr.total())}, {"grid", grid_json(pr, {"phi"})}});
    } else {
        emit_csv_config(out, config);
        out.stream() << "phi,weight,pr\n";
        for (Index j = 0; j < pr.size(); ++j) {
            out.stream() << format_number(pr.points(j, 0)) << ',' << format_number(pr.weights(j)) << ','
                         << format_number(pr.values(j)) << '\n';
        }
    }
    return 0;
}

int cmd_phasors(const Options& o)
{
    const int nmax = o.nmax < 0 ? 6 : o.nmax;
    if (nmax >= o.dim) {
        throw ConfigError("--nmax must be below --dim for phasor dumps");
    }
    const auto spec = resolve_state(o, false);
    const PhasorSet set = make_phasor_set(o.dim, nmax);
    json config = base_config(o, spec);
    config["nmax"] = nmax;
    Output out(o.out);
    if (o.format == "json") {
        json j{{"config", config}};
        if (spec) {
            const State rho = build_state(*spec);
            json ev = json::array();
            for (int n = -nmax; n <= nmax; ++n) {
                const cdouble z = expectation(rho, set[n]);
                ev.push_back({{"n", n}, {"re", round_significant(z.real())}, {"im", round_significant(z.imag())}});
            }
            j["expectations"] = ev;
        }
        json ops = json::array();
        for (int n = -nmax; n <= nmax; ++n) {
            json entries = json::array();
            for (Index r = 0; r < o.dim; ++r) {
                for (Index c = 0; c < o.dim; ++c) {
                    const cdouble z = set[n](r, c);
                    if (z != cdouble(0.0)) {
                        entries.push_back({r, c, round_significant(z.real()), round_significant(z.imag())});
                    }
                }
            }
            ops.push_back({{"n", n}, {"entries", entries}});
        }
        j["phasors"] = ops;
        emit_json(out, j);
    } else {
        emit_csv_config(out, config);
        write_phasor_csv(out.stream(), set);
    }
    return 0;
}

int cmd_phase_op(const Options& o)
{
    PhaseOpConfig cfg;
    cfg.phi0 = o.phi0;
    cfg.n_max = o.nmax < 0 ? 400 : o.nmax;
    if (cfg.n_max < 1) {
        throw ConfigError("--nmax must be at least 1");
    }
    try {
        cfg.smoothing = parse_smoothing(o.smoothing);
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    const auto spec = resolve_state(o, false);
    json config = base_config(o, spec);
    config["nmax"] = cfg.n_max;
    config["phi0"] = round_significant(cfg.phi0);
    config["smoothing"] = to_string(cfg.smoothing);
    config["bins"] = o.bins;

    Output out(o.out);
    if (o.format == "csv") {
        emit_csv_config(out, config);
        write_matrix_csv(out.stream(), phase_operator(cfg, o.dim));
        return 0;
    }
    const PhaseSpectrumReport rep = phase_spectrum_report(cfg, o.dim, o.bins);
    json j = to_json(rep);
    j["config"] = config;
    if (spec) {
        const State rho = build_state(*spec);
        j["expectation"] = round_significant(expectation(rho, phase_operator(cfg, o.dim)).real());
        j["windowed_mean"] = round_significant(windowed_phase_mean(rho, cfg.phi0));
    }
    emit_json(out, j);
    return 0;
}

int cmd_verify(const Options& o)
{
    VerifyOptions v;
    v.dim = o.verify_dim;
    v.seed = o.seed;
    v.random_states = o.states;
    std::vector<CheckResult> results;
    try {
        results = run_verification(v);
    } catch (const InvalidDimension& e) {
        throw ConfigError(e.what());
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
    Output out(o.out);
    json config = base_config(o, std::nullopt);
    config["dim"] = o.verify_dim;
    config["seed"] = o.seed;
    config["states"] = o.states;
    if (o.format == "json") {
        json checks = json::array();
        bool all = true;
        for (const auto& r : results) {
            checks.push_back({{"group", r.group},
                              {"name", r.name},
                              {"value", round_significant(r.value)},
                              {"threshold", r.threshold},
                              {"bound", r.upper ? "upper" : "lower"},
                              {"pass", r.pass}});
            all = all && r.pass;
        }
        emit_json(out, {{"config", config}, {"checks", checks}, {"pass", all}});
        return all ? 0 : 1;
    }
    out.stream() << "# config: " << config.dump() << '\n';
    return print_verification(out.stream(), results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv)
{
    Options o;
    CLI::App app{"Operational observables of a truncated oscillator: propensities, moments, phasors, phase operator"};
    app.require_subcommand(1);

    try {
        o.dim = default_dim();
    } catch (const ConfigError& e) {
        std::cerr << "oqo: " << e.what() << '\n';
        return 2;
    }

    auto add_state = [&o](CLI::App* sub) {
        sub->add_option("--state", o.state_text, "kind:params, e.g. coherent:1,0 or random_mixed:3");
        sub->add_option("--config", o.config_path, "JSON file holding the state object");
    };
    auto add_common = [&o](CLI::App* sub, const std::string& fmt) {
        sub->add_option("--dim", o.dim, "Fock space dimension (env OQO_DEFAULT_DIM)")->check(CLI::Range(2, 4000));
        sub->add_option("--out", o.out, "output file (default stdout)");
        sub->add_option("--format", o.format, "csv or json")->default_val(fmt)->check(CLI::IsMember({"csv", "json"}));
    };
    auto add_qp = [&o](CLI::App* sub) {
        sub->add_option("--nbar", o.nbar, "thermal occupation of the reference oscillator");
        sub->add_option("--grid", o.grid, "grid points per axis");
        sub->add_option("--half-width", o.half_width, "grid half-width (0 = automatic)");
    };

    auto* qpp = app.add_subcommand("qp-propensity", "joint (q, p) propensity on the quadrature grid");
    add_state(qpp);
    add_common(qpp, "csv");
    add_qp(qpp);

    auto* qpm = app.add_subcommand("qp-moments", "operational, OQO and intrinsic moments along q and p");
    add_state(qpm);
    add_common(qpm, "csv");
    add_qp(qpm);
    qpm->add_option("--max-moment", o.max_moment, "highest moment order");

    auto* qps = app.add_subcommand("qp-spreads", "operational and intrinsic spreads with the uncertainty bound");
    add_state(qps);
    add_common(qps, "json");
    add_qp(qps);

    auto* php = app.add_subcommand("phase-propensity", "phase propensity on a periodic grid");
    add_state(php);
    add_common(php, "csv");
    php->add_option("--nphi", o.nphi, "grid points over the window");
    php->add_option("--phi0", o.phi0, "window start");

    auto* phs = app.add_subcommand("phasors", "dump the phasor operators, with expectations if a state is given");
    add_state(phs);
    add_common(phs, "csv");
    phs->add_option("--nmax", o.nmax, "highest phasor order (default 6)");

    auto* pho = app.add_subcommand("phase-op", "phase operator spectrum report (json) or matrix dump (csv)");
    add_state(pho);
    add_common(pho, "json");
    pho->add_option("--nmax", o.nmax, "series truncation (default 400)");
    pho->add_option("--phi0", o.phi0, "window start");
    pho->add_option("--smoothing", o.smoothing, "none or cesaro");
    pho->add_option("--bins", o.bins, "histogram bins")->check(CLI::PositiveNumber);

    auto* ver = app.add_subcommand("verify", "run the invariant suite");
    ver->add_option("--dim", o.verify_dim, "Fock space dimension")->check(CLI::Range(32, 400));
    ver->add_option("--seed", o.seed, "seed for the random states");
    ver->add_option("--states", o.states, "number of random states")->check(CLI::Range(2, 200));
    ver->add_option("--out", o.out, "output file (default stdout)");
    ver->add_option("--format", o.format, "text or json")->default_val("text")->check(CLI::IsMember({"text", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "oqo: " << e.what() << '\n';
        return 2;
    }

    o.command = app.get_subcommands().front()->get_name();
    try {
        if (o.command == "qp-propensity") {
            return cmd_qp_propensity(o);
        }
        if (o.command == "qp-moments") {
            return cmd_qp_moments(o);
        }
        if (o.command == "qp-spreads") {
            return cmd_qp_spreads(o);
        }
        if (o.command == "phase-propensity") {
            return cmd_phase_propensity(o);
        }
        if (o.command == "phasors") {
            return cmd_phasors(o);
        }
        if (o.command == "phase-op") {
            return cmd_phase_op(o);
        }
        return cmd_verify(o);
    } catch (const ConfigError& e) {
        std::cerr << "oqo: " << e.what() << '\n';
        return 2;
    } catch (const InvalidDimension& e) {
        std::cerr << "oqo: " << e.what() << '\n';
        return 2;
    } catch (const InvalidArgument& e) {
        std::cerr << "oqo: " << e.what() << '\n';
        return 2;
    } catch (const InvalidState& e) {
        std::cerr << "oqo: " << e.what() << '\n';
        return 2;
    } catch (const CutoffUnfaithful& e) {
        std::cerr << "oqo: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "oqo: error: " << e.what() << '\n';
        return 3;
    }
}
