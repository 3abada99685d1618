#include "oqo/state_spec.hpp"

#include <charconv>
#include <cstdlib>
#include <sstream>
#include <vector>

namespace oqo {

namespace {

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) {
        out.push_back(cur);
    }
    if (!s.empty() && s.back() == sep) {
        out.emplace_back();
    }
    return out;
}

double to_double(const std::string& s, const std::string& what)
{
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
        throw InvalidArgument("bad number '" + s + "' for " + what);
    }
    return v;
}

long long to_integer(const std::string& s, const std::string& what)
{
    long long v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw InvalidArgument("bad integer '" + s + "' for " + what);
    }
    return v;
}

void expect_count(const std::vector<std::string>& p, std::size_t lo, std::size_t hi, const std::string& kind)
{
    if (p.size() < lo || p.size() > hi) {
        throw InvalidArgument("state '" + kind + "' takes " + std::to_string(lo) +
                              (lo == hi ? "" : "-" + std::to_string(hi)) + " parameters");
    }
}

}  // namespace

std::string to_string(StateKind kind)
{
    switch (kind) {
    case StateKind::fock:
        return "fock";
    case StateKind::coherent:
        return "coherent";
    case StateKind::thermal:
        return "thermal";
    case StateKind::displaced_thermal:
        return "displaced_thermal";
    case StateKind::random_mixed:
        return "random_mixed";
    }
    return "unknown";
}

StateKind parse_state_kind(const std::string& s)
{
    for (auto k : {StateKind::fock, StateKind::coherent, StateKind::thermal, StateKind::displaced_thermal,
                   StateKind::random_mixed}) {
        if (to_string(k) == s) {
            return k;
        }
    }
    throw InvalidArgument("unknown state kind '" + s + "'");
}

StateSpec parse_state_spec(const std::string& text, Index dim)
{
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw InvalidArgument("state spec '" + text + "' must look like kind:params");
    }
    StateSpec spec;
    spec.dim = dim;
    spec.kind = parse_state_kind(text.substr(0, colon));
    const auto p = split(text.substr(colon + 1), ',');
    const std::string kind = to_string(spec.kind);
    switch (spec.kind) {
    case StateKind::fock:
        expect_count(p, 1, 1, kind);
        spec.n = static_cast<Index>(to_integer(p[0], "fock level"));
        break;
    case StateKind::coherent:
        expect_count(p, 1, 2, kind);
        spec.alpha = {to_double(p[0], "Re alpha"), p.size() > 1 ? to_double(p[1], "Im alpha") : 0.0};
        break;
    case StateKind::thermal:
        expect_count(p, 1, 1, kind);
        spec.nbar = to_double(p[0], "nbar");
        break;
    case StateKind::displaced_thermal:
        expect_count(p, 2, 3, kind);
        spec.nbar = to_double(p[0], "nbar");
        spec.alpha = {to_double(p[1], "Re alpha"), p.size() > 2 ? to_double(p[2], "Im alpha") : 0.0};
        break;
    case StateKind::random_mixed: {
        expect_count(p, 1, 3, kind);
        const long long seed = to_integer(p[0], "seed");
        if (seed < 0) {
            throw InvalidArgument("seed must be nonnegative");
        }
        spec.seed = static_cast<std::uint64_t>(seed);
        if (p.size() > 1) {
            spec.support = static_cast<Index>(to_integer(p[1], "support"));
        }
        if (p.size() > 2) {
            spec.rank = static_cast<Index>(to_integer(p[2], "rank"));
        }
        break;
    }
    }
    return spec;
}

StateSpec state_spec_from_json(const nlohmann::json& j, Index dim)
{
    try {
        StateSpec spec;
        spec.dim = dim;
        spec.kind = parse_state_kind(j.at("kind").get<std::string>());
        if (j.contains("n")) {
            spec.n = j.at("n").get<Index>();
        }
        if (j.contains("alpha")) {
            const auto& a = j.at("alpha");
            spec.alpha = a.is_array() ? std::complex<double>(a.at(0).get<double>(), a.size() > 1 ? a.at(1).get<double>() : 0.0)
                                      : std::complex<double>(a.get<double>(), 0.0);
        }
        if (j.contains("nbar")) {
            spec.nbar = j.at("nbar").get<double>();
        }
        if (j.contains("seed")) {
            spec.seed = j.at("seed").get<std::uint64_t>();
        }
        if (j.contains("support")) {
            spec.support = j.at("support").get<Index>();
        }
        if (j.contains("rank")) {
            spec.rank = j.at("rank").get<Index>();
        }
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("bad state object: ") + e.what());
    }
}

nlohmann::json to_json(const StateSpec& spec)
{
    nlohmann::json j;
    j["kind"] = to_string(spec.kind);
    switch (spec.kind) {
    case StateKind::fock:
        j["n"] = spec.n;
        break;
    case StateKind::coherent:
        j["alpha"] = {spec.alpha.real(), spec.alpha.imag()};
        break;
    case StateKind::thermal:
        j["nbar"] = spec.nbar;
        break;
    case StateKind::displaced_thermal:
        j["nbar"] = spec.nbar;
        j["alpha"] = {spec.alpha.real(), spec.alpha.imag()};
        break;
    case StateKind::random_mixed:
        j["seed"] = spec.seed;
        j["support"] = spec.support;
        j["rank"] = spec.rank;
        break;
    }
    return j;
}

}  // namespace oqo
