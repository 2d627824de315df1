#include "pacesync/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace pacesync {

namespace {

using nlohmann::json;

double number_field(const json& j, const std::string& field) {
    if (!j.is_number()) throw ConfigError("config field '" + field + "' must be a number");
    return j.get<double>();
}

std::size_t count_field(const json& j, const std::string& field) {
    if (!j.is_number_unsigned())
        throw ConfigError("config field '" + field + "' must be a nonnegative integer");
    return j.get<std::size_t>();
}

Vec vector_field(const json& j, const std::string& field) {
    if (!j.is_array()) throw ConfigError("config field '" + field + "' must be an array");
    Vec out;
    out.reserve(j.size());
    for (const json& v : j) out.push_back(number_field(v, field));
    return out;
}

std::pair<double, double> interval_field(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2)
        throw ConfigError("config field '" + field + "' must be a [lo, hi] pair");
    return {number_field(j[0], field), number_field(j[1], field)};
}

Mat matrix_field(const json& j, const std::string& field) {
    if (!j.is_array() || j.empty())
        throw ConfigError("config field '" + field + "' must be a non-empty matrix");
    const std::size_t n = j.size();
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!j[i].is_array() || j[i].size() != n)
            throw ConfigError("config field '" + field + "' must be a square row-major matrix");
        for (std::size_t k = 0; k < n; ++k) m(i, k) = number_field(j[i][k], field);
    }
    return m;
}

} // namespace

ExperimentSpec load_experiment_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");

    static const std::set<std::string> known = {
        "n",    "coupling",     "g",           "w0",   "w",     "xi0",
        "dt",   "t_max",        "record_every", "kind", "sweep_target",
        "multipliers", "runs",  "seed",        "delta", "epsilon_override"};
    for (const auto& [key, value] : j.items())
        if (!known.count(key)) throw ConfigError("unknown config field '" + key + "'");

    ExperimentSpec spec;

    if (j.contains("kind")) {
        const std::string kind = j["kind"].is_string() ? j["kind"].get<std::string>() : "";
        if (kind == "sync_sweep")
            spec.kind = ExperimentKind::sync_sweep;
        else if (kind == "locking_sweep")
            spec.kind = ExperimentKind::locking_sweep;
        else if (kind == "trapping")
            spec.kind = ExperimentKind::trapping;
        else
            throw ConfigError("config field 'kind' must be sync_sweep, locking_sweep or trapping");
    }

    spec.n = j.contains("n") ? count_field(j["n"], "n") : 9;
    if (spec.n < 1) throw ConfigError("config field 'n' must be >= 1");

    if (j.contains("coupling")) {
        const json& c = j["coupling"];
        if (c.is_array()) {
            spec.coupling.matrix = matrix_field(c, "coupling");
            if (spec.coupling.matrix->rows() != spec.n)
                throw ConfigError("config field 'coupling' does not match n");
        } else if (c.is_object() && c.contains("random_uniform") && c.size() == 1) {
            const auto [lo, hi] = interval_field(c["random_uniform"], "coupling.random_uniform");
            if (!(lo >= 0.0 && lo <= hi))
                throw ConfigError("config field 'coupling.random_uniform' needs 0 <= lo <= hi");
            spec.coupling.lo = lo;
            spec.coupling.hi = hi;
        } else {
            throw ConfigError(
                "config field 'coupling' must be a matrix or {\"random_uniform\": [lo, hi]}");
        }
    }

    if (j.contains("g")) {
        if (j["g"].is_number())
            spec.base_g.assign(spec.n, j["g"].get<double>());
        else
            spec.base_g = vector_field(j["g"], "g");
    } else {
        spec.base_g.assign(spec.n, 1.0);
    }
    if (spec.base_g.size() != spec.n) throw ConfigError("config field 'g' does not match n");
    for (double v : spec.base_g)
        if (!(v >= 0.0)) throw ConfigError("config field 'g' entries must be nonnegative");

    spec.w0 = j.contains("w0") ? number_field(j["w0"], "w0") : 1.0;

    if (j.contains("w")) {
        const json& w = j["w"];
        if (w.is_string() && w.get<std::string>() == "identical") {
            // leave both optionals empty: every node runs at w0
        } else if (w.is_array()) {
            Vec values = vector_field(w, "w");
            if (values.size() != spec.n) throw ConfigError("config field 'w' does not match n");
            spec.natural_freqs = std::move(values);
        } else if (w.is_object() && w.contains("uniform") && w.size() == 1) {
            spec.natural_freq_interval = interval_field(w["uniform"], "w.uniform");
            if (!(spec.natural_freq_interval->first <= spec.natural_freq_interval->second))
                throw ConfigError("config field 'w.uniform' must be ordered");
        } else {
            throw ConfigError(
                "config field 'w' must be \"identical\", a vector, or {\"uniform\": [lo, hi]}");
        }
    }

    if (j.contains("xi0")) {
        const json& x = j["xi0"];
        if (x.is_array()) {
            Vec values = vector_field(x, "xi0");
            if (values.size() != spec.n) throw ConfigError("config field 'xi0' does not match n");
            for (double& v : values) {
                if (!std::isfinite(v)) throw ConfigError("config field 'xi0' must be finite");
                v = wrap_phase(v);
            }
            spec.xi0 = std::move(values);
        } else if (x.is_object() && x.contains("uniform") && x.size() == 1) {
            spec.init_interval = interval_field(x["uniform"], "xi0.uniform");
            if (!(spec.init_interval.first <= spec.init_interval.second) ||
                spec.init_interval.first < -M_PI || spec.init_interval.second > M_PI)
                throw ConfigError("config field 'xi0.uniform' must lie within [-pi, pi]");
        } else {
            throw ConfigError(
                "config field 'xi0' must be a vector or {\"uniform\": [lo, hi]}");
        }
    }

    spec.integrator.dt = j.contains("dt") ? number_field(j["dt"], "dt") : 0.01;
    spec.integrator.t_max = j.contains("t_max")
                                ? number_field(j["t_max"], "t_max")
                                : (spec.kind == ExperimentKind::trapping ? 1000.0 : 500.0);
    spec.integrator.record_every =
        j.contains("record_every") ? count_field(j["record_every"], "record_every") : 10;

    if (j.contains("sweep_target")) {
        const std::string target =
            j["sweep_target"].is_string() ? j["sweep_target"].get<std::string>() : "";
        if (target == "pacemaker")
            spec.sweep_target = SweepTarget::pacemaker;
        else if (target == "coupling")
            spec.sweep_target = SweepTarget::coupling;
        else
            throw ConfigError("config field 'sweep_target' must be pacemaker or coupling");
    }

    if (j.contains("multipliers")) {
        spec.multipliers = vector_field(j["multipliers"], "multipliers");
        if (spec.multipliers.empty())
            throw ConfigError("config field 'multipliers' must be non-empty");
        for (double m : spec.multipliers)
            if (!(m > 0.0)) throw ConfigError("config field 'multipliers' must be positive");
    }

    spec.runs = j.contains("runs") ? count_field(j["runs"], "runs") : 100;
    if (spec.runs < 1) throw ConfigError("config field 'runs' must be >= 1");

    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned())
            throw ConfigError("config field 'seed' must be a nonnegative integer");
        spec.seed = j["seed"].get<std::uint64_t>();
    }

    if (j.contains("delta")) {
        spec.delta = number_field(j["delta"], "delta");
        if (!(spec.delta > 0.0 && spec.delta < M_PI))
            throw ConfigError("config field 'delta' must lie in (0, pi)");
    }

    if (j.contains("epsilon_override")) {
        spec.epsilon_override = number_field(j["epsilon_override"], "epsilon_override");
        if (!(*spec.epsilon_override >= 0.0))
            throw ConfigError("config field 'epsilon_override' must be nonnegative");
    }

    try {
        spec.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("invalid config: ") + e.what());
    }
    return spec;
}

ExperimentSpec load_experiment_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_experiment_json(buffer.str());
}

} // namespace pacesync
