#pragma once

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "hyperwave/field.hpp"
#include "hyperwave/odeint.hpp"
#include "hyperwave/params.hpp"
#include "hyperwave/seed.hpp"
#include "hyperwave/surface.hpp"

namespace hyperwave::cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GridConfig {
    double xmin = -10.0, xmax = 10.0, ymin = -10.0, ymax = 10.0;
    long nx = 512, ny = 512;
    double t = 0.0;
};

struct RunConfig {
    std::string target = "s2";
    double mu = -1.0, k = 1.0, c = 1.0, b = -3.0;
    double q0 = 0.1, a_seed = 1e-6;
    double a_max = 1000.0, r_max = 100.0;
    double rtol = 1e-10, atol = 1e-12;
    GridConfig grid;
    std::string mode = "solve";

    WaveParameters params() const { return {mu, k, c, b}; }
    SeedSpec seed() const { return {q0, a_seed, 1e-8}; }
    SurfaceProfile surface() const { return target == "h2" ? SurfaceProfile::pseudo_sphere() : SurfaceProfile::sphere(); }

    IntegrationConfig integration() const {
        IntegrationConfig cfg;
        cfg.rtol = rtol;
        cfg.atol = atol;
        return cfg;
    }

    GridSpec grid_spec() const {
        GridSpec g;
        g.xmin = grid.xmin;
        g.xmax = grid.xmax;
        g.ymin = grid.ymin;
        g.ymax = grid.ymax;
        g.nx = static_cast<std::size_t>(grid.nx);
        g.ny = static_cast<std::size_t>(grid.ny);
        return g;
    }
};

inline bool valid_mode(const std::string& m) {
    return m == "solve" || m == "selfsim" || m == "asym" || m == "field" || m == "classify" || m == "validate";
}

inline void validate(const RunConfig& rc) {
    if (rc.target != "s2" && rc.target != "h2") throw ConfigError("target must be s2 or h2");
    if (!valid_mode(rc.mode)) throw ConfigError("unknown mode '" + rc.mode + "'");
    const std::map<std::string, double> nums{{"mu", rc.mu},         {"k", rc.k},
                                             {"c", rc.c},           {"b", rc.b},
                                             {"q0", rc.q0},         {"a_seed", rc.a_seed},
                                             {"a_max", rc.a_max},   {"r_max", rc.r_max},
                                             {"rtol", rc.rtol},     {"atol", rc.atol},
                                             {"grid.xmin", rc.grid.xmin}, {"grid.xmax", rc.grid.xmax},
                                             {"grid.ymin", rc.grid.ymin}, {"grid.ymax", rc.grid.ymax},
                                             {"grid.t", rc.grid.t}};
    for (const auto& [key, v] : nums) {
        if (!std::isfinite(v)) throw ConfigError("field '" + key + "' is not finite");
    }
    if (rc.grid.nx < 2 || rc.grid.ny < 2) throw ConfigError("grid counts must be at least 2");
    if (!(rc.rtol > 0.0) || !(rc.atol > 0.0)) throw ConfigError("tolerances must be positive");
    if (!(rc.a_seed > 0.0)) throw ConfigError("a_seed must be positive");
}

namespace detail {

inline double parse_number(const std::string& key, const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ConfigError("field '" + key + "' is not a number: '" + text + "'");
    }
    if (used != text.size()) throw ConfigError("field '" + key + "' has trailing characters: '" + text + "'");
    return v;
}

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace detail

// Assigns one field from its textual value. Grid fields use dotted keys.
inline void set_field(RunConfig& rc, const std::string& key, const std::string& value) {
    auto num = [&] { return detail::parse_number(key, value); };
    auto count = [&] {
        const double v = num();
        if (v != std::floor(v)) throw ConfigError("field '" + key + "' must be an integer");
        return static_cast<long>(v);
    };
    if (key == "target") rc.target = value;
    else if (key == "mode") rc.mode = value;
    else if (key == "mu") rc.mu = num();
    else if (key == "k") rc.k = num();
    else if (key == "c") rc.c = num();
    else if (key == "b") rc.b = num();
    else if (key == "q0") rc.q0 = num();
    else if (key == "a_seed") rc.a_seed = num();
    else if (key == "a_max") rc.a_max = num();
    else if (key == "r_max") rc.r_max = num();
    else if (key == "rtol") rc.rtol = num();
    else if (key == "atol") rc.atol = num();
    else if (key == "grid.xmin") rc.grid.xmin = num();
    else if (key == "grid.xmax") rc.grid.xmax = num();
    else if (key == "grid.ymin") rc.grid.ymin = num();
    else if (key == "grid.ymax") rc.grid.ymax = num();
    else if (key == "grid.nx") rc.grid.nx = count();
    else if (key == "grid.ny") rc.grid.ny = count();
    else if (key == "grid.t") rc.grid.t = num();
    else throw ConfigError("unknown config key '" + key + "'");
}

inline void apply_json(RunConfig& rc, const nlohmann::json& j, const std::string& prefix = "") {
    if (!j.is_object()) throw ConfigError("config JSON must be an object");
    for (const auto& [key, v] : j.items()) {
        const std::string full = prefix + key;
        if (full == "grid" && v.is_object()) {
            apply_json(rc, v, "grid.");
        } else if (v.is_string()) {
            set_field(rc, full, v.get<std::string>());
        } else if (v.is_number()) {
            std::ostringstream os;
            os.precision(17);
            os << v.get<double>();
            set_field(rc, full, os.str());
        } else {
            throw ConfigError("config key '" + full + "' has an unsupported value type");
        }
    }
}

// Flat key=value lines (# starts a comment) or a JSON object.
inline void apply_text(RunConfig& rc, const std::string& text) {
    const std::string body = detail::trim(text);
    if (!body.empty() && body.front() == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(body);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("config JSON does not parse: ") + e.what());
        }
        apply_json(rc, j);
        return;
    }
    std::istringstream in(body);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + " lacks '='");
        set_field(rc, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
    }
}

inline void apply_file(RunConfig& rc, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    apply_text(rc, ss.str());
}

// HYPERWAVE_TOLERANCE_SCALE multiplies both tolerances.
inline void apply_environment(RunConfig& rc) {
    const char* env = std::getenv("HYPERWAVE_TOLERANCE_SCALE");
    if (env == nullptr || *env == '\0') return;
    const double f = detail::parse_number("HYPERWAVE_TOLERANCE_SCALE", env);
    if (!(f > 0.0) || !std::isfinite(f)) throw ConfigError("HYPERWAVE_TOLERANCE_SCALE must be positive");
    rc.rtol *= f;
    rc.atol *= f;
}

inline nlohmann::json to_json(const RunConfig& rc) {
    return nlohmann::json{{"target", rc.target}, {"mu", rc.mu},     {"k", rc.k},         {"c", rc.c},
                          {"b", rc.b},           {"q0", rc.q0},     {"a_seed", rc.a_seed}, {"a_max", rc.a_max},
                          {"r_max", rc.r_max},   {"rtol", rc.rtol}, {"atol", rc.atol},   {"mode", rc.mode},
                          {"grid",
                           {{"xmin", rc.grid.xmin},
                            {"xmax", rc.grid.xmax},
                            {"ymin", rc.grid.ymin},
                            {"ymax", rc.grid.ymax},
                            {"nx", rc.grid.nx},
                            {"ny", rc.grid.ny},
                            {"t", rc.grid.t}}}};
}

}  // namespace hyperwave::cli
