#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hyperwave/asymptotics.hpp"
#include "hyperwave/cli/config.hpp"
#include "hyperwave/field.hpp"
#include "hyperwave/profile.hpp"
#include "hyperwave/regimes.hpp"
#include "hyperwave/selfsimilar.hpp"
#include "hyperwave/validate.hpp"

namespace hyperwave::cli {

// 17 significant digits: parsing the text gives back the same double.
inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Non-finite values become JSON null.
inline nlohmann::json num(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

inline void write_profile_csv(std::ostream& os, const ProfileTrajectory& tr) {
    os << "a,s,s_a,sigma,energy\n";
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const ProfileState st = tr.knot(i);
        os << fmt(st.a) << ',' << fmt(st.s) << ',' << fmt(st.s_a) << ',' << fmt(st.sigma) << ','
           << fmt(energy(tr.surface(), tr.params(), st)) << '\n';
    }
}

inline void write_selfsim_csv(std::ostream& os, const SelfSimilarTrajectory& tr) {
    os << "r,s,s_r,sigma,H_residual\n";
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const auto st = tr.knot(i);
        os << fmt(st.r) << ',' << fmt(st.s) << ',' << fmt(st.s_r) << ',' << fmt(st.sigma) << ','
           << fmt(tr.monitor()[i]) << '\n';
    }
}

inline void write_field_csv(std::ostream& os, const FieldGrid& g) {
    os << "t,x,y,u0,u1,u2,phi,cone\n";
    for (const auto& n : g.nodes) {
        os << fmt(g.t) << ',' << fmt(n.x) << ',' << fmt(n.y) << ',' << fmt(n.u[0]) << ',' << fmt(n.u[1]) << ','
           << fmt(n.u[2]) << ',' << (n.log_singular ? std::string("LOG_SINGULAR") : fmt(n.phi)) << ','
           << to_string(n.cone) << '\n';
    }
}

inline std::vector<ProfileRow> read_profile_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("trajectory file is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "a,s,s_a,sigma,energy") throw ConfigError("unexpected trajectory header '" + line + "'");
    std::vector<ProfileRow> rows;
    long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> vals;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) vals.push_back(detail::parse_number("line " + std::to_string(lineno), cell));
        if (vals.size() != 5) throw ConfigError("line " + std::to_string(lineno) + " does not have 5 columns");
        rows.push_back({vals[0], vals[1], vals[2], vals[3], vals[4]});
    }
    return rows;
}

inline nlohmann::json to_json(const RegimeReport& r) {
    nlohmann::json j{{"case", to_string(r.regime)}, {"kappa", num(r.kappa)}};
    j["r0"] = r.r0 ? num(*r.r0) : nlohmann::json(nullptr);
    j["cos_gamma_plus"] = r.cos_gamma_plus ? num(*r.cos_gamma_plus) : nlohmann::json(nullptr);
    if (r.jacobian_eigenvalues) {
        auto arr = nlohmann::json::array();
        for (double v : *r.jacobian_eigenvalues) arr.push_back(num(v));
        j["jacobian_eigenvalues"] = arr;
    } else {
        j["jacobian_eigenvalues"] = nullptr;
    }
    j["monodromy_lambda"] = r.monodromy_lambda ? num(*r.monodromy_lambda) : nlohmann::json(nullptr);
    return j;
}

inline nlohmann::json to_json(const AsymptoticFit& f) {
    return {{"scenario", to_string(f.scenario)},
            {"E_inf", num(f.E_inf)},
            {"theta0", num(f.theta0)},
            {"freq", num(f.freq)},
            {"log_drift", num(f.log_drift)},
            {"rate_exponent", num(f.rate_exponent)},
            {"window", {num(f.window.first), num(f.window.second)}}};
}

inline nlohmann::json to_json(const CompatibilityReport& r) {
    return {{"phi1_plus", num(r.phi1_plus)},
            {"phi1_minus", num(r.phi1_minus)},
            {"phi2_plus", num(r.phi2_plus)},
            {"phi2_minus", num(r.phi2_minus)},
            {"jump_phi1", num(r.jump_phi1)},
            {"jump_phi2", num(r.jump_phi2)},
            {"c1", num(r.c1)},
            {"c2", num(r.c2)},
            {"c3", num(r.c3)},
            {"c4", num(r.c4)},
            {"u_xi_decay_exponent", num(r.u_xi_decay_exponent)},
            {"zero_sum", num(r.zero_sum)},
            {"continuity", num(r.continuity)},
            {"verdict_continuity", to_string(r.verdict_continuity)},
            {"verdict_zero_sum", to_string(r.verdict_zero_sum)},
            {"verdict_vanishing", to_string(r.verdict_vanishing)},
            {"verdict_regularity", to_string(r.verdict_regularity)},
            {"overall", to_string(r.overall)}};
}

inline nlohmann::json to_json(const RowValidation& v) {
    auto checks = nlohmann::json::array();
    for (const auto& c : v.checks) {
        checks.push_back({{"name", c.name}, {"passed", c.passed}, {"worst", num(c.worst)}, {"first_bad_row", c.first_bad_row}});
    }
    const auto* bad = v.first_failure();
    return {{"ok", v.ok}, {"checks", checks}, {"failing", bad ? nlohmann::json(bad->name) : nlohmann::json(nullptr)}};
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << text;
    if (!out) throw ConfigError("write failed for '" + path + "'");
}

}  // namespace hyperwave::cli
