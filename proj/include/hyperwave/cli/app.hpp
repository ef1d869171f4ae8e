#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hyperwave/asymptotics.hpp"
#include "hyperwave/cli/config.hpp"
#include "hyperwave/cli/io.hpp"
#include "hyperwave/errors.hpp"
#include "hyperwave/field.hpp"
#include "hyperwave/profile.hpp"
#include "hyperwave/regimes.hpp"
#include "hyperwave/selfsimilar.hpp"
#include "hyperwave/sweep.hpp"
#include "hyperwave/validate.hpp"

namespace hyperwave::cli {

enum ExitCode : int { kOk = 0, kConfig = 2, kIntegration = 3, kUsage = 64 };

// Everything one subcommand invocation needs besides the resolved config.
struct Request {
    std::string command;
    std::string config_path, out_path, summary_path, report_path, in_path;
    std::vector<std::pair<std::string, std::string>> overrides;
    std::string sweep;
    unsigned jobs = 1;
    std::optional<double> window_lo, window_hi;
    bool selfsim_field = false;
};

// Raised when validation finds a bad row; carries the summary to emit.
class ValidationFailure : public std::runtime_error {
public:
    ValidationFailure(const std::string& what, nlohmann::json summary)
        : std::runtime_error(what), summary(std::move(summary)) {}
    nlohmann::json summary;
};

// Result of one subcommand: JSON summary plus optional CSV and report text.
struct Output {
    nlohmann::json summary;
    std::string csv;
    std::optional<nlohmann::json> report;
};

namespace detail {

inline RunConfig resolve(const Request& rq) {
    RunConfig rc;
    if (!rq.config_path.empty()) apply_file(rc, rq.config_path);
    for (const auto& [key, value] : rq.overrides) set_field(rc, key, value);
    apply_environment(rc);
    rc.mode = rq.command;
    validate(rc);
    return rc;
}

inline double field_extent(const RunConfig& rc, bool selfsim) {
    const auto& g = rc.grid;
    double r = std::max({std::abs(g.xmin), std::abs(g.xmax), std::abs(g.ymin), std::abs(g.ymax), 2.0});
    if (selfsim) {
        if (!(g.t > 0.0)) throw ConfigError("self-similar field needs grid.t > 0");
        r /= std::sqrt(g.t);
    }
    return 1.01 * r + 1.0;
}

inline Output run_classify(const RunConfig& rc) {
    nlohmann::json j = to_json(classify(rc.params()));
    j["config"] = to_json(rc);
    return {j, {}, std::nullopt};
}

inline nlohmann::json profile_summary(const RunConfig& rc, const ProfileTrajectory& tr) {
    const auto& res = tr.residuals();
    return {{"kappa", num(tr.kappa())},
            {"termination", to_string(tr.termination())},
            {"event", tr.event_name()},
            {"a_min", num(tr.a_min())},
            {"a_max", num(tr.a_max())},
            {"knots", tr.size()},
            {"residuals",
             {{"sigma_identity", num(res.sigma_identity)},
              {"energy_defect", num(res.energy_defect)},
              {"pole_distance", num(res.pole_distance)}}},
            {"config", to_json(rc)}};
}

inline Output run_solve(const RunConfig& rc, bool want_csv) {
    const auto tr = solve_profile(rc.surface(), rc.params(), rc.seed(), rc.a_max, rc.integration());
    Output o{profile_summary(rc, tr), {}, std::nullopt};
    if (want_csv) {
        std::ostringstream os;
        write_profile_csv(os, tr);
        o.csv = os.str();
    }
    return o;
}

inline Output run_asym(const RunConfig& rc, const Request& rq, bool want_csv) {
    ProfileOptions opt;
    opt.exploratory = true;
    const auto tr = solve_profile(rc.surface(), rc.params(), rc.seed(), rc.a_max, rc.integration(), opt);
    const std::pair<double, double> window{rq.window_lo.value_or(0.2 * rc.a_max), rq.window_hi.value_or(rc.a_max)};
    if (!(window.first < window.second)) throw ConfigError("asymptotic window must satisfy lo < hi");

    const TailScenario scenario = classify_tail(tr);
    nlohmann::json fit;
    if (scenario == TailScenario::Unbounded || tr.trivial()) {
        AsymptoticFit f;
        f.scenario = scenario;
        f.window = window;
        fit = to_json(f);
    } else if (rc.mu < 0.0) {
        fit = to_json(fit_decay_to_center(tr, window));
    } else if (rc.mu > 0.0 && rc.surface().compact()) {
        fit = to_json(fit_approach_to_pole(tr, window));
    } else {
        AsymptoticFit f;
        f.window = window;
        fit = to_json(f);
    }
    fit["config"] = to_json(rc);
    fit["termination"] = to_string(tr.termination());
    Output o{fit, {}, std::nullopt};
    if (want_csv) {
        std::ostringstream os;
        write_profile_csv(os, tr);
        o.csv = os.str();
    }
    return o;
}

inline Output run_selfsim(const RunConfig& rc, bool want_csv) {
    const auto sf = rc.surface();
    const auto p = rc.params();
    require_case_one(p);
    const auto tr = solve_selfsimilar(sf, p, rc.seed(), rc.r_max, rc.integration());
    const auto est = estimate_s_star(tr);
    nlohmann::json j{{"s_star", num(est.s_star)},
                     {"rate", num(est.rate)},
                     {"converged", est.converged},
                     {"within_bounds", est.within_bounds},
                     {"s_one", num(est.s_one)},
                     {"H_invariant", num(check_H_invariant(tr))},
                     {"termination", to_string(tr.termination())},
                     {"config", to_json(rc)}};
    j["interior_condition"] = sf.compact() ? nlohmann::json(interior_star_condition(sf, p)) : nlohmann::json(nullptr);
    Output o{j, {}, std::nullopt};
    if (want_csv) {
        std::ostringstream os;
        write_selfsim_csv(os, tr);
        o.csv = os.str();
    }
    return o;
}

inline Output run_field(const RunConfig& rc, const Request& rq, bool want_csv) {
    const bool ss = rq.selfsim_field;
    const auto fs = make_field_sampler(rc.surface(), rc.params(), rc.seed(), field_extent(rc, ss), ss, rc.integration());
    const auto grid = sample_field(fs, rc.grid.t, rc.grid_spec(), std::max(1u, rq.jobs));
    std::size_t cross = 0;
    for (const auto& n : grid.nodes) cross += n.log_singular ? 1 : 0;
    const auto rep = compatibility_report(fs, rc.grid.t);
    nlohmann::json j{{"kappa", num(fs.kappa())},
                     {"selfsimilar", ss},
                     {"nodes", grid.nodes.size()},
                     {"cross_nodes", cross},
                     {"overall", to_string(rep.overall)},
                     {"config", to_json(rc)}};
    Output o{j, {}, to_json(rep)};
    if (want_csv) {
        std::ostringstream os;
        write_field_csv(os, grid);
        o.csv = os.str();
    }
    return o;
}

inline Output run_validate(const RunConfig& rc, const Request& rq) {
    if (rq.in_path.empty()) throw ConfigError("validate needs --in");
    std::ifstream in(rq.in_path);
    if (!in) throw ConfigError("cannot read '" + rq.in_path + "'");
    const auto rows = read_profile_csv(in);
    const auto v = validate_rows(rc.surface(), rc.params(), rc.seed(), rc.integration(), rows);
    nlohmann::json j = to_json(v);
    j["rows"] = rows.size();
    j["config"] = to_json(rc);
    if (!v.ok) {
        const auto* bad = v.first_failure();
        throw ValidationFailure("invariant '" + bad->name + "' fails at data row " + std::to_string(bad->first_bad_row), j);
    }
    return {j, {}, std::nullopt};
}

inline Output dispatch(const RunConfig& rc, const Request& rq, bool want_csv) {
    if (rq.command == "classify") return run_classify(rc);
    if (rq.command == "solve") return run_solve(rc, want_csv);
    if (rq.command == "asym") return run_asym(rc, rq, want_csv);
    if (rq.command == "selfsim") return run_selfsim(rc, want_csv);
    if (rq.command == "field") return run_field(rc, rq, want_csv);
    return run_validate(rc, rq);
}

// Maps a failure to its exit code and message.
inline std::pair<int, std::string> classify_error(const std::exception_ptr& ep) {
    try {
        std::rethrow_exception(ep);
    } catch (const ValidationFailure& e) {
        return {kIntegration, std::string("validation failed: ") + e.what()};
    } catch (const IntegrationError& e) {
        return {kIntegration, std::string("integration failed: ") + e.what()};
    } catch (const ConfigError& e) {
        return {kConfig, std::string("configuration error: ") + e.what()};
    } catch (const RegimeError& e) {
        return {kConfig, std::string("regime error: ") + e.what()};
    } catch (const DomainError& e) {
        return {kConfig, std::string("domain error: ") + e.what()};
    } catch (const std::invalid_argument& e) {
        return {kConfig, std::string("invalid argument: ") + e.what()};
    } catch (const std::exception& e) {
        return {kIntegration, std::string("error: ") + e.what()};
    }
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

inline void emit_summary(const Request& rq, const nlohmann::json& j, std::ostream& out) {
    const std::string text = j.dump(2) + "\n";
    if (rq.summary_path.empty()) out << text;
    else write_text(rq.summary_path, text);
}

inline int execute(const Request& rq, std::ostream& out, std::ostream& err) {
    try {
        const RunConfig base = resolve(rq);
        if (!rq.sweep.empty()) {
            if (!rq.out_path.empty() || !rq.report_path.empty()) throw ConfigError("--sweep writes summaries only");
            const auto eq = rq.sweep.find('=');
            if (eq == std::string::npos) throw ConfigError("--sweep expects key=v1,v2,...");
            const std::string key = trim(rq.sweep.substr(0, eq));
            std::vector<RunConfig> items;
            for (const auto& v : split(rq.sweep.substr(eq + 1), ',')) {
                RunConfig rc = base;
                set_field(rc, key, v);
                validate(rc);
                items.push_back(rc);
            }
            if (items.empty()) throw ConfigError("--sweep has no values");
            Request inner = rq;
            inner.jobs = 1;
            struct Item {
                nlohmann::json json;
                int code = kOk;
                std::string message;
            };
            const auto results = run_sweep(items, std::max(1u, rq.jobs), [&](const RunConfig& rc) {
                try {
                    return Item{dispatch(rc, inner, false).summary, kOk, {}};
                } catch (...) {
                    auto [code, msg] = classify_error(std::current_exception());
                    return Item{{{"error", msg}, {"exit_code", code}, {"config", to_json(rc)}}, code, msg};
                }
            });
            auto arr = nlohmann::json::array();
            int code = kOk;
            for (const auto& r : results) {
                arr.push_back(r.json);
                if (code == kOk && r.code != kOk) {
                    code = r.code;
                    err << r.message << '\n';
                }
            }
            emit_summary(rq, arr, out);
            return code;
        }

        const Output o = dispatch(base, rq, !rq.out_path.empty());
        if (!rq.out_path.empty()) write_text(rq.out_path, o.csv);
        if (!rq.report_path.empty() && o.report) write_text(rq.report_path, o.report->dump(2) + "\n");
        emit_summary(rq, o.summary, out);
        return kOk;
    } catch (const ValidationFailure& e) {
        try {
            emit_summary(rq, e.summary, out);
        } catch (...) {
        }
        err << "validation failed: " << e.what() << '\n';
        return kIntegration;
    } catch (...) {
        auto [code, msg] = classify_error(std::current_exception());
        err << msg << '\n';
        return code;
    }
}

struct Flag {
    const char* name;
    const char* key;
    const char* help;
};

inline const std::vector<Flag>& config_flags() {
    static const std::vector<Flag> flags{
        {"--target", "target", "Target surface: s2 or h2"},
        {"--mu", "mu", "Frequency parameter"},
        {"--k", "k", "Hyperbolic winding"},
        {"--c", "c", "Field coupling c"},
        {"--b", "b", "Field coupling b"},
        {"--q0", "q0", "Seed amplitude"},
        {"--a-seed", "a_seed", "Seed abscissa"},
        {"--a-max", "a_max", "End of the profile run"},
        {"--r-max", "r_max", "End of the self-similar run"},
        {"--rtol", "rtol", "Relative tolerance"},
        {"--atol", "atol", "Absolute tolerance"},
        {"--xmin", "grid.xmin", "Grid lower x"},
        {"--xmax", "grid.xmax", "Grid upper x"},
        {"--ymin", "grid.ymin", "Grid lower y"},
        {"--ymax", "grid.ymax", "Grid upper y"},
        {"--nx", "grid.nx", "Grid nodes in x"},
        {"--ny", "grid.ny", "Grid nodes in y"},
        {"--t", "grid.t", "Sampling time"},
    };
    return flags;
}

}  // namespace detail

// Parses argv, runs one subcommand and returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Equivariant standing waves of a hyperbolic spin-field system", "hyperwave"};
    app.require_subcommand(1, 1);

    Request rq;
    std::vector<std::string> values(detail::config_flags().size());

    struct Sub {
        const char* name;
        const char* help;
    };
    const std::vector<Sub> subs{{"classify", "Classify a parameter tuple"},
                                {"solve", "Integrate the profile equation"},
                                {"selfsim", "Integrate the self-similar profile"},
                                {"asym", "Fit the tail of a profile"},
                                {"field", "Sample the assembled field on a grid"},
                                {"validate", "Check a stored profile trajectory"}};
    std::vector<CLI::App*> handles;
    std::vector<std::vector<CLI::Option*>> options(subs.size());
    for (std::size_t s = 0; s < subs.size(); ++s) {
        CLI::App* sub = app.add_subcommand(subs[s].name, subs[s].help);
        handles.push_back(sub);
        sub->add_option("--config", rq.config_path, "Config file: key=value lines or a JSON object");
        for (std::size_t i = 0; i < detail::config_flags().size(); ++i) {
            const auto& f = detail::config_flags()[i];
            options[s].push_back(sub->add_option(f.name, values[i], f.help));
        }
        sub->add_option("--summary", rq.summary_path, "JSON summary path (stdout if absent)");
        sub->add_option("--jobs", rq.jobs, "Worker threads for sweeps and grids")->check(CLI::PositiveNumber);
        sub->add_option("--sweep", rq.sweep, "Parameter sweep key=v1,v2,...");
        const std::string name = subs[s].name;
        if (name != "classify" && name != "validate") sub->add_option("--out", rq.out_path, "CSV output path");
        if (name == "asym") {
            sub->add_option("--window-lo", rq.window_lo, "Fit window start");
            sub->add_option("--window-hi", rq.window_hi, "Fit window end");
        }
        if (name == "field") {
            sub->add_flag("--selfsim", rq.selfsim_field, "Use self-similar profiles");
            sub->add_option("--report", rq.report_path, "Compatibility report JSON path");
        }
        if (name == "validate") sub->add_option("--in", rq.in_path, "Trajectory CSV to check")->required();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        const CLI::App* sub = nullptr;
        for (auto* h : handles) {
            if (h->parsed()) sub = h;
        }
        err << (sub ? sub->help() : app.help());
        return kUsage;
    }

    for (std::size_t s = 0; s < subs.size(); ++s) {
        if (!handles[s]->parsed()) continue;
        rq.command = subs[s].name;
        for (std::size_t i = 0; i < options[s].size(); ++i) {
            if (options[s][i]->count() > 0) rq.overrides.emplace_back(detail::config_flags()[i].key, values[i]);
        }
    }
    return detail::execute(rq, out, err);
}

}  // namespace hyperwave::cli
