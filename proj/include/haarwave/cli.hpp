#pragma once

// Command-line front end. Exit codes: 0 success, 1 runtime failure,
// 2 usage or configuration error, 3 negative verdict (unstable or incompatible).

#include "haarwave/analysis.hpp"
#include "haarwave/error.hpp"
#include "haarwave/problem.hpp"
#include "haarwave/solver.hpp"
#include "haarwave/stability.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace haarwave::cli {

enum ExitCode : int { ok = 0, runtime_failure = 1, config_error = 2, negative_verdict = 3 };

/// Scientific notation with 12 digits after the point and an unpadded
/// exponent, e.g. 6.065306597126e-1.
inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    std::string s(buf);
    const auto pos = s.find('e');
    const int exponent = std::stoi(s.substr(pos + 1));
    return s.substr(0, pos) + "e" + std::to_string(exponent);
}

/// Shortest round-tripping decimal, always with a fractional part: 1 -> "1.0".
inline std::string format_time(double t) {
    char buf[40];
    for (int digits = 1; digits <= 17; ++digits) {
        std::snprintf(buf, sizeof buf, "%.*g", digits, t);
        if (std::strtod(buf, nullptr) == t) break;
    }
    std::string s(buf);
    if (s.find_first_of(".e") == std::string::npos) s += ".0";
    return s;
}

struct RunConfig {
    std::string command;
    std::string problem;
    std::optional<int> level;
    std::optional<double> dt;
    std::optional<double> final_time;
    std::vector<double> times;
    std::string mode;
    std::vector<int> level_list;
    std::vector<double> dt_list;
    std::string out_dir = ".";
    bool strict = false;
    int quad_n = default_quad_n;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

namespace detail {

inline ProblemSpec resolve_problem(const std::string& source) {
    const auto names = builtin_names();
    if (std::find(names.begin(), names.end(), source) != names.end()) return builtin(source);
    return load_problem(source);
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write '" + path.string() + "'");
    f << text;
    if (!f) throw Error("error writing '" + path.string() + "'");
}

inline std::filesystem::path prepare_out_dir(const std::string& dir) {
    std::filesystem::path p(dir);
    std::error_code ec;
    std::filesystem::create_directories(p, ec);
    if (ec) throw Error("cannot create output directory '" + dir + "': " + ec.message());
    return p;
}

/// Returns false when compatibility fails under --strict.
inline bool compatibility_gate(const ProblemSpec& spec, const RunConfig& cfg, std::ostream& err) {
    const auto report = check_compatibility(spec, 1e-10, cfg.quad_n);
    if (report.all_pass()) return true;
    for (std::size_t k = 0; k < 4; ++k) {
        if (!report.pass[k]) {
            err << (cfg.strict ? "error" : "warning") << ": compatibility condition "
                << CompatibilityReport::labels[k] << " violated, residual "
                << format_number(report.residuals[k]) << "\n";
        }
    }
    return !cfg.strict;
}

inline void require(bool present, const char* option, const std::string& command) {
    if (!present) throw ConfigError(command + " requires " + option);
}

} // namespace detail

inline int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    detail::require(!cfg.problem.empty(), "--problem", "solve");
    detail::require(cfg.level.has_value(), "--J", "solve");
    detail::require(cfg.dt.has_value(), "--dt", "solve");
    detail::require(cfg.final_time.has_value(), "--T", "solve");
    const auto spec = detail::resolve_problem(cfg.problem);
    if (!detail::compatibility_gate(spec, cfg, err)) return negative_verdict;

    const long steps = step_count(*cfg.dt, *cfg.final_time);
    auto times = cfg.times.empty() ? std::vector<double>{*cfg.final_time} : cfg.times;
    for (double t : times) {
        if (!grid_index(t, *cfg.dt, steps)) {
            throw ConfigError("snapshot time " + format_time(t) + " is not on the time grid");
        }
    }
    if (*cfg.level < 0 || *cfg.level > max_level) {
        throw ConfigError("--J must be between 0 and " + std::to_string(max_level));
    }

    SolutionRecord record;
    try {
        record = solve(spec, *cfg.level, *cfg.dt, *cfg.final_time, times);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    const auto dir = detail::prepare_out_dir(cfg.out_dir);
    std::ostringstream summary;
    summary << "t,max_error,l2_error\n";
    for (double t : times) {
        const Snapshot* snap = record.find(static_cast<double>(*grid_index(t, *cfg.dt, steps)) * *cfg.dt);
        std::ostringstream csv;
        if (snap->report_errors) {
            csv << "x,u_exact,u_approx,abs_error\n";
            for (std::size_t k = 0; k < snap->report_x.size(); ++k) {
                csv << format_number(snap->report_x[k]) << ','
                    << format_number(snap->report_errors->exact[k]) << ','
                    << format_number(snap->report_u[k]) << ','
                    << format_number(snap->report_errors->error[k]) << '\n';
            }
            const auto table = error_table(record, snap->t, cfg.quad_n);
            summary << format_number(snap->t) << ',' << format_number(table.max_error) << ','
                    << format_number(table.l2_error) << '\n';
        } else {
            csv << "x,u_approx\n";
            for (std::size_t k = 0; k < snap->report_x.size(); ++k) {
                csv << format_number(snap->report_x[k]) << ',' << format_number(snap->report_u[k])
                    << '\n';
            }
        }
        const auto name = "solution_" + format_time(t) + ".csv";
        detail::write_file(dir / name, csv.str());
        out << "wrote " << (dir / name).string() << "\n";
    }
    detail::write_file(dir / "summary.csv", summary.str());
    out << "wrote " << (dir / "summary.csv").string() << "\n";
    return ok;
}

inline int cmd_stability(const RunConfig& cfg, std::ostream& out, std::ostream& /*err*/) {
    detail::require(cfg.level.has_value(), "--J", "stability");
    detail::require(cfg.dt.has_value(), "--dt", "stability");
    if (*cfg.level < 0 || *cfg.level > max_level) {
        throw ConfigError("--J must be between 0 and " + std::to_string(max_level));
    }
    if (!(*cfg.dt >= 0.0)) throw ConfigError("--dt must be non-negative");

    auto report = stability_report(*cfg.level, *cfg.dt);
    auto& ev = report.eigenvalues;
    std::sort(ev.begin(), ev.end(), [](const auto& a, const auto& b) {
        if (std::abs(a) != std::abs(b)) return std::abs(a) > std::abs(b);
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });

    const auto dir = detail::prepare_out_dir(cfg.out_dir);
    std::ostringstream csv;
    csv << "re,im,abs\n";
    for (const auto& z : ev) {
        csv << format_number(z.real()) << ',' << format_number(z.imag()) << ','
            << format_number(std::abs(z)) << '\n';
    }
    detail::write_file(dir / "spectrum.csv", csv.str());
    out << "spectral radius: " << format_number(report.spectral_radius) << "\n";
    out << "verdict: " << (report.stable ? "stable" : "unstable") << "\n";
    return report.stable ? ok : negative_verdict;
}

inline int cmd_converge(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    detail::require(!cfg.problem.empty(), "--problem", "converge");
    detail::require(cfg.final_time.has_value(), "--T", "converge");
    if (cfg.mode != "space" && cfg.mode != "time") {
        throw ConfigError("--mode must be 'space' or 'time'");
    }
    const bool spatial = cfg.mode == "space";
    if (spatial) {
        detail::require(!cfg.level_list.empty(), "--J-list", "converge --mode space");
        detail::require(cfg.dt.has_value(), "--dt", "converge --mode space");
        for (int j : cfg.level_list) {
            if (j < 0 || j > max_level) throw ConfigError("--J-list entries must be in [0, 10]");
        }
        step_count(*cfg.dt, *cfg.final_time);
    } else {
        detail::require(!cfg.dt_list.empty(), "--dt-list", "converge --mode time");
        detail::require(cfg.level.has_value(), "--J", "converge --mode time");
        if (*cfg.level < 0 || *cfg.level > max_level) throw ConfigError("--J must be in [0, 10]");
        for (double dt : cfg.dt_list) step_count(dt, *cfg.final_time);
    }
    const auto spec = detail::resolve_problem(cfg.problem);
    if (!spec.has_exact()) throw ConfigError("converge needs a problem with an exact solution");
    if (!detail::compatibility_gate(spec, cfg, err)) return negative_verdict;

    const auto table = spatial
        ? spatial_convergence(spec, cfg.level_list, *cfg.dt, *cfg.final_time, cfg.quad_n)
        : temporal_convergence(spec, *cfg.level, cfg.dt_list, *cfg.final_time, cfg.quad_n);

    const auto dir = detail::prepare_out_dir(cfg.out_dir);
    std::ostringstream csv;
    csv << "param,max_error,l2_error,observed_order\n";
    for (const auto& row : table.rows) {
        if (spatial) {
            csv << static_cast<int>(row.param);
        } else {
            csv << format_number(row.param);
        }
        csv << ',' << format_number(row.max_error) << ',' << format_number(row.l2_error) << ',';
        if (row.order) csv << format_number(*row.order);
        csv << '\n';
    }
    detail::write_file(dir / "convergence.csv", csv.str());
    out << "wrote " << (dir / "convergence.csv").string() << "\n";
    return ok;
}

inline int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    detail::require(!cfg.problem.empty(), "--problem", "check");
    ProblemSpec spec;
    try {
        spec = detail::resolve_problem(cfg.problem);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return runtime_failure;
    }
    const auto report = check_compatibility(spec, 1e-10, cfg.quad_n);
    for (std::size_t k = 0; k < 4; ++k) {
        out << CompatibilityReport::labels[k] << ": residual " << format_number(report.residuals[k])
            << (report.pass[k] ? " pass" : " FAIL") << "\n";
    }
    return report.all_pass() ? ok : negative_verdict;
}

inline int cmd_list(std::ostream& out) {
    for (const auto& name : builtin_names()) out << name << "\n";
    return ok;
}

namespace detail {

template <typename T>
std::vector<T> parse_list(const std::string& text, const char* option) {
    std::vector<T> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            T v{};
            if constexpr (std::is_same_v<T, int>) {
                v = std::stoi(item, &used);
            } else {
                v = std::stod(item, &used);
            }
            while (used < item.size() && item[used] == ' ') ++used;
            if (used != item.size()) throw std::invalid_argument(item);
            values.push_back(v);
        } catch (const std::exception&) {
            throw ConfigError(std::string("malformed entry '") + item + "' in " + option);
        }
    }
    if (values.empty()) throw ConfigError(std::string(option) + " is empty");
    return values;
}

} // namespace detail

/// Parses `args` (without the program name) and runs the selected command.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Haar wavelet collocation solver for the wave equation with an integral boundary condition",
                 "haarwave"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::optional<int> level;
    std::optional<double> dt;
    std::optional<double> final_time;
    std::string times;
    std::string level_list;
    std::string dt_list;

    auto add_problem = [&](CLI::App* sub) {
        sub->add_option("--problem", cfg.problem, "built-in name or path to a problem JSON file");
    };
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", cfg.out_dir, "output directory");
        sub->add_option("--quad-n", cfg.quad_n, "Simpson subintervals for integrals over [0, 1]")
            ->check(CLI::PositiveNumber);
    };

    auto* solve_cmd = app.add_subcommand("solve", "run the scheme and write solution CSVs");
    add_problem(solve_cmd);
    solve_cmd->add_option("--J", level, "maximal resolution level");
    solve_cmd->add_option("--dt", dt, "time step");
    solve_cmd->add_option("--T", final_time, "final time");
    solve_cmd->add_option("--times", times, "comma-separated snapshot times (default: T)");
    solve_cmd->add_flag("--strict", cfg.strict, "treat incompatible data as an error");
    add_common(solve_cmd);

    auto* stability_cmd = app.add_subcommand("stability", "spectrum of the amplification matrix");
    stability_cmd->add_option("--J", level, "maximal resolution level");
    stability_cmd->add_option("--dt", dt, "time step");
    add_common(stability_cmd);

    auto* converge_cmd = app.add_subcommand("converge", "observed convergence order in J or dt");
    add_problem(converge_cmd);
    converge_cmd->add_option("--mode", cfg.mode, "space or time");
    converge_cmd->add_option("--J", level, "resolution level (time mode)");
    converge_cmd->add_option("--dt", dt, "time step (space mode)");
    converge_cmd->add_option("--T", final_time, "final time");
    converge_cmd->add_option("--J-list", level_list, "comma-separated levels (space mode)");
    converge_cmd->add_option("--dt-list", dt_list, "comma-separated time steps (time mode)");
    converge_cmd->add_flag("--strict", cfg.strict, "treat incompatible data as an error");
    add_common(converge_cmd);

    auto* check_cmd = app.add_subcommand("check", "verify the compatibility conditions");
    add_problem(check_cmd);
    check_cmd->add_option("--quad-n", cfg.quad_n, "Simpson subintervals for integrals over [0, 1]")
        ->check(CLI::PositiveNumber);

    auto* list_cmd = app.add_subcommand("list", "list built-in problems");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return config_error;
    }

    try {
        if (cfg.quad_n < 2 || cfg.quad_n % 2 != 0) {
            throw ConfigError("--quad-n must be an even integer >= 2");
        }
        cfg.level = level;
        cfg.dt = dt;
        cfg.final_time = final_time;
        if (!times.empty()) cfg.times = detail::parse_list<double>(times, "--times");
        if (!level_list.empty()) cfg.level_list = detail::parse_list<int>(level_list, "--J-list");
        if (!dt_list.empty()) cfg.dt_list = detail::parse_list<double>(dt_list, "--dt-list");

        if (list_cmd->parsed()) return cmd_list(out);
        if (check_cmd->parsed()) return cmd_check(cfg, out, err);
        if (solve_cmd->parsed()) return cmd_solve(cfg, out, err);
        if (stability_cmd->parsed()) return cmd_stability(cfg, out, err);
        return cmd_converge(cfg, out, err);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return config_error;
    } catch (const ProblemError& e) {
        err << "error: " << e.what() << "\n";
        return config_error;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return config_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return runtime_failure;
    }
}

} // namespace haarwave::cli
