#pragma once

// Error norms, convergence studies and the wavelet coefficient decay check.

#include "haarwave/error.hpp"
#include "haarwave/haar.hpp"
#include "haarwave/problem.hpp"
#include "haarwave/quadrature.hpp"
#include "haarwave/solver.hpp"

#include <algorithm>
#include <cmath>
#include <concepts>
#include <future>
#include <optional>
#include <string>
#include <vector>

namespace haarwave {

struct ErrorRow {
    double x = 0.0;
    double exact = 0.0;
    double approx = 0.0;
    double error = 0.0;
};

struct ErrorTable {
    double t = 0.0;
    std::vector<ErrorRow> rows; ///< at x = 0.1, ..., 1.0
    double max_error = 0.0;     ///< max over rows
    double l2_error = 0.0;      ///< L2 norm of the error over [0, 1]
};

/// Subinterval count >= quad_n that is a multiple of 4M, so Simpson panels
/// never straddle a breakpoint of the level-J reconstruction.
inline int aligned_quad_n(const HaarBasis& basis, int quad_n = default_quad_n) {
    const int cell = static_cast<int>(2 * basis.size());
    const int n = std::max(quad_n, cell);
    return ((n + cell - 1) / cell) * cell;
}

/// L2 norm over [0, 1] of reconstruction minus exact solution at snapshot `snap`.
inline double l2_error(const SolutionRecord& record, const Snapshot& snap,
                       int quad_n = default_quad_n) {
    const auto& basis = *record.basis;
    const auto& spec = record.spec;
    const double h = spec.boundary(snap.t);
    const double nu = spec.integral(snap.t);
    auto sq = [&](double x) {
        const double u = coefficient_part(basis, snap.coefficients, x) + 2.0 * x * (nu - h) + h;
        const double d = u - spec.exact_at(x, snap.t);
        return d * d;
    };
    return std::sqrt(quad_simpson(sq, 0.0, 1.0, aligned_quad_n(basis, quad_n)));
}

inline ErrorTable error_table(const SolutionRecord& record, double t, int quad_n = default_quad_n) {
    const Snapshot* snap = record.find(t);
    if (!snap) {
        throw Error("no snapshot at t = " + std::to_string(t));
    }
    if (!snap->report_errors) {
        throw ProblemError("problem '" + record.problem + "' has no exact solution");
    }
    ErrorTable table;
    table.t = snap->t;
    for (std::size_t k = 0; k < snap->report_x.size(); ++k) {
        table.rows.push_back({snap->report_x[k], snap->report_errors->exact[k], snap->report_u[k],
                              snap->report_errors->error[k]});
        table.max_error = std::max(table.max_error, snap->report_errors->error[k]);
    }
    table.l2_error = l2_error(record, *snap, quad_n);
    return table;
}

enum class ConvergenceMode { Spatial, Temporal };

struct ConvergenceRow {
    double param = 0.0; ///< J (spatial) or dt (temporal)
    double max_error = 0.0;
    double l2_error = 0.0;
    std::optional<double> order; ///< empty on the first row
};

struct ConvergenceTable {
    ConvergenceMode mode = ConvergenceMode::Spatial;
    std::vector<ConvergenceRow> rows;
};

namespace detail {

inline ConvergenceRow final_errors(const ProblemSpec& spec, int level, double dt, double final_time,
                                   double param, int quad_n) {
    const auto record = solve(spec, level, dt, final_time, {final_time});
    const auto table = error_table(record, record.snapshots.back().t, quad_n);
    return {param, table.max_error, table.l2_error, std::nullopt};
}

/// observed order log2(e_{r-1} / e_r) from successive max errors.
inline void fill_orders(ConvergenceTable& table) {
    for (std::size_t r = 1; r < table.rows.size(); ++r) {
        table.rows[r].order = std::log2(table.rows[r - 1].max_error / table.rows[r].max_error);
    }
}

template <typename Job>
ConvergenceTable run_study(ConvergenceMode mode, std::size_t count, Job job) {
    std::vector<std::future<ConvergenceRow>> pending;
    pending.reserve(count);
    for (std::size_t r = 0; r < count; ++r) {
        pending.push_back(std::async(std::launch::async, job, r));
    }
    ConvergenceTable table;
    table.mode = mode;
    for (auto& f : pending) table.rows.push_back(f.get());
    fill_orders(table);
    return table;
}

} // namespace detail

/// One solve per level at fixed dt; dt must be small enough that the
/// temporal error does not mask the spatial one.
inline ConvergenceTable spatial_convergence(const ProblemSpec& spec, const std::vector<int>& levels,
                                            double dt, double final_time,
                                            int quad_n = default_quad_n) {
    if (levels.empty()) throw std::invalid_argument("level list is empty");
    if (!spec.has_exact()) {
        throw ProblemError("convergence study needs an exact solution");
    }
    return detail::run_study(ConvergenceMode::Spatial, levels.size(), [&](std::size_t r) {
        return detail::final_errors(spec, levels[r], dt, final_time, levels[r], quad_n);
    });
}

/// One solve per time step at fixed level; the level must be high enough
/// that the spatial error does not mask the temporal one.
inline ConvergenceTable temporal_convergence(const ProblemSpec& spec, int level,
                                             const std::vector<double>& steps, double final_time,
                                             int quad_n = default_quad_n) {
    if (steps.empty()) throw std::invalid_argument("time step list is empty");
    if (!spec.has_exact()) {
        throw ProblemError("convergence study needs an exact solution");
    }
    return detail::run_study(ConvergenceMode::Temporal, steps.size(), [&](std::size_t r) {
        return detail::final_errors(spec, level, steps[r], final_time, steps[r], quad_n);
    });
}

struct LevelDecay {
    int level = 0;
    double max_abs = 0.0; ///< max |a_{2^j+k+1}| over k
    double bound = 0.0;   ///< L / 2^{j+1}
    bool pass = false;
};

struct DecayReport {
    double lipschitz = 0.0;
    double tolerance = 0.0;
    std::vector<LevelDecay> levels;
    bool pass = false;
};

/// Compares wavelet coefficients of a Lipschitz function against L / 2^{j+1}.
template <std::invocable<double> Fn>
DecayReport coefficient_decay(Fn&& u, double lipschitz, int max_level_j,
                              double tol = 1e-9, int quad_n = default_quad_n) {
    if (!(lipschitz > 0.0)) {
        throw std::invalid_argument("Lipschitz constant must be positive");
    }
    const auto a = forward_coefficients(u, max_level_j, quad_n);
    DecayReport report;
    report.lipschitz = lipschitz;
    report.tolerance = tol;
    report.pass = true;
    for (int j = 0; j <= max_level_j; ++j) {
        LevelDecay level;
        level.level = j;
        level.bound = lipschitz / std::ldexp(1.0, j + 1);
        const std::size_t first = std::size_t{1} << j;
        for (std::size_t k = 0; k < first; ++k) {
            level.max_abs = std::max(level.max_abs, std::fabs(a[first + k]));
        }
        level.pass = level.max_abs <= level.bound + tol;
        report.pass = report.pass && level.pass;
        report.levels.push_back(level);
    }
    return report;
}

} // namespace haarwave
