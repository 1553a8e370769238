#pragma once

// Hybrid Haar collocation / finite-difference time stepping.
//
// u_xx is expanded in Haar functions with coefficients a_i and integrated
// twice; the Dirichlet and integral boundary conditions fix the two
// integration constants, giving
//
//   u(x, t) = sum_i a_i (P_{2,i}(x) - 2 x C_{2,i}) + 2x (nu(t) - h(t)) + h(t).
//
// Time is discretized with the second difference, u_xx taken at the new
// level and the source at the current one:
//
//   u^{n+1} - 2u^n + u^{n-1} = dt^2 (sum_i a_i h_i + phi(., t_n)),
//
// collocated at the 2M cell midpoints. The first step eliminates the ghost
// level u^{-1} = u^1 - 2 dt g, which halves the dt^2 factors.

#include "haarwave/error.hpp"
#include "haarwave/haar.hpp"
#include "haarwave/numerics.hpp"
#include "haarwave/problem.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace haarwave {

struct SchemeMatrices {
    std::shared_ptr<const HaarBasis> basis;
    double dt = 0.0;
    DenseMatrix e;       ///< E[l, i] = P_{2,i}(x_l) - 2 x_l C_{2,i}
    DenseMatrix h_cols;  ///< h_i(x_l) laid out as [l, i]
    DenseMatrix a_main;  ///< E - dt^2 h_cols
    DenseMatrix a_start; ///< E - dt^2/2 h_cols
    LuFactorization e_lu;
    LuFactorization main_lu;
    LuFactorization start_lu;
};

struct SolverState {
    long n = 0;
    double t = 0.0;
    std::vector<double> u_prev; ///< empty at n = 0
    std::vector<double> u_curr;
    std::vector<double> a_curr; ///< empty until the first solve
};

/// 2x (nu(t) - h(t)) + h(t) at each point.
inline std::vector<double> boundary_lift(const ProblemSpec& spec, double t,
                                         std::span<const double> xs) {
    const double h = spec.boundary(t);
    const double nu = spec.integral(t);
    std::vector<double> out(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) out[k] = 2.0 * xs[k] * (nu - h) + h;
    return out;
}

/// The homogeneous part sum_i a_i (P_{2,i}(x) - 2 x C_{2,i}) at arbitrary x,
/// from the closed-form integrals.
inline double coefficient_part(const HaarBasis& basis, std::span<const double> a, double x) {
    double s = 0.0;
    const auto& c2 = basis.c2();
    for (std::size_t i = 1; i <= a.size(); ++i) {
        if (a[i - 1] == 0.0) continue;
        s += a[i - 1] * (integral_p(2, i, x) - 2.0 * x * c2[i - 1]);
    }
    return s;
}

inline std::vector<double> reconstruct(const HaarBasis& basis, std::span<const double> a,
                                       std::span<const double> lift, std::span<const double> xs) {
    if (a.size() != basis.size()) {
        throw std::invalid_argument("coefficient vector has length " + std::to_string(a.size()) +
                                    ", expected " + std::to_string(basis.size()));
    }
    if (lift.size() != xs.size()) {
        throw std::invalid_argument("lift and point sequences differ in length");
    }
    std::vector<double> out(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) out[k] = coefficient_part(basis, a, xs[k]) + lift[k];
    return out;
}

inline std::vector<double> reconstruct(const HaarBasis& basis, std::span<const double> a,
                                       const ProblemSpec& spec, double t,
                                       std::span<const double> xs) {
    const auto lift = boundary_lift(spec, t, xs);
    return reconstruct(basis, a, lift, xs);
}

/// E[l, i] = P_{2,i}(x_l) - 2 x_l C_{2,i} and H_cols[l, i] = h_i(x_l).
inline void representation_matrices(const HaarBasis& basis, DenseMatrix& e, DenseMatrix& h_cols) {
    const std::size_t n = basis.size();
    const auto& xs = basis.collocation();
    e = DenseMatrix(n, n);
    h_cols = DenseMatrix(n, n);
    for (std::size_t l = 0; l < n; ++l) {
        for (std::size_t i = 0; i < n; ++i) {
            e(l, i) = basis.p2()(i, l) - 2.0 * xs[l] * basis.c2()[i];
            h_cols(l, i) = basis.h()(i, l);
        }
    }
}

inline SchemeMatrices assemble(std::shared_ptr<const HaarBasis> basis, double dt) {
    if (!basis) throw std::invalid_argument("assemble needs a basis");
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw std::invalid_argument("time step must be positive and finite");
    }
    const std::size_t n = basis->size();
    DenseMatrix e;
    DenseMatrix h_cols;
    representation_matrices(*basis, e, h_cols);
    DenseMatrix a_main(n, n);
    DenseMatrix a_start(n, n);
    const double dt2 = dt * dt;
    for (std::size_t l = 0; l < n; ++l) {
        for (std::size_t i = 0; i < n; ++i) {
            a_main(l, i) = e(l, i) - dt2 * h_cols(l, i);
            a_start(l, i) = e(l, i) - 0.5 * dt2 * h_cols(l, i);
        }
    }
    LuFactorization e_lu(e);
    LuFactorization main_lu(a_main);
    LuFactorization start_lu(a_start);
    auto check = [&](const LuFactorization& fac, const char* which) {
        if (fac.singular()) {
            throw SingularMatrixError(std::string(which) + " matrix is singular for J = " +
                                          std::to_string(basis->level()) +
                                          ", dt = " + std::to_string(dt) + " (pivot " +
                                          std::to_string(fac.singular_pivot()) + ")",
                                      fac.singular_pivot());
        }
    };
    check(e_lu, "representation");
    check(main_lu, "time-step");
    check(start_lu, "start-up");
    return {std::move(basis), dt,
            std::move(e), std::move(h_cols), std::move(a_main), std::move(a_start),
            std::move(e_lu), std::move(main_lu), std::move(start_lu)};
}

inline SchemeMatrices assemble(const HaarBasis& basis, double dt) {
    return assemble(std::make_shared<const HaarBasis>(basis), dt);
}

inline SolverState initial_state(const ProblemSpec& spec, const HaarBasis& basis) {
    SolverState state;
    const auto& xs = basis.collocation();
    state.u_curr.resize(xs.size());
    for (std::size_t l = 0; l < xs.size(); ++l) state.u_curr[l] = spec.displacement(xs[l]);
    return state;
}

namespace detail {

inline void require_finite(std::span<const double> v, long step, const char* what) {
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw SolverError(std::string("non-finite ") + what + " at time step " +
                                  std::to_string(step),
                              step);
        }
    }
}

inline SolverState advance(const SchemeMatrices& m, const ProblemSpec& spec,
                           const SolverState& state, const LuFactorization& fac,
                           std::span<const double> rhs) {
    const long next = state.n + 1;
    std::vector<double> a;
    try {
        a = fac.solve(rhs);
    } catch (const SingularMatrixError& e) {
        throw SolverError(e.what(), next);
    }
    require_finite(a, next, "wavelet coefficients");

    const double t_next = static_cast<double>(next) * m.dt;
    auto u = m.e * a;
    const auto lift = boundary_lift(spec, t_next, m.basis->collocation());
    for (std::size_t l = 0; l < u.size(); ++l) u[l] += lift[l];
    require_finite(u, next, "solution");

    SolverState out;
    out.n = next;
    out.t = t_next;
    out.u_prev = state.u_curr;
    out.u_curr = std::move(u);
    out.a_curr = std::move(a);
    return out;
}

} // namespace detail

/// Right-hand side of the first step:
/// f + dt g + dt^2/2 phi(., 0) - lift(t_1) at the collocation points.
inline std::vector<double> startup_rhs(const ProblemSpec& spec, const SchemeMatrices& m,
                                       const SolverState& state) {
    const auto& xs = m.basis->collocation();
    const double dt = m.dt;
    const double t1 = dt;
    const auto lift = boundary_lift(spec, t1, xs);
    std::vector<double> c(xs.size());
    for (std::size_t l = 0; l < xs.size(); ++l) {
        c[l] = state.u_curr[l] + dt * spec.velocity(xs[l]) +
               0.5 * dt * dt * spec.source(xs[l], 0.0) - lift[l];
    }
    return c;
}

/// Right-hand side of a regular step:
/// dt^2 phi(., t_n) + 2u^n - u^{n-1} - lift(t_{n+1}) at the collocation points.
inline std::vector<double> main_rhs(const ProblemSpec& spec, const SchemeMatrices& m,
                                    const SolverState& state) {
    const auto& xs = m.basis->collocation();
    const double dt = m.dt;
    const double t_n = static_cast<double>(state.n) * dt;
    const auto lift = boundary_lift(spec, static_cast<double>(state.n + 1) * dt, xs);
    std::vector<double> c(xs.size());
    for (std::size_t l = 0; l < xs.size(); ++l) {
        c[l] = dt * dt * spec.source(xs[l], t_n) + 2.0 * state.u_curr[l] - state.u_prev[l] -
               lift[l];
    }
    return c;
}

inline SolverState startup_step(const ProblemSpec& spec, const SchemeMatrices& m,
                                const SolverState& state) {
    if (state.n != 0) {
        throw std::invalid_argument("start-up step applies only at n = 0");
    }
    const auto c = startup_rhs(spec, m, state);
    detail::require_finite(c, 1, "right-hand side");
    return detail::advance(m, spec, state, m.start_lu, c);
}

inline SolverState time_step(const ProblemSpec& spec, const SchemeMatrices& m,
                             const SolverState& state) {
    if (state.n < 1) {
        throw std::invalid_argument("regular time step needs n >= 1");
    }
    const auto c = main_rhs(spec, m, state);
    detail::require_finite(c, state.n + 1, "right-hand side");
    return detail::advance(m, spec, state, m.main_lu, c);
}

/// Uniform reporting grid x = 0.1, 0.2, ..., 1.0.
inline std::vector<double> reporting_grid() {
    std::vector<double> xs(10);
    for (int k = 1; k <= 10; ++k) xs[k - 1] = k / 10.0;
    return xs;
}

struct PointErrors {
    std::vector<double> exact;
    std::vector<double> error; ///< |approx - exact|
};

struct Snapshot {
    long step = 0;
    double t = 0.0;
    std::vector<double> u;            ///< at the collocation points
    std::vector<double> coefficients; ///< a_i
    std::vector<double> report_x;
    std::vector<double> report_u;
    std::optional<PointErrors> collocation_errors;
    std::optional<PointErrors> report_errors;
};

struct SolutionRecord {
    std::string problem;
    int level = 0;
    double dt = 0.0;
    double final_time = 0.0;
    ProblemSpec spec;
    std::shared_ptr<const HaarBasis> basis;
    std::vector<Snapshot> snapshots; ///< ordered by time

    /// Snapshot at grid time t (|t - n dt| <= 1e-10), or nullptr.
    const Snapshot* find(double t) const {
        for (const auto& s : snapshots) {
            if (std::fabs(s.t - t) <= 1e-10) return &s;
        }
        return nullptr;
    }
};

/// Time-grid index of t, or nullopt when t is not within 1e-10 of a grid time in [0, steps].
inline std::optional<long> grid_index(double t, double dt, long steps) {
    const double r = std::round(t / dt);
    if (r < 0.0 || r > static_cast<double>(steps)) return std::nullopt;
    if (std::fabs(t - r * dt) > 1e-10) return std::nullopt;
    return static_cast<long>(r);
}

/// Number of steps N with T = N dt; rejects a non-integer ratio and N < 2.
inline long step_count(double dt, double final_time) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw std::invalid_argument("time step must be positive and finite");
    }
    if (!(final_time > 0.0) || !std::isfinite(final_time)) {
        throw std::invalid_argument("final time must be positive and finite");
    }
    const double ratio = final_time / dt;
    const double n = std::round(ratio);
    if (std::fabs(ratio - n) > 1e-10 * std::max(1.0, ratio)) {
        throw std::invalid_argument("final time is not an integer multiple of the time step");
    }
    if (n < 2.0) {
        throw std::invalid_argument("at least two time steps are required");
    }
    return static_cast<long>(n);
}

namespace detail {

inline Snapshot capture(const ProblemSpec& spec, const SchemeMatrices& m, const SolverState& state,
                        std::vector<double> coefficients) {
    const auto& basis = *m.basis;
    Snapshot snap;
    snap.step = state.n;
    snap.t = state.t;
    snap.u = state.u_curr;
    snap.coefficients = std::move(coefficients);
    snap.report_x = reporting_grid();
    snap.report_u = reconstruct(basis, snap.coefficients, spec, snap.t, snap.report_x);
    if (spec.has_exact()) {
        auto errors = [&](std::span<const double> xs, std::span<const double> u) {
            PointErrors pe{std::vector<double>(xs.size()), std::vector<double>(xs.size())};
            for (std::size_t k = 0; k < xs.size(); ++k) {
                pe.exact[k] = spec.exact_at(xs[k], snap.t);
                pe.error[k] = std::fabs(u[k] - pe.exact[k]);
            }
            return pe;
        };
        snap.collocation_errors = errors(basis.collocation(), snap.u);
        snap.report_errors = errors(snap.report_x, snap.report_u);
    }
    return snap;
}

} // namespace detail

/// Runs the scheme from t = 0 to T = N dt and records the requested snapshots.
/// An empty `snapshot_times` records only the final time.
inline SolutionRecord solve(const ProblemSpec& spec, int level, double dt, double final_time,
                            std::vector<double> snapshot_times = {}) {
    const long steps = step_count(dt, final_time);
    if (snapshot_times.empty()) snapshot_times.push_back(final_time);

    std::vector<long> wanted;
    for (double t : snapshot_times) {
        auto idx = grid_index(t, dt, steps);
        if (!idx) {
            throw std::invalid_argument("snapshot time " + std::to_string(t) +
                                        " is not on the time grid of [0, T]");
        }
        wanted.push_back(*idx);
    }
    std::sort(wanted.begin(), wanted.end());
    wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());

    auto basis = std::make_shared<const HaarBasis>(build_basis(level));
    const auto m = assemble(basis, dt);

    SolutionRecord record;
    record.problem = spec.name;
    record.level = level;
    record.dt = dt;
    record.final_time = final_time;
    record.spec = spec;
    record.basis = basis;

    auto next_wanted = wanted.begin();
    auto maybe_capture = [&](const SolverState& state) {
        if (next_wanted == wanted.end() || *next_wanted != state.n) return;
        std::vector<double> a = state.a_curr;
        if (a.empty()) {
            // t = 0: represent f through E a = f - lift(0).
            auto rhs = state.u_curr;
            const auto lift = boundary_lift(spec, 0.0, basis->collocation());
            for (std::size_t l = 0; l < rhs.size(); ++l) rhs[l] -= lift[l];
            a = m.e_lu.solve(rhs);
        }
        record.snapshots.push_back(detail::capture(spec, m, state, std::move(a)));
        ++next_wanted;
    };

    auto state = initial_state(spec, *basis);
    maybe_capture(state);
    state = startup_step(spec, m, state);
    maybe_capture(state);
    while (state.n < steps) {
        state = time_step(spec, m, state);
        maybe_capture(state);
    }
    return record;
}

} // namespace haarwave
