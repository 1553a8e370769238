// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include "haarwave/analysis.hpp"
#include "haarwave/solver.hpp"
#include "haarwave/stability.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

using namespace haarwave;

namespace {

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

int failures = 0;

template <typename Fn>
void criterion(int id, const char* title, Fn&& body) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
        body(v);
    } catch (const std::exception& e) {
        v.pass = false;
        v.detail << " [exception: " << e.what() << "]";
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!v.pass) ++failures;
    std::printf("%s %d %s:%s (%.1f s)\n", v.pass ? "PASS" : "FAIL", id, title, v.detail.str().c_str(),
                secs);
    std::fflush(stdout);
}

double order_of(const ConvergenceRow& row) { return row.order.value_or(NAN); }

} // namespace

int main() {
    criterion(1, "example1 J=6 dt=1e-4 T=1 pointwise errors", [](Verdict& v) {
        const auto rec = solve(builtin("example1"), 6, 1e-4, 1.0);
        const auto table = error_table(rec, 1.0);
        for (const auto& row : table.rows) {
            v.require(row.error <= 5e-5, "error " + sci(row.error) + " at x=" + sci(row.x) + " > 5e-5");
        }
        v.detail << " max error " << sci(table.max_error);
        v.require(table.max_error <= 5.0 * 1.0e-5 && table.max_error >= 1.0e-5 / 5.0,
                  "max error not within a factor 5 of 1.0e-5");
    });

    criterion(2, "example2 J=6 T=0.25 errors at dt=1e-4 and dt=1e-3", [](Verdict& v) {
        const auto p = builtin("example2");
        const auto fine = error_table(solve(p, 6, 1e-4, 0.25), 0.25);
        const double e01 = fine.rows[0].error;
        const double e08 = fine.rows[7].error;
        v.detail << " dt=1e-4: x=0.1 " << sci(e01) << ", x=0.8 " << sci(e08);
        v.require(e01 <= 7e-5, "x=0.1 error > 7e-5");
        v.require(e08 <= 7e-5, "x=0.8 error > 7e-5");
        const auto coarse = error_table(solve(p, 6, 1e-3, 0.25), 0.25);
        v.detail << "; dt=1e-3: max " << sci(coarse.max_error);
        v.require(coarse.max_error <= 1e-4, "dt=1e-3 max error " + sci(coarse.max_error) + " > 1e-4");
    });

    criterion(3, "amplification spectral radius", [](Verdict& v) {
        for (int level : {4, 5}) {
            for (double dt : {1e-2, 1e-3}) {
                const auto r = stability_report(level, dt, 1e-8);
                v.detail << " J=" << level << ",dt=" << sci(dt) << ":" << sci(r.spectral_radius - 1.0);
                v.require(r.stable, "radius > 1 + 1e-8");
            }
        }
        for (int level : {0, 4}) {
            const auto r = stability_report(level, 0.0);
            v.detail << " J=" << level << ",dt=0:" << sci(r.spectral_radius - 1.0);
            v.require(std::fabs(r.spectral_radius - 1.0) <= 1e-8, "dt=0 radius not 1 +- 1e-8");
        }
        v.detail << " (radius - 1)";
    });

    criterion(4, "spatial order, example1 J=3,4,5 dt=1e-5 T=0.1", [](Verdict& v) {
        const auto table = spatial_convergence(builtin("example1"), {3, 4, 5}, 1e-5, 0.1);
        for (std::size_t r = 1; r < table.rows.size(); ++r) {
            const double q = order_of(table.rows[r]);
            v.detail << " " << q;
            v.require(q >= 1.7 && q <= 2.3, "order outside [1.7, 2.3]");
        }
    });

    criterion(5, "temporal order, example2 dt=4e-3,2e-3,1e-3 J=8 T=0.25", [](Verdict& v) {
        const std::vector<double> steps{4e-3, 2e-3, 1e-3};
        auto report = [&](const ConvergenceTable& table) {
            for (const auto& row : table.rows) v.detail << " e(" << sci(row.param) << ")=" << sci(row.max_error);
            for (std::size_t r = 1; r < table.rows.size(); ++r) v.detail << " order " << order_of(table.rows[r]);
        };
        // T = 0.25 is not a multiple of 4e-3; the nearest common grid time
        // 0.24 shows the observed order regardless of the verdict.
        v.detail << " [T=0.24 diagnostic:";
        report(temporal_convergence(builtin("example2"), 8, steps, 0.24));
        v.detail << "]";
        const auto table = temporal_convergence(builtin("example2"), 8, steps, 0.25);
        report(table);
        for (std::size_t r = 1; r < table.rows.size(); ++r) {
            const double q = order_of(table.rows[r]);
            v.require(q >= 1.7 && q <= 2.3, "order outside [1.7, 2.3]");
        }
    });

    criterion(6, "structural exactness at every snapshot", [](Verdict& v) {
        struct Run {
            const char* name;
            int level;
            double dt, final_time;
        };
        double worst_nu = 0.0, worst_h = 0.0, worst_res = 0.0;
        for (const Run run : {Run{"example1", 5, 1e-3, 1.0}, Run{"example2", 5, 1e-3, 0.25}}) {
            const auto p = builtin(run.name);
            const auto basis = std::make_shared<const HaarBasis>(build_basis(run.level));
            const auto m = assemble(basis, run.dt);
            const long steps = step_count(run.dt, run.final_time);
            const int quad_n = aligned_quad_n(*basis);

            auto check = [&](const SolverState& s, std::span<const double> rhs, const DenseMatrix& a) {
                const double t = s.t;
                auto u = [&](double x) {
                    const double xs[] = {x};
                    return reconstruct(*basis, s.a_curr, p, t, xs)[0];
                };
                worst_nu = std::max(worst_nu, std::fabs(quad_simpson(u, 0.0, 1.0, quad_n) - p.integral(t)));
                worst_h = std::max(worst_h, std::fabs(u(0.0) - p.boundary(t)));
                auto r = a * s.a_curr;
                double rn = 0.0, cn = 0.0;
                for (std::size_t l = 0; l < r.size(); ++l) {
                    rn = std::max(rn, std::fabs(r[l] - rhs[l]));
                    cn = std::max(cn, std::fabs(rhs[l]));
                }
                worst_res = std::max(worst_res, rn / std::max(cn, 1e-300));
            };

            auto state = initial_state(p, *basis);
            const auto c0 = startup_rhs(p, m, state);
            state = startup_step(p, m, state);
            check(state, c0, m.a_start);
            while (state.n < steps) {
                const auto c = main_rhs(p, m, state);
                state = time_step(p, m, state);
                check(state, c, m.a_main);
            }
        }
        v.detail << " int u - nu " << sci(worst_nu) << ", u(0) - h " << sci(worst_h)
                 << ", relative residual " << sci(worst_res);
        v.require(worst_nu <= 1e-10, "integral condition > 1e-10");
        v.require(worst_h <= 1e-13, "boundary condition > 1e-13");
        v.require(worst_res <= 1e-10, "residual > 1e-10");
    });

    criterion(7, "coefficient decay up to J=7", [](Verdict& v) {
        const auto sine = coefficient_decay([](double x) { return std::sin(std::numbers::pi * x); },
                                            std::numbers::pi, 7, 1e-9);
        v.require(sine.pass, "sin(pi x)");
        std::mt19937_64 rng(2024);
        int passed = 0;
        for (int k = 0; k < 20; ++k) {
            const auto f = oracle::random_piecewise_linear(rng);
            const auto report = coefficient_decay(f, f.lipschitz(), 7, 1e-9);
            if (report.pass) ++passed;
        }
        v.detail << " sin ok=" << sine.pass << ", piecewise-linear " << passed << "/20";
        v.require(passed == 20, "piecewise-linear functions");
    });

    std::printf("%d of 7 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
