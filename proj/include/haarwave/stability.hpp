#pragma once

// Two-level amplification matrix of the time stepping and its spectrum.
//
// With zero data the scheme maps (u^n, u^{n-1}) to (u^{n+1}, u^n) through
//
//   B = [ 2 (I - dt^2 L)^{-1}   -(I - dt^2 L)^{-1} ]
//       [ I                      0                  ]
//
// where L = H_cols E^{-1} is the discrete second-derivative operator on
// collocation samples: u = E a (zero lift) and u_xx = H_cols a.

#include "haarwave/haar.hpp"
#include "haarwave/numerics.hpp"
#include "haarwave/solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

namespace haarwave {

struct SpectrumReport {
    int level = 0;
    double dt = 0.0;
    std::vector<std::complex<double>> eigenvalues;
    double spectral_radius = 0.0;
    bool stable = false;
    double tolerance = 0.0;
};

/// L = H_cols E^{-1}.
inline DenseMatrix operator_matrix(const HaarBasis& basis) {
    DenseMatrix e;
    DenseMatrix h_cols;
    representation_matrices(basis, e, h_cols);
    const LuFactorization fac(e);
    if (fac.singular()) {
        throw SingularMatrixError("representation matrix E is singular (pivot " +
                                      std::to_string(fac.singular_pivot()) + ")",
                                  fac.singular_pivot());
    }
    return h_cols * fac.inverse();
}

inline DenseMatrix amplification_matrix(const HaarBasis& basis, double dt) {
    if (!(dt >= 0.0) || !std::isfinite(dt)) {
        throw std::invalid_argument("time step must be non-negative and finite");
    }
    const auto op = operator_matrix(basis);
    const std::size_t n = op.rows();
    DenseMatrix shifted = DenseMatrix::identity(n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) shifted(r, c) -= dt * dt * op(r, c);
    const LuFactorization fac(shifted);
    if (fac.singular()) {
        throw SingularMatrixError("I - dt^2 L is singular (pivot " +
                                      std::to_string(fac.singular_pivot()) + ")",
                                  fac.singular_pivot());
    }
    const auto inv = fac.inverse();

    DenseMatrix b(2 * n, 2 * n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            b(r, c) = 2.0 * inv(r, c);
            b(r, n + c) = -inv(r, c);
        }
        b(n + r, r) = 1.0;
    }
    return b;
}

inline SpectrumReport stability_report(int level, double dt, double tol = 1e-8) {
    if (!(tol >= 0.0)) {
        throw std::invalid_argument("stability tolerance must be non-negative");
    }
    const auto basis = build_basis(level);
    SpectrumReport report;
    report.level = level;
    report.dt = dt;
    report.tolerance = tol;
    report.eigenvalues = eigenvalues(amplification_matrix(basis, dt));
    for (const auto& z : report.eigenvalues) {
        report.spectral_radius = std::max(report.spectral_radius, std::abs(z));
    }
    report.stable = report.spectral_radius <= 1.0 + tol;
    return report;
}

} // namespace haarwave
