#pragma once

// Haar scaling function and wavelets on [0, 1], their repeated integrals,
// and the collocation matrices built from them.
//
// Wavelet numbers are 1-based: i = 1 is the scaling function and
// i = 2^j + k + 1 is the wavelet at level j with translation k. Matrix rows
// and vector entries use the 0-based position i - 1.

#include "haarwave/error.hpp"
#include "haarwave/numerics.hpp"
#include "haarwave/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <new>
#include <stdexcept>
#include <string>
#include <vector>

namespace haarwave {

/// Largest resolution level build_basis accepts (2M = 2048 collocation points).
inline constexpr int max_level = 10;

/// Level/translation pair of a wavelet number; `scaling` marks i = 1.
struct WaveletIndex {
    bool scaling = false;
    int level = 0;
    int shift = 0;

    /// 2^level, the dilation factor m.
    double dilation() const { return std::ldexp(1.0, level); }

    friend bool operator==(const WaveletIndex&, const WaveletIndex&) = default;
};

inline std::size_t basis_index(int level, int shift) {
    if (level < 0 || level > 30) {
        throw std::out_of_range("wavelet level " + std::to_string(level) + " out of range");
    }
    const long m = 1L << level;
    if (shift < 0 || shift >= m) {
        throw std::out_of_range("translation " + std::to_string(shift) + " out of range for level " +
                                std::to_string(level));
    }
    return static_cast<std::size_t>(m + shift + 1);
}

inline WaveletIndex wavelet_of(std::size_t i) {
    if (i == 0) {
        throw std::out_of_range("wavelet numbers start at 1");
    }
    if (i == 1) return {true, 0, 0};
    const std::size_t n = i - 1;
    int level = 0;
    while ((std::size_t{2} << level) <= n) ++level;
    return {false, level, static_cast<int>(n - (std::size_t{1} << level))};
}

/// h_i(x) with half-open supports; h_1 is 1 on [0, 1).
inline double haar_eval(std::size_t i, double x) {
    const auto w = wavelet_of(i);
    if (w.scaling) return (x >= 0.0 && x < 1.0) ? 1.0 : 0.0;
    const double m = w.dilation();
    const double left = w.shift / m;
    const double mid = (w.shift + 0.5) / m;
    const double right = (w.shift + 1.0) / m;
    if (x >= left && x < mid) return 1.0;
    if (x >= mid && x < right) return -1.0;
    return 0.0;
}

/// beta-fold integral of h_i from 0 to x, in closed form.
inline double integral_p(int beta, std::size_t i, double x) {
    if (beta < 1) {
        throw std::invalid_argument("integral order must be >= 1");
    }
    double factorial = 1.0;
    for (int b = 2; b <= beta; ++b) factorial *= b;

    const auto w = wavelet_of(i);
    if (w.scaling) return std::pow(x, beta) / factorial;

    const double m = w.dilation();
    const double left = w.shift / m;
    const double mid = (w.shift + 0.5) / m;
    const double right = (w.shift + 1.0) / m;
    if (x < left) return 0.0;
    if (x < mid) return std::pow(x - left, beta) / factorial;
    if (x < right) return (std::pow(x - left, beta) - 2.0 * std::pow(x - mid, beta)) / factorial;
    return (std::pow(x - left, beta) - 2.0 * std::pow(x - mid, beta) + std::pow(x - right, beta)) /
           factorial;
}

struct CVectors {
    std::vector<double> c1; ///< integral of P_{1,i} over [0, 1]
    std::vector<double> c2; ///< integral of P_{2,i} over [0, 1]
};

inline CVectors c_vectors(int level) {
    if (level < 0) {
        throw std::invalid_argument("resolution level must be non-negative");
    }
    const std::size_t size = std::size_t{2} << level;
    CVectors out{std::vector<double>(size), std::vector<double>(size)};
    out.c1[0] = 0.5;
    out.c2[0] = 1.0 / 6.0;
    for (std::size_t i = 2; i <= size; ++i) {
        const auto w = wavelet_of(i);
        const double m = w.dilation();
        out.c1[i - 1] = 1.0 / (4.0 * m * m);
        out.c2[i - 1] = (2.0 * m - 2.0 * w.shift - 1.0) / (8.0 * m * m * m);
    }
    return out;
}

/// Collocation data for resolution level J: 2M = 2^(J+1) basis functions
/// sampled at the 2M cell midpoints of a uniform grid on [0, 1].
class HaarBasis {
public:
    int level() const noexcept { return level_; }
    std::size_t size() const noexcept { return collocation_.size(); }

    /// y_l = l / 2M, l = 0..2M.
    const std::vector<double>& grid() const noexcept { return grid_; }
    /// x_l = (y_l + y_{l-1}) / 2, stored 0-based.
    const std::vector<double>& collocation() const noexcept { return collocation_; }

    /// H(i, l) = h_i(x_l).
    const DenseMatrix& h() const noexcept { return h_; }
    /// P1(i, l) = P_{1,i}(x_l).
    const DenseMatrix& p1() const noexcept { return p1_; }
    /// P2(i, l) = P_{2,i}(x_l).
    const DenseMatrix& p2() const noexcept { return p2_; }

    const std::vector<double>& c1() const noexcept { return c_.c1; }
    const std::vector<double>& c2() const noexcept { return c_.c2; }

    friend HaarBasis build_basis(int level);

private:
    int level_ = 0;
    std::vector<double> grid_;
    std::vector<double> collocation_;
    DenseMatrix h_;
    DenseMatrix p1_;
    DenseMatrix p2_;
    CVectors c_;
};

inline HaarBasis build_basis(int level) {
    if (level < 0) {
        throw std::invalid_argument("resolution level must be non-negative");
    }
    if (level > max_level) {
        throw Error("resolution level " + std::to_string(level) + " exceeds the dense-matrix limit " +
                    std::to_string(max_level));
    }
    try {
        HaarBasis basis;
        basis.level_ = level;
        const std::size_t size = std::size_t{2} << level;
        const double dy = 1.0 / static_cast<double>(size);

        basis.grid_.resize(size + 1);
        for (std::size_t l = 0; l <= size; ++l) basis.grid_[l] = l * dy;
        basis.collocation_.resize(size);
        for (std::size_t l = 0; l < size; ++l) {
            basis.collocation_[l] = 0.5 * (basis.grid_[l] + basis.grid_[l + 1]);
        }

        basis.h_ = DenseMatrix(size, size);
        basis.p1_ = DenseMatrix(size, size);
        basis.p2_ = DenseMatrix(size, size);
        for (std::size_t i = 1; i <= size; ++i) {
            for (std::size_t l = 0; l < size; ++l) {
                const double x = basis.collocation_[l];
                basis.h_(i - 1, l) = haar_eval(i, x);
                basis.p1_(i - 1, l) = integral_p(1, i, x);
                basis.p2_(i - 1, l) = integral_p(2, i, x);
            }
        }
        basis.c_ = c_vectors(level);
        return basis;
    } catch (const std::bad_alloc&) {
        throw Error("out of memory building the level-" + std::to_string(level) + " Haar basis");
    }
}

/// Wavelet coefficients a_i of u at level J: a_1 = integral of u, and
/// a_i = 2^j * integral of u h_i for the wavelets. u is integrated cell by
/// cell on the 2M finest dyadic cells (every breakpoint of h_i is a cell edge),
/// taking one-sided limits at the edges so piecewise-smooth u is handled exactly.
template <std::invocable<double> Fn>
std::vector<double> forward_coefficients(Fn&& u, int level, int quad_n = default_quad_n) {
    if (level < 0) {
        throw std::invalid_argument("resolution level must be non-negative");
    }
    const std::size_t size = std::size_t{2} << level;
    int per_cell = static_cast<int>(quad_n / static_cast<long>(size));
    per_cell = std::max(2, per_cell + (per_cell % 2));

    std::vector<double> prefix(size + 1, 0.0);
    for (std::size_t c = 0; c < size; ++c) {
        const double a = static_cast<double>(c) / size;
        const double b = static_cast<double>(c + 1) / size;
        prefix[c + 1] = prefix[c] + quad_simpson_inner(u, a, b, per_cell);
    }

    std::vector<double> coeffs(size);
    coeffs[0] = prefix[size];
    for (std::size_t i = 2; i <= size; ++i) {
        const auto w = wavelet_of(i);
        const std::size_t span = size >> w.level;
        const std::size_t left = static_cast<std::size_t>(w.shift) * span;
        const std::size_t mid = left + span / 2;
        const std::size_t right = left + span;
        const double positive = prefix[mid] - prefix[left];
        const double negative = prefix[right] - prefix[mid];
        coeffs[i - 1] = w.dilation() * (positive - negative);
    }
    return coeffs;
}

} // namespace haarwave
