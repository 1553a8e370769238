#pragma once

#include "haarwave/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace haarwave {

/// Dense row-major real matrix with value semantics.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static DenseMatrix identity(std::size_t n) {
        DenseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::span<const double> data() const noexcept { return data_; }

    double max_abs() const {
        double m = 0.0;
        for (double v : data_) m = std::max(m, std::fabs(v));
        return m;
    }

    double frobenius() const {
        double s = 0.0;
        for (double v : data_) s += v * v;
        return std::sqrt(s);
    }

    double trace() const {
        double s = 0.0;
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) s += (*this)(i, i);
        return s;
    }

    DenseMatrix transposed() const {
        DenseMatrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline std::vector<double> operator*(const DenseMatrix& a, std::span<const double> x) {
    if (a.cols() != x.size()) {
        throw std::invalid_argument("matrix-vector dimension mismatch");
    }
    std::vector<double> y(a.rows(), 0.0);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        const auto row = a.row(r);
        double s = 0.0;
        for (std::size_t c = 0; c < row.size(); ++c) s += row[c] * x[c];
        y[r] = s;
    }
    return y;
}

inline DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("matrix-matrix dimension mismatch");
    }
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto out = c.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            const auto brow = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j) out[j] += aik * brow[j];
        }
    }
    return c;
}

/// Partial-pivoting LU factorization, PA = LU, with L unit-lower and U upper
/// stored together in one matrix.
class LuFactorization {
public:
    /// Pivots smaller than this fraction of max|A| mark the matrix singular.
    static constexpr double singular_threshold = 1e-13;

    explicit LuFactorization(const DenseMatrix& a) : lu_(a), perm_(a.rows()) {
        if (!a.square()) {
            throw std::invalid_argument("LU factorization needs a square matrix");
        }
        const std::size_t n = a.rows();
        for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
        const double cutoff = singular_threshold * a.max_abs();

        for (std::size_t k = 0; k < n; ++k) {
            std::size_t p = k;
            double best = std::fabs(lu_(k, k));
            for (std::size_t r = k + 1; r < n; ++r) {
                if (std::fabs(lu_(r, k)) > best) {
                    best = std::fabs(lu_(r, k));
                    p = r;
                }
            }
            if (best <= cutoff || best == 0.0) {
                if (!singular_) {
                    singular_ = true;
                    singular_pivot_ = k;
                }
                continue;
            }
            if (p != k) {
                std::swap_ranges(lu_.row(k).begin(), lu_.row(k).end(), lu_.row(p).begin());
                std::swap(perm_[k], perm_[p]);
                sign_ = -sign_;
            }
            const double pivot = lu_(k, k);
            for (std::size_t r = k + 1; r < n; ++r) {
                const double factor = lu_(r, k) / pivot;
                lu_(r, k) = factor;
                if (factor == 0.0) continue;
                for (std::size_t c = k + 1; c < n; ++c) lu_(r, c) -= factor * lu_(k, c);
            }
        }
    }

    std::size_t size() const noexcept { return lu_.rows(); }
    bool singular() const noexcept { return singular_; }
    /// Index of the first pivot that fell below the threshold; meaningful only when singular().
    std::size_t singular_pivot() const noexcept { return singular_pivot_; }
    const DenseMatrix& packed() const noexcept { return lu_; }
    std::span<const std::size_t> permutation() const noexcept { return perm_; }

    double determinant() const {
        if (singular_) return 0.0;
        double d = sign_;
        for (std::size_t i = 0; i < size(); ++i) d *= lu_(i, i);
        return d;
    }

    std::vector<double> solve(std::span<const double> rhs) const {
        if (rhs.size() != size()) {
            throw std::invalid_argument("right-hand side has length " + std::to_string(rhs.size()) +
                                        ", expected " + std::to_string(size()));
        }
        if (singular_) {
            throw SingularMatrixError("cannot solve with a singular factorization (pivot " +
                                          std::to_string(singular_pivot_) + ")",
                                      singular_pivot_);
        }
        const std::size_t n = size();
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) {
            double s = rhs[perm_[i]];
            const auto row = lu_.row(i);
            for (std::size_t j = 0; j < i; ++j) s -= row[j] * x[j];
            x[i] = s;
        }
        for (std::size_t i = n; i-- > 0;) {
            double s = x[i];
            const auto row = lu_.row(i);
            for (std::size_t j = i + 1; j < n; ++j) s -= row[j] * x[j];
            x[i] = s / row[i];
        }
        return x;
    }

    DenseMatrix inverse() const {
        const std::size_t n = size();
        DenseMatrix inv(n, n);
        std::vector<double> e(n, 0.0);
        for (std::size_t c = 0; c < n; ++c) {
            e[c] = 1.0;
            const auto col = solve(e);
            e[c] = 0.0;
            for (std::size_t r = 0; r < n; ++r) inv(r, c) = col[r];
        }
        return inv;
    }

private:
    DenseMatrix lu_;
    std::vector<std::size_t> perm_;
    bool singular_ = false;
    std::size_t singular_pivot_ = 0;
    double sign_ = 1.0;
};

inline LuFactorization lu_factor(const DenseMatrix& a) { return LuFactorization(a); }

inline std::vector<double> lu_solve(const LuFactorization& fac, std::span<const double> rhs) {
    return fac.solve(rhs);
}

/// All eigenvalues of a real square matrix, with multiplicity.
inline std::vector<std::complex<double>> eigenvalues(const DenseMatrix& a) {
    if (!a.square()) {
        throw std::invalid_argument("eigenvalues need a square matrix");
    }
    for (double v : a.data()) {
        if (!std::isfinite(v)) throw DomainError("matrix has non-finite entries");
    }
    const auto n = static_cast<Eigen::Index>(a.rows());
    if (n == 0) return {};
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> view(
        a.data().data(), n, n);
    Eigen::EigenSolver<Eigen::MatrixXd> solver;
    solver.compute(view, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        const auto iterations = static_cast<std::size_t>(solver.getMaxIterations() * n);
        throw ConvergenceError("QR iteration did not converge within " +
                                   std::to_string(iterations) + " iterations",
                               iterations);
    }
    const auto& ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

} // namespace haarwave
