#include "haarwave/haar.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace haarwave {
namespace {

TEST(BasisIndex, LevelAndShift) {
    EXPECT_EQ(basis_index(0, 0), 2u);
    EXPECT_EQ(basis_index(2, 3), 8u);
    EXPECT_THROW(basis_index(2, 4), std::out_of_range);
    EXPECT_THROW(basis_index(1, -1), std::out_of_range);
}

TEST(BasisIndex, InverseRecoversLevelAndShift) {
    EXPECT_TRUE(wavelet_of(1).scaling);
    for (int j = 0; j <= 9; ++j) {
        for (int k = 0; k < (1 << j); ++k) {
            const auto w = wavelet_of(basis_index(j, k));
            EXPECT_FALSE(w.scaling);
            EXPECT_EQ(w.level, j);
            EXPECT_EQ(w.shift, k);
        }
    }
    EXPECT_THROW(wavelet_of(0), std::out_of_range);
}

TEST(HaarEval, Values) {
    EXPECT_EQ(haar_eval(2, 0.25), 1.0);
    EXPECT_EQ(haar_eval(2, 0.75), -1.0);
    EXPECT_EQ(haar_eval(1, 0.9), 1.0);
    EXPECT_EQ(haar_eval(3, 0.6), 0.0);
}

TEST(HaarEval, HalfOpenSupports) {
    EXPECT_EQ(haar_eval(2, 0.0), 1.0);
    EXPECT_EQ(haar_eval(2, 0.5), -1.0);
    EXPECT_EQ(haar_eval(2, 1.0), 0.0);
    EXPECT_EQ(haar_eval(1, 1.0), 0.0);
    EXPECT_EQ(haar_eval(4, 0.5), 1.0);
}

TEST(IntegralP, ClosedFormExamples) {
    EXPECT_EQ(integral_p(1, 1, 0.7), 0.7);
    EXPECT_EQ(integral_p(2, 2, 1.0), 0.25);
    EXPECT_NEAR(integral_p(2, 2, 0.75), 0.21875, 1e-16);
    EXPECT_NEAR(oracle::repeated_integral(2, 2, 0.75), 0.21875, 1e-14);
    EXPECT_THROW(integral_p(0, 2, 0.5), std::invalid_argument);
}

TEST(IntegralP, MatchesCauchyFormulaOracle) {
    for (int beta = 1; beta <= 4; ++beta) {
        for (std::size_t i = 1; i <= 32; ++i) {
            for (double x : {0.0, 0.03, 0.1, 0.3125, 0.49, 0.5, 0.61, 0.77, 0.9, 1.0}) {
                EXPECT_NEAR(integral_p(beta, i, x), oracle::repeated_integral(beta, i, x), 1e-13)
                    << "beta=" << beta << " i=" << i << " x=" << x;
            }
        }
    }
}

TEST(CVectors, PublishedValuesAndOracle) {
    const auto c = c_vectors(4);
    ASSERT_EQ(c.c1.size(), 32u);
    EXPECT_EQ(c.c1[0], 0.5);
    EXPECT_EQ(c.c2[0], 1.0 / 6.0);
    EXPECT_NEAR(c.c2[1], 0.125, 1e-16);
    EXPECT_NEAR(c.c1[2], 1.0 / 16.0, 1e-16);
    // C1 = P_2(1) and C2 = P_3(1) by the Cauchy formula.
    for (std::size_t i = 1; i <= 32; ++i) {
        EXPECT_NEAR(c.c1[i - 1], oracle::repeated_integral(2, i, 1.0), 1e-14) << i;
        EXPECT_NEAR(c.c2[i - 1], oracle::repeated_integral(3, i, 1.0), 1e-14) << i;
    }
}

TEST(CVectors, SimpsonOfIntegralsOverUnitInterval) {
    const auto c = c_vectors(2);
    for (std::size_t i = 1; i <= 8; ++i) {
        const double c1 = quad_simpson([&](double x) { return oracle::repeated_integral(1, i, x); },
                                       0.0, 1.0, 16);
        const double c2 = quad_simpson([&](double x) { return oracle::repeated_integral(2, i, x); },
                                       0.0, 1.0, 16);
        EXPECT_NEAR(c.c1[i - 1], c1, 1e-14) << i;
        EXPECT_NEAR(c.c2[i - 1], c2, 1e-14) << i;
    }
}

TEST(BuildBasis, LevelZero) {
    const auto b = build_basis(0);
    ASSERT_EQ(b.size(), 2u);
    EXPECT_EQ(b.collocation()[0], 0.25);
    EXPECT_EQ(b.collocation()[1], 0.75);
    EXPECT_EQ(b.h()(0, 0), 1.0);
    EXPECT_EQ(b.h()(0, 1), 1.0);
    EXPECT_EQ(b.h()(1, 0), 1.0);
    EXPECT_EQ(b.h()(1, 1), -1.0);
    EXPECT_EQ(b.grid().size(), 3u);
}

TEST(BuildBasis, LevelTwoCollocationPoints) {
    const auto b = build_basis(2);
    ASSERT_EQ(b.size(), 8u);
    for (std::size_t l = 0; l < 8; ++l) EXPECT_EQ(b.collocation()[l], (2.0 * l + 1.0) / 16.0);
}

TEST(BuildBasis, StructuralInvariants) {
    for (int level = 0; level <= 6; ++level) {
        const auto b = build_basis(level);
        const std::size_t n = b.size();
        ASSERT_EQ(n, std::size_t{2} << level);
        for (std::size_t l = 0; l < n; ++l) {
            EXPECT_GT(b.collocation()[l], 0.0);
            EXPECT_LT(b.collocation()[l], 1.0);
            if (l > 0) {
                EXPECT_GT(b.collocation()[l], b.collocation()[l - 1]);
            }
            EXPECT_EQ(b.h()(0, l), 1.0);
        }
        for (std::size_t i = 2; i <= n; ++i) {
            double sum = 0.0;
            for (std::size_t l = 0; l < n; ++l) sum += b.h()(i - 1, l);
            EXPECT_EQ(sum, 0.0);
        }
        for (std::size_t i = 1; i <= n; ++i) {
            EXPECT_NEAR(integral_p(2, i, 1.0), b.c1()[i - 1], 1e-14);
        }
    }
}

TEST(BuildBasis, RejectsOversizedLevels) {
    EXPECT_THROW(build_basis(max_level + 1), Error);
    EXPECT_THROW(build_basis(-1), std::invalid_argument);
}

TEST(HaarProperty, Orthogonality) {
    const int level = 3;
    const std::size_t n = std::size_t{2} << level;
    for (std::size_t alpha = 1; alpha <= n; ++alpha) {
        for (std::size_t beta = 1; beta <= n; ++beta) {
            auto prod = [&](double x) { return haar_eval(alpha, x) * haar_eval(beta, x); };
            double integral = 0.0;
            for (std::size_t cell = 0; cell < n; ++cell) {
                integral += quad_simpson_inner(prod, static_cast<double>(cell) / n,
                                               static_cast<double>(cell + 1) / n, 2);
            }
            double expected = 0.0;
            if (alpha == beta) {
                expected = alpha == 1 ? 1.0 : 1.0 / wavelet_of(alpha).dilation();
            }
            EXPECT_NEAR(integral, expected, 1e-12) << alpha << "," << beta;
        }
    }
}

TEST(HaarProperty, DerivativeChain) {
    const auto b = build_basis(4);
    const double step = 1e-6;
    for (std::size_t i = 1; i <= b.size(); ++i) {
        for (double x : b.collocation()) {
            for (int beta = 1; beta <= 3; ++beta) {
                const double fd =
                    (integral_p(beta, i, x + step) - integral_p(beta, i, x - step)) / (2.0 * step);
                const double lower = beta == 1 ? haar_eval(i, x) : integral_p(beta - 1, i, x);
                EXPECT_NEAR(fd, lower, 1e-5) << "i=" << i << " beta=" << beta << " x=" << x;
            }
        }
    }
}

TEST(HaarProperty, EndpointIdentity) {
    const auto c = c_vectors(6);
    for (std::size_t i = 1; i <= c.c1.size(); ++i) {
        EXPECT_NEAR(integral_p(2, i, 1.0), c.c1[i - 1], 1e-14) << i;
    }
}

TEST(ForwardCoefficients, SingleWavelet) {
    const auto a = forward_coefficients([](double x) { return haar_eval(2, x); }, 3);
    for (std::size_t k = 0; k < a.size(); ++k) {
        EXPECT_NEAR(a[k], k == 1 ? 1.0 : 0.0, 1e-12) << k;
    }
}

TEST(ForwardCoefficients, FinerWavelet) {
    const std::size_t i = basis_index(2, 1);
    const auto a = forward_coefficients([&](double x) { return haar_eval(i, x); }, 3);
    for (std::size_t k = 0; k < a.size(); ++k) {
        EXPECT_NEAR(a[k], k == i - 1 ? 1.0 : 0.0, 1e-12) << k;
    }
}

TEST(ForwardCoefficients, Constant) {
    const auto a = forward_coefficients([](double) { return 1.0; }, 4);
    EXPECT_NEAR(a[0], 1.0, 1e-14);
    for (std::size_t k = 1; k < a.size(); ++k) EXPECT_NEAR(a[k], 0.0, 1e-14);
}

TEST(ForwardCoefficients, SineObeysLipschitzBound) {
    const int level = 6;
    const auto a = forward_coefficients([](double x) { return std::sin(std::numbers::pi * x); }, level);
    for (int j = 0; j <= level; ++j) {
        for (int k = 0; k < (1 << j); ++k) {
            const double bound = std::numbers::pi / std::ldexp(1.0, j + 1);
            EXPECT_LE(std::fabs(a[basis_index(j, k) - 1]), bound + 1e-12);
        }
    }
}

TEST(ForwardCoefficients, MatchesWaveletExpansionOfLinear) {
    // u = x: a_i = 2^j * int x h_i = -1 / (4m) for every wavelet.
    const auto a = forward_coefficients([](double x) { return x; }, 4);
    EXPECT_NEAR(a[0], 0.5, 1e-14);
    for (std::size_t i = 2; i <= a.size(); ++i) {
        const double m = wavelet_of(i).dilation();
        EXPECT_NEAR(a[i - 1], -1.0 / (4.0 * m), 1e-14) << i;
    }
}

} // namespace
} // namespace haarwave
