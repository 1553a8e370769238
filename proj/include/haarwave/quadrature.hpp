#pragma once

#include <cmath>
#include <concepts>
#include <stdexcept>

namespace haarwave {

/// Default subinterval count for integrals over [0, 1].
inline constexpr int default_quad_n = 4096;

/// Composite Simpson rule with `n` (even, >= 2) subintervals on [a, b].
template <std::invocable<double> Fn>
double quad_simpson(Fn&& fn, double a, double b, int n) {
    if (n < 2 || n % 2 != 0) {
        throw std::invalid_argument("Simpson rule needs an even subinterval count >= 2");
    }
    if (!(a < b)) {
        throw std::invalid_argument("Simpson rule needs a < b");
    }
    const double step = (b - a) / n;
    double odd = 0.0;
    double even = 0.0;
    for (int k = 1; k < n; ++k) {
        const double v = fn(a + k * step);
        if (k % 2 == 1) {
            odd += v;
        } else {
            even += v;
        }
    }
    return step / 3.0 * (fn(a) + 4.0 * odd + 2.0 * even + fn(b));
}

/// Composite Simpson rule whose endpoint samples are the one-sided limits
/// fn(a+) and fn(b-), approximated by the adjacent representable doubles.
/// Suited to integrands with a jump exactly at a or b.
template <std::invocable<double> Fn>
double quad_simpson_inner(Fn&& fn, double a, double b, int n) {
    const double lo = std::nextafter(a, b);
    const double hi = std::nextafter(b, a);
    auto inner = [&](double x) {
        if (x <= a) return fn(lo);
        if (x >= b) return fn(hi);
        return fn(x);
    };
    return quad_simpson(inner, a, b, n);
}

} // namespace haarwave
