#pragma once

// Problem definition for
//
//   u_tt - u_xx = phi(x, t),        0 < x < 1, 0 < t <= T
//   u(x, 0) = f(x),  u_t(x, 0) = g(x)
//   u(0, t) = h(t),  integral_0^1 u(x, t) dx = nu(t)
//
// together with the two built-in test problems and the problem file reader.

#include "haarwave/error.hpp"
#include "haarwave/expr.hpp"
#include "haarwave/quadrature.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace haarwave {

struct ProblemSpec {
    std::string name;
    Expression phi; ///< source term, in (x, t)
    Expression f;   ///< initial displacement, in x
    Expression g;   ///< initial velocity, in x
    Expression h;   ///< Dirichlet datum at x = 0, in t
    Expression nu;  ///< value of the integral of u over [0, 1], in t
    std::optional<Expression> exact;    ///< in (x, t)
    std::optional<Expression> h_prime;  ///< in t
    std::optional<Expression> nu_prime; ///< in t

    double source(double x, double t) const { return phi({x, t}); }
    double displacement(double x) const { return f({x}); }
    double velocity(double x) const { return g({x}); }
    double boundary(double t) const { return h({t}); }
    double integral(double t) const { return nu({t}); }

    bool has_exact() const noexcept { return exact.has_value(); }
    double exact_at(double x, double t) const {
        if (!exact) throw ProblemError("problem '" + name + "' has no exact solution");
        return (*exact)({x, t});
    }

    /// h'(t), analytic when supplied, else a central difference with step 1e-6.
    double boundary_rate(double t) const {
        if (h_prime) return (*h_prime)({t});
        return (boundary(t + fd_step) - boundary(t - fd_step)) / (2.0 * fd_step);
    }

    /// nu'(t), analytic when supplied, else a central difference with step 1e-6.
    double integral_rate(double t) const {
        if (nu_prime) return (*nu_prime)({t});
        return (integral(t + fd_step) - integral(t - fd_step)) / (2.0 * fd_step);
    }

    static constexpr double fd_step = 1e-6;
};

/// Field-wise comparison of names and expression sources.
inline bool same_definition(const ProblemSpec& a, const ProblemSpec& b) {
    auto same_opt = [](const std::optional<Expression>& x, const std::optional<Expression>& y) {
        return x.has_value() == y.has_value() && (!x || x->source() == y->source());
    };
    return a.name == b.name && a.phi.source() == b.phi.source() && a.f.source() == b.f.source() &&
           a.g.source() == b.g.source() && a.h.source() == b.h.source() &&
           a.nu.source() == b.nu.source() && same_opt(a.exact, b.exact) &&
           same_opt(a.h_prime, b.h_prime) && same_opt(a.nu_prime, b.nu_prime);
}

/// Expression sources for a problem, before parsing.
struct ProblemSource {
    std::string name;
    std::string phi, f, g, h, nu;
    std::optional<std::string> exact, h_prime, nu_prime;
};

namespace detail {

inline Expression parse_field(std::string_view field, const std::string& text,
                              std::vector<std::string> vars) {
    try {
        return Expression::parse(text, std::move(vars));
    } catch (const ParseError& e) {
        throw ProblemError("field '" + std::string(field) + "': " + e.what());
    }
}

inline std::optional<Expression> parse_optional(std::string_view field,
                                                const std::optional<std::string>& text,
                                                std::vector<std::string> vars) {
    if (!text) return std::nullopt;
    return parse_field(field, *text, std::move(vars));
}

} // namespace detail

/// Checks that a supplied exact solution reproduces f at t = 0 and h at x = 0.
inline void validate_problem(const ProblemSpec& spec, double tol = 1e-10) {
    if (!spec.exact) return;
    constexpr int samples = 21;
    for (int s = 0; s < samples; ++s) {
        const double p = static_cast<double>(s) / (samples - 1);
        const double df = std::fabs(spec.displacement(p) - spec.exact_at(p, 0.0));
        if (!(df <= tol)) {
            throw ProblemError("problem '" + spec.name + "': exact(x, 0) differs from f at x = " +
                               std::to_string(p));
        }
        const double dh = std::fabs(spec.boundary(p) - spec.exact_at(0.0, p));
        if (!(dh <= tol)) {
            throw ProblemError("problem '" + spec.name + "': exact(0, t) differs from h at t = " +
                               std::to_string(p));
        }
    }
}

inline ProblemSpec make_problem(const ProblemSource& src) {
    using detail::parse_field;
    using detail::parse_optional;
    ProblemSpec spec{
        src.name,
        parse_field("phi", src.phi, {"x", "t"}),
        parse_field("f", src.f, {"x"}),
        parse_field("g", src.g, {"x"}),
        parse_field("h", src.h, {"t"}),
        parse_field("nu", src.nu, {"t"}),
        parse_optional("exact", src.exact, {"x", "t"}),
        parse_optional("h_prime", src.h_prime, {"t"}),
        parse_optional("nu_prime", src.nu_prime, {"t"}),
    };
    validate_problem(spec);
    return spec;
}

inline std::vector<std::string> builtin_names() { return {"example1", "example2"}; }

inline ProblemSource builtin_source(std::string_view name) {
    if (name == "example1") {
        return {"example1",
                "(1/4 + pi^2)*exp(-t/2)*sin(pi*x)",
                "sin(pi*x)",
                "-1/2*sin(pi*x)",
                "0",
                "(2/pi)*exp(-t/2)",
                "exp(-t/2)*sin(pi*x)",
                "0",
                "-(1/pi)*exp(-t/2)"};
    }
    if (name == "example2") {
        return {"example2",
                "0",
                "cos(pi*x)",
                "0",
                "cos(pi*t)",
                "0",
                "1/2*(cos(pi*(x + t)) + cos(pi*(x - t)))",
                "-pi*sin(pi*t)",
                "0"};
    }
    throw ProblemError("unknown built-in problem '" + std::string(name) + "'");
}

inline ProblemSpec builtin(std::string_view name) { return make_problem(builtin_source(name)); }

/// Reads a problem from JSON text: an object with string fields
/// name, phi, f, g, h, nu and optional exact, h_prime, nu_prime.
inline ProblemSpec parse_problem(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ProblemError(std::string("malformed problem document: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ProblemError("problem document must be a JSON object");
    }
    static const std::set<std::string, std::less<>> known = {
        "name", "phi", "f", "g", "h", "nu", "exact", "h_prime", "nu_prime"};
    for (const auto& item : doc.items()) {
        if (!known.contains(item.key())) {
            throw ProblemError("unknown field '" + item.key() + "'");
        }
        if (!item.value().is_string()) {
            throw ProblemError("field '" + item.key() + "' must be a string");
        }
    }
    auto required = [&](const char* key) {
        if (!doc.contains(key)) throw ProblemError(std::string("missing field '") + key + "'");
        return doc[key].get<std::string>();
    };
    auto optional = [&](const char* key) -> std::optional<std::string> {
        if (!doc.contains(key)) return std::nullopt;
        return doc[key].get<std::string>();
    };
    return make_problem({required("name"), required("phi"), required("f"), required("g"),
                         required("h"), required("nu"), optional("exact"), optional("h_prime"),
                         optional("nu_prime")});
}

inline ProblemSpec load_problem(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ProblemError("cannot open problem file '" + path + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    if (in.bad()) {
        throw ProblemError("error reading problem file '" + path + "'");
    }
    return parse_problem(text.str());
}

struct CompatibilityReport {
    static constexpr std::array<std::string_view, 4> labels = {
        "f(0) = h(0)", "int f = nu(0)", "g(0) = h'(0)", "int g = nu'(0)"};

    std::array<double, 4> residuals{};
    std::array<bool, 4> pass{};
    double tolerance = 0.0;

    bool all_pass() const { return pass[0] && pass[1] && pass[2] && pass[3]; }
};

inline CompatibilityReport check_compatibility(const ProblemSpec& spec, double tol,
                                               int quad_n = default_quad_n) {
    if (!(tol > 0.0)) {
        throw std::invalid_argument("compatibility tolerance must be positive");
    }
    CompatibilityReport report;
    report.tolerance = tol;
    const double int_f = quad_simpson([&](double x) { return spec.displacement(x); }, 0.0, 1.0, quad_n);
    const double int_g = quad_simpson([&](double x) { return spec.velocity(x); }, 0.0, 1.0, quad_n);
    report.residuals = {
        std::fabs(spec.displacement(0.0) - spec.boundary(0.0)),
        std::fabs(int_f - spec.integral(0.0)),
        std::fabs(spec.velocity(0.0) - spec.boundary_rate(0.0)),
        std::fabs(int_g - spec.integral_rate(0.0)),
    };
    for (std::size_t k = 0; k < 4; ++k) report.pass[k] = report.residuals[k] <= tol;
    return report;
}

} // namespace haarwave
