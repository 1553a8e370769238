#pragma once

// Scalar math expressions over named real variables.
//
// Grammar (lowest to highest precedence):
//   sum     := product (('+' | '-') product)*
//   product := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?          right-associative
//   primary := number | name | name '(' args ')' | '(' sum ')'
//
// Unary minus binds looser than '^', so "-2^2" is -4 and "2^-1" is 0.5.

#include "haarwave/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <initializer_list>
#include <map>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace haarwave {

class Expression {
public:
    using Bindings = std::map<std::string, double, std::less<>>;

    /// Parses `source`. Identifiers must be a function name, `pi`, `e`, or one of `allowed_vars`;
    /// positional evaluation uses the order of `allowed_vars`.
    static Expression parse(std::string_view source, std::vector<std::string> allowed_vars);

    /// Evaluates with named bindings. Every variable referenced by the tree must be bound.
    double evaluate(const Bindings& bindings) const;

    /// Evaluates with values given positionally in the order of variables().
    double operator()(std::span<const double> args) const;
    double operator()(std::initializer_list<double> args) const {
        return (*this)(std::span<const double>(args.begin(), args.size()));
    }

    const std::vector<std::string>& variables() const noexcept { return vars_; }
    const std::string& source() const noexcept { return source_; }

    /// Fully parenthesized rendering that parses back to an equivalent tree.
    std::string to_string() const;

    /// True when the tree references variable `name`.
    bool references(std::string_view name) const;

private:
    enum class Kind { Number, Constant, Variable, Negate, Binary, Call };
    enum class Func { Sin, Cos, Tan, Exp, Log, Sqrt, Abs, Sinh, Cosh };

    struct Node {
        Kind kind{};
        double value = 0.0;
        std::size_t slot = 0;
        char op = 0;
        Func func{};
        std::string name;
        std::unique_ptr<const Node> lhs;
        std::unique_ptr<const Node> rhs;
    };
    using NodePtr = std::unique_ptr<const Node>;

    class Parser;

    static double eval(const Node& node, std::span<const double> args);
    static void render(const Node& node, std::string& out);
    static bool mentions(const Node& node, std::size_t slot);

    std::shared_ptr<const Node> root_;
    std::vector<std::string> vars_;
    std::string source_;
};

namespace detail {

struct FunctionEntry {
    std::string_view name;
    int arity;
};

inline constexpr FunctionEntry function_table[] = {
    {"sin", 1}, {"cos", 1}, {"tan", 1}, {"exp", 1}, {"log", 1},
    {"sqrt", 1}, {"abs", 1}, {"sinh", 1}, {"cosh", 1},
};

inline bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

inline bool is_ident_char(char c) {
    return is_ident_start(c) || (c >= '0' && c <= '9');
}

inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

} // namespace detail

class Expression::Parser {
public:
    Parser(std::string_view src, const std::vector<std::string>& vars) : src_(src), vars_(vars) {}

    NodePtr run() {
        skip_space();
        if (pos_ == src_.size()) {
            throw ParseError("empty expression", pos_);
        }
        auto node = sum();
        skip_space();
        if (pos_ != src_.size()) {
            throw ParseError(std::string("unexpected '") + src_[pos_] + "'", pos_);
        }
        return node;
    }

private:
    void skip_space() {
        while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' ||
                                      src_[pos_] == '\n' || src_[pos_] == '\r')) {
            ++pos_;
        }
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_space();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    static NodePtr binary(char op, NodePtr lhs, NodePtr rhs) {
        auto n = std::make_unique<Node>();
        n->kind = Kind::Binary;
        n->op = op;
        n->lhs = std::move(lhs);
        n->rhs = std::move(rhs);
        return n;
    }

    NodePtr sum() {
        auto lhs = product();
        for (;;) {
            char c = peek();
            if (c != '+' && c != '-') return lhs;
            ++pos_;
            lhs = binary(c, std::move(lhs), product());
        }
    }

    NodePtr product() {
        auto lhs = unary();
        for (;;) {
            char c = peek();
            if (c != '*' && c != '/') return lhs;
            ++pos_;
            lhs = binary(c, std::move(lhs), unary());
        }
    }

    NodePtr unary() {
        char c = peek();
        if (c == '-') {
            ++pos_;
            auto n = std::make_unique<Node>();
            n->kind = Kind::Negate;
            n->lhs = unary();
            return n;
        }
        if (c == '+') {
            ++pos_;
            return unary();
        }
        return power();
    }

    NodePtr power() {
        auto base = primary();
        if (accept('^')) {
            return binary('^', std::move(base), unary());
        }
        return base;
    }

    NodePtr primary() {
        skip_space();
        if (pos_ == src_.size()) {
            throw ParseError("unexpected end of input", pos_);
        }
        const char c = src_[pos_];
        if (detail::is_digit(c) || c == '.') return number();
        if (detail::is_ident_start(c)) return identifier();
        if (c == '(') {
            ++pos_;
            auto inner = sum();
            if (!accept(')')) {
                throw ParseError("expected ')'", pos_);
            }
            return inner;
        }
        throw ParseError(std::string("unexpected '") + c + "'", pos_);
    }

    NodePtr number() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && detail::is_digit(src_[pos_])) ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (pos_ < src_.size() && detail::is_digit(src_[pos_])) ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
            if (p < src_.size() && detail::is_digit(src_[p])) {
                while (p < src_.size() && detail::is_digit(src_[p])) ++p;
                pos_ = p;
            }
        }
        double value = 0.0;
        const auto* first = src_.data() + start;
        const auto* last = src_.data() + pos_;
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc() || ptr != last) {
            throw ParseError("malformed number", start);
        }
        auto n = std::make_unique<Node>();
        n->kind = Kind::Number;
        n->value = value;
        return n;
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && detail::is_ident_char(src_[pos_])) ++pos_;
        std::string name(src_.substr(start, pos_ - start));

        if (peek() == '(') {
            ++pos_;
            return call(name, start);
        }
        for (std::size_t s = 0; s < vars_.size(); ++s) {
            if (vars_[s] == name) {
                auto n = std::make_unique<Node>();
                n->kind = Kind::Variable;
                n->slot = s;
                n->name = name;
                return n;
            }
        }
        if (name == "pi" || name == "e") {
            auto n = std::make_unique<Node>();
            n->kind = Kind::Constant;
            n->value = name == "pi" ? std::numbers::pi : std::numbers::e;
            n->name = name;
            return n;
        }
        throw ParseError("unknown identifier '" + name + "'", start);
    }

    NodePtr call(const std::string& name, std::size_t start) {
        int index = -1;
        for (std::size_t f = 0; f < std::size(detail::function_table); ++f) {
            if (detail::function_table[f].name == name) index = static_cast<int>(f);
        }
        if (index < 0) {
            throw ParseError("unknown function '" + name + "'", start);
        }
        std::vector<NodePtr> args;
        if (!accept(')')) {
            do {
                args.push_back(sum());
            } while (accept(','));
            if (!accept(')')) {
                throw ParseError("expected ')'", pos_);
            }
        }
        const int arity = detail::function_table[index].arity;
        if (static_cast<int>(args.size()) != arity) {
            throw ParseError("function '" + name + "' takes " + std::to_string(arity) +
                                 " argument(s), got " + std::to_string(args.size()),
                             start);
        }
        auto n = std::make_unique<Node>();
        n->kind = Kind::Call;
        n->func = static_cast<Func>(index);
        n->name = name;
        n->lhs = std::move(args.front());
        return n;
    }

    std::string_view src_;
    const std::vector<std::string>& vars_;
    std::size_t pos_ = 0;
};

inline Expression Expression::parse(std::string_view source, std::vector<std::string> allowed_vars) {
    Expression expr;
    Parser parser(source, allowed_vars);
    expr.root_ = parser.run();
    expr.vars_ = std::move(allowed_vars);
    expr.source_ = std::string(source);
    return expr;
}

inline double Expression::evaluate(const Bindings& bindings) const {
    if (!root_) throw DomainError("evaluating an empty expression");
    std::vector<double> args(vars_.size(), 0.0);
    for (std::size_t s = 0; s < vars_.size(); ++s) {
        auto it = bindings.find(vars_[s]);
        if (it != bindings.end()) {
            args[s] = it->second;
        } else if (references(vars_[s])) {
            throw DomainError("variable '" + vars_[s] + "' is not bound");
        }
    }
    return eval(*root_, args);
}

inline double Expression::operator()(std::span<const double> args) const {
    if (!root_) throw DomainError("evaluating an empty expression");
    if (args.size() != vars_.size()) {
        throw DomainError("expected " + std::to_string(vars_.size()) + " argument(s), got " +
                          std::to_string(args.size()));
    }
    return eval(*root_, args);
}

inline double Expression::eval(const Node& node, std::span<const double> args) {
    auto checked = [](double v, const char* what) {
        if (!std::isfinite(v)) {
            throw DomainError(std::string("non-finite result in ") + what);
        }
        return v;
    };
    switch (node.kind) {
    case Kind::Number:
    case Kind::Constant:
        return node.value;
    case Kind::Variable:
        return args[node.slot];
    case Kind::Negate:
        return -eval(*node.lhs, args);
    case Kind::Binary: {
        const double a = eval(*node.lhs, args);
        const double b = eval(*node.rhs, args);
        switch (node.op) {
        case '+': return checked(a + b, "addition");
        case '-': return checked(a - b, "subtraction");
        case '*': return checked(a * b, "multiplication");
        case '/':
            if (b == 0.0) throw DomainError("division by zero");
            return checked(a / b, "division");
        default:
            if (a == 0.0 && b < 0.0) throw DomainError("zero raised to a negative power");
            return checked(std::pow(a, b), "power");
        }
    }
    case Kind::Call: {
        const double a = eval(*node.lhs, args);
        switch (node.func) {
        case Func::Sin: return std::sin(a);
        case Func::Cos: return std::cos(a);
        case Func::Tan: return checked(std::tan(a), "tan");
        case Func::Exp: return checked(std::exp(a), "exp");
        case Func::Log:
            if (a <= 0.0) throw DomainError("log of a non-positive value");
            return std::log(a);
        case Func::Sqrt:
            if (a < 0.0) throw DomainError("sqrt of a negative value");
            return std::sqrt(a);
        case Func::Abs: return std::fabs(a);
        case Func::Sinh: return checked(std::sinh(a), "sinh");
        case Func::Cosh: return checked(std::cosh(a), "cosh");
        }
    }
    }
    return 0.0;
}

inline void Expression::render(const Node& node, std::string& out) {
    switch (node.kind) {
    case Kind::Number: {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", node.value);
        out += buf;
        return;
    }
    case Kind::Constant:
    case Kind::Variable:
        out += node.name;
        return;
    case Kind::Negate:
        out += "(-";
        render(*node.lhs, out);
        out += ')';
        return;
    case Kind::Binary:
        out += '(';
        render(*node.lhs, out);
        out += node.op;
        render(*node.rhs, out);
        out += ')';
        return;
    case Kind::Call:
        out += node.name;
        out += '(';
        render(*node.lhs, out);
        out += ')';
        return;
    }
}

inline std::string Expression::to_string() const {
    std::string out;
    if (!root_) return out;
    render(*root_, out);
    return out;
}

inline bool Expression::mentions(const Node& node, std::size_t slot) {
    if (node.kind == Kind::Variable) return node.slot == slot;
    return (node.lhs && mentions(*node.lhs, slot)) || (node.rhs && mentions(*node.rhs, slot));
}

inline bool Expression::references(std::string_view name) const {
    if (!root_) return false;
    for (std::size_t s = 0; s < vars_.size(); ++s) {
        if (vars_[s] == name) return mentions(*root_, s);
    }
    return false;
}

} // namespace haarwave
