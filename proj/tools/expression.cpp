#include "expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>

namespace fraccomp::cli {

namespace {

using Fn = std::function<double(double, double)>;

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    Fn parse() {
        Fn f = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return f;
    }

    bool uses_x = false, uses_t = false;

private:
    const std::string& s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("expression '" + s_ + "': " + what + " at offset " + std::to_string(pos_));
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Fn expr() {
        Fn lhs = term();
        for (;;) {
            if (eat('+')) {
                lhs = [a = lhs, b = term()](double x, double t) { return a(x, t) + b(x, t); };
            } else if (eat('-')) {
                lhs = [a = lhs, b = term()](double x, double t) { return a(x, t) - b(x, t); };
            } else {
                return lhs;
            }
        }
    }

    Fn term() {
        Fn lhs = unary();
        for (;;) {
            if (eat('*')) {
                lhs = [a = lhs, b = unary()](double x, double t) { return a(x, t) * b(x, t); };
            } else if (eat('/')) {
                lhs = [a = lhs, b = unary()](double x, double t) { return a(x, t) / b(x, t); };
            } else {
                return lhs;
            }
        }
    }

    Fn unary() {
        if (eat('-')) return [a = unary()](double x, double t) { return -a(x, t); };
        if (eat('+')) return unary();
        return power();
    }

    // Right associative; the exponent may carry its own sign.
    Fn power() {
        Fn base = primary();
        if (eat('^')) return [a = base, b = unary()](double x, double t) { return std::pow(a(x, t), b(x, t)); };
        return base;
    }

    Fn primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        const char c = s_[pos_];
        if (eat('(')) {
            Fn inner = expr();
            if (!eat(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = s_.c_str() + pos_;
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            if (end == begin) fail("bad number");
            pos_ += static_cast<std::size_t>(end - begin);
            return [v](double, double) { return v; };
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            const std::string id = s_.substr(start, pos_ - start);
            if (id == "x") {
                uses_x = true;
                return [](double x, double) { return x; };
            }
            if (id == "t") {
                uses_t = true;
                return [](double, double t) { return t; };
            }
            if (id == "pi") return [](double, double) { return std::numbers::pi; };
            if (id == "e") return [](double, double) { return std::numbers::e; };
            double (*fn)(double) = nullptr;
            if (id == "sin") fn = [](double v) { return std::sin(v); };
            else if (id == "cos") fn = [](double v) { return std::cos(v); };
            else if (id == "exp") fn = [](double v) { return std::exp(v); };
            else if (id == "abs") fn = [](double v) { return std::abs(v); };
            else fail("unknown identifier '" + id + "'");
            if (!eat('(')) fail("expected '(' after " + id);
            Fn arg = expr();
            if (!eat(')')) fail("expected ')'");
            return [fn, arg](double x, double t) { return fn(arg(x, t)); };
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }
};

}  // namespace

Expression Expression::parse(const std::string& text) {
    Parser p(text);
    Expression e;
    e.fn_ = p.parse();
    e.text_ = text;
    e.uses_x_ = p.uses_x;
    e.uses_t_ = p.uses_t;
    return e;
}

Expression Expression::constant(double v) {
    Expression e;
    e.fn_ = [v](double, double) { return v; };
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    e.text_ = buf;
    return e;
}

}  // namespace fraccomp::cli
