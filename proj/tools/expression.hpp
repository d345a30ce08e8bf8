#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace fraccomp::cli {

struct ParseError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Arithmetic expression in x and t: + - * / ^, sin cos exp abs, constants pi and e.
class Expression {
public:
    static Expression parse(const std::string& text);
    static Expression constant(double v);

    double operator()(double x, double t = 0.0) const { return fn_(x, t); }
    const std::string& text() const { return text_; }
    bool uses_t() const { return uses_t_; }
    /// Constant value when the expression uses neither x nor t.
    bool is_constant() const { return !uses_x_ && !uses_t_; }

private:
    std::function<double(double, double)> fn_;
    std::string text_;
    bool uses_x_ = false;
    bool uses_t_ = false;
};

}  // namespace fraccomp::cli
