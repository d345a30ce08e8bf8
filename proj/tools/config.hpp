#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "expression.hpp"
#include "fraccomp/evolve_linear.hpp"
#include "fraccomp/semilinear.hpp"

namespace fraccomp::cli {

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Flat `key = value` configuration; `#` starts a comment.
class RunConfig {
public:
    static RunConfig from_text(const std::string& text, const std::string& origin = "<text>");
    static RunConfig load(const std::string& path);

    /// Throws ConfigError on unknown keys.
    void set(const std::string& key, const std::string& value);
    /// "key=value".
    void apply_override(const std::string& assignment);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    std::string text(const std::string& key, const std::string& fallback) const;
    std::string text(const std::string& key) const;
    double number(const std::string& key) const;
    double number(const std::string& key, double fallback) const;
    long integer(const std::string& key, long fallback) const;
    bool flag(const std::string& key, bool fallback) const;
    Expression expression(const std::string& key, const std::string& fallback) const;

    const std::map<std::string, std::string>& entries() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

const std::vector<std::string>& known_keys();

/// Problem from alpha, domain, n_space, n_time, time_grading, grading_r, T, a, b, c, c0,
/// sigma_lo, sigma_hi, b0, initial, source. Throws ConfigError when an expression is not
/// finite on the grid.
evolve::ProblemSpec build_problem(const RunConfig& cfg);

/// `semilinear` = none | enzyme | burgers | linear; empty optional for none.
std::optional<semilinear::SemilinearTerm> build_term(const RunConfig& cfg);

}  // namespace fraccomp::cli
