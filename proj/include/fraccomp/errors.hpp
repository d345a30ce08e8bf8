#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fraccomp {

/// Bad argument or malformed input (alpha out of range, a(x) <= 0, ...).
class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Grids of two fields (or a field and a problem) do not match.
class GridMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The requested check does not apply to the given data.
class NotApplicable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Hypothesis of a comparison result is violated by the inputs.
class HypothesisViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Linear system is singular or numerically singular.
class SingularSystem : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Principal eigenvalue not simple, or phi_1 changes sign.
class DegenerateSpectrum : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iteration did not converge. Carries the node where it failed and the last residual.
class ConvergenceFailure : public std::runtime_error {
public:
    ConvergenceFailure(const std::string& what, std::size_t node, double residual)
        : std::runtime_error(what), node_(node), residual_(residual) {}
    std::size_t node() const noexcept { return node_; }
    double residual() const noexcept { return residual_; }

private:
    std::size_t node_;
    double residual_;
};

/// Semilinear iterate left the box |u| <= m on which f is certified.
class BoxExit : public std::runtime_error {
public:
    BoxExit(const std::string& what, std::size_t node, double value)
        : std::runtime_error(what), node_(node), value_(value) {}
    std::size_t node() const noexcept { return node_; }
    double value() const noexcept { return value_; }

private:
    std::size_t node_;
    double value_;
};

}  // namespace fraccomp
