#pragma once

#include <functional>
#include <limits>
#include <string>

#include "fraccomp/elliptic.hpp"
#include "fraccomp/evolve_linear.hpp"
#include "fraccomp/grid.hpp"

namespace fraccomp::semilinear {

/// Pointwise nonlinearity f(x, u), or f(x, u, u') when depends_on_gradient is set.
struct SemilinearTerm {
    std::string name;
    std::function<double(double, double)> eval;
    std::function<double(double, double)> deriv_u;
    std::function<double(double, double, double)> eval_grad;
    double bound_M = 1.0;  // bound on |f| and |f_u| over the declared box
    bool monotone_decreasing = false;
    bool depends_on_gradient = false;

    double operator()(double x, double u) const { return eval(x, u); }
};

/// f(u) = -u / (1 + |u|).
SemilinearTerm builtin_enzyme();
/// f(x, u, u') = -mu(x) u u'.
SemilinearTerm builtin_burgers(std::function<double(double)> mu);
/// f(u) = slope u + offset.
SemilinearTerm builtin_linear(double slope, double offset = 0.0);
SemilinearTerm builtin_zero();
/// f + delta.
SemilinearTerm shifted(const SemilinearTerm& f, double delta);

struct TermCheck {
    bool bounded = true;      // |f|, |f_u| <= M
    bool lipschitz = true;    // |f(v1) - f(v2)| <= M |v1 - v2|
    bool monotone = true;     // f_u <= 0 when declared decreasing
    double worst_ratio = 0.0; // largest sampled difference quotient
};

/// Samples the declared properties of f on [x_lo, x_hi] x [-m, m].
TermCheck check_term(const SemilinearTerm& f, double x_lo, double x_hi, double m, int samples = 64);

/// d_t^alpha (u - a) + A u = f(u) + F by Picard iteration at every time node.
/// Throws BoxExit when |u| exceeds box_m, ConvergenceFailure when a node does not settle.
Field solve_semilinear(const evolve::ProblemSpec& p, const SemilinearTerm& f, const elliptic::EigenDecomposition& eig,
                       double tol = 1e-10, int max_iter = 50,
                       double box_m = std::numeric_limits<double>::infinity(), evolve::SolveStats* stats = nullptr);

/// A u = f(u) with the boundary condition of `spec`, by damped Newton from u = 0.
SpaceField solve_semilinear_stationary(const elliptic::EllipticSpec& spec, const Grid1D& grid,
                                       const SemilinearTerm& f,
                                       double box_m = std::numeric_limits<double>::infinity());

}  // namespace fraccomp::semilinear
