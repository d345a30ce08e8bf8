#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fraccomp/elliptic.hpp"
#include "fraccomp/evolve_linear.hpp"
#include "fraccomp/grid.hpp"
#include "fraccomp/semilinear.hpp"

namespace fraccomp::compare {

struct Location {
    std::size_t node = 0;
    std::size_t time = 0;
};

/// holds <=> worst_violation <= tolerance_used.
struct ComparisonReport {
    std::string property_name;
    bool holds = true;
    double worst_violation = 0.0;
    Location location;
    double tolerance_used = 0.0;
};

struct BarrierPair {
    Field lower;
    Field upper;
    SpaceField lower_initial;
    SpaceField upper_initial;
};

/// Takes the initial values from the t = 0 slices.
BarrierPair make_barrier_pair(Field lower, Field upper);

/// C_pos (h^2 + tau^{min(1, 2 - alpha)}) scale, with a round-off floor.
double default_tolerance(const Grid1D& g, const TimeGrid& tg, double alpha, double scale, double c_pos = 10.0);
/// max(|a|, |F|) over the space-time grid.
double data_scale(const evolve::ProblemSpec& p);
double default_tolerance(const evolve::ProblemSpec& p, double c_pos = 10.0);

ComparisonReport check_positivity(const Field& u, double tol);
/// u1 >= u2 - tol. Throws GridMismatch.
ComparisonReport check_ordering(const Field& u1, const Field& u2, double tol);

/// delta Gamma(beta + 1) / Gamma(alpha + beta + 1) t^{alpha + beta}.
TimeSeries example1_lower_bound(double alpha, double beta, double delta, const TimeGrid& tg);

enum class Coefficient { reaction, robin };

struct CoefficientRequest {
    Coefficient which = Coefficient::reaction;
    elliptic::SpaceTimeFn c1, c2;                // reaction: c1 >= c2
    std::pair<double, double> sigma1, sigma2;    // robin: sigma2 >= sigma1 > 0 at both ends
};

struct CoefficientComparison {
    Field u1;
    Field u2;
    ComparisonReport report{};  // u1 >= u2
};

/// Throws HypothesisViolation when the ordering hypotheses fail, including a
/// Robin comparison requested while c >= 0 somewhere.
CoefficientComparison coefficient_comparison(const evolve::ProblemSpec& base, const CoefficientRequest& req,
                                             std::optional<double> tol = {});

struct LinearSequence {
    std::vector<Field> iterates;      // u_1 = a, u_2, ...
    std::vector<double> increments;   // max |u_{n+1} - u_n|
    ComparisonReport nonnegativity{};   // worst over all iterates
};

/// d_t^alpha (u_{n+1} - a) + A1 u_{n+1} = (b0 + c) u_n + F with A1 = A + b0 + c.
/// Throws HypothesisViolation on b0 < |c| or negative data, ConvergenceFailure on divergence.
LinearSequence linear_monotone_sequence(const evolve::ProblemSpec& p, double b0, int n_max,
                                        std::optional<double> tol = {});

struct MonotoneIteration {
    std::vector<Field> from_lower;  // L^k of the lower barrier, k = 0, 1, ...
    std::vector<Field> from_upper;
    ComparisonReport chains{};        // worst step against monotonicity of either chain
    ComparisonReport sandwich{};      // lower <= u <= upper
    Field solution;                 // direct semilinear solve
    double limit_gap = 0.0;         // max |L^k upper - L^k lower| at exit
    int sweeps = 0;
};

/// Iterates L v: d_t^alpha (v - a) + A v + (M + 1) v = (M + 1) u + f(u) + F from both barriers.
/// Throws HypothesisViolation when the chains cross, ConvergenceFailure after k_max sweeps.
MonotoneIteration monotone_iteration(const evolve::ProblemSpec& p, const semilinear::SemilinearTerm& f,
                                     const BarrierPair& barriers, double M, int k_max,
                                     std::optional<double> tol = {});

enum class BarrierKind { upper, lower };

/// Discrete residual d^alpha(v - v(0)) + A_h v - f(v) - F with L1 in time, plus the
/// boundary inequality and the ordering of v(0) against a. Only nodes with t_k <= t_max count.
ComparisonReport verify_barrier(const Field& candidate, BarrierKind kind, const evolve::ProblemSpec& p,
                                const semilinear::SemilinearTerm& f, std::optional<double> tol = {},
                                double t_max = std::numeric_limits<double>::infinity());

struct E3Bounds {
    double rho = 0.0;               // max(-A_h a) / Gamma(alpha + 1), floored at 1e-12
    ComparisonReport report{};        // 0 <= u and u - a <= rho t^alpha
    ComparisonReport upper_barrier{}; // verify_barrier on a + rho t^alpha
    ComparisonReport lower_barrier{}; // verify_barrier on 0
    double min_u_minus_a = 0.0;     // informational
    Field solution;
};

/// Throws HypothesisViolation unless a >= 0 with vanishing normal derivative.
E3Bounds barrier_bounds_e3(const evolve::ProblemSpec& p,
                           const semilinear::SemilinearTerm& f = semilinear::builtin_enzyme(),
                           std::optional<double> tol = {});

struct E4Bounds {
    double T1 = 0.0, T2 = 0.0, T3 = 0.0;
    double M3 = 0.0;
    double lower_coeff = 0.0;       // (M2 - f(delta1 / 2)) / Gamma(alpha + 1)
    ComparisonReport upper_report{};  // u - a <= t^{alpha - eps} on (0, T1]
    ComparisonReport lower_report{};  // a - lower_coeff t^alpha <= u on (0, T2]
    ComparisonReport m3_report{};     // u - a <= M3 t^alpha on (0, T3]
    ComparisonReport upper_barrier{};
    ComparisonReport lower_barrier{};
    bool holds = false;
    Field solution;
};

/// f increasing. Throws NotApplicable when no admissible T1 exists.
E4Bounds barrier_bounds_e4(const evolve::ProblemSpec& p, const semilinear::SemilinearTerm& f, double eps,
                           double delta1, std::optional<double> tol = {});

struct DecayFit {
    double lambda1 = 0.0;
    double fitted_C = 0.0;       // t >= T/4
    double late_C = 0.0;         // t >= T/2
    double third_quarter_C = 0.0;
    double last_quarter_C = 0.0;
    double envelope_ratio = 0.0; // max over the last quarter of |u - u_inf| t^alpha / |phi_1|, times lambda_1 / fitted_C
    bool stable = false;
    bool envelope_holds = false;
    bool holds = false;
};

/// Fits |u - u_inf| <= C E_{alpha,1}(-lambda_1 t^alpha) |phi_1| with (lambda_1, phi_1) from eig.
DecayFit asymptotic_decay_check(const Field& u, const SpaceField& u_inf, const elliptic::EigenDecomposition& eig,
                                double alpha);

}  // namespace fraccomp::compare
