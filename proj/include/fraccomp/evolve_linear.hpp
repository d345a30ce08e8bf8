#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "fraccomp/elliptic.hpp"
#include "fraccomp/grid.hpp"

namespace fraccomp::evolve {

/// Source term F(x, t), either a function or samples on the problem's space-time grid.
class Source {
public:
    Source() = default;  // F = 0
    static Source function(std::function<double(double, double)> f);
    static Source samples(Field f);

    bool is_zero() const { return !fn_ && !samples_; }
    /// out[i] = F(x_i, t_k).
    void fill(const Grid1D& g, const TimeGrid& tg, std::size_t k, std::span<double> out) const;

private:
    std::function<double(double, double)> fn_;
    std::shared_ptr<const Field> samples_;
};

/// d_t^alpha (u - a) + A u = F with the boundary condition carried by `elliptic`.
struct ProblemSpec {
    Grid1D grid;
    TimeGrid tgrid;
    double alpha;
    elliptic::EllipticSpec elliptic;
    SpaceField initial;
    Source source = {};
};

void validate(const ProblemSpec& p);

struct SolveStats {
    std::vector<int> iterations;     // Picard sweeps per time node
    double last_residual = 0.0;      // final sweep difference at the last node
    double max_contraction = 0.0;    // largest ratio of successive sweep differences
};

/// Full A0 eigenbasis of the problem (all grid modes).
elliptic::EigenDecomposition spectral_basis(const ProblemSpec& p,
                                            elliptic::SymmetricPart part = elliptic::SymmetricPart::shifted);

/// S(t)a = sum_n E_{alpha,1}(-lambda_n t^alpha) (a, phi_n) phi_n. alpha in (0, 1].
SpaceField homogeneous_solution(const SpaceField& a, const elliptic::EigenDecomposition& eig, double alpha, double t);

/// state + sum_n [int_{t_k}^{t_k1} K_n(t_k1 - s) ds] (F, phi_n) phi_n with F frozen on the step.
SpaceField duhamel_step(const SpaceField& state, const SpaceField& f_samples, const elliptic::EigenDecomposition& eig,
                        double alpha, double t_k, double t_k1);

/// Spectral exponential integrator: exact per-mode convolution weights, sources
/// linear in time between nodes, Picard over Q = b d/dx + (c0 + c) at every node.
Field solve_linear_spectral(const ProblemSpec& p, const elliptic::EigenDecomposition& eig, double picard_tol = 1e-10,
                            int picard_max = 50, SolveStats* stats = nullptr);
Field solve_linear_spectral(const ProblemSpec& p);

/// Implicit L1 finite-difference stepper, used as an independent oracle.
Field solve_linear_l1(const ProblemSpec& p);

namespace detail {

/// Pointwise nonlinearity added to the right-hand side at time node k.
struct NodalTerm {
    std::function<void(std::size_t k, std::span<const double> u, std::span<double> out)> eval;
    double box = std::numeric_limits<double>::infinity();
};

Field spectral_march(const ProblemSpec& p, const elliptic::EigenDecomposition& eig, double tol, int max_iter,
                     const NodalTerm* f, SolveStats* stats);

/// Convolution weight int_{s0}^{s1} K(t - s) ds for one mode, any lambda >= 0.
double mode_weight(double alpha, double lambda, double s0, double s1, double t);

}  // namespace detail

}  // namespace fraccomp::evolve
