#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "fraccomp/grid.hpp"

namespace fraccomp::elliptic {

using SpaceFn = std::function<double(double)>;
using SpaceTimeFn = std::function<double(double, double)>;

/// Coefficients of -Au = (a u')' + b u' + c u with a u' nu + sigma u = 0 at the ends.
/// Empty b, c mean zero; empty b0 means the A1 form is unavailable.
struct EllipticSpec {
    SpaceFn a = [](double) { return 1.0; };
    SpaceTimeFn b;
    SpaceTimeFn c;
    double c0 = 1.0;
    double sigma_lo = 0.0;
    double sigma_hi = 0.0;
    SpaceTimeFn b0;
};

/// Which operator a matrix or solve refers to.
///   shifted: A0 = -(a u')' + c0 u
///   full:    A  = -(a u')' - b u' - c u
///   a1:      A1 = -(a u')' - b u' + b0 u
enum class Form { shifted, full, a1 };

struct Tridiagonal {
    std::vector<double> lower, diag, upper;  // lower[0] and upper[n-1] unused

    explicit Tridiagonal(std::size_t n = 0) : lower(n, 0.0), diag(n, 0.0), upper(n, 0.0) {}
    std::size_t size() const { return diag.size(); }
    void apply(std::span<const double> v, std::span<double> out) const;
    /// Thomas algorithm; throws SingularSystem on a vanishing pivot.
    std::vector<double> solve(std::span<const double> rhs) const;
};

class DiscreteOperator {
public:
    DiscreteOperator(const EllipticSpec& spec, const Grid1D& grid, double t);

    const Grid1D& grid() const { return grid_; }
    double time() const { return t_; }
    std::span<const double> weights() const { return w_; }
    std::span<const double> drift() const { return b_; }
    std::span<const double> reaction() const { return c_; }
    std::span<const double> b0() const { return b0_; }
    bool has_b0() const { return !b0_.empty(); }
    double c0() const { return c0_; }
    double sigma_lo() const { return sigma_lo_; }
    double sigma_hi() const { return sigma_hi_; }

    /// Symmetric stiffness K (flux part plus sigma on the boundary diagonal), without c0.
    const std::vector<double>& stiff_diag() const { return kd_; }
    const std::vector<double>& stiff_off() const { return ko_; }

    /// W^{-1}(K + W diag(zeroth)) - drift * D, with D the centered derivative closed by the BC.
    Tridiagonal matrix(Form f) const;
    /// Q = b D + (c0 + c), the part the spectral solver moves to the right-hand side.
    Tridiagonal q_matrix() const;
    bool q_vanishes() const;
    bool drift_vanishes() const;

    void apply(Form f, std::span<const double> v, std::span<double> out) const;
    /// Centered u' inside, boundary values from a u' nu + sigma u = 0.
    void gradient(std::span<const double> v, std::span<double> out) const;

private:
    Grid1D grid_;
    double t_;
    std::vector<double> w_, kd_, ko_, b_, c_, b0_;
    double c0_, sigma_lo_, sigma_hi_, a_lo_, a_hi_;
};

DiscreteOperator assemble(const EllipticSpec& spec, const Grid1D& grid, double t = 0.0);

/// Which symmetric operator enters the eigenproblem.
///   shifted: A0 (the default; drift and c go through Q)
///   self_adjoint: -(a u')' - c u, i.e. A itself when b = 0
enum class SymmetricPart { shifted, self_adjoint };

struct EigenDecomposition {
    Grid1D grid;
    std::vector<double> lambdas;  // ascending
    Eigen::MatrixXd modes;        // columns phi_n, orthonormal in the weighted inner product
    std::vector<double> weights;

    std::size_t count() const { return lambdas.size(); }
    /// Coefficients (v, phi_n)_h.
    Eigen::VectorXd project(std::span<const double> v) const;
    /// sum_n coef_n phi_n.
    std::vector<double> reconstruct(const Eigen::VectorXd& coef) const;
    SpaceField mode(std::size_t n) const;
};

EigenDecomposition eigendecompose(const DiscreteOperator& op, std::size_t k,
                                  SymmetricPart part = SymmetricPart::shifted);

/// (lambda_1, phi_1) with phi_1 > 0 at every node. Throws DegenerateSpectrum otherwise.
std::pair<double, SpaceField> principal_eigenpair(const EigenDecomposition& eig);

/// Solves (form) psi = rhs with a psi' nu + sigma psi = boundary_rhs at (x_lo, x_hi).
SpaceField solve_stationary(const EllipticSpec& spec, const Grid1D& grid, const SpaceField& rhs,
                            std::pair<double, double> boundary_rhs = {0.0, 0.0}, Form form = Form::a1,
                            double t = 0.0);

/// Discrete (A1 v, v)_h including boundary sigma terms; c0 stands in for b0 when b0 is absent.
double coercivity_form(const DiscreteOperator& op, std::span<const double> v);

double l2_norm_sq(const Grid1D& g, std::span<const double> v);
double h1_seminorm_sq(const Grid1D& g, std::span<const double> v);
double inner(const Grid1D& g, std::span<const double> u, std::span<const double> v);

}  // namespace fraccomp::elliptic
