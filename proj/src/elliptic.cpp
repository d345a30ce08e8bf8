#include "fraccomp/elliptic.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "fraccomp/errors.hpp"

namespace fraccomp::elliptic {

void Tridiagonal::apply(std::span<const double> v, std::span<double> out) const {
    const std::size_t n = size();
    if (n == 1) {
        out[0] = diag[0] * v[0];
        return;
    }
    out[0] = diag[0] * v[0] + upper[0] * v[1];
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = lower[i] * v[i - 1] + diag[i] * v[i] + upper[i] * v[i + 1];
    out[n - 1] = lower[n - 1] * v[n - 2] + diag[n - 1] * v[n - 1];
}

std::vector<double> Tridiagonal::solve(std::span<const double> rhs) const {
    const std::size_t n = size();
    double scale = 0.0;
    for (double d : diag) scale = std::max(scale, std::abs(d));
    const double tiny = 1e-13 * scale;
    std::vector<double> c(n), d(n);
    double piv = diag[0];
    if (!(std::abs(piv) > tiny)) throw SingularSystem("tridiagonal solve: vanishing pivot at row 0");
    c[0] = n > 1 ? upper[0] / piv : 0.0;
    d[0] = rhs[0] / piv;
    for (std::size_t i = 1; i < n; ++i) {
        piv = diag[i] - lower[i] * c[i - 1];
        if (!(std::abs(piv) > tiny))
            throw SingularSystem("tridiagonal solve: vanishing pivot at row " + std::to_string(i));
        c[i] = i + 1 < n ? upper[i] / piv : 0.0;
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / piv;
    }
    for (std::size_t i = n - 1; i-- > 0;) d[i] -= c[i] * d[i + 1];
    return d;
}

DiscreteOperator::DiscreteOperator(const EllipticSpec& spec, const Grid1D& grid, double t)
    : grid_(grid), t_(t), c0_(spec.c0), sigma_lo_(spec.sigma_lo), sigma_hi_(spec.sigma_hi) {
    if (!spec.a) throw InvalidParameter("assemble: diffusion coefficient a is required");
    if (!(spec.sigma_lo >= 0.0) || !(spec.sigma_hi >= 0.0)) throw InvalidParameter("assemble: sigma must be >= 0");
    if (!(spec.c0 >= 0.0) || !std::isfinite(spec.c0)) throw InvalidParameter("assemble: c0 must be >= 0");
    const std::size_t n = grid.size();
    const double h = grid.h();
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };

    std::vector<double> am(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        am[i] = spec.a(grid.x(i) + 0.5 * h);
        if (!positive(am[i])) throw InvalidParameter("assemble: a(x) must be > 0 (ellipticity)");
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!positive(spec.a(grid.x(i)))) throw InvalidParameter("assemble: a(x) must be > 0 (ellipticity)");
    a_lo_ = spec.a(grid.x_lo());
    a_hi_ = spec.a(grid.x_hi());

    w_.assign(n, h);
    w_.front() = w_.back() = 0.5 * h;
    kd_.assign(n, 0.0);
    ko_.assign(n - 1, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double f = am[i] / h;
        kd_[i] += f;
        kd_[i + 1] += f;
        ko_[i] = -f;
    }
    kd_.front() += sigma_lo_;
    kd_.back() += sigma_hi_;

    b_.assign(n, 0.0);
    c_.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = grid.x(i);
        if (spec.b) b_[i] = spec.b(x, t);
        if (spec.c) c_[i] = spec.c(x, t);
        if (!std::isfinite(b_[i]) || !std::isfinite(c_[i])) throw InvalidParameter("assemble: b or c not finite");
    }
    if (spec.b0) {
        b0_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            b0_[i] = spec.b0(grid.x(i), t);
            if (!positive(b0_[i])) throw InvalidParameter("assemble: b0 must be > 0");
        }
    }
}

DiscreteOperator assemble(const EllipticSpec& spec, const Grid1D& grid, double t) {
    return DiscreteOperator(spec, grid, t);
}

namespace {

// Centered first derivative closed with u'(x_lo) = sigma_lo u / a, u'(x_hi) = -sigma_hi u / a.
Tridiagonal derivative_matrix(std::size_t n, double h, double s_lo, double s_hi) {
    Tridiagonal d(n);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        d.lower[i] = -0.5 / h;
        d.upper[i] = 0.5 / h;
    }
    d.diag[0] = s_lo;
    d.diag[n - 1] = -s_hi;
    return d;
}

}  // namespace

Tridiagonal DiscreteOperator::matrix(Form f) const {
    const std::size_t n = grid_.size();
    Tridiagonal m(n);
    for (std::size_t i = 0; i < n; ++i) {
        m.diag[i] = kd_[i] / w_[i];
        if (i > 0) m.lower[i] = ko_[i - 1] / w_[i];
        if (i + 1 < n) m.upper[i] = ko_[i] / w_[i];
    }
    if (f == Form::a1 && !has_b0()) throw InvalidParameter("A1 form requested but b0 is absent");
    for (std::size_t i = 0; i < n; ++i) {
        switch (f) {
            case Form::shifted: m.diag[i] += c0_; break;
            case Form::full: m.diag[i] -= c_[i]; break;
            case Form::a1: m.diag[i] += b0_[i]; break;
        }
    }
    if (f != Form::shifted) {
        const Tridiagonal d = derivative_matrix(n, grid_.h(), sigma_lo_ / a_lo_, sigma_hi_ / a_hi_);
        for (std::size_t i = 0; i < n; ++i) {
            m.lower[i] -= b_[i] * d.lower[i];
            m.diag[i] -= b_[i] * d.diag[i];
            m.upper[i] -= b_[i] * d.upper[i];
        }
    }
    return m;
}

Tridiagonal DiscreteOperator::q_matrix() const {
    const std::size_t n = grid_.size();
    Tridiagonal q = derivative_matrix(n, grid_.h(), sigma_lo_ / a_lo_, sigma_hi_ / a_hi_);
    for (std::size_t i = 0; i < n; ++i) {
        q.lower[i] *= b_[i];
        q.diag[i] *= b_[i];
        q.upper[i] *= b_[i];
        q.diag[i] += c0_ + c_[i];
    }
    return q;
}

bool DiscreteOperator::drift_vanishes() const {
    return std::all_of(b_.begin(), b_.end(), [](double v) { return v == 0.0; });
}

bool DiscreteOperator::q_vanishes() const {
    if (!drift_vanishes()) return false;
    for (double c : c_)
        if (c0_ + c != 0.0) return false;
    return true;
}

void DiscreteOperator::apply(Form f, std::span<const double> v, std::span<double> out) const {
    matrix(f).apply(v, out);
}

void DiscreteOperator::gradient(std::span<const double> v, std::span<double> out) const {
    derivative_matrix(grid_.size(), grid_.h(), sigma_lo_ / a_lo_, sigma_hi_ / a_hi_).apply(v, out);
}

Eigen::VectorXd EigenDecomposition::project(std::span<const double> v) const {
    Eigen::VectorXd wv(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) wv[static_cast<Eigen::Index>(i)] = weights[i] * v[i];
    return modes.transpose() * wv;
}

std::vector<double> EigenDecomposition::reconstruct(const Eigen::VectorXd& coef) const {
    Eigen::VectorXd u = modes * coef;
    return std::vector<double>(u.data(), u.data() + u.size());
}

SpaceField EigenDecomposition::mode(std::size_t n) const {
    const auto col = modes.col(static_cast<Eigen::Index>(n));
    return SpaceField(grid, std::vector<double>(col.data(), col.data() + col.size()));
}

EigenDecomposition eigendecompose(const DiscreteOperator& op, std::size_t k, SymmetricPart part) {
    const std::size_t n = op.grid().size();
    if (k == 0 || k > n) throw InvalidParameter("eigendecompose: need 1 <= k <= node count");
    if (part == SymmetricPart::self_adjoint && !op.drift_vanishes())
        throw InvalidParameter("eigendecompose: the self-adjoint part requires b = 0");
    const auto w = op.weights();
    Eigen::VectorXd diag(static_cast<Eigen::Index>(n));
    Eigen::VectorXd off(static_cast<Eigen::Index>(n - 1));
    for (std::size_t i = 0; i < n; ++i) {
        const double z = part == SymmetricPart::shifted ? op.c0() : -op.reaction()[i];
        diag[static_cast<Eigen::Index>(i)] = op.stiff_diag()[i] / w[i] + z;
        if (i + 1 < n) off[static_cast<Eigen::Index>(i)] = op.stiff_off()[i] / std::sqrt(w[i] * w[i + 1]);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigendecompose: tridiagonal eigensolver did not converge");

    EigenDecomposition eig{op.grid(), {}, Eigen::MatrixXd(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k)),
                           std::vector<double>(w.begin(), w.end())};
    eig.lambdas.resize(k);
    for (std::size_t m = 0; m < k; ++m) {
        const auto col = static_cast<Eigen::Index>(m);
        eig.lambdas[m] = solver.eigenvalues()[col];
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto r = static_cast<Eigen::Index>(i);
            eig.modes(r, col) = solver.eigenvectors()(r, col) / std::sqrt(w[i]);
            mean += w[i] * eig.modes(r, col);
        }
        // phi_1 by its mean, the rest by the value at x_lo (or the mean if that vanishes)
        double s = m == 0 ? mean : eig.modes(0, col);
        if (std::abs(s) < 1e-12) s = mean;
        if (s < 0.0) eig.modes.col(col) *= -1.0;
    }
    return eig;
}

std::pair<double, SpaceField> principal_eigenpair(const EigenDecomposition& eig) {
    if (eig.count() == 0) throw DegenerateSpectrum("principal_eigenpair: empty decomposition");
    const double l1 = eig.lambdas[0];
    if (eig.count() >= 2 && !(eig.lambdas[1] - l1 > 1e-10 * std::abs(l1)))
        throw DegenerateSpectrum("principal_eigenpair: lambda_1 is not simple");
    SpaceField phi = eig.mode(0);
    for (double v : phi.values)
        if (!(v > 0.0)) throw DegenerateSpectrum("principal_eigenpair: phi_1 changes sign");
    return {l1, std::move(phi)};
}

SpaceField solve_stationary(const EllipticSpec& spec, const Grid1D& grid, const SpaceField& rhs,
                            std::pair<double, double> boundary_rhs, Form form, double t) {
    if (!(rhs.grid == grid)) throw GridMismatch("solve_stationary: rhs lives on another grid");
    const DiscreteOperator op(spec, grid, t);
    if (form == Form::a1 && !op.has_b0()) throw InvalidParameter("solve_stationary: A1 form requires b0");
    const std::size_t n = grid.size();

    // pure Neumann with no zeroth-order term and no drift: constants are in the kernel
    if (op.sigma_lo() == 0.0 && op.sigma_hi() == 0.0 && op.drift_vanishes()) {
        bool zero = true;
        for (std::size_t i = 0; i < n && zero; ++i) {
            const double z = form == Form::shifted ? op.c0() : form == Form::full ? -op.reaction()[i] : op.b0()[i];
            zero = z == 0.0;
        }
        if (zero) throw SingularSystem("solve_stationary: Neumann problem without zeroth-order term is singular");
    }

    const Tridiagonal m = op.matrix(form);
    std::vector<double> b = rhs.values;
    const auto w = op.weights();
    const auto [g_lo, g_hi] = boundary_rhs;
    b[0] += g_lo / w[0];
    b[n - 1] += g_hi / w[n - 1];
    if (form != Form::shifted) {
        const double a_lo = spec.a(grid.x_lo());
        const double a_hi = spec.a(grid.x_hi());
        b[0] -= op.drift()[0] * g_lo / a_lo;
        b[n - 1] += op.drift()[n - 1] * g_hi / a_hi;
    }
    std::vector<double> psi = m.solve(b);

    std::vector<double> r(n);
    m.apply(psi, r);
    double res = 0.0, scale = 0.0, mnorm = 0.0, pnorm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        res = std::max(res, std::abs(r[i] - b[i]));
        scale = std::max(scale, std::abs(b[i]));
        mnorm = std::max(mnorm, std::abs(m.lower[i]) + std::abs(m.diag[i]) + std::abs(m.upper[i]));
        pnorm = std::max(pnorm, std::abs(psi[i]));
    }
    if (!(res <= 1e-10 * (scale + mnorm * pnorm)))
        throw SingularSystem("solve_stationary: residual too large, system numerically singular");
    return SpaceField(grid, std::move(psi));
}

double coercivity_form(const DiscreteOperator& op, std::span<const double> v) {
    const std::size_t n = op.grid().size();
    const auto& kd = op.stiff_diag();
    const auto& ko = op.stiff_off();
    const auto w = op.weights();
    std::vector<double> dv(n);
    op.gradient(v, dv);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += kd[i] * v[i] * v[i];
        if (i + 1 < n) acc += 2.0 * ko[i] * v[i] * v[i + 1];
        const double z = op.has_b0() ? op.b0()[i] : op.c0();
        acc += w[i] * v[i] * (z * v[i] - op.drift()[i] * dv[i]);
    }
    return acc;
}

double inner(const Grid1D& g, std::span<const double> u, std::span<const double> v) {
    const std::size_t n = g.size();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += (i == 0 || i + 1 == n ? 0.5 : 1.0) * u[i] * v[i];
    return acc * g.h();
}

double l2_norm_sq(const Grid1D& g, std::span<const double> v) { return inner(g, v, v); }

double h1_seminorm_sq(const Grid1D& g, std::span<const double> v) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
        const double d = (v[i + 1] - v[i]) / g.h();
        acc += d * d;
    }
    return acc * g.h();
}

}  // namespace fraccomp::elliptic
