#include "fraccomp/semilinear.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fraccomp/errors.hpp"

namespace fraccomp::semilinear {

SemilinearTerm builtin_enzyme() {
    SemilinearTerm f;
    f.name = "enzyme";
    f.eval = [](double, double u) { return -u / (1.0 + std::abs(u)); };
    f.deriv_u = [](double, double u) {
        const double d = 1.0 + std::abs(u);
        return -1.0 / (d * d);
    };
    f.bound_M = 1.0;
    f.monotone_decreasing = true;
    return f;
}

SemilinearTerm builtin_burgers(std::function<double(double)> mu) {
    SemilinearTerm f;
    f.name = "burgers";
    f.eval_grad = [mu](double x, double u, double ux) { return -mu(x) * u * ux; };
    f.eval = [](double, double) { return 0.0; };
    f.deriv_u = [](double, double) { return 0.0; };
    f.depends_on_gradient = true;
    return f;
}

SemilinearTerm builtin_linear(double slope, double offset) {
    SemilinearTerm f;
    f.name = "linear";
    f.eval = [slope, offset](double, double u) { return slope * u + offset; };
    f.deriv_u = [slope](double, double) { return slope; };
    f.bound_M = std::max(std::abs(slope), 1.0);
    f.monotone_decreasing = slope <= 0.0;
    return f;
}

SemilinearTerm builtin_zero() {
    SemilinearTerm f = builtin_linear(0.0, 0.0);
    f.name = "zero";
    return f;
}

SemilinearTerm shifted(const SemilinearTerm& f, double delta) {
    SemilinearTerm g = f;
    g.name = f.name + "+shift";
    if (f.eval) g.eval = [e = f.eval, delta](double x, double u) { return e(x, u) + delta; };
    if (f.eval_grad)
        g.eval_grad = [e = f.eval_grad, delta](double x, double u, double ux) { return e(x, u, ux) + delta; };
    g.bound_M = f.bound_M + std::abs(delta);
    return g;
}

TermCheck check_term(const SemilinearTerm& f, double x_lo, double x_hi, double m, int samples) {
    TermCheck r;
    if (f.depends_on_gradient) return r;
    for (int ix = 0; ix <= samples / 4; ++ix) {
        const double x = x_lo + (x_hi - x_lo) * ix / (samples / 4);
        double prev_u = -m, prev_f = f.eval(x, -m);
        for (int iu = 0; iu <= samples; ++iu) {
            const double u = -m + 2.0 * m * iu / samples;
            const double v = f.eval(x, u);
            const double d = f.deriv_u(x, u);
            if (std::abs(v) > f.bound_M * (1 + 1e-12) || std::abs(d) > f.bound_M * (1 + 1e-12)) r.bounded = false;
            if (f.monotone_decreasing && d > 0.0) r.monotone = false;
            if (iu > 0) {
                const double q = std::abs(v - prev_f) / (u - prev_u);
                r.worst_ratio = std::max(r.worst_ratio, q);
                if (q > f.bound_M * (1 + 1e-9)) r.lipschitz = false;
            }
            prev_u = u;
            prev_f = v;
        }
    }
    return r;
}

Field solve_semilinear(const evolve::ProblemSpec& p, const SemilinearTerm& f, const elliptic::EigenDecomposition& eig,
                       double tol, int max_iter, double box_m, evolve::SolveStats* stats) {
    evolve::validate(p);
    for (double v : p.initial.values)
        if (std::abs(v) > box_m) throw BoxExit("initial value outside the box |u| <= m", 0, std::abs(v));
    const auto op = elliptic::assemble(p.elliptic, p.grid, 0.0);
    const std::vector<double> x = p.grid.nodes();
    std::vector<double> ux(p.grid.size());
    evolve::detail::NodalTerm term;
    term.box = box_m;
    if (f.depends_on_gradient) {
        term.eval = [&](std::size_t, std::span<const double> u, std::span<double> out) {
            op.gradient(u, ux);
            for (std::size_t i = 0; i < u.size(); ++i) out[i] = f.eval_grad(x[i], u[i], ux[i]);
        };
    } else {
        term.eval = [&](std::size_t, std::span<const double> u, std::span<double> out) {
            for (std::size_t i = 0; i < u.size(); ++i) out[i] = f.eval(x[i], u[i]);
        };
    }
    return evolve::detail::spectral_march(p, eig, tol, max_iter, &term, stats);
}

SpaceField solve_semilinear_stationary(const elliptic::EllipticSpec& spec, const Grid1D& grid, const SemilinearTerm& f,
                                       double box_m) {
    if (f.depends_on_gradient) throw InvalidParameter("solve_semilinear_stationary: gradient terms not supported");
    if (!f.monotone_decreasing) throw HypothesisViolation("solve_semilinear_stationary: f must be monotone decreasing");
    const auto op = elliptic::assemble(spec, grid, 0.0);
    for (double c : op.reaction())
        if (c > 0.0) throw HypothesisViolation("solve_semilinear_stationary: requires c <= 0");
    const auto a = op.matrix(elliptic::Form::full);
    const std::size_t n = grid.size();
    const std::vector<double> x = grid.nodes();
    std::vector<double> u(n, 0.0), r(n), trial(n), rt(n);

    auto residual = [&](const std::vector<double>& v, std::vector<double>& out) {
        a.apply(v, out);
        double worst = 0.0, fmax = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double fv = f.eval(x[i], v[i]);
            out[i] -= fv;
            worst = std::max(worst, std::abs(out[i]));
            fmax = std::max(fmax, std::abs(fv));
        }
        return std::pair{worst, fmax};
    };

    auto [res, fmax] = residual(u, r);
    for (int it = 0; it < 100; ++it) {
        if (res <= 1e-10 * (1.0 + fmax)) return SpaceField(grid, u);
        elliptic::Tridiagonal j = a;
        for (std::size_t i = 0; i < n; ++i) j.diag[i] -= f.deriv_u(x[i], u[i]);
        const std::vector<double> delta = j.solve(r);
        double step = 1.0;
        bool accepted = false;
        double dmax = 0.0, umax = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            dmax = std::max(dmax, std::abs(delta[i]));
            umax = std::max(umax, std::abs(u[i]));
        }
        while (step > 1e-10) {
            for (std::size_t i = 0; i < n; ++i) trial[i] = u[i] - step * delta[i];
            auto [rt_norm, ft] = residual(trial, rt);
            if (rt_norm < res || step * dmax <= 1e-14 * (1.0 + umax)) {
                u.swap(trial);
                r.swap(rt);
                res = rt_norm;
                fmax = ft;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        for (double v : u)
            if (std::abs(v) > box_m) throw BoxExit("stationary iterate left the box |u| <= m", 0, std::abs(v));
        if (!accepted) break;
        if (step * dmax <= 1e-14 * (1.0 + umax)) return SpaceField(grid, u);
    }
    if (res <= 1e-10 * (1.0 + fmax)) return SpaceField(grid, u);
    throw ConvergenceFailure("damped Newton did not converge", 0, res);
}

}  // namespace fraccomp::semilinear
