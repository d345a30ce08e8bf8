#include "fraccomp/evolve_linear.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "fraccomp/errors.hpp"
#include "fraccomp/fracops.hpp"
#include "fraccomp/gamma.hpp"
#include "fraccomp/mittag_leffler.hpp"
#include "fraccomp/parallel.hpp"

namespace fraccomp::evolve {

using elliptic::EigenDecomposition;

Source Source::function(std::function<double(double, double)> f) {
    Source s;
    s.fn_ = std::move(f);
    return s;
}

Source Source::samples(Field f) {
    Source s;
    s.samples_ = std::make_shared<const Field>(std::move(f));
    return s;
}

void Source::fill(const Grid1D& g, const TimeGrid& tg, std::size_t k, std::span<double> out) const {
    if (samples_) {
        if (!(samples_->grid() == g) || samples_->nt() != tg.size() || samples_->tgrid()[k] != tg[k])
            throw GridMismatch("Source: sampled source does not match the problem grids");
        const auto s = samples_->slice(k);
        std::copy(s.begin(), s.end(), out.begin());
    } else if (fn_) {
        for (std::size_t i = 0; i < g.size(); ++i) out[i] = fn_(g.x(i), tg[k]);
    } else {
        std::fill(out.begin(), out.end(), 0.0);
    }
}

void validate(const ProblemSpec& p) {
    if (!(p.alpha > 0.0 && p.alpha < 1.0)) throw InvalidParameter("ProblemSpec: alpha must lie in (0, 1)");
    if (!(p.initial.grid == p.grid)) throw GridMismatch("ProblemSpec: initial value lives on another grid");
    for (double v : p.initial.values)
        if (!std::isfinite(v)) throw InvalidParameter("ProblemSpec: initial value not finite");
}

EigenDecomposition spectral_basis(const ProblemSpec& p, elliptic::SymmetricPart part) {
    const auto op = elliptic::assemble(p.elliptic, p.grid, 0.0);
    return elliptic::eigendecompose(op, p.grid.size(), part);
}

namespace {

/// Antiderivatives of one mode kernel K(u) = u^{a-1} E_{a,a}(-l u^a):
/// P(d) = int_0^d K = (1 - E_{a,1}(-l d^a)) / l and R(d) = int_0^d P = d (1 - E_{a,2}(-l d^a)) / l.
/// Power series below l d^a = 1/2, prepared tables above. On a step [s0, s1] with g linear,
/// int K(t - s) g ds = w (g0 + g1) / 2 + D (g1 - g0), D = (R(d0) - R(d1)) / h - (P(d0) + P(d1)) / 2.
class ModeRamp {
public:
    ModeRamp(double alpha, const ml::RelaxationTable& e1, const ml::RelaxationTable& e2) : e1_(e1), e2_(e2) {
        for (int k = 1; k < kTerms; ++k) {
            rg1_[k] = special::rgamma(alpha * k + 1.0);
            rg2_[k] = special::rgamma(alpha * k + 2.0);
        }
    }

    /// da = d^alpha.
    double P(double l, double da) const {
        if (da <= 0.0) return 0.0;
        if (std::abs(l) * da <= 0.5) return series(l, da, 1.0, rg1_);
        return (1.0 - e1_(l * da)) / l;
    }

    double R(double l, double d, double da) const {
        if (d <= 0.0) return 0.0;
        if (std::abs(l) * da <= 0.5) return series(l, da, d, rg2_);
        return d * (1.0 - e2_(l * da)) / l;
    }

private:
    static constexpr int kTerms = 64;

    double series(double l, double da, double lead, const std::array<double, kTerms>& rg) const {
        double acc = 0.0, term_pow = lead * da;
        for (int k = 1; k < kTerms; ++k) {
            const double term = term_pow * rg[k];
            acc += term;
            if (std::abs(term) <= 1e-17 * std::abs(acc)) break;
            term_pow *= -l * da;
        }
        return acc;
    }

    const ml::RelaxationTable& e1_;
    const ml::RelaxationTable& e2_;
    std::array<double, kTerms> rg1_{}, rg2_{};
};

}  // namespace

namespace detail {

double mode_weight(double alpha, double lambda, double s0, double s1, double t) {
    const double far = std::pow(t - s0, alpha);
    if (std::abs(lambda) * far <= 0.5) {
        // sum_{k>=1} (-lambda)^{k-1} ((t-s0)^{ak} - (t-s1)^{ak}) / Gamma(ak+1)
        double acc = 0.0, lp = 1.0;
        for (int k = 1; k < 200; ++k) {
            const double term = lp * fracops::power_gap(s0, s1, t, alpha * k) * special::rgamma(alpha * k + 1.0);
            acc += term;
            if (std::abs(term) <= 1e-17 * std::abs(acc)) break;
            lp *= -lambda;
        }
        return acc;
    }
    if (lambda > 0.0) return ml::ml_kernel_integral(alpha, lambda, s0, s1, t);
    const double e_near = ml::ml(alpha, 1.0, -lambda * std::pow(t - s1, alpha)).value;
    const double e_far = ml::ml(alpha, 1.0, -lambda * far).value;
    return (e_near - e_far) / lambda;
}

Field spectral_march(const ProblemSpec& p, const EigenDecomposition& eig, double tol, int max_iter, const NodalTerm* f,
                     SolveStats* stats) {
    validate(p);
    if (!(eig.grid == p.grid)) throw GridMismatch("spectral solver: eigenbasis built on another grid");
    const TimeGrid& tg = p.tgrid;
    const std::size_t steps = tg.steps();
    const std::size_t nx = p.grid.size();
    const std::size_t modes = eig.count();
    const double alpha = p.alpha;

    Field u(p.grid, tg);
    std::copy(p.initial.values.begin(), p.initial.values.end(), u.slice(0).begin());
    const Eigen::VectorXd ahat = eig.project(p.initial.values);
    const auto& lam = eig.lambdas;
    const double t_alpha = std::pow(tg.horizon(), alpha);
    std::vector<char> small(modes);
    for (std::size_t n = 0; n < modes; ++n) small[n] = lam[n] <= 0.0 || lam[n] * t_alpha <= 1e-3;
    const ml::RelaxationTable table(alpha, 1.0), table2(alpha, 2.0);
    const ModeRamp ramp(alpha, table, table2);

    // mode-major values of g at the nodes; g is linear in time between nodes
    std::vector<double> gnode(modes * (steps + 1), 0.0);
    std::vector<double> g(nx), fk(nx), qu(nx), fu(nx), uk(nx), spow(steps + 1);
    Eigen::VectorXd ghat, uhat(static_cast<Eigen::Index>(modes)), hist(static_cast<Eigen::Index>(modes)),
        right_w(static_cast<Eigen::Index>(modes));

    auto rhs = [&](std::size_t k, const std::vector<double>& v, const elliptic::Tridiagonal* q) {
        p.source.fill(p.grid, tg, k, fk);
        for (std::size_t i = 0; i < nx; ++i) g[i] = fk[i];
        if (q) {
            q->apply(v, qu);
            for (std::size_t i = 0; i < nx; ++i) g[i] += qu[i];
        }
        if (f) {
            f->eval(k, v, fu);
            for (std::size_t i = 0; i < nx; ++i) g[i] += fu[i];
        }
        return eig.project(g);
    };
    auto q_at = [&](std::size_t k, elliptic::Tridiagonal& q) {
        const auto op = elliptic::assemble(p.elliptic, p.grid, tg[k]);
        if (op.q_vanishes()) return false;
        q = op.q_matrix();
        return true;
    };

    {
        elliptic::Tridiagonal q0;
        const bool has_q = q_at(0, q0);
        std::vector<double> a(p.initial.values);
        const Eigen::VectorXd g0 = rhs(0, a, has_q ? &q0 : nullptr);
        for (std::size_t n = 0; n < modes; ++n) gnode[n * (steps + 1)] = g0[static_cast<Eigen::Index>(n)];
    }
    if (stats) {
        stats->iterations.assign(steps + 1, 0);
        stats->max_contraction = 0.0;
    }

    // slope weight on step j: exact R differences near t, Simpson on P where h_j < d_j / 20
    std::vector<double> mpow(steps);
    std::vector<char> simpson(steps);
    auto slope_weight = [&](double l, std::size_t j, double tk, double p0, double p1, double& r_prev) {
        const double h = tg[j + 1] - tg[j];
        const double r_next = simpson[j] ? 0.0 : ramp.R(l, tk - tg[j + 1], spow[j + 1]);
        double d;
        if (simpson[j]) {
            d = (2.0 / 3.0) * (ramp.P(l, mpow[j]) - 0.5 * (p0 + p1));
        } else {
            if (std::isnan(r_prev)) r_prev = ramp.R(l, tk - tg[j], spow[j]);
            d = (r_prev - r_next) / h - 0.5 * (p0 + p1);
        }
        r_prev = simpson[j] ? std::nan("") : r_next;
        return d;
    };

    for (std::size_t k = 1; k <= steps; ++k) {
        const double tk = tg[k];
        for (std::size_t j = 0; j < k; ++j) {
            spow[j] = std::pow(tk - tg[j], alpha);
            simpson[j] = tg[j + 1] - tg[j] < 0.05 * (tk - tg[j]);
            if (simpson[j]) mpow[j] = std::pow(tk - 0.5 * (tg[j] + tg[j + 1]), alpha);
        }
        spow[k] = 0.0;

        parallel_for(modes, [&](std::size_t begin, std::size_t end) {
            for (std::size_t n = begin; n < end; ++n) {
                const double l = lam[n];
                const double* gn = gnode.data() + n * (steps + 1);
                double s_part, acc = 0.0, p_prev, r_prev = std::nan("");
                if (small[n]) {
                    s_part = ml::ml(alpha, 1.0, -l * spow[0]).value * ahat[static_cast<Eigen::Index>(n)];
                    p_prev = ramp.P(l, spow[0]);
                    for (std::size_t j = 0; j + 1 < k; ++j) {
                        const double w = mode_weight(alpha, l, tg[j], tg[j + 1], tk);
                        const double p_next = p_prev - w;
                        const double d = slope_weight(l, j, tk, p_prev, p_next, r_prev);
                        acc += w * 0.5 * (gn[j] + gn[j + 1]) + d * (gn[j + 1] - gn[j]);
                        p_prev = p_next;
                    }
                    p_prev = mode_weight(alpha, l, tg[k - 1], tk, tk);
                } else {
                    double e_prev = table(l * spow[0]);
                    s_part = e_prev * ahat[static_cast<Eigen::Index>(n)];
                    for (std::size_t j = 0; j + 1 < k; ++j) {
                        const double e_next = table(l * spow[j + 1]);
                        const double w = (e_next - e_prev) / l;
                        const double d = slope_weight(l, j, tk, (1.0 - e_prev) / l, (1.0 - e_next) / l, r_prev);
                        acc += w * 0.5 * (gn[j] + gn[j + 1]) + d * (gn[j + 1] - gn[j]);
                        e_prev = e_next;
                    }
                    p_prev = (1.0 - e_prev) / l;
                }
                // last step: weights of g(t_{k-1}) and of the unknown g(t_k)
                const double d_last = slope_weight(l, k - 1, tk, p_prev, 0.0, r_prev);
                const auto idx = static_cast<Eigen::Index>(n);
                right_w[idx] = 0.5 * p_prev + d_last;
                hist[idx] = s_part + acc + (0.5 * p_prev - d_last) * gn[k - 1];
            }
        });

        elliptic::Tridiagonal q;
        const bool has_q = q_at(k, q);
        const bool iterate = has_q || f != nullptr;
        const auto prev = u.slice(k - 1);
        std::copy(prev.begin(), prev.end(), uk.begin());
        int it = 0;
        double diff = 0.0, prev_diff = 0.0;
        while (true) {
            ghat = rhs(k, uk, has_q ? &q : nullptr);
            uhat = hist + right_w.cwiseProduct(ghat);
            const Eigen::VectorXd v = eig.modes * uhat;
            diff = 0.0;
            double umax = 0.0;
            for (std::size_t i = 0; i < nx; ++i) {
                diff = std::max(diff, std::abs(v[static_cast<Eigen::Index>(i)] - uk[i]));
                uk[i] = v[static_cast<Eigen::Index>(i)];
                umax = std::max(umax, std::abs(uk[i]));
            }
            ++it;
            if (!std::isfinite(diff)) throw ConvergenceFailure("Picard iteration diverged", k, diff);
            if (f && umax > f->box)
                throw BoxExit("semilinear iterate left the box |u| <= m at time node " + std::to_string(k), k, umax);
            if (!iterate) break;
            if (stats && it > 1 && prev_diff > 0.0) stats->max_contraction = std::max(stats->max_contraction, diff / prev_diff);
            prev_diff = diff;
            if (diff <= tol) break;
            if (it >= max_iter)
                throw ConvergenceFailure("Picard iteration did not converge at time node " + std::to_string(k), k, diff);
        }
        if (iterate) ghat = rhs(k, uk, has_q ? &q : nullptr);
        std::copy(uk.begin(), uk.end(), u.slice(k).begin());
        for (std::size_t n = 0; n < modes; ++n) gnode[n * (steps + 1) + k] = ghat[static_cast<Eigen::Index>(n)];
        if (stats) {
            stats->iterations[k] = it;
            stats->last_residual = diff;
        }
    }
    return u;
}

}  // namespace detail

SpaceField homogeneous_solution(const SpaceField& a, const EigenDecomposition& eig, double alpha, double t) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidParameter("homogeneous_solution: alpha must lie in (0, 1]");
    if (!(t >= 0.0)) throw InvalidParameter("homogeneous_solution: t must be >= 0");
    if (!(a.grid == eig.grid)) throw GridMismatch("homogeneous_solution: grid mismatch");
    Eigen::VectorXd c = eig.project(a.values);
    const double ta = std::pow(t, alpha);
    for (std::size_t n = 0; n < eig.count(); ++n)
        c[static_cast<Eigen::Index>(n)] *= t == 0.0 ? 1.0 : ml::ml(alpha, 1.0, -eig.lambdas[n] * ta).value;
    return SpaceField(a.grid, eig.reconstruct(c));
}

SpaceField duhamel_step(const SpaceField& state, const SpaceField& f_samples, const EigenDecomposition& eig,
                        double alpha, double t_k, double t_k1) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidParameter("duhamel_step: alpha must lie in (0, 1]");
    if (!(t_k1 > t_k) || !(t_k >= 0.0)) throw InvalidParameter("duhamel_step: need 0 <= t_k < t_k1");
    if (!(state.grid == eig.grid) || !(f_samples.grid == eig.grid)) throw GridMismatch("duhamel_step: grid mismatch");
    Eigen::VectorXd c = eig.project(f_samples.values);
    for (std::size_t n = 0; n < eig.count(); ++n)
        c[static_cast<Eigen::Index>(n)] *= detail::mode_weight(alpha, eig.lambdas[n], t_k, t_k1, t_k1);
    std::vector<double> add = eig.reconstruct(c);
    std::vector<double> out(state.values);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += add[i];
    return SpaceField(state.grid, std::move(out));
}

Field solve_linear_spectral(const ProblemSpec& p, const EigenDecomposition& eig, double picard_tol, int picard_max,
                            SolveStats* stats) {
    return detail::spectral_march(p, eig, picard_tol, picard_max, nullptr, stats);
}

Field solve_linear_spectral(const ProblemSpec& p) { return solve_linear_spectral(p, spectral_basis(p)); }

Field solve_linear_l1(const ProblemSpec& p) {
    validate(p);
    const TimeGrid& tg = p.tgrid;
    const std::size_t steps = tg.steps();
    const std::size_t nx = p.grid.size();
    Field u(p.grid, tg);
    std::copy(p.initial.values.begin(), p.initial.values.end(), u.slice(0).begin());
    std::vector<double> row(steps), rhs(nx), f(nx);
    for (std::size_t k = 1; k <= steps; ++k) {
        fracops::l1_row(tg, p.alpha, k, row);
        const auto op = elliptic::assemble(p.elliptic, p.grid, tg[k]);
        auto m = op.matrix(elliptic::Form::full);
        const double dkk = row[k - 1];
        p.source.fill(p.grid, tg, k, f);
        const auto prev = u.slice(k - 1);
        for (std::size_t i = 0; i < nx; ++i) {
            rhs[i] = f[i] + dkk * prev[i];
            m.diag[i] += dkk;
        }
        for (std::size_t j = 1; j < k; ++j) {
            const double bj = row[j - 1];
            const auto uj = u.slice(j);
            const auto uj1 = u.slice(j - 1);
            for (std::size_t i = 0; i < nx; ++i) rhs[i] -= bj * (uj[i] - uj1[i]);
        }
        const std::vector<double> next = m.solve(rhs);
        std::copy(next.begin(), next.end(), u.slice(k).begin());
    }
    return u;
}

}  // namespace fraccomp::evolve
