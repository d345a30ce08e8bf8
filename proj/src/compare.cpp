#include "fraccomp/compare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fraccomp/errors.hpp"
#include "fraccomp/fracops.hpp"
#include "fraccomp/gamma.hpp"
#include "fraccomp/mittag_leffler.hpp"

namespace fraccomp::compare {

using evolve::ProblemSpec;
using semilinear::SemilinearTerm;

namespace {

constexpr double kRoundoff = 1e-13;

ComparisonReport finish(std::string name, double worst, Location loc, double tol) {
    ComparisonReport r;
    r.property_name = std::move(name);
    r.worst_violation = std::max(worst, 0.0);
    r.location = loc;
    r.tolerance_used = tol;
    r.holds = r.worst_violation <= tol;
    return r;
}

/// Worst of two reports, keeping the first's name.
ComparisonReport merge(const ComparisonReport& a, const ComparisonReport& b, std::string name) {
    const double ra = a.worst_violation - a.tolerance_used, rb = b.worst_violation - b.tolerance_used;
    ComparisonReport r = ra >= rb ? a : b;
    r.property_name = std::move(name);
    r.holds = a.holds && b.holds;
    return r;
}

double sup_norm(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double field_diff(const Field& a, const Field& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    return m;
}

Field sample_source(const ProblemSpec& p) {
    Field f(p.grid, p.tgrid);
    for (std::size_t k = 0; k < p.tgrid.size(); ++k) p.source.fill(p.grid, p.tgrid, k, f.slice(k));
    return f;
}

double sample_c(const elliptic::EllipticSpec& s, double x, double t) { return s.c ? s.c(x, t) : 0.0; }

void require_nonnegative_data(const ProblemSpec& p, const char* who) {
    for (double v : p.initial.values)
        if (v < 0.0) throw HypothesisViolation(std::string(who) + ": initial value must be nonnegative");
    const Field src = sample_source(p);
    for (double v : src.values())
        if (v < 0.0) throw HypothesisViolation(std::string(who) + ": source must be nonnegative");
}

Field constant_in_time(const SpaceField& a, const TimeGrid& tg) {
    Field u(a.grid, tg);
    for (std::size_t k = 0; k < tg.size(); ++k) std::copy(a.values.begin(), a.values.end(), u.slice(k).begin());
    return u;
}

/// out = f(v) at time node k, with u' from the boundary-aware gradient when needed.
void eval_term(const SemilinearTerm& f, const elliptic::DiscreteOperator& op, std::span<const double> v,
               std::vector<double>& ux, std::span<double> out) {
    const Grid1D& g = op.grid();
    if (f.depends_on_gradient) {
        ux.resize(v.size());
        op.gradient(v, ux);
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = f.eval_grad(g.x(i), v[i], ux[i]);
    } else {
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = f.eval(g.x(i), v[i]);
    }
}

/// Second-order one-sided a u' nu + sigma u at both ends.
std::pair<double, double> conormal_defect(const elliptic::DiscreteOperator& op, std::span<const double> v,
                                          const elliptic::EllipticSpec& spec) {
    const Grid1D& g = op.grid();
    const std::size_t n = g.size();
    const double h = g.h();
    const double d_lo = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    const double d_hi = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
    return {-spec.a(g.x_lo()) * d_lo + spec.sigma_lo * v[0], spec.a(g.x_hi()) * d_hi + spec.sigma_hi * v[n - 1]};
}

Field solve_semilinear_default(const ProblemSpec& p, const SemilinearTerm& f) {
    const auto eig = evolve::spectral_basis(p);
    return semilinear::solve_semilinear(p, f, eig);
}

}  // namespace

BarrierPair make_barrier_pair(Field lower, Field upper) {
    require_same_grids(lower, upper, "make_barrier_pair");
    SpaceField lo = lower.at_time(0), up = upper.at_time(0);
    return BarrierPair{std::move(lower), std::move(upper), std::move(lo), std::move(up)};
}

double default_tolerance(const Grid1D& g, const TimeGrid& tg, double alpha, double scale, double c_pos) {
    const double h = g.h();
    const double tau = tg.max_step();
    const double q = std::min(1.0, 2.0 - alpha);
    scale = std::abs(scale);
    return c_pos * (h * h + std::pow(tau, q)) * scale + kRoundoff * std::max(scale, 1.0);
}

double data_scale(const ProblemSpec& p) {
    return std::max(sup_norm(p.initial.values), sup_norm(sample_source(p).values()));
}

double default_tolerance(const ProblemSpec& p, double c_pos) {
    return default_tolerance(p.grid, p.tgrid, p.alpha, data_scale(p), c_pos);
}

ComparisonReport check_positivity(const Field& u, double tol) {
    double worst = 0.0;
    Location loc;
    for (std::size_t k = 0; k < u.nt(); ++k)
        for (std::size_t i = 0; i < u.nx(); ++i)
            if (-u(i, k) > worst) {
                worst = -u(i, k);
                loc = {i, k};
            }
    return finish("positivity", worst, loc, tol);
}

ComparisonReport check_ordering(const Field& u1, const Field& u2, double tol) {
    require_same_grids(u1, u2, "check_ordering");
    double worst = 0.0;
    Location loc;
    for (std::size_t k = 0; k < u1.nt(); ++k)
        for (std::size_t i = 0; i < u1.nx(); ++i) {
            const double d = u2(i, k) - u1(i, k);
            if (d > worst) {
                worst = d;
                loc = {i, k};
            }
        }
    return finish("ordering", worst, loc, tol);
}

TimeSeries example1_lower_bound(double alpha, double beta, double delta, const TimeGrid& tg) {
    if (!(alpha > 0.0) || !(beta >= 0.0) || !(delta >= 0.0))
        throw InvalidParameter("example1_lower_bound: need alpha > 0, beta >= 0, delta >= 0");
    const double coef = delta * special::gamma(beta + 1.0) * special::rgamma(alpha + beta + 1.0);
    return TimeSeries::sample(tg, [&](double t) { return coef * std::pow(t, alpha + beta); });
}

CoefficientComparison coefficient_comparison(const ProblemSpec& base, const CoefficientRequest& req,
                                             std::optional<double> tol) {
    require_nonnegative_data(base, "coefficient_comparison");
    ProblemSpec p1 = base, p2 = base;
    const auto& tg = base.tgrid;
    const auto& g = base.grid;
    if (req.which == Coefficient::reaction) {
        if (!req.c1 || !req.c2) throw InvalidParameter("coefficient_comparison: c1 and c2 required");
        for (std::size_t k = 0; k < tg.size(); ++k)
            for (std::size_t i = 0; i < g.size(); ++i)
                if (req.c1(g.x(i), tg[k]) < req.c2(g.x(i), tg[k]))
                    throw HypothesisViolation("coefficient_comparison: requires c1 >= c2");
        p1.elliptic.c = req.c1;
        p2.elliptic.c = req.c2;
    } else {
        for (std::size_t k = 0; k < tg.size(); ++k)
            for (std::size_t i = 0; i < g.size(); ++i)
                if (!(sample_c(base.elliptic, g.x(i), tg[k]) < 0.0))
                    throw HypothesisViolation(
                        "coefficient_comparison: Robin comparison needs c < 0 everywhere; not covered otherwise");
        const auto [s1l, s1h] = req.sigma1;
        const auto [s2l, s2h] = req.sigma2;
        if (!(s1l > 0.0 && s1h > 0.0 && s2l >= s1l && s2h >= s1h))
            throw HypothesisViolation("coefficient_comparison: requires sigma2 >= sigma1 > 0");
        p1.elliptic.sigma_lo = s1l;
        p1.elliptic.sigma_hi = s1h;
        p2.elliptic.sigma_lo = s2l;
        p2.elliptic.sigma_hi = s2h;
    }
    Field u1 = evolve::solve_linear_spectral(p1);
    Field u2 = evolve::solve_linear_spectral(p2);
    const double t = tol ? *tol : default_tolerance(base);
    ComparisonReport r = check_ordering(u1, u2, t);
    r.property_name = req.which == Coefficient::reaction ? "reaction comparison" : "robin comparison";
    return {std::move(u1), std::move(u2), std::move(r)};
}

LinearSequence linear_monotone_sequence(const ProblemSpec& p, double b0, int n_max, std::optional<double> tol) {
    evolve::validate(p);
    if (n_max < 1) throw InvalidParameter("linear_monotone_sequence: n_max >= 1");
    require_nonnegative_data(p, "linear_monotone_sequence");
    const auto& tg = p.tgrid;
    const auto& g = p.grid;
    double cmax = 0.0;
    for (std::size_t k = 0; k < tg.size(); ++k)
        for (std::size_t i = 0; i < g.size(); ++i) cmax = std::max(cmax, std::abs(sample_c(p.elliptic, g.x(i), tg[k])));
    if (b0 < cmax) throw HypothesisViolation("linear_monotone_sequence: b0 must dominate |c|");

    ProblemSpec q = p;
    q.elliptic.c = [b0](double, double) { return -b0; };
    const auto eig = evolve::spectral_basis(q);
    const Field f = sample_source(p);
    const double t = tol ? *tol : default_tolerance(p);

    LinearSequence out;
    out.iterates.push_back(constant_in_time(p.initial, tg));
    out.nonnegativity = check_positivity(out.iterates.back(), t);
    for (int n = 1; n < n_max; ++n) {
        const Field& un = out.iterates.back();
        Field rhs(g, tg);
        for (std::size_t k = 0; k < tg.size(); ++k)
            for (std::size_t i = 0; i < g.size(); ++i)
                rhs(i, k) = (b0 + sample_c(p.elliptic, g.x(i), tg[k])) * un(i, k) + f(i, k);
        q.source = evolve::Source::samples(std::move(rhs));
        Field next = evolve::solve_linear_spectral(q, eig);
        const double inc = field_diff(next, un);
        if (!std::isfinite(inc) || (!out.increments.empty() && inc > 1e3 * out.increments.front() && inc > 1e-12))
            throw ConvergenceFailure("linear monotone sequence diverges; b0 too small or grid too coarse",
                                     static_cast<std::size_t>(n), inc);
        out.increments.push_back(inc);
        out.nonnegativity = merge(out.nonnegativity, check_positivity(next, t), "iterate nonnegativity");
        out.iterates.push_back(std::move(next));
    }
    out.nonnegativity.property_name = "iterate nonnegativity";
    return out;
}

MonotoneIteration monotone_iteration(const ProblemSpec& p, const SemilinearTerm& f, const BarrierPair& barriers,
                                     double M, int k_max, std::optional<double> tol) {
    evolve::validate(p);
    const auto& tg = p.tgrid;
    const auto& g = p.grid;
    require_same_grids(barriers.lower, barriers.upper, "monotone_iteration");
    if (!(barriers.lower.grid() == g) || !(barriers.lower.tgrid() == tg))
        throw GridMismatch("monotone_iteration: barriers live on other grids");
    if (!(M >= 0.0)) throw InvalidParameter("monotone_iteration: M >= 0");

    const double scale = std::max({data_scale(p), sup_norm(barriers.lower.values()), sup_norm(barriers.upper.values())});
    const double t = tol ? *tol : default_tolerance(g, tg, p.alpha, scale);
    if (!check_ordering(barriers.upper, barriers.lower, t).holds)
        throw HypothesisViolation("monotone_iteration: lower barrier exceeds the upper barrier");

    ProblemSpec q = p;
    q.elliptic.c0 = p.elliptic.c0 + M + 1.0;
    q.elliptic.c = [c = p.elliptic.c, M](double x, double s) { return (c ? c(x, s) : 0.0) - (M + 1.0); };
    const auto eig = evolve::spectral_basis(q);
    const Field src = sample_source(p);
    const auto op = elliptic::assemble(p.elliptic, g, 0.0);

    std::vector<double> ux, fv(g.size());
    auto apply_L = [&](const Field& v) {
        Field rhs(g, tg);
        for (std::size_t k = 0; k < tg.size(); ++k) {
            eval_term(f, op, v.slice(k), ux, fv);
            for (std::size_t i = 0; i < g.size(); ++i) rhs(i, k) = (M + 1.0) * v(i, k) + fv[i] + src(i, k);
        }
        q.source = evolve::Source::samples(std::move(rhs));
        return evolve::solve_linear_spectral(q, eig);
    };

    MonotoneIteration out{{barriers.lower}, {barriers.upper}, {}, {}, barriers.lower, 0.0, 0};
    out.chains = finish("monotone chains", 0.0, {}, t);
    const double stop = 1e-9 * std::max(scale, 1.0);
    bool converged = false;
    for (int k = 0; k < k_max; ++k) {
        Field lo = apply_L(out.from_lower.back());
        Field up = apply_L(out.from_upper.back());
        out.chains = merge(out.chains, check_ordering(lo, out.from_lower.back(), t), "monotone chains");
        out.chains = merge(out.chains, check_ordering(out.from_upper.back(), up, t), "monotone chains");
        const ComparisonReport cross = check_ordering(up, lo, t);
        if (!cross.holds)
            throw HypothesisViolation("monotone_iteration: iterates from the barriers crossed; barrier violated");
        const double inc = std::max(field_diff(lo, out.from_lower.back()), field_diff(up, out.from_upper.back()));
        out.limit_gap = field_diff(up, lo);
        out.from_lower.push_back(std::move(lo));
        out.from_upper.push_back(std::move(up));
        out.sweeps = k + 1;
        if (inc <= stop) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw ConvergenceFailure("monotone_iteration: no convergence within k_max sweeps",
                                 static_cast<std::size_t>(k_max), out.limit_gap);

    out.solution = solve_semilinear_default(p, f);
    out.sandwich = merge(check_ordering(out.solution, barriers.lower, t), check_ordering(barriers.upper, out.solution, t),
                         "barrier sandwich");
    return out;
}

ComparisonReport verify_barrier(const Field& candidate, BarrierKind kind, const ProblemSpec& p,
                                const SemilinearTerm& f, std::optional<double> tol, double t_max) {
    evolve::validate(p);
    const auto& tg = p.tgrid;
    const auto& g = p.grid;
    if (!(candidate.grid() == g) || !(candidate.tgrid() == tg))
        throw GridMismatch("verify_barrier: candidate not sampled on the problem grids");
    const double sign = kind == BarrierKind::upper ? 1.0 : -1.0;
    const double scale = std::max(data_scale(p), sup_norm(candidate.values()));
    const double t = tol ? *tol : default_tolerance(g, tg, p.alpha, scale);
    const std::size_t nx = g.size();

    double worst = 0.0;
    Location loc;
    auto record = [&](double violation, std::size_t i, std::size_t k) {
        if (violation > worst) {
            worst = violation;
            loc = {i, k};
        }
    };

    // Initial ordering: upper(0) >= a, lower(0) <= a.
    for (std::size_t i = 0; i < nx; ++i) record(-sign * (candidate(i, 0) - p.initial[i]), i, 0);

    std::vector<double> row(tg.steps()), av(nx), fv(nx), src(nx), ux;
    for (std::size_t k = 1; k < tg.size(); ++k) {
        if (tg[k] > t_max) break;
        fracops::l1_row(tg, p.alpha, k, row);
        const auto op = elliptic::assemble(p.elliptic, g, tg[k]);
        const auto v = candidate.slice(k);
        op.apply(elliptic::Form::full, v, av);
        eval_term(f, op, v, ux, fv);
        p.source.fill(g, tg, k, src);
        for (std::size_t i = 0; i < nx; ++i) {
            double d = 0.0;
            for (std::size_t j = 1; j <= k; ++j) d += row[j - 1] * (candidate(i, j) - candidate(i, j - 1));
            record(-sign * (d + av[i] - fv[i] - src[i]), i, k);
        }
        const auto [lo, hi] = conormal_defect(op, v, p.elliptic);
        record(-sign * lo, 0, k);
        record(-sign * hi, nx - 1, k);
    }
    return finish(kind == BarrierKind::upper ? "upper solution" : "lower solution", worst, loc, t);
}

namespace {

/// max over nodes of -A_h a at t = 0.
double max_minus_Aa(const ProblemSpec& p) {
    const auto op = elliptic::assemble(p.elliptic, p.grid, 0.0);
    std::vector<double> av(p.grid.size());
    op.apply(elliptic::Form::full, p.initial.values, av);
    double m = -std::numeric_limits<double>::infinity();
    for (double v : av) m = std::max(m, -v);
    return m;
}

void require_neumann_compatible(const ProblemSpec& p, const char* who) {
    const auto& a = p.initial.values;
    const std::size_t n = a.size();
    const double h = p.grid.h();
    double curv = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) curv = std::max(curv, std::abs(a[i - 1] - 2 * a[i] + a[i + 1]) / (h * h));
    const double d_lo = (-3.0 * a[0] + 4.0 * a[1] - a[2]) / (2.0 * h);
    const double d_hi = (3.0 * a[n - 1] - 4.0 * a[n - 2] + a[n - 3]) / (2.0 * h);
    const double allowed = 10.0 * h * (curv + 1.0) * h + 1e-10;
    if (std::abs(d_lo) > allowed || std::abs(d_hi) > allowed)
        throw HypothesisViolation(std::string(who) + ": initial value needs a vanishing normal derivative");
}

Field barrier_field(const ProblemSpec& p, const std::function<double(std::size_t, double)>& fn) {
    Field v(p.grid, p.tgrid);
    for (std::size_t k = 0; k < p.tgrid.size(); ++k)
        for (std::size_t i = 0; i < p.grid.size(); ++i) v(i, k) = fn(i, p.tgrid[k]);
    return v;
}

/// u - bound <= tol (upper) or bound - u <= tol (lower) for t_k <= t_max.
ComparisonReport window_check(const Field& u, const Field& bound, bool upper, double t_max, double tol,
                              std::string name) {
    double worst = 0.0;
    Location loc;
    for (std::size_t k = 0; k < u.nt(); ++k) {
        if (u.tgrid()[k] > t_max) break;
        for (std::size_t i = 0; i < u.nx(); ++i) {
            const double d = upper ? u(i, k) - bound(i, k) : bound(i, k) - u(i, k);
            if (d > worst) {
                worst = d;
                loc = {i, k};
            }
        }
    }
    return finish(std::move(name), worst, loc, tol);
}

double max_over_x(const SemilinearTerm& f, const Grid1D& g, double u) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < g.size(); ++i) m = std::max(m, f.eval(g.x(i), u));
    return m;
}

double min_over_x(const SemilinearTerm& f, const Grid1D& g, double u) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < g.size(); ++i) m = std::min(m, f.eval(g.x(i), u));
    return m;
}

}  // namespace

E3Bounds barrier_bounds_e3(const ProblemSpec& p, const SemilinearTerm& f, std::optional<double> tol) {
    evolve::validate(p);
    for (double v : p.initial.values)
        if (v < 0.0) throw HypothesisViolation("barrier_bounds_e3: requires a >= 0");
    require_neumann_compatible(p, "barrier_bounds_e3");
    const double alpha = p.alpha;

    E3Bounds out{0.0, {}, {}, {}, 0.0, Field(p.grid, p.tgrid)};
    out.rho = std::max(max_minus_Aa(p), 0.0) * special::rgamma(alpha + 1.0);
    if (out.rho < 1e-12) out.rho = 1e-12;
    out.solution = solve_semilinear_default(p, f);

    const double scale = std::max(data_scale(p), sup_norm(out.solution.values()));
    const double t = tol ? *tol : default_tolerance(p.grid, p.tgrid, alpha, scale);
    const Field upper = barrier_field(p, [&](std::size_t i, double s) { return p.initial[i] + out.rho * std::pow(s, alpha); });
    const Field lower = barrier_field(p, [](std::size_t, double) { return 0.0; });
    out.upper_barrier = verify_barrier(upper, BarrierKind::upper, p, f, t);
    out.lower_barrier = verify_barrier(lower, BarrierKind::lower, p, f, t);
    const auto inf = std::numeric_limits<double>::infinity();
    out.report = merge(window_check(out.solution, lower, false, inf, t, "lower"),
                       window_check(out.solution, upper, true, inf, t, "upper"), "e3 band");
    double m = inf;
    for (std::size_t k = 0; k < out.solution.nt(); ++k)
        for (std::size_t i = 0; i < out.solution.nx(); ++i) m = std::min(m, out.solution(i, k) - p.initial[i]);
    out.min_u_minus_a = m;
    return out;
}

E4Bounds barrier_bounds_e4(const ProblemSpec& p, const SemilinearTerm& f, double eps, double delta1,
                           std::optional<double> tol) {
    evolve::validate(p);
    if (f.depends_on_gradient) throw InvalidParameter("barrier_bounds_e4: f must not depend on u'");
    const double alpha = p.alpha;
    if (!(eps > 0.0 && eps < alpha)) throw InvalidParameter("barrier_bounds_e4: eps must lie in (0, alpha)");
    require_neumann_compatible(p, "barrier_bounds_e4");
    const auto& g = p.grid;
    const double horizon = p.tgrid.horizon();
    const double m1 = sup_norm(p.initial.values);
    const double lap_max = max_minus_Aa(p);  // plays the role of max(Delta a)
    double a_min = std::numeric_limits<double>::infinity();
    for (double v : p.initial.values) a_min = std::min(a_min, v);

    E4Bounds out{.solution = Field(g, p.tgrid)};

    // Largest T1 <= horizon with Gamma(a-e+1)/Gamma(1-e) T^-e >= f(T^(a-e) + M1) + max(Delta a).
    const double gcoef = special::gamma(alpha - eps + 1.0) * special::rgamma(1.0 - eps);
    auto admissible = [&](double T) {
        return gcoef * std::pow(T, -eps) >= max_over_x(f, g, std::pow(T, alpha - eps) + m1) + lap_max;
    };
    double lo = 1e-14 * horizon;
    if (!admissible(lo)) throw NotApplicable("barrier_bounds_e4: no admissible T1; f grows too fast");
    if (admissible(horizon)) {
        out.T1 = horizon;
    } else {
        double hi = horizon;
        for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
            const double mid = std::sqrt(lo * hi);
            (admissible(mid) ? lo : hi) = mid;
        }
        out.T1 = lo;
    }

    // Lower barrier a - rho t^alpha, rho = (M2 - f(delta1/2)) / Gamma(alpha + 1).
    double m2 = -std::numeric_limits<double>::infinity();
    {
        const auto op = elliptic::assemble(p.elliptic, g, 0.0);
        std::vector<double> av(g.size());
        op.apply(elliptic::Form::full, p.initial.values, av);
        for (double v : av) m2 = std::max(m2, v);
    }
    out.lower_coeff = (m2 - min_over_x(f, g, 0.5 * delta1)) * special::rgamma(alpha + 1.0);
    out.T2 = out.lower_coeff > 0.0 ? std::min(horizon, std::pow(delta1 / (2.0 * out.lower_coeff), 1.0 / alpha))
                                   : horizon;
    const bool lower_applies = delta1 > 0.0 && a_min >= delta1;

    // M3, T3: |Delta a| <= M3 Gamma / 2 and f(M3 T3^alpha + |a|) <= M3 Gamma / 2.
    const double gam = special::gamma(alpha + 1.0);
    double lap_abs = 0.0;
    {
        const auto op = elliptic::assemble(p.elliptic, g, 0.0);
        std::vector<double> av(g.size());
        op.apply(elliptic::Form::full, p.initial.values, av);
        lap_abs = sup_norm(av);
    }
    out.M3 = 2.0 * std::max({lap_abs, max_over_x(f, g, m1 + 1.0), 1e-12}) / gam;
    auto m3_ok = [&](double T) { return max_over_x(f, g, out.M3 * std::pow(T, alpha) + m1) <= 0.5 * out.M3 * gam; };
    if (m3_ok(horizon)) {
        out.T3 = horizon;
    } else {
        double a = std::min(horizon, std::pow(1.0 / out.M3, 1.0 / alpha)), b = horizon;
        for (int it = 0; it < 200 && b - a > 1e-14 * b; ++it) {
            const double mid = 0.5 * (a + b);
            (m3_ok(mid) ? a : b) = mid;
        }
        out.T3 = a;
    }

    out.solution = solve_semilinear_default(p, f);
    const double scale = std::max(data_scale(p), sup_norm(out.solution.values()));
    const double t = tol ? *tol : default_tolerance(g, p.tgrid, alpha, scale);

    const Field upper = barrier_field(p, [&](std::size_t i, double s) { return p.initial[i] + std::pow(s, alpha - eps); });
    const Field lower =
        barrier_field(p, [&](std::size_t i, double s) { return p.initial[i] - out.lower_coeff * std::pow(s, alpha); });
    const Field upper3 = barrier_field(p, [&](std::size_t i, double s) { return p.initial[i] + out.M3 * std::pow(s, alpha); });

    out.upper_report = window_check(out.solution, upper, true, out.T1, t, "e4 upper t^(alpha-eps)");
    out.m3_report = window_check(out.solution, upper3, true, out.T3, t, "e4 upper M3 t^alpha");
    out.upper_barrier = verify_barrier(upper, BarrierKind::upper, p, f, t, out.T1);
    if (lower_applies) {
        out.lower_report = window_check(out.solution, lower, false, out.T2, t, "e4 lower");
        out.lower_barrier = verify_barrier(lower, BarrierKind::lower, p, f, t, out.T2);
    } else {
        out.lower_report = finish("e4 lower (a >= delta1 fails, skipped)", 0.0, {}, t);
        out.lower_barrier = out.lower_report;
    }
    out.holds = out.upper_report.holds && out.lower_report.holds && out.m3_report.holds;
    return out;
}

DecayFit asymptotic_decay_check(const Field& u, const SpaceField& u_inf, const elliptic::EigenDecomposition& eig,
                                double alpha) {
    if (!(u_inf.grid == u.grid()) || !(eig.grid == u.grid()))
        throw GridMismatch("asymptotic_decay_check: fields on different grids");
    auto [lambda1, phi1] = elliptic::principal_eigenpair(eig);
    for (double v : phi1.values)
        if (!(std::abs(v) > 0.0)) throw DegenerateSpectrum("asymptotic_decay_check: phi_1 vanishes at a node");

    DecayFit out;
    out.lambda1 = lambda1;
    const auto& tg = u.tgrid();
    const double T = tg.horizon();
    double env = 0.0;
    for (std::size_t k = 1; k < tg.size(); ++k) {
        const double t = tg[k];
        if (t < 0.25 * T) continue;
        const double e = ml::ml_relaxation(alpha, lambda1, t);
        const double ta = std::pow(t, alpha);
        double r = 0.0, s = 0.0;
        for (std::size_t i = 0; i < u.nx(); ++i) {
            const double d = std::abs(u(i, k) - u_inf[i]) / std::abs(phi1[i]);
            r = std::max(r, d / e);
            s = std::max(s, d * ta);
        }
        out.fitted_C = std::max(out.fitted_C, r);
        if (t >= 0.5 * T) out.late_C = std::max(out.late_C, r);
        if (t >= 0.5 * T && t < 0.75 * T) out.third_quarter_C = std::max(out.third_quarter_C, r);
        if (t >= 0.75 * T) {
            out.last_quarter_C = std::max(out.last_quarter_C, r);
            env = std::max(env, s);
        }
    }
    const bool finite = std::isfinite(out.fitted_C);
    out.stable = finite && std::abs(out.fitted_C - out.late_C) <= 0.1 * out.fitted_C &&
                 std::abs(out.third_quarter_C - out.last_quarter_C) <= 0.1 * std::max(out.third_quarter_C, out.last_quarter_C);
    out.envelope_ratio = out.fitted_C > 0.0 ? env * lambda1 / out.fitted_C : 0.0;
    // E_{alpha,1}(-x) <= 1.1 / (1 + x) <= 1.1 / x
    out.envelope_holds = finite && out.envelope_ratio <= 1.1;
    out.holds = out.stable && out.envelope_holds;
    return out;
}

}  // namespace fraccomp::compare
