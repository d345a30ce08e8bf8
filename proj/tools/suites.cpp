#include "suites.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>

#include "config.hpp"
#include "fraccomp/compare.hpp"
#include "fraccomp/errors.hpp"
#include "fraccomp/fracops.hpp"
#include "fraccomp/gamma.hpp"
#include "fraccomp/mittag_leffler.hpp"

namespace fraccomp::cli {

namespace {

using compare::ComparisonReport;
using evolve::ProblemSpec;

CheckLine from_report(const std::string& name, const ComparisonReport& r) {
    return {name, r.holds, r.worst_violation, r.tolerance_used};
}

CheckLine bound_check(const std::string& name, double worst, double tol) { return {name, worst <= tol, worst, tol}; }

/// Least-squares slope of -log e against log N.
double observed_order(const std::vector<double>& n, const std::vector<double>& e) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) {
        const double x = std::log(n[i]), y = std::log(e[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return -(m * sxy - sx * sy) / (m * sxx - sx * sx);
}

double field_max_diff(const Field& a, const Field& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    return m;
}

struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}
    double operator()(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
};

/// Smooth coefficients, a >= 0 and F >= 0.
ProblemSpec random_spec(Rng& rng, const SuiteOptions& opt, double alpha) {
    const Grid1D g(0.0, 1.0, opt.n_space);
    const TimeGrid tg = TimeGrid::graded(1.0, opt.n_time, 2.0 / alpha);
    elliptic::EllipticSpec es;
    const double ak = rng(1.0, 4.0), aa = rng(0.0, 0.5), ap = rng(0.0, 3.0);
    es.a = [=](double x) { return 1.0 + aa * std::sin(ak * x + ap); };
    const double bb = rng(-0.5, 0.5);
    es.b = [=](double x, double t) { return bb * std::cos(x + t); };
    const double c0 = rng(-1.0, 0.5), c1 = rng(-0.5, 0.5);
    es.c = [=](double x, double t) { return c0 + c1 * x * t; };
    es.c0 = 1.0;
    es.sigma_lo = rng(0.0, 2.0);
    es.sigma_hi = rng(0.0, 2.0);
    const double m = std::floor(rng(1.0, 4.0)), w1 = rng(0.0, 1.0), w2 = rng(0.0, 1.0), s = rng(0.0, 1.0);
    SpaceField a0 = SpaceField::sample(g, [=](double x) {
        return w1 * 0.5 * (1.0 + std::cos(m * M_PI * x)) + w2 * (x - s) * (x - s);
    });
    const double fa = rng(0.0, 1.0), fk = rng(1.0, 5.0);
    evolve::Source src = evolve::Source::function(
        [=](double x, double t) { return fa * (1.0 + std::sin(fk * x * (1.0 + t))); });
    return ProblemSpec{g, tg, alpha, es, a0, src};
}

ProblemSpec base_spec(const SuiteOptions& opt, double alpha, const std::function<double(double)>& a0) {
    const Grid1D g(0.0, 1.0, opt.n_space);
    const TimeGrid tg = TimeGrid::graded(1.0, opt.n_time, 2.0 / alpha);
    return ProblemSpec{g, tg, alpha, elliptic::EllipticSpec{}, SpaceField::sample(g, a0)};
}

double tol_for(const SuiteOptions& opt, const ProblemSpec& p) {
    return opt.tol ? *opt.tol : compare::default_tolerance(p, opt.c_pos);
}

std::vector<CheckLine> suite_ml(const SuiteOptions&) {
    std::vector<CheckLine> out;
    double w = 0.0;
    for (int i = 0; i <= 350; ++i) {
        const double x = -30.0 + 35.0 * i / 350.0;
        w = std::max(w, std::abs(ml::ml(1.0, 1.0, x).value - std::exp(x)) / std::exp(x));
    }
    out.push_back(bound_check("ml.exp_identity", w, 1e-12));
    w = 0.0;
    for (int i = 0; i <= 200; ++i) {
        const double x = 10.0 * i / 200.0;
        w = std::max(w, std::abs(ml::ml(2.0, 1.0, -x * x).value - std::cos(x)));
    }
    out.push_back(bound_check("ml.cos_identity", w, 1e-10));
    w = 0.0;
    for (int i = 0; i <= 100; ++i) {
        const double x = 5.0 * i / 100.0;
        const double ref = std::exp(x * x) * std::erfc(x);
        w = std::max(w, std::abs(ml::ml(0.5, 1.0, -x).value - ref) / ref);
    }
    out.push_back(bound_check("ml.erfc_identity", w, 1e-9));
    // E_{a,b}(z) = z E_{a,a+b}(z) + 1/Gamma(b)
    w = 0.0;
    for (double a : {0.3, 0.6, 0.9, 1.5})
        for (double b : {0.5, 1.0, 1.7})
            for (double z : {-0.7, -4.0, -25.0}) {
                const double lhs = ml::ml(a, b, z).value;
                const double rhs = z * ml::ml(a, a + b, z).value + special::rgamma(b);
                w = std::max(w, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
            }
    out.push_back(bound_check("ml.recurrence", w, 1e-10));
    // d/dt E(-l t^a) = -l t^{a-1} E_{a,a}(-l t^a)
    w = 0.0;
    for (double a : {0.3, 0.5, 0.8})
        for (double t : {0.2, 1.0, 3.0}) {
            const double l = 1.7, h = 1e-4 * t;
            const double fd = (ml::ml_relaxation(a, l, t + h) - ml::ml_relaxation(a, l, t - h)) / (2 * h);
            const double ex = -l * std::pow(t, a - 1.0) * ml::ml(a, a, -l * std::pow(t, a)).value;
            w = std::max(w, std::abs(fd - ex) / std::abs(ex));
        }
    out.push_back(bound_check("ml.derivative_identity", w, 1e-5));
    w = 0.0;
    for (double a : {0.2, 0.5, 0.8, 1.0})
        for (int i = 0; i <= 240; ++i) {
            const double x = i == 0 ? 0.0 : std::pow(10.0, -2.0 + 8.0 * i / 240.0);
            w = std::max(w, ml::ml(a, 1.0, -x).value * (1.0 + x));
        }
    out.push_back(bound_check("ml.relaxation_bound", w, 1.1));
    return out;
}

std::vector<CheckLine> suite_fracops(const SuiteOptions& opt) {
    std::vector<CheckLine> out;
    const std::vector<double> ns = {128, 256, 512, 1024};
    for (double a : {0.5, 0.7, 0.9}) {
        std::vector<double> e;
        for (double n : ns) {
            const auto g = TimeGrid::uniform(1.0, static_cast<std::size_t>(n));
            const auto d = fracops::caputo_l1(TimeSeries::sample(g, [a](double t) { return std::pow(t, a); }), a);
            e.push_back(std::abs(d.values.back() - special::gamma(a + 1.0)));
        }
        const double p = observed_order(ns, e);
        char name[64];
        std::snprintf(name, sizeof name, "fracops.power_rule_order_alpha_%.1f", a);
        out.push_back({name, p >= 2.0 - a, std::max(0.0, 2.0 - a - p), 0.0});
    }
    {
        std::vector<double> e1, e2;
        auto y = [](double t) { return std::sin(3.0 * t) + t * t; };
        for (double n : ns) {
            const auto g = TimeGrid::uniform(1.0, static_cast<std::size_t>(n));
            const auto ys = TimeSeries::sample(g, y);
            const auto a = fracops::rl_integral(fracops::rl_integral(ys, 0.3), 0.5);
            const auto b = fracops::rl_integral(ys, 0.8);
            const auto dj = fracops::caputo_l1(fracops::rl_integral(ys, 0.5), 0.5);
            double m1 = 0, m2 = 0;
            for (std::size_t k = 1; k < g.size(); ++k) {
                m1 = std::max(m1, std::abs(a[k] - b[k]));
                m2 = std::max(m2, std::abs(dj[k] - ys[k]));
            }
            e1.push_back(m1);
            e2.push_back(m2);
        }
        const double p1 = observed_order(ns, e1), p2 = observed_order(ns, e2);
        out.push_back({"fracops.semigroup_order", p1 >= 1.0, std::max(0.0, 1.0 - p1), 0.0});
        out.push_back({"fracops.caputo_inverts_J_order", p2 >= 1.0, std::max(0.0, 1.0 - p2), 0.0});
    }
    {
        Rng rng(opt.seed);
        double worst = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            const auto g = TimeGrid::graded(1.0, 200, rng(1.0, 3.0));
            const double s = rng(0.0, 1.0), f = rng(1.0, 9.0);
            const auto y = TimeSeries::sample(g, [&](double t) { return std::abs(std::sin(f * t + s)); });
            for (double v : fracops::rl_integral(y, rng(0.05, 2.0)).values) worst = std::max(worst, -v);
        }
        out.push_back({"fracops.rl_sign_preservation", worst <= 0.0, worst, 0.0});
    }
    {
        Rng rng(opt.seed + 1);
        double worst = -INFINITY;
        bool all = true;
        int done = 0;
        while (done < 20) {
            const double a = rng(0.1, 0.9), ts = rng(0.2, 0.8), A = rng(1.0, 3.0), B = rng(0.0, 0.3), w = rng(1.0, 4.0);
            const auto g = TimeGrid::uniform(1.0, 256);
            const auto y = TimeSeries::sample(g, [&](double t) { return A * (t - ts) * (t - ts) + B * std::sin(w * t); });
            try {
                const auto r = fracops::extremum_check(y, a);
                all = all && r.holds;
                worst = std::max(worst, r.caputo_at_min - r.tolerance);
                ++done;
            } catch (const NotApplicable&) {
            }
        }
        out.push_back({"fracops.extremum_principle", all, std::max(worst, 0.0), 0.0});
    }
    return out;
}

std::vector<CheckLine> suite_positivity(const SuiteOptions& opt) {
    Rng rng(opt.seed);
    std::vector<CheckLine> out;
    bool all = true;
    double worst = 0.0, tol = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const double alpha = rng(0.2, 0.9);
        const ProblemSpec p = random_spec(rng, opt, alpha);
        const Field u = evolve::solve_linear_spectral(p);
        const auto r = compare::check_positivity(u, tol_for(opt, p));
        all = all && r.holds;
        if (r.worst_violation - r.tolerance_used >= worst - tol) {
            worst = r.worst_violation;
            tol = r.tolerance_used;
        }
    }
    out.push_back({"positivity.random_50", all, worst, tol});
    {
        const ProblemSpec p = base_spec(opt, opt.alpha, [](double x) { return std::sin(M_PI * x); });
        out.push_back(from_report("positivity.sin_initial", compare::check_positivity(evolve::solve_linear_spectral(p),
                                                                                       tol_for(opt, p))));
    }
    {
        ProblemSpec p = base_spec(opt, opt.alpha, [](double) { return 1.0; });
        const Field u = evolve::solve_linear_spectral(p);
        double w = 0.0;
        for (double v : u.values()) w = std::max(w, std::abs(v - 1.0));
        out.push_back(bound_check("positivity.constant_preserved", w, 1e-10));
    }
    return out;
}

std::vector<CheckLine> suite_ordering(const SuiteOptions& opt) {
    std::vector<CheckLine> out;
    Rng rng(opt.seed);
    const double alpha = opt.alpha;
    {
        ProblemSpec p2 = random_spec(rng, opt, alpha);
        ProblemSpec p1 = p2;
        for (double& v : p1.initial.values) v += 0.1;
        const Field u1 = evolve::solve_linear_spectral(p1), u2 = evolve::solve_linear_spectral(p2);
        out.push_back(from_report("ordering.initial_data", compare::check_ordering(u1, u2, tol_for(opt, p1))));
        const auto self = compare::check_ordering(u1, u1, 0.0);
        out.push_back(from_report("ordering.reflexive", self));
        ProblemSpec p3 = p2;
        for (double& v : p3.initial.values) v = std::max(0.0, v - 0.1);
        const Field u3 = evolve::solve_linear_spectral(p3);
        const double t = tol_for(opt, p1);
        const auto r12 = compare::check_ordering(u1, u2, t), r23 = compare::check_ordering(u2, u3, t);
        const auto r13 = compare::check_ordering(u1, u3, 2 * t);
        out.push_back({"ordering.transitive", !(r12.holds && r23.holds) || r13.holds, r13.worst_violation, 2 * t});
    }
    {
        const ProblemSpec p = base_spec(opt, alpha, [](double x) { return 1.0 + 0.5 * std::cos(M_PI * x); });
        const auto f1 = semilinear::builtin_enzyme();
        const auto f2 = semilinear::shifted(f1, -0.1);
        const auto eig = evolve::spectral_basis(p);
        const Field u1 = semilinear::solve_semilinear(p, f1, eig), u2 = semilinear::solve_semilinear(p, f2, eig);
        out.push_back(from_report("ordering.semilinear_f1_ge_f2", compare::check_ordering(u1, u2, tol_for(opt, p))));
    }
    {
        const ProblemSpec p = random_spec(rng, opt, alpha);
        compare::CoefficientRequest req;
        req.c1 = [](double, double) { return 0.0; };
        req.c2 = [](double, double) { return -1.0; };
        const auto r = compare::coefficient_comparison(p, req, opt.tol);
        out.push_back(from_report("ordering.reaction_coefficient", r.report));
    }
    {
        ProblemSpec p = random_spec(rng, opt, alpha);
        p.elliptic.c = [](double, double) { return -1.0; };
        compare::CoefficientRequest req;
        req.which = compare::Coefficient::robin;
        req.sigma1 = {1.0, 1.0};
        req.sigma2 = {2.0, 2.0};
        const auto r = compare::coefficient_comparison(p, req, opt.tol);
        out.push_back(from_report("ordering.robin_coefficient", r.report));
    }
    return out;
}

std::vector<CheckLine> suite_barriers(const SuiteOptions& opt) {
    std::vector<CheckLine> out;
    const double alpha = opt.alpha;
    {
        const ProblemSpec p = base_spec(opt, alpha, [](double x) { return 1.0 + std::cos(M_PI * x); });
        const auto r = compare::barrier_bounds_e3(p, semilinear::builtin_enzyme(), opt.tol);
        out.push_back(from_report("barriers.e3_band", r.report));
        out.push_back(from_report("barriers.e3_upper_solution", r.upper_barrier));
        out.push_back(from_report("barriers.e3_lower_solution", r.lower_barrier));
        out.push_back(bound_check("barriers.e3_lower_residual_exact", r.lower_barrier.worst_violation, 0.0));
    }
    {
        const ProblemSpec p = base_spec(opt, alpha, [](double) { return 1.0; });
        const auto r = compare::barrier_bounds_e4(p, semilinear::builtin_linear(1.0), 0.1, 1.0, opt.tol);
        out.push_back(from_report("barriers.e4_upper_T1", r.upper_report));
        out.push_back(from_report("barriers.e4_lower_T2", r.lower_report));
        out.push_back(from_report("barriers.e4_upper_M3_T3", r.m3_report));
        out.push_back(from_report("barriers.e4_upper_solution", r.upper_barrier));
        out.push_back(from_report("barriers.e4_lower_solution", r.lower_barrier));
    }
    return out;
}

std::vector<CheckLine> suite_monotone(const SuiteOptions& opt) {
    std::vector<CheckLine> out;
    const double alpha = opt.alpha;
    {
        ProblemSpec p = base_spec(opt, alpha, [](double x) { return 1.0 + std::cos(M_PI * x); });
        p.elliptic.c = [](double x, double) { return -0.5 - 0.3 * x; };
        const auto seq = compare::linear_monotone_sequence(p, 1.0, 10, opt.tol);
        const Field u = evolve::solve_linear_spectral(p);
        out.push_back(from_report("monotone.linear_nonnegative", seq.nonnegativity));
        double worst_ratio = 0.0, prev = 0.0;
        for (std::size_t n = 0; n < seq.iterates.size(); ++n) {
            const double e = field_max_diff(seq.iterates[n], u);
            if (n >= 3 && prev > 1e-11) worst_ratio = std::max(worst_ratio, e / prev);
            prev = e;
        }
        out.push_back({"monotone.linear_geometric_ratio", worst_ratio < 0.9, worst_ratio, 0.9});
    }
    {
        const ProblemSpec p = base_spec(opt, alpha, [](double) { return 1.0; });
        Field lo(p.grid, p.tgrid), up(p.grid, p.tgrid);
        for (std::size_t k = 0; k < up.nt(); ++k)
            for (std::size_t i = 0; i < up.nx(); ++i) up(i, k) = 1.0;
        const auto f = semilinear::builtin_enzyme();
        const auto bp = compare::make_barrier_pair(lo, up);
        out.push_back(from_report("monotone.lower_barrier",
                                  compare::verify_barrier(bp.lower, compare::BarrierKind::lower, p, f, opt.tol)));
        out.push_back(from_report("monotone.upper_barrier",
                                  compare::verify_barrier(bp.upper, compare::BarrierKind::upper, p, f, opt.tol)));
        const auto r = compare::monotone_iteration(p, f, bp, 1.0, 200, opt.tol);
        out.push_back(from_report("monotone.chains", r.chains));
        out.push_back(from_report("monotone.sandwich", r.sandwich));
    }
    return out;
}

std::vector<CheckLine> suite_decay(const SuiteOptions& opt) {
    std::vector<CheckLine> out;
    const double alpha = opt.alpha;
    const Grid1D g(0.0, 1.0, opt.n_space);
    elliptic::EllipticSpec es;
    es.c = [](double, double) { return -1.0; };
    {
        const TimeGrid tg = TimeGrid::graded(4.0, opt.n_time, 2.0);
        ProblemSpec p{g, tg, alpha, es, SpaceField::constant(g, 0.0)};
        const auto eig = evolve::spectral_basis(p);
        p.initial = eig.mode(0);
        const Field u = evolve::solve_linear_spectral(p, eig);
        const auto fit = compare::asymptotic_decay_check(u, SpaceField::constant(g, 0.0), eig, alpha);
        out.push_back(bound_check("decay.single_mode", std::abs(fit.fitted_C - fit.late_C), 1e-8));
    }
    {
        // lambda_1 = 1 here, so T^alpha = 20 gives lambda_1 T^alpha = 20.
        const double T = std::pow(20.0, 1.0 / alpha);
        const TimeGrid tg = TimeGrid::graded(T, opt.n_time, 2.0);
        const ProblemSpec p{g, tg, alpha, es, SpaceField::sample(g, [](double x) { return 1.0 + std::cos(M_PI * x); })};
        const auto eig = evolve::spectral_basis(p);
        const Field u = semilinear::solve_semilinear(p, semilinear::builtin_enzyme(), eig);
        const auto fit = compare::asymptotic_decay_check(u, SpaceField::constant(g, 0.0), eig, alpha);
        const double spread = std::abs(fit.third_quarter_C - fit.last_quarter_C) /
                              std::max(fit.third_quarter_C, fit.last_quarter_C);
        out.push_back({"decay.enzyme_fit_stable", fit.stable, spread, 0.1});
        out.push_back({"decay.t_power_envelope", fit.envelope_holds, fit.envelope_ratio, 1.1});
    }
    return out;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"ml",       "fracops",  "positivity", "ordering",
                                                    "barriers", "monotone", "decay",      "all"};
    return names;
}

std::vector<CheckLine> run_suite(const std::string& suite, const SuiteOptions& opt) {
    static const std::map<std::string, std::vector<CheckLine> (*)(const SuiteOptions&)> table = {
        {"ml", suite_ml},           {"fracops", suite_fracops},   {"positivity", suite_positivity},
        {"ordering", suite_ordering}, {"barriers", suite_barriers}, {"monotone", suite_monotone},
        {"decay", suite_decay}};
    if (suite == "all") {
        std::vector<CheckLine> out;
        for (const auto& name : suite_names()) {
            if (name == "all") continue;
            auto part = table.at(name)(opt);
            out.insert(out.end(), part.begin(), part.end());
        }
        return out;
    }
    const auto it = table.find(suite);
    if (it == table.end()) throw ConfigError("unknown suite '" + suite + "'");
    return it->second(opt);
}

std::string format_check(const CheckLine& c) {
    char buf[64];
    std::snprintf(buf, sizeof buf, " %.6e %.6e", c.worst, c.tol);
    return std::string(c.pass ? "PASS " : "FAIL ") + c.name + buf;
}

}  // namespace fraccomp::cli
