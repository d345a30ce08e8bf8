#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fraccomp/compare.hpp"
#include "fraccomp/errors.hpp"
#include "fraccomp/mittag_leffler.hpp"

using namespace fraccomp;
using namespace fraccomp::evolve;
using namespace fraccomp::compare;

namespace {

constexpr double pi = std::numbers::pi;

ProblemSpec problem(std::size_t n, std::size_t steps, double alpha, double T = 1.0) {
    const Grid1D g(0, 1, n);
    return ProblemSpec{g, TimeGrid::graded(T, steps, 2.0 / alpha), alpha, {}, SpaceField::constant(g, 0.0)};
}

/// Random problem with a, F >= 0, bounded coefficients.
ProblemSpec random_problem(std::mt19937_64& gen, double alpha) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto p = problem(24, 128, alpha);
    const double k = 1 + 4 * u(gen), amp = 0.5 * u(gen), b = u(gen) - 0.5, c = 2 * u(gen) - 1.5;
    const double a0 = u(gen), a1 = u(gen), f0 = u(gen);
    p.elliptic.a = [=](double x) { return 1 + amp * std::sin(k * x); };
    p.elliptic.b = [=](double x, double) { return b * x; };
    p.elliptic.c = [=](double x, double t) { return c + 0.3 * std::sin(x + t); };
    p.elliptic.sigma_lo = 2 * u(gen);
    p.initial = SpaceField::sample(p.grid, [=](double x) { return a0 + a1 * std::cos(pi * x) * std::cos(pi * x); });
    p.source = Source::function([=](double x, double t) { return f0 * x * (1 + std::sin(3 * t)); });
    return p;
}

}  // namespace

TEST_CASE("positivity for random nonnegative data") {
    std::mt19937_64 gen(4);
    for (int trial = 0; trial < 6; ++trial) {
        const auto p = random_problem(gen, 0.3 + 0.1 * trial);
        const auto u = solve_linear_spectral(p);
        const auto r = check_positivity(u, default_tolerance(p));
        CHECK(r.holds);
        CHECK(r.property_name.size() > 0);
    }
}

TEST_CASE("ordering is reflexive, transitive and detects violations") {
    const auto p = problem(8, 16, 0.5);
    const auto lo = Field::sample(p.grid, p.tgrid, [](double x, double t) { return x * t; });
    const auto mid = Field::sample(p.grid, p.tgrid, [](double x, double t) { return x * t + 1; });
    const auto hi = Field::sample(p.grid, p.tgrid, [](double x, double t) { return x * t + 2; });
    CHECK(check_ordering(lo, lo, 0.0).holds);
    CHECK(check_ordering(hi, mid, 0.0).holds);
    CHECK(check_ordering(mid, lo, 0.0).holds);
    CHECK(check_ordering(hi, lo, 0.0).holds);
    const auto r = check_ordering(lo, hi, 0.5);
    CHECK_FALSE(r.holds);
    CHECK(r.worst_violation == doctest::Approx(2.0));
    CHECK(r.tolerance_used == 0.5);
    const Field other(Grid1D(0, 1, 9), p.tgrid);
    CHECK_THROWS_AS(check_ordering(lo, other, 0.0), GridMismatch);
}

TEST_CASE("example 1 lower bound values") {
    const auto tg = TimeGrid::uniform(1.0, 4);
    const auto b = example1_lower_bound(0.5, 0.0, 1.0, tg);
    CHECK(b[4] == doctest::Approx(1.128379167).epsilon(1e-9));
    CHECK(b[0] == 0.0);
    const auto b1 = example1_lower_bound(0.5, 1.0, 2.0, tg);
    CHECK(b1[2] == doctest::Approx(2.0 * 1.0 / std::tgamma(2.5) * std::pow(0.5, 1.5)).epsilon(1e-12));
    CHECK_THROWS_AS(example1_lower_bound(0.5, -1.0, 1.0, tg), InvalidParameter);
}

TEST_CASE("example 1 solution stays above the bound") {
    // d^alpha (u - 0) + (-u'') = delta t^beta has the exact solution delta Gamma(beta+1)/Gamma(alpha+beta+1) t^{alpha+beta}
    auto p = problem(10, 256, 0.5);
    p.elliptic.c0 = 0.0;
    p.source = Source::function([](double, double t) { return std::sqrt(t); });
    const auto u = solve_linear_spectral(p);
    const auto b = example1_lower_bound(0.5, 0.5, 1.0, p.tgrid);
    double worst = 0.0;
    for (std::size_t k = 0; k < u.nt(); ++k) worst = std::max(worst, std::abs(u(4, k) - b[k]));
    CHECK(worst < 1e-3);
}

TEST_CASE("reaction coefficient comparison") {
    auto p = problem(16, 96, 0.5);
    p.initial = SpaceField::sample(p.grid, [](double x) { return 1 + std::cos(pi * x); });
    p.source = Source::function([](double x, double) { return x; });
    CoefficientRequest req;
    req.c1 = [](double x, double) { return 0.5 + x; };
    req.c2 = [](double, double) { return -1.0; };
    const auto r = coefficient_comparison(p, req);
    CHECK(r.report.holds);
    std::swap(req.c1, req.c2);
    CHECK_THROWS_AS(coefficient_comparison(p, req), HypothesisViolation);
}

TEST_CASE("Robin coefficient comparison and its guards") {
    auto p = problem(16, 96, 0.7);
    p.initial = SpaceField::constant(p.grid, 1.0);
    p.elliptic.c = [](double, double) { return -1.0; };
    CoefficientRequest req;
    req.which = Coefficient::robin;
    req.sigma1 = {0.5, 0.5};
    req.sigma2 = {2.0, 3.0};
    const auto r = coefficient_comparison(p, req);
    CHECK(r.report.holds);
    // smaller sigma keeps more mass
    CHECK(r.u1(0, r.u1.nt() - 1) > r.u2(0, r.u2.nt() - 1));
    req.sigma1 = {0.0, 0.5};
    CHECK_THROWS_AS(coefficient_comparison(p, req), HypothesisViolation);
    req.sigma1 = {0.5, 0.5};
    p.elliptic.c = [](double x, double) { return x - 0.5; };
    CHECK_THROWS_AS(coefficient_comparison(p, req), HypothesisViolation);
    p.elliptic.c = [](double, double) { return -1.0; };
    p.initial = SpaceField::constant(p.grid, -1.0);
    CHECK_THROWS_AS(coefficient_comparison(p, req), HypothesisViolation);
}

TEST_CASE("linear monotone sequence converges to the direct solution") {
    auto p = problem(12, 64, 0.5);
    p.initial = SpaceField::sample(p.grid, [](double x) { return 1 + std::cos(pi * x); });
    p.elliptic.c = [](double x, double) { return -0.5 - x; };
    p.source = Source::function([](double, double t) { return t; });
    const auto s = linear_monotone_sequence(p, 2.0, 40);
    CHECK(s.nonnegativity.holds);
    REQUIRE(s.increments.size() >= 3);
    for (std::size_t n = 2; n < s.increments.size() && s.increments[n - 1] > 1e-11; ++n)
        CHECK(s.increments[n] <= 0.9 * s.increments[n - 1]);
    const auto direct = solve_linear_spectral(p);
    double d = 0.0;
    for (std::size_t i = 0; i < direct.values().size(); ++i)
        d = std::max(d, std::abs(direct.values()[i] - s.iterates.back().values()[i]));
    CHECK(d < 1e-8);
    CHECK_THROWS_AS(linear_monotone_sequence(p, 0.1, 10), HypothesisViolation);
}

TEST_CASE("monotone iteration from constant barriers") {
    auto p = problem(10, 48, 0.5);
    p.initial = SpaceField::sample(p.grid, [](double x) { return 0.5 + 0.4 * std::cos(pi * x); });
    const auto f = semilinear::builtin_enzyme();
    const auto bars = make_barrier_pair(Field::sample(p.grid, p.tgrid, [](double, double) { return 0.0; }),
                                        Field::sample(p.grid, p.tgrid, [](double, double) { return 1.0; }));
    const auto m = monotone_iteration(p, f, bars, 1.0, 200);
    CHECK(m.chains.holds);
    CHECK(m.sandwich.holds);
    CHECK(m.limit_gap < 1e-6);
    CHECK(m.from_lower.size() == m.from_upper.size());
    // swapped barriers cross immediately
    const auto swapped = make_barrier_pair(bars.upper, bars.lower);
    CHECK_THROWS_AS(monotone_iteration(p, f, swapped, 1.0, 200), HypothesisViolation);
}

TEST_CASE("barrier verification") {
    auto p = problem(16, 64, 0.5);
    p.initial = SpaceField::constant(p.grid, 1.0);
    const auto f = semilinear::builtin_enzyme();
    const auto one = Field::sample(p.grid, p.tgrid, [](double, double) { return 1.0; });
    const auto zero = Field::sample(p.grid, p.tgrid, [](double, double) { return 0.0; });
    CHECK(verify_barrier(one, BarrierKind::upper, p, f).holds);
    CHECK(verify_barrier(zero, BarrierKind::lower, p, f).holds);
    // 1 is not a lower barrier: f(1) < 0 makes the residual positive
    CHECK_FALSE(verify_barrier(one, BarrierKind::lower, p, semilinear::builtin_linear(0.0, -1.0)).holds);
    CHECK_FALSE(verify_barrier(zero, BarrierKind::upper, p, f).holds);
}

TEST_CASE("e3 bounds on a cosine profile") {
    auto p = problem(32, 128, 0.5);
    p.initial = SpaceField::sample(p.grid, [](double x) { return 1 + std::cos(pi * x); });
    const auto r = barrier_bounds_e3(p);
    CHECK(r.report.holds);
    CHECK(r.upper_barrier.holds);
    CHECK(r.lower_barrier.holds);
    CHECK(r.rho > 0.0);
    auto bad = p;
    bad.initial = SpaceField::sample(p.grid, [](double x) { return x; });
    CHECK_THROWS_AS(barrier_bounds_e3(bad), HypothesisViolation);
}

TEST_CASE("e4 bounds with linear growth") {
    auto p = problem(16, 128, 0.5);
    p.initial = SpaceField::constant(p.grid, 1.0);
    const auto r = barrier_bounds_e4(p, semilinear::builtin_linear(1.0), 0.1, 1.0);
    CHECK(r.holds);
    CHECK(r.T1 > 0.0);
    CHECK(r.T3 > 0.0);
    CHECK_THROWS_AS(barrier_bounds_e4(p, semilinear::builtin_linear(1.0), 0.7, 1.0), InvalidParameter);
}

TEST_CASE("asymptotic decay toward the stationary state") {
    auto p = problem(16, 400, 0.5, 400.0);
    p.initial = SpaceField::sample(p.grid, [](double x) { return 1 + std::cos(pi * x); });
    p.elliptic.c = [](double, double) { return -1.0; };
    const auto eig = spectral_basis(p);
    const auto u = solve_linear_spectral(p, eig);
    const auto fit = asymptotic_decay_check(u, SpaceField::constant(p.grid, 0.0), eig, 0.5);
    CHECK(fit.lambda1 == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(fit.holds);
}
