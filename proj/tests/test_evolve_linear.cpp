#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "fraccomp/errors.hpp"
#include "fraccomp/evolve_linear.hpp"
#include "fraccomp/fracops.hpp"
#include "fraccomp/mittag_leffler.hpp"

using namespace fraccomp;
using namespace fraccomp::evolve;
using fraccomp::ml::ml_relaxation;

namespace {

constexpr double pi = std::numbers::pi;

double max_diff(const Field& a, const Field& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    return m;
}

ProblemSpec base(std::size_t n, TimeGrid tg, double alpha) {
    const Grid1D g(0, 1, n);
    return ProblemSpec{g, std::move(tg), alpha, {}, SpaceField::constant(g, 0.0)};
}

/// Scalar L1 oracle for D^alpha (y - y0) + k y = f(t).
std::vector<double> scalar_l1(const TimeGrid& tg, double alpha, double k, double y0, double f) {
    std::vector<double> y(tg.size(), y0), row(tg.steps());
    for (std::size_t n = 1; n < tg.size(); ++n) {
        fracops::l1_row(tg, alpha, n, row);
        double hist = 0.0;
        for (std::size_t j = 1; j < n; ++j) hist += row[j - 1] * (y[j] - y[j - 1]);
        y[n] = (row[n - 1] * y[n - 1] - hist + f) / (row[n - 1] + k);
    }
    return y;
}

}  // namespace

TEST_CASE("a single eigenmode relaxes exactly") {
    auto p = base(40, TimeGrid::graded(1.0, 64, 2.0), 0.6);
    p.elliptic.c = [](double, double) { return -1.0; };  // A = A0
    const auto eig = spectral_basis(p);
    p.initial = eig.mode(2);
    const auto u = solve_linear_spectral(p, eig);
    for (std::size_t k = 0; k < u.nt(); k += 8) {
        const double e = ml_relaxation(0.6, eig.lambdas[2], p.tgrid[k]);
        for (std::size_t i = 0; i < u.nx(); ++i) CHECK(u(i, k) == doctest::Approx(e * p.initial[i]).epsilon(1e-12));
    }
}

TEST_CASE("homogeneous solution and Duhamel step on one mode") {
    auto p = base(30, TimeGrid::uniform(1.0, 8), 0.4);
    p.elliptic.c = [](double, double) { return -1.0; };
    const auto eig = spectral_basis(p);
    const auto phi = eig.mode(0);
    const double lam = eig.lambdas[0];
    const auto s = homogeneous_solution(phi, eig, 0.4, 0.7);
    for (std::size_t i = 0; i < phi.values.size(); ++i)
        CHECK(s[i] == doctest::Approx(ml_relaxation(0.4, lam, 0.7) * phi[i]).epsilon(1e-12));
    // constant-in-time source phi from zero: (1 - E(-lam t^alpha)) / lam * phi
    const auto zero = SpaceField::constant(p.grid, 0.0);
    const auto d = duhamel_step(zero, phi, eig, 0.4, 0.0, 0.7);
    for (std::size_t i = 0; i < phi.values.size(); ++i)
        CHECK(d[i] == doctest::Approx((1 - ml_relaxation(0.4, lam, 0.7)) / lam * phi[i]).epsilon(1e-10));
    CHECK_THROWS_AS(homogeneous_solution(phi, eig, 1.2, 0.5), InvalidParameter);
    CHECK_THROWS_AS(homogeneous_solution(phi, eig, 0.5, -1.0), InvalidParameter);
}

TEST_CASE("zero data gives the zero solution") {
    auto p = base(20, TimeGrid::uniform(1.0, 16), 0.5);
    p.elliptic.b = [](double x, double) { return x; };
    p.elliptic.c = [](double, double) { return -2.0; };
    const auto u = solve_linear_spectral(p);
    for (double v : u.values()) CHECK(v == 0.0);
}

TEST_CASE("scalar reaction against the Mittag-Leffler relaxation") {
    // a = 1, Neumann, A = -u'' + k: u(t) = E(-k t^alpha)
    const double k = 2.5;
    for (double alpha : {0.3, 0.5, 0.8}) {
        auto p = base(10, TimeGrid::graded(1.0, 256, 2.0 / alpha), alpha);
        p.initial = SpaceField::constant(p.grid, 1.0);
        p.elliptic.c0 = 1.0;
        p.elliptic.c = [k](double, double) { return -k; };
        const auto u = solve_linear_spectral(p);
        double err = 0.0;
        for (std::size_t kk = 0; kk < u.nt(); ++kk)
            for (std::size_t i = 0; i < u.nx(); ++i)
                err = std::max(err, std::abs(u(i, kk) - ml_relaxation(alpha, k, p.tgrid[kk])));
        CHECK(err < 5e-4);  // Q = 1 - k goes through the time discretization
        // and the independent scalar L1 oracle converges to the same curve
        const auto y = scalar_l1(p.tgrid, alpha, k, 1.0, 0.0);
        CHECK(std::abs(y.back() - u(3, u.nt() - 1)) < 5e-3);
    }
}

TEST_CASE("constant source relaxes to the stationary state") {
    const double k = 1.0;
    auto p = base(8, TimeGrid::graded(2.0, 200, 3.0), 0.5);
    p.source = Source::function([](double, double) { return 2.0; });
    p.elliptic.c = [k](double, double) { return -k; };
    const auto u = solve_linear_spectral(p);
    const double t = p.tgrid.horizon();
    CHECK(u(4, u.nt() - 1) == doctest::Approx(2.0 / k * (1 - ml_relaxation(0.5, k, t))).epsilon(1e-6));
    const auto y = scalar_l1(p.tgrid, 0.5, k, 0.0, 2.0);
    CHECK(std::abs(y.back() - u(4, u.nt() - 1)) < 1e-3);
}

TEST_CASE("spectral and L1 solvers agree and converge together") {
    auto make = [](std::size_t n, std::size_t steps) {
        auto p = base(n, TimeGrid::graded(1.0, steps, 4.0), 0.5);
        p.elliptic.a = [](double x) { return 1.0 + 0.5 * std::sin(pi * x); };
        p.elliptic.b = [](double x, double) { return 0.5 - x; };
        p.elliptic.c = [](double x, double t) { return -1.0 + 0.5 * x * t; };
        p.elliptic.sigma_hi = 1.0;
        p.initial = SpaceField::sample(p.grid, [](double x) { return 1.0 + std::cos(pi * x); });
        p.source = Source::function([](double x, double t) { return x * std::exp(-t); });
        return p;
    };
    double prev = 0.0;
    for (std::size_t level = 0; level < 3; ++level) {
        const auto p = make(16u << level, 64u << level);
        const double d = max_diff(solve_linear_spectral(p), solve_linear_l1(p));
        CHECK(d < 0.05);
        if (prev > 0.0) CHECK(prev / d > 1.8);
        prev = d;
    }
}

TEST_CASE("results do not depend on the worker count") {
    auto p = base(300, TimeGrid::uniform(0.5, 32), 0.7);
    p.elliptic.b = [](double x, double) { return std::sin(x); };
    p.initial = SpaceField::sample(p.grid, [](double x) { return x * x; });
    ::setenv("FRACCOMP_THREADS", "1", 1);
    const auto one = solve_linear_spectral(p);
    ::setenv("FRACCOMP_THREADS", "4", 1);
    const auto four = solve_linear_spectral(p);
    ::unsetenv("FRACCOMP_THREADS");
    CHECK(one.values() == four.values());
}

TEST_CASE("validation") {
    auto p = base(10, TimeGrid::uniform(1.0, 4), 1.0);
    CHECK_THROWS_AS(validate(p), InvalidParameter);
    p.alpha = 0.5;
    p.initial = SpaceField::constant(Grid1D(0, 1, 11), 0.0);
    CHECK_THROWS_AS(validate(p), GridMismatch);
    p.initial = SpaceField::constant(p.grid, std::nan(""));
    CHECK_THROWS_AS(validate(p), InvalidParameter);
    p.initial = SpaceField::constant(p.grid, 0.0);
    CHECK_NOTHROW(validate(p));
    const Field wrong(Grid1D(0, 1, 3), p.tgrid);
    p.source = Source::samples(wrong);
    CHECK_THROWS_AS(solve_linear_spectral(p), GridMismatch);
    CHECK_THROWS_AS(TimeGrid::uniform(1.0, 1), InvalidParameter);
}

TEST_CASE("spectral integrator is second order in time for smooth sources") {
    auto make = [](std::size_t steps) {
        auto p = base(12, TimeGrid::uniform(1.0, steps), 0.4);
        p.elliptic.c = [](double, double t) { return -1.0 - 0.5 * t; };  // Q varies in time
        p.initial = SpaceField::sample(p.grid, [](double x) { return std::cos(pi * x); });
        p.source = Source::function([](double x, double t) { return std::cos(3 * t) * (1 + x); });
        return p;
    };
    const auto ref = solve_linear_spectral(make(1024));
    std::vector<double> err;
    for (std::size_t steps : {32u, 64u, 128u}) {
        const auto u = solve_linear_spectral(make(steps));
        double e = 0.0;
        for (std::size_t i = 0; i < u.nx(); ++i) e = std::max(e, std::abs(u(i, steps) - ref(i, 1024)));
        err.push_back(e);
    }
    CHECK(std::log2(err[0] / err[1]) > 1.8);
    CHECK(std::log2(err[1] / err[2]) > 1.8);
}
