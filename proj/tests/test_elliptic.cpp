#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fraccomp/elliptic.hpp"
#include "fraccomp/errors.hpp"

using namespace fraccomp;
using namespace fraccomp::elliptic;

namespace {

constexpr double pi = std::numbers::pi;

/// First root of tan(mu) = 2 sigma mu / (mu^2 - sigma^2) on (0, pi), found by bisection on
/// (mu^2 - sigma^2) sin(mu) - 2 sigma mu cos(mu).
double robin_mu1(double sigma) {
    auto g = [sigma](double mu) { return (mu * mu - sigma * sigma) * std::sin(mu) - 2 * sigma * mu * std::cos(mu); };
    double lo = 1e-9, hi = pi - 1e-9;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (g(lo) * g(mid) <= 0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("Neumann spectrum converges at second order") {
    EllipticSpec s;  // -u'' + u
    for (std::size_t mode = 1; mode <= 10; ++mode) {
        double prev = 0.0;
        for (std::size_t n : {63u, 127u, 255u}) {
            const auto eig = eigendecompose(assemble(s, Grid1D(0, 1, n)), 12);
            const double exact = 1.0 + double((mode - 1) * (mode - 1)) * pi * pi;
            const double err = std::abs(eig.lambdas[mode - 1] - exact);
            if (mode == 1) CHECK(err < 1e-10);
            if (prev > 0.0 && mode > 1) CHECK(std::log2(prev / err) == doctest::Approx(2.0).epsilon(0.05));
            prev = err;
        }
    }
}

TEST_CASE("Robin principal eigenvalue against the bisection oracle") {
    const double mu = robin_mu1(1.0);
    CHECK(mu == doctest::Approx(1.30654).epsilon(1e-5));
    EllipticSpec s;
    s.c0 = 0.0;
    s.sigma_lo = s.sigma_hi = 1.0;
    const auto eig = eigendecompose(assemble(s, Grid1D(0, 1, 255)), 4);
    CHECK(std::abs(eig.lambdas[0] - mu * mu) < 1e-4);
    const auto [l1, phi] = principal_eigenpair(eig);
    for (double v : phi.values) CHECK(v > 0.0);
}

TEST_CASE("principal eigenfunction is positive on random specs") {
    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
        EllipticSpec s;
        const double k = 1 + 5 * u(gen), amp = 0.8 * u(gen), ph = 6 * u(gen);
        s.a = [=](double x) { return 1.0 + amp * std::sin(k * x + ph); };
        s.c0 = 2 * u(gen);
        s.sigma_lo = 3 * u(gen);
        s.sigma_hi = 3 * u(gen);
        const auto eig = eigendecompose(assemble(s, Grid1D(-1, 2, 80)), 5);
        const auto [l1, phi] = principal_eigenpair(eig);
        CHECK(l1 >= s.c0 - 1e-9);
        for (double v : phi.values) CHECK(v > 0.0);
    }
}

TEST_CASE("modes are orthonormal and projection round-trips") {
    EllipticSpec s;
    s.a = [](double x) { return 2.0 + std::cos(x); };
    s.sigma_lo = 0.5;
    const Grid1D g(0, 3, 40);
    const auto eig = eigendecompose(assemble(s, g), g.size());
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) {
            const auto mi = eig.mode(i), mj = eig.mode(j);
            double acc = 0.0;
            for (std::size_t q = 0; q < g.size(); ++q) acc += eig.weights[q] * mi[q] * mj[q];
            CHECK(acc == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
        }
    std::vector<double> v(g.size());
    for (std::size_t q = 0; q < g.size(); ++q) v[q] = std::exp(g.x(q)) - g.x(q);
    const auto back = eig.reconstruct(eig.project(v));
    for (std::size_t q = 0; q < g.size(); ++q) CHECK(back[q] == doctest::Approx(v[q]).epsilon(1e-12));
}

TEST_CASE("stationary solve converges at second order") {
    // -(a u')' + u = f with a = 1 + x/2, u = cos(pi x), Neumann ends
    EllipticSpec s;
    s.a = [](double x) { return 1.0 + 0.5 * x; };
    auto f = [](double x) {
        return (1.0 + 0.5 * x) * pi * pi * std::cos(pi * x) + 0.5 * pi * std::sin(pi * x) + std::cos(pi * x);
    };
    double prev = 0.0;
    for (std::size_t n : {31u, 63u, 127u}) {
        const Grid1D g(0, 1, n);
        const auto u = solve_stationary(s, g, SpaceField::sample(g, f), {0, 0}, Form::shifted);
        double err = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) err = std::max(err, std::abs(u[i] - std::cos(pi * g.x(i))));
        if (prev > 0.0) CHECK(std::log2(prev / err) > 1.8);
        prev = err;
    }
}

TEST_CASE("inhomogeneous Robin data and drift") {
    // -u'' - b u' + b0 u = f with u = exp(x), b = 1, b0 = 2: f = -e^x - e^x + 2 e^x = 0
    EllipticSpec s;
    s.b = [](double, double) { return 1.0; };
    s.b0 = [](double, double) { return 2.0; };
    s.sigma_lo = 1.0;
    s.sigma_hi = 0.5;
    // a u' nu + sigma u: at 0, -1 + 1 = 0; at 1, e + 0.5 e = 1.5 e
    const Grid1D g(0, 1, 255);
    const auto u = solve_stationary(s, g, SpaceField::constant(g, 0.0), {0.0, 1.5 * std::numbers::e}, Form::a1);
    for (std::size_t i = 0; i < g.size(); i += 32) CHECK(u[i] == doctest::Approx(std::exp(g.x(i))).epsilon(1e-4));
}

TEST_CASE("singular and invalid systems are reported") {
    EllipticSpec s;
    s.c0 = 0.0;
    const Grid1D g(0, 1, 20);
    CHECK_THROWS_AS(solve_stationary(s, g, SpaceField::constant(g, 1.0), {0, 0}, Form::shifted), SingularSystem);
    CHECK_THROWS_AS(solve_stationary(s, g, SpaceField::constant(g, 1.0)), InvalidParameter);  // A1 without b0
    EllipticSpec bad;
    bad.a = [](double x) { return x - 0.5; };
    CHECK_THROWS_AS(assemble(bad, g), InvalidParameter);
    EllipticSpec neg;
    neg.sigma_lo = -1.0;
    CHECK_THROWS_AS(assemble(neg, g), InvalidParameter);
    EllipticSpec drift;
    drift.b = [](double, double) { return 1.0; };
    CHECK_THROWS_AS(eigendecompose(assemble(drift, g), 3, SymmetricPart::self_adjoint), InvalidParameter);
    Tridiagonal t(3);
    CHECK_THROWS_AS(t.solve(std::vector<double>{1, 2, 3}), SingularSystem);
}

TEST_CASE("coercivity of the A1 form") {
    EllipticSpec s;
    s.a = [](double x) { return 1.0 + 0.3 * std::sin(4 * x); };
    s.b = [](double x, double) { return 0.4 * x; };
    s.b0 = [](double, double) { return 3.0; };
    s.sigma_hi = 1.0;
    const Grid1D g(0, 1, 100);
    const auto op = assemble(s, g);
    std::mt19937_64 gen(2);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> v(g.size());
        const double k = 1 + 10 * (u(gen) + 1);
        for (std::size_t i = 0; i < g.size(); ++i) v[i] = std::sin(k * g.x(i)) + u(gen) * 0.01;
        const double form = coercivity_form(op, v);
        CHECK(form >= 0.5 * (l2_norm_sq(g, v) + h1_seminorm_sq(g, v)));
    }
}

TEST_CASE("gradient closes with the boundary condition") {
    EllipticSpec s;
    s.sigma_lo = 2.0;
    s.sigma_hi = 0.0;
    const Grid1D g(0, 1, 50);
    const auto op = assemble(s, g);
    std::vector<double> v(g.size()), d(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = 1.0 + g.x(i);
    op.gradient(v, d);
    CHECK(d[0] == doctest::Approx(2.0));  // u'(0) = sigma u / a
    CHECK(d[g.size() - 1] == doctest::Approx(0.0));
    CHECK(d[10] == doctest::Approx(1.0));
}
