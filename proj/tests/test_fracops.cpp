#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fraccomp/errors.hpp"
#include "fraccomp/fracops.hpp"
#include "fraccomp/gamma.hpp"

using namespace fraccomp;

namespace {

double slope(const std::vector<double>& n, const std::vector<double>& e) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) {
        const double x = std::log(n[i]), y = std::log(e[i]);
        sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    return -(m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

TEST_CASE("grids") {
    const auto g = TimeGrid::graded(2.0, 10, 3.0);
    CHECK(g[0] == 0.0);
    CHECK(g.horizon() == 2.0);
    CHECK(g[5] == doctest::Approx(2.0 * 0.125));
    CHECK(g.grading() == Grading::graded);
    CHECK_THROWS_AS(TimeGrid({0.0, 0.5, 0.5, 1.0}), InvalidParameter);
    CHECK_THROWS_AS(TimeGrid({0.1, 0.5, 1.0}), InvalidParameter);
    CHECK_THROWS_AS(TimeGrid::uniform(1.0, 1), InvalidParameter);
    const Grid1D x(0.0, 1.0, 9);
    CHECK(x.size() == 11);
    CHECK(x.h() == doctest::Approx(0.1));
    CHECK(x.x(10) == 1.0);
    CHECK_THROWS_AS(Grid1D(1.0, 0.0, 5), InvalidParameter);
}

TEST_CASE("rl_integral is exact on linear data") {
    // J^b t = t^{1+b} / Gamma(2+b), J^b 1 = t^b / Gamma(1+b)
    for (double b : {0.3, 1.0, 1.6, 2.0}) {
        const auto g = TimeGrid::graded(1.5, 40, 2.0);
        const auto j = fracops::rl_integral(TimeSeries::sample(g, [](double t) { return 3.0 - 2.0 * t; }), b);
        for (std::size_t k = 0; k < g.size(); ++k) {
            const double t = g[k];
            const double exact = 3.0 * std::pow(t, b) * special::rgamma(1 + b) - 2.0 * std::pow(t, 1 + b) * special::rgamma(2 + b);
            CHECK(std::abs(j[k] - exact) < 1e-13);
        }
    }
    CHECK_THROWS_AS(fracops::rl_integral(TimeSeries::sample(TimeGrid::uniform(1, 4), [](double) { return 1.0; }), 2.5),
                    InvalidParameter);
}

TEST_CASE("rl_integral preserves sign exactly") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const auto g = TimeGrid::graded(1.0 + 3 * u(gen), 64, 1.0 + 3 * u(gen));
        std::vector<double> v(g.size());
        for (auto& x : v) x = u(gen) < 0.3 ? 0.0 : u(gen) * u(gen);
        const auto j = fracops::rl_integral(TimeSeries(g, v), 0.02 + 1.98 * u(gen));
        for (double x : j.values) REQUIRE(x >= 0.0);
    }
}

TEST_CASE("L1 is exact on linear data and has the power rule") {
    for (double a : {0.2, 0.5, 0.8}) {
        const auto g = TimeGrid::graded(1.0, 30, 2.5);
        const auto d = fracops::caputo_l1(TimeSeries::sample(g, [](double t) { return 1.0 + 4.0 * t; }), a);
        for (std::size_t k = 1; k < g.size(); ++k)
            CHECK(d[k] == doctest::Approx(4.0 * std::pow(g[k], 1 - a) * special::rgamma(2 - a)).epsilon(1e-12));
    }
    // error at t = T on uniform grids decays like N^{-(2 - alpha)} for alpha >= 1/2
    const std::vector<double> ns = {128, 256, 512, 1024};
    for (double a : {0.5, 0.7, 0.9}) {
        std::vector<double> e;
        for (double n : ns) {
            const auto g = TimeGrid::uniform(1.0, static_cast<std::size_t>(n));
            const auto d = fracops::caputo_l1(TimeSeries::sample(g, [a](double t) { return std::pow(t, a); }), a);
            e.push_back(std::abs(d.values.back() - special::gamma(a + 1)));
        }
        CHECK(slope(ns, e) >= 2.0 - a);
    }
    // below 1/2 the start-up singularity caps the uniform-grid order at 1 + alpha
    {
        std::vector<double> e;
        for (double n : ns) {
            const auto g = TimeGrid::uniform(1.0, static_cast<std::size_t>(n));
            const auto d = fracops::caputo_l1(TimeSeries::sample(g, [](double t) { return std::pow(t, 0.3); }), 0.3);
            e.push_back(std::abs(d.values.back() - special::gamma(1.3)));
        }
        CHECK(slope(ns, e) == doctest::Approx(1.3).epsilon(0.02));
    }
}

TEST_CASE("semigroup and inverse identities converge at first order") {
    const std::vector<double> ns = {128, 256, 512, 1024};
    std::vector<double> e1, e2;
    for (double n : ns) {
        const auto g = TimeGrid::uniform(1.0, static_cast<std::size_t>(n));
        const auto y = TimeSeries::sample(g, [](double t) { return std::sin(3 * t) + t * t; });
        const auto a = fracops::rl_integral(fracops::rl_integral(y, 0.4), 0.7);
        const auto b = fracops::rl_integral(y, 1.1);
        const auto dj = fracops::caputo_l1(fracops::rl_integral(y, 0.6), 0.6);
        double m1 = 0, m2 = 0;
        for (std::size_t k = 1; k < g.size(); ++k) {
            m1 = std::max(m1, std::abs(a[k] - b[k]));
            m2 = std::max(m2, std::abs(dj[k] - y[k]));
        }
        e1.push_back(m1);
        e2.push_back(m2);
    }
    CHECK(slope(ns, e1) >= 1.0);
    CHECK(slope(ns, e2) >= 1.0);
}

TEST_CASE("l1_row sums to the power weight and power_gap is stable") {
    const auto g = TimeGrid::graded(1.0, 50, 2.0);
    std::vector<double> row(50);
    fracops::l1_row(g, 0.4, 50, row);
    for (double b : row) CHECK(b > 0.0);
    CHECK(fracops::power_gap(0.0, 1e-12, 1.0, 0.5) == doctest::Approx(0.5e-12).epsilon(1e-6));
    CHECK(fracops::power_gap(0.2, 0.7, 1.0, 0.5) == doctest::Approx(std::sqrt(0.8) - std::sqrt(0.3)).epsilon(1e-14));
}

TEST_CASE("extremum principle on series with interior minima") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int done = 0;
    while (done < 20) {
        const double a = 0.1 + 0.8 * u(gen), ts = 0.2 + 0.6 * u(gen), A = 1 + 2 * u(gen), w = 1 + 3 * u(gen);
        const auto g = TimeGrid::uniform(1.0, 256);
        const auto y = TimeSeries::sample(g, [&](double t) { return A * (t - ts) * (t - ts) + 0.2 * std::sin(w * t); });
        try {
            const auto r = fracops::extremum_check(y, a);
            CHECK(r.holds);
            CHECK(r.caputo_at_min <= r.tolerance);
            ++done;
        } catch (const NotApplicable&) {
        }
    }
    const auto g = TimeGrid::uniform(1.0, 20);
    CHECK_THROWS_AS(fracops::extremum_check(TimeSeries::sample(g, [](double t) { return t; }), 0.5), NotApplicable);
}
