#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fraccomp/errors.hpp"
#include "fraccomp/gamma.hpp"
#include "fraccomp/mittag_leffler.hpp"
#include "fraccomp/quadrature.hpp"

using namespace fraccomp;

namespace {

struct RefCase {
    double alpha, beta, z, value;
};

// High-precision values from tests/oracles/ml_reference.py (mpmath).
const RefCase kReference[] = {
#include "oracles/ml_reference.inc"
};

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("gamma against std::tgamma and closed forms") {
    double worst = 0.0;
    for (int i = 1; i < 1700; ++i) {
        const double x = 0.1 * i + 0.003;
        worst = std::max(worst, rel(special::gamma(x), std::tgamma(x)));
    }
    CHECK(worst < 1e-13);
    CHECK(special::gamma(0.5) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-15));
    CHECK(special::gamma(5.0) == doctest::Approx(24.0).epsilon(1e-15));
    CHECK(special::gamma(-0.5) == doctest::Approx(-2.0 * std::sqrt(std::numbers::pi)).epsilon(1e-14));
    CHECK(special::rgamma(0.0) == 0.0);
    CHECK(special::rgamma(-3.0) == 0.0);
    CHECK_THROWS_AS(special::gamma(-2.0), InvalidParameter);
    CHECK(special::log_gamma(100.5) == doctest::Approx(std::lgamma(100.5)).epsilon(1e-14));
    CHECK(special::sin_pi(1.0) == 0.0);
}

TEST_CASE("ml matches the multiprecision reference table") {
    for (const auto& c : kReference) {
        const auto r = ml::ml(c.alpha, c.beta, c.z);
        CAPTURE(c.alpha);
        CAPTURE(c.beta);
        CAPTURE(c.z);
        CHECK(rel(r.value, c.value) < 1e-11);
        // the reported error bound covers the true error
        CHECK(std::abs(r.value - c.value) <= std::max(r.est_abs_error, 1e-12 * (1.0 + std::abs(c.value))));
    }
}

TEST_CASE("ml closed forms") {
    SUBCASE("E_{1,1} is exp") {
        for (double x = -30.0; x <= 5.0; x += 0.25) CHECK(rel(ml::ml(1, 1, x).value, std::exp(x)) < 1e-12);
    }
    SUBCASE("E_{2,1}(-x^2) is cos") {
        for (double x = 0.0; x <= 10.0; x += 0.1) CHECK(std::abs(ml::ml(2, 1, -x * x).value - std::cos(x)) < 1e-10);
    }
    SUBCASE("E_{2,2}(-x^2) is sin(x)/x") {
        for (double x = 0.1; x <= 8.0; x += 0.3)
            CHECK(std::abs(ml::ml(2, 2, -x * x).value - std::sin(x) / x) < 1e-10);
    }
    SUBCASE("E_{1,2}(z) = (e^z - 1)/z") {
        for (double z : {-20.0, -3.0, -0.1, 0.4, 2.0}) CHECK(rel(ml::ml(1, 2, z).value, std::expm1(z) / z) < 1e-12);
    }
    SUBCASE("E_{1/2,1}(-x) = exp(x^2) erfc(x)") {
        for (double x = 0.0; x <= 5.0; x += 0.05) {
            const double ref = std::exp(x * x) * std::erfc(x);
            CHECK(rel(ml::ml(0.5, 1, -x).value, ref) < 1e-9);
        }
    }
    SUBCASE("cos identity at -pi^2/4 is zero") { CHECK(std::abs(ml::ml(2, 1, -2.46740110027234).value) < 1e-12); }
}

TEST_CASE("ml regimes and parameter checks") {
    CHECK(ml::ml(0.5, 1, -0.5).regime == ml::Regime::series);
    CHECK(ml::ml(0.5, 1, -200).regime == ml::Regime::asymptotic);
    CHECK(ml::ml(1.5, 1, -20).regime == ml::Regime::integral);
    CHECK_THROWS_AS(ml::ml(0.0, 1, 1), InvalidParameter);
    CHECK_THROWS_AS(ml::ml(2.5, 1, 1), InvalidParameter);
    CHECK_THROWS_AS(ml::ml(0.5, 0.0, 1), InvalidParameter);
    CHECK_THROWS_AS(ml::ml(0.5, 1, NAN), InvalidParameter);
    CHECK(ml::ml(0.7, 1.3, 0.0).value == doctest::Approx(special::rgamma(1.3)).epsilon(1e-15));
}

TEST_CASE("recurrence E_{a,b}(z) = z E_{a,a+b}(z) + 1/Gamma(b)") {
    for (double a : {0.3, 0.6, 0.9, 1.4})
        for (double b : {0.5, 1.0, 1.7})
            for (double z : {-0.7, -4.0, -25.0, -90.0}) {
                const double lhs = ml::ml(a, b, z).value;
                const double rhs = z * ml::ml(a, a + b, z).value + special::rgamma(b);
                CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
            }
}

TEST_CASE("derivative identity against central differences") {
    for (double a : {0.25, 0.5, 0.75, 0.95})
        for (double lambda : {0.3, 2.0, 15.0})
            for (double t : {0.05, 0.4, 2.0}) {
                const double h = 1e-4 * t;
                const double fd = (ml::ml_relaxation(a, lambda, t + h) - ml::ml_relaxation(a, lambda, t - h)) / (2 * h);
                const double exact = -lambda * std::pow(t, a - 1.0) * ml::ml(a, a, -lambda * std::pow(t, a)).value;
                CHECK(rel(fd, exact) < 1e-5);
            }
}

TEST_CASE("relaxation is completely monotone and bounded by 1.1/(1+x)") {
    for (double a : {0.1, 0.3, 0.5, 0.7, 0.9, 1.0}) {
        double prev = 1.0;
        for (int i = 0; i <= 400; ++i) {
            const double x = i == 0 ? 0.0 : std::pow(10.0, -3.0 + 9.0 * i / 400.0);
            const double e = ml::ml(a, 1, -x).value;
            CHECK(e >= 0.0);
            if (a < 1.0) CHECK(e > 0.0);  // e^{-x} underflows
            CHECK(e <= prev * (1 + 1e-13));
            CHECK(e * (1.0 + x) <= 1.1);
            prev = e;
        }
    }
}

TEST_CASE("prepared table agrees with direct evaluation") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(-4.0, 6.0);
    for (double a : {0.2, 0.5, 0.8, 1.0})
        for (double b : {1.0, a}) {
            const ml::RelaxationTable table(a, b);
            for (int i = 0; i < 300; ++i) {
                const double x = std::pow(10.0, u(gen));
                const double d = ml::ml(a, b, -x).value;
                CHECK(std::abs(table(x) - d) <= 1e-12 * std::max(std::abs(d), 1e-3));
            }
        }
}

TEST_CASE("kernel integral matches quadrature of the kernel") {
    for (double a : {0.3, 0.6, 0.9})
        for (double lambda : {0.5, 10.0, 400.0}) {
            const double t = 1.0, s0 = 0.2, s1 = 0.7;
            const auto q = quad::integrate([&](double s) { return ml::ml_kernel(a, lambda, t - s); }, s0, s1, 1e-15, 1e-13);
            CHECK(rel(ml::ml_kernel_integral(a, lambda, s0, s1, t), q.value) < 1e-10);
            // singular end s1 = t
            const double whole = ml::ml_kernel_integral(a, lambda, 0.0, t, t);
            CHECK(rel(whole, (1.0 - ml::ml_relaxation(a, lambda, t)) / lambda) < 1e-12);
        }
    CHECK(ml::ml_kernel_integral_zero(0.5, 0.0, 1.0, 1.0) == doctest::Approx(special::rgamma(1.5)).epsilon(1e-15));
}

TEST_CASE("adaptive quadrature") {
    const auto r = quad::integrate([](double x) { return std::exp(-x) * std::cos(5 * x); }, 0.0, 3.0);
    const double exact = (1.0 - std::exp(-3.0) * (std::cos(15.0) - 5.0 * std::sin(15.0))) / 26.0;
    CHECK(std::abs(r.value - exact) < 1e-14);
    const auto s = quad::integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-12, 1e-12);
    CHECK(std::abs(s.value - 2.0) < 1e-9);
}
