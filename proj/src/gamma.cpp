#include "fraccomp/gamma.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "fraccomp/errors.hpp"

namespace fraccomp::special {

namespace {

// Lanczos coefficients for g = 607/128, n = 15 (Godfrey).
constexpr double kG = 607.0 / 128.0;
constexpr std::array<double, 15> kLanczos = {
    0.99999999999999709182,   57.156235665862923517,   -59.597960355475491248,
    14.136097974741747174,    -0.49191381609762019978, 0.33994649984811888699e-4,
    0.46523628927048575665e-4, -0.98374475304879564677e-4, 0.15808870322491248884e-3,
    -0.21026444172410488319e-3, 0.21743961811521264320e-3, -0.16431810653676389022e-3,
    0.84418223983852743293e-4, -0.26190838401581408670e-4, 0.36899182659531622704e-5};

double lanczos_sum(double xm1) {
    double acc = 0.0;
    for (int i = 14; i >= 1; --i) acc += kLanczos[i] / (xm1 + i);
    return acc + kLanczos[0];
}

bool is_pole(double x) { return x <= 0.0 && x == std::floor(x); }

}  // namespace

double sin_pi(double x) {
    // reduce to [-1, 1]; sin(pi x) has period 2
    double r = std::remainder(x, 2.0);
    if (r == 0.0 || r == 1.0 || r == -1.0) return 0.0;
    if (r > 0.5) r = 1.0 - r;
    else if (r < -0.5) r = -1.0 - r;
    return std::sin(std::numbers::pi * r);
}

double gamma(double x) {
    if (std::isnan(x)) return x;
    if (is_pole(x)) throw InvalidParameter("gamma: pole at non-positive integer");
    if (x < 0.5) {
        return std::numbers::pi / (sin_pi(x) * gamma(1.0 - x));
    }
    if (x > 171.7) return INFINITY;
    const double xm1 = x - 1.0;
    const double t = xm1 + kG + 0.5;
    // split the power so t^(x-1/2) does not overflow before exp(-t) is applied
    const double half = std::pow(t, 0.5 * (xm1 + 0.5));
    return std::sqrt(2.0 * std::numbers::pi) * half * (half * std::exp(-t)) * lanczos_sum(xm1);
}

double rgamma(double x) {
    if (std::isnan(x)) return x;
    if (is_pole(x)) return 0.0;
    if (x < 0.5) {
        // 1/Gamma(x) = sin(pi x) Gamma(1-x) / pi
        return sin_pi(x) * gamma(1.0 - x) / std::numbers::pi;
    }
    if (x > 171.0) return std::exp(-log_gamma(x));
    return 1.0 / gamma(x);
}

double log_gamma(double x) {
    if (is_pole(x)) return INFINITY;
    if (x < 0.5) {
        return std::log(std::numbers::pi / std::abs(sin_pi(x))) - log_gamma(1.0 - x);
    }
    const double xm1 = x - 1.0;
    const double t = xm1 + kG + 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (xm1 + 0.5) * std::log(t) - t +
           std::log(lanczos_sum(xm1));
}

}  // namespace fraccomp::special
