#include "fraccomp/mittag_leffler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "fraccomp/errors.hpp"
#include "fraccomp/gamma.hpp"
#include "fraccomp/quadrature.hpp"

namespace fraccomp::ml {

namespace {

using special::log_gamma;
using special::rgamma;
using special::sin_pi;

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kPi = std::numbers::pi;
// Below this value of |z|^{1/alpha} the Taylor series loses at most ~e^4 ulps to cancellation.
constexpr double kSeriesReach = 4.0;
constexpr double kAsymptoticX = 50.0;

struct Neumaier {
    double sum = 0.0, comp = 0.0;
    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) comp += (sum - t) + v;
        else comp += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

void validate(const MLQuery& q) {
    if (!(q.alpha > 0.0) || q.alpha > 2.0 || !std::isfinite(q.alpha))
        throw InvalidParameter("ml: alpha must lie in (0, 2]");
    if (!(q.beta > 0.0) || !std::isfinite(q.beta)) throw InvalidParameter("ml: beta must be > 0");
    if (!std::isfinite(q.z)) throw InvalidParameter("ml: z must be finite");
}

// z > 0: every term is positive, so sum in log space to survive large z.
MLResult series_positive(double alpha, double beta, double z) {
    const double lz = std::log(z);
    const double peak = std::pow(z, 1.0 / alpha);
    Neumaier acc;
    double term = 0.0;
    for (int k = 0; k < 200000; ++k) {
        const double lt = k * lz - log_gamma(alpha * k + beta);
        if (lt > 709.0) return {INFINITY, INFINITY, Regime::series};
        term = std::exp(lt);
        acc.add(term);
        if (alpha * k + beta > peak + 2.0 && term <= 0.25 * kEps * acc.value()) break;
    }
    const double v = acc.value();
    return {v, term + 4.0 * kEps * v, Regime::series};
}

MLResult series_general(double alpha, double beta, double z) {
    Neumaier acc;
    double abs_sum = 0.0;
    double power = 1.0;
    double prev = INFINITY;
    double next = 0.0;
    for (int k = 0; k < 2000; ++k) {
        const double term = power * rgamma(alpha * k + beta);
        const double mag = std::abs(term);
        if (k > 0 && mag < prev && mag <= 0.1 * kEps * std::abs(acc.value())) {
            next = mag;
            break;
        }
        acc.add(term);
        abs_sum += mag;
        prev = mag;
        power *= z;
    }
    const double v = acc.value();
    return {v, next + 2.0 * kEps * abs_sum, Regime::series};
}

// E_{1,beta}(-x) = e^{-x}/Gamma(beta) * 1F1(beta-1; beta; x)
MLResult kummer(double beta, double x) {
    Neumaier acc;
    acc.add(1.0);
    double term = 1.0;
    double abs_sum = 1.0;
    for (int k = 1; k < 5000; ++k) {
        term *= (beta - 2.0 + k) / (beta - 1.0 + k) * x / k;
        acc.add(term);
        abs_sum += std::abs(term);
        if (k > x && std::abs(term) <= 0.25 * kEps * std::abs(acc.value())) break;
    }
    const double scale = std::exp(-x) * rgamma(beta);
    const double v = scale * acc.value();
    return {v, 4.0 * kEps * std::abs(scale) * abs_sum, Regime::integral};
}

// Bound on |(-1)^{k+1}/Gamma(beta - alpha k)| via reflection; exact value if the bound is undefined.
double asym_coef_bound(double alpha, double beta, int k) {
    const double arg = 1.0 - beta + alpha * k;
    if (arg > 0.0) return std::exp(log_gamma(arg)) / kPi;
    return std::abs(rgamma(beta - alpha * k));
}

// Sum_{k>=1} (-1)^{k+1} x^{-k}/Gamma(beta - alpha k). Returns false if it does not converge at x.
bool asymptotic(double alpha, double beta, double x, MLResult& out) {
    Neumaier acc;
    double lead = 0.0;
    double prev_bound = INFINITY;
    const double lx = std::log(x);
    for (int k = 1; k < 400; ++k) {
        const double c = (k % 2 == 1 ? 1.0 : -1.0) * rgamma(beta - alpha * k);
        const double term = c * std::exp(-k * lx);
        const double bound = asym_coef_bound(alpha, beta, k) * std::exp(-k * lx);
        if (lead == 0.0 && term != 0.0) lead = std::abs(term);
        if (bound > prev_bound && k > 2) return false;  // past the optimal truncation point
        acc.add(term);
        prev_bound = bound;
        if (lead > 0.0 && bound <= 0.01 * kEps * lead) {
            out = {acc.value(), bound + 2.0 * kEps * std::abs(acc.value()), Regime::asymptotic};
            return true;
        }
    }
    return false;
}

// Branch-cut integral for z = -x, alpha != 1, plus the pole pair when alpha > 1.
MLResult integral(double alpha, double beta, double x) {
    if (beta >= 1.0 + alpha) {
        // E_{a,b}(z) = (E_{a,b-a}(z) - 1/Gamma(b-a)) / z
        const MLResult inner = integral(alpha, beta - alpha, x);
        return {(inner.value - rgamma(beta - alpha)) / (-x), inner.est_abs_error / x, Regime::integral};
    }
    const double t = std::pow(x, 1.0 / alpha);
    const double p = 1.0 / (1.0 + alpha - beta);
    const double sb = sin_pi(beta);
    const double sba = sin_pi(beta - alpha);
    const double ca = std::cos(alpha * kPi);
    auto g = [&](double r) {
        const double ra = std::pow(r, alpha);
        return (ra * sb + sba) / (ra * ra + 2.0 * ra * ca + 1.0);
    };
    auto f = [&](double v) {
        const double u = std::pow(v, p);
        return std::exp(-u) * g(u / t);
    };
    constexpr double kUMax = 46.0;
    const double vmax = std::pow(kUMax, 1.0 / p);
    const double vpeak = std::pow(t, 1.0 / p);
    quad::QuadResult q;
    if (vpeak > 0.0 && vpeak < vmax) {
        auto q1 = quad::integrate(f, 0.0, vpeak, 1e-17, 1e-14);
        auto q2 = quad::integrate(f, vpeak, vmax, 1e-17, 1e-14);
        q = {q1.value + q2.value, q1.abs_error + q2.abs_error, q1.evaluations + q2.evaluations};
    } else {
        q = quad::integrate(f, 0.0, vmax, 1e-17, 1e-14);
    }
    const double pref = p / kPi * std::pow(t, -alpha);
    double value = pref * q.value;
    double err = pref * (q.abs_error + std::exp(-kUMax) * vmax);
    if (alpha > 1.0) {
        const double phase = kPi * (1.0 - beta) / alpha + t * std::sin(kPi / alpha);
        const double pole = (2.0 / alpha) * std::pow(t, 1.0 - beta) *
                            std::exp(t * std::cos(kPi / alpha)) * std::cos(phase);
        value += pole;
        err += 8.0 * kEps * std::abs(pole) * std::max(1.0, t);
    }
    err += 4.0 * kEps * std::abs(value);
    return {value, err, Regime::integral};
}

// (t-s0)^k - (t-s1)^k without cancellation, for exponent e > 0
double power_gap(double s0, double s1, double t, double e) {
    const double a = t - s0;
    const double d = (s1 - s0) / a;
    return std::pow(a, e) * -std::expm1(e * std::log1p(-d));
}

void check_alpha_unit(double alpha, const char* who) {
    if (!(alpha > 0.0) || alpha > 1.0) throw InvalidParameter(std::string(who) + ": alpha must lie in (0, 1]");
}

}  // namespace

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::series: return "series";
        case Regime::integral: return "integral";
        case Regime::asymptotic: return "asymptotic";
    }
    return "?";
}

MLResult ml(const MLQuery& q) {
    validate(q);
    const double alpha = q.alpha, beta = q.beta, z = q.z;
    if (z == 0.0) return {rgamma(beta), 0.0, Regime::series};
    if (alpha == 1.0 && beta == 1.0) {
        const double v = std::exp(z);
        return {v, kEps * v, Regime::series};
    }
    if (z > 0.0) return series_positive(alpha, beta, z);

    const double x = -z;
    MLResult r;
    if (alpha == 1.0) {
        if (x <= kSeriesReach) return series_general(alpha, beta, z);
        if (x >= kAsymptoticX && asymptotic(alpha, beta, x, r)) return r;
        return kummer(beta, x);
    }
    const double t = std::pow(x, 1.0 / alpha);
    if (t <= kSeriesReach) {
        r = series_general(alpha, beta, z);
    } else if (alpha < 1.0 && x >= kAsymptoticX && asymptotic(alpha, beta, x, r)) {
        // r filled in
    } else {
        r = integral(alpha, beta, x);
    }
    if (beta == 1.0 && alpha < 1.0) r.value = std::clamp(r.value, 0.0, 1.0);
    return r;
}

double ml_relaxation(double alpha, double lambda, double t) {
    check_alpha_unit(alpha, "ml_relaxation");
    if (!(lambda >= 0.0) || !(t >= 0.0) || !std::isfinite(lambda) || !std::isfinite(t))
        throw InvalidParameter("ml_relaxation: lambda and t must be finite and >= 0");
    if (lambda == 0.0 || t == 0.0) return 1.0;
    return ml(alpha, 1.0, -lambda * std::pow(t, alpha)).value;
}

double ml_kernel(double alpha, double lambda, double t) {
    check_alpha_unit(alpha, "ml_kernel");
    if (!(t > 0.0)) throw InvalidParameter("ml_kernel: t must be > 0");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidParameter("ml_kernel: lambda must be >= 0");
    return std::pow(t, alpha - 1.0) * ml(alpha, alpha, -lambda * std::pow(t, alpha)).value;
}

double ml_kernel_integral_zero(double alpha, double s0, double s1, double t) {
    check_alpha_unit(alpha, "ml_kernel_integral_zero");
    if (!(s0 >= 0.0) || !(s0 < s1) || !(s1 <= t))
        throw InvalidParameter("ml_kernel_integral_zero: need 0 <= s0 < s1 <= t");
    return power_gap(s0, s1, t, alpha) * rgamma(alpha + 1.0);
}

double ml_kernel_integral(double alpha, double lambda, double s0, double s1, double t) {
    check_alpha_unit(alpha, "ml_kernel_integral");
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw InvalidParameter("ml_kernel_integral: lambda must be > 0 (use the zero branch)");
    if (!(s0 >= 0.0) || !(s0 < s1) || !(s1 <= t))
        throw InvalidParameter("ml_kernel_integral: need 0 <= s0 < s1 <= t");
    const double za = lambda * std::pow(t - s0, alpha);
    if (za <= 0.5) {
        // sum_{k>=1} (-lambda)^{k-1} ((t-s0)^{ak} - (t-s1)^{ak}) / Gamma(ak+1)
        Neumaier acc;
        double lp = 1.0;
        for (int k = 1; k < 200; ++k) {
            const double term = lp * power_gap(s0, s1, t, alpha * k) * rgamma(alpha * k + 1.0);
            acc.add(term);
            if (std::abs(term) <= 0.1 * kEps * std::abs(acc.value())) break;
            lp *= -lambda;
        }
        return acc.value();
    }
    const double e_far = ml(alpha, 1.0, -za).value;
    const double e_near = s1 == t ? 1.0 : ml(alpha, 1.0, -lambda * std::pow(t - s1, alpha)).value;
    const double diff = e_near - e_far;
    if (diff >= 1e-3 * e_near || s1 == t) return std::max(0.0, diff) / lambda;
    // short interval far from t: the difference cancels, integrate the smooth kernel directly
    auto k = [&](double s) { return ml_kernel(alpha, lambda, t - s); };
    return quad::integrate(k, s0, s1, 0.0, 1e-14).value;
}

// ---------------------------------------------------------------------------

RelaxationTable::RelaxationTable(double alpha, double beta) : alpha_(alpha), beta_(beta) {
    validate(MLQuery{alpha, beta, 0.0});
    if (alpha == 1.0 && beta == 1.0) {
        exp_case_ = true;
        return;
    }
    if (alpha >= 1.0) {
        fallback_ = true;
        return;
    }
    fit(near_, false, 0.0, x_split_);

    // pick the asymptotic start and truncation so the tail is below roundoff
    for (double xa = kAsymptoticX; xa <= 1e6; xa *= 2.0) {
        std::vector<double> coef;
        double lead = 0.0;
        double prev = INFINITY;
        bool ok = false;
        for (int k = 1; k < 300; ++k) {
            const double c = (k % 2 == 1 ? 1.0 : -1.0) * rgamma(beta - alpha * k);
            const double bound = asym_coef_bound(alpha, beta, k) * std::pow(xa, -k);
            if (bound > prev && k > 2) break;
            prev = bound;
            if (lead == 0.0 && c != 0.0) lead = std::abs(c) * std::pow(xa, -k);
            coef.push_back(c);
            if (lead > 0.0 && bound <= 0.01 * kEps * lead) {
                ok = true;
                break;
            }
        }
        if (ok) {
            x_asym_ = xa;
            asym_ = std::move(coef);
            break;
        }
    }
    if (asym_.empty()) throw std::logic_error("RelaxationTable: asymptotic series did not settle");
    fit(mid_, true, std::log(x_split_), std::log(x_asym_));
}

void RelaxationTable::fit(Region& r, bool log_var, double lo, double hi) {
    r.lo = lo;
    r.hi = hi;
    for (int panels = 1; panels <= 4096; panels *= 2) {
        r.panels = panels;
        r.inv_width = panels / (hi - lo);
        r.coef.assign(static_cast<std::size_t>(panels) * kDegree, 0.0);
        bool ok = true;
        const double w = (hi - lo) / panels;
        for (int p = 0; p < panels && ok; ++p) {
            const double mid = lo + (p + 0.5) * w;
            double f[kDegree];
            double fmax = 0.0;
            double noise = 0.0;
            for (int k = 0; k < kDegree; ++k) {
                const double y = mid + 0.5 * w * std::cos(kPi * (k + 0.5) / kDegree);
                const double x = log_var ? std::exp(y) : y;
                const MLResult m = ml(alpha_, beta_, -x);
                f[k] = m.value;
                noise = std::max(noise, m.est_abs_error);
                fmax = std::max(fmax, std::abs(f[k]));
            }
            double* c = r.coef.data() + static_cast<std::size_t>(p) * kDegree;
            for (int j = 0; j < kDegree; ++j) {
                double s = 0.0;
                for (int k = 0; k < kDegree; ++k) s += f[k] * std::cos(kPi * j * (k + 0.5) / kDegree);
                c[j] = 2.0 * s / kDegree;
            }
            c[0] *= 0.5;
            const double tail = std::abs(c[kDegree - 1]) + std::abs(c[kDegree - 2]);
            // the tail cannot drop below the noise of the sampled values
            if (tail > std::max(2e-15 * fmax, 4.0 * noise)) ok = false;
        }
        if (ok) return;
    }
    throw std::logic_error("RelaxationTable: Chebyshev fit did not converge");
}

double RelaxationTable::clenshaw(const double* c, double s) {
    double b1 = 0.0, b2 = 0.0;
    const double s2 = 2.0 * s;
    for (int j = kDegree - 1; j >= 1; --j) {
        const double b0 = s2 * b1 - b2 + c[j];
        b2 = b1;
        b1 = b0;
    }
    return s * b1 - b2 + c[0];
}

double RelaxationTable::eval_region(const Region& r, double y) const {
    const double pos = (y - r.lo) * r.inv_width;
    int idx = static_cast<int>(pos);
    if (idx >= r.panels) idx = r.panels - 1;
    if (idx < 0) idx = 0;
    return clenshaw(r.coef.data() + static_cast<std::size_t>(idx) * kDegree, 2.0 * (pos - idx) - 1.0);
}

double RelaxationTable::operator()(double x) const {
    if (exp_case_) return std::exp(-x);
    if (fallback_ || x < 0.0) return ml(alpha_, beta_, -x).value;
    if (x < x_split_) return eval_region(near_, x);
    if (x < x_asym_) return eval_region(mid_, std::log(x));
    const double r = 1.0 / x;
    double s = 0.0;
    for (std::size_t k = asym_.size(); k-- > 0;) s = s * r + asym_[k];
    return s * r;
}

}  // namespace fraccomp::ml
