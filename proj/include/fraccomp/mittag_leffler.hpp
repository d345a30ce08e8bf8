#pragma once

#include <vector>

namespace fraccomp::ml {

enum class Regime { series, integral, asymptotic };

const char* regime_name(Regime r);

struct MLQuery {
    double alpha = 1.0;  // (0, 2]
    double beta = 1.0;   // > 0
    double z = 0.0;
};

struct MLResult {
    double value = 0.0;
    double est_abs_error = 0.0;
    Regime regime = Regime::series;
};

/// Two-parameter Mittag-Leffler function E_{alpha,beta}(z) for real z.
MLResult ml(const MLQuery& q);
inline MLResult ml(double alpha, double beta, double z) { return ml(MLQuery{alpha, beta, z}); }

/// E_{alpha,1}(-lambda t^alpha), the scalar relaxation profile.
double ml_relaxation(double alpha, double lambda, double t);

/// t^{alpha-1} E_{alpha,alpha}(-lambda t^alpha). Requires t > 0.
double ml_kernel(double alpha, double lambda, double t);

/// Integral of ml_kernel(alpha, lambda, t - s) over s in [s0, s1], lambda > 0.
double ml_kernel_integral(double alpha, double lambda, double s0, double s1, double t);

/// The lambda = 0 branch: ((t-s0)^alpha - (t-s1)^alpha) / Gamma(alpha+1).
double ml_kernel_integral_zero(double alpha, double s0, double s1, double t);

/// Prepared evaluator of x -> E_{alpha,beta}(-x) for x >= 0, built once from ml().
/// Piecewise Chebyshev on [0, x_asym) and a truncated asymptotic series beyond.
/// Immutable after construction, so one instance can be shared between threads.
class RelaxationTable {
public:
    explicit RelaxationTable(double alpha, double beta = 1.0);

    double operator()(double x) const;

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double asymptotic_start() const { return x_asym_; }

private:
    struct Region {
        double lo = 0, hi = 0;      // in the fitting variable
        double inv_width = 0;       // panels / (hi - lo)
        int panels = 0;
        std::vector<double> coef;   // panels * kDegree
    };
    static constexpr int kDegree = 16;

    void fit(Region& r, bool log_var, double lo, double hi);
    static double clenshaw(const double* c, double s);
    double eval_region(const Region& r, double y) const;

    double alpha_, beta_;
    bool exp_case_ = false;
    bool fallback_ = false;
    double x_split_ = 1.0;
    double x_asym_ = 50.0;
    Region near_, mid_;
    std::vector<double> asym_;  // coefficients of x^{-k}, k = 1..K
};

}  // namespace fraccomp::ml
