#pragma once

#include <functional>

namespace fraccomp::quad {

struct QuadResult {
    double value = 0.0;
    double abs_error = 0.0;  // sum of |K15 - G7| over accepted panels
    int evaluations = 0;
};

/// Adaptive Gauss-Kronrod (7/15) on [a, b]. Bisects the worst panel until the
/// summed error estimate is below max(abs_tol, rel_tol * |value|).
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol = 1e-15, double rel_tol = 1e-14, int max_panels = 2000);

}  // namespace fraccomp::quad
