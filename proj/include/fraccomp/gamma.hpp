#pragma once

namespace fraccomp::special {

/// Gamma function. Lanczos approximation for x >= 1/2, reflection below.
/// Throws InvalidParameter at the poles 0, -1, -2, ...
double gamma(double x);

/// 1/Gamma(x); exactly zero at the poles, so it is safe in series coefficients.
double rgamma(double x);

/// log|Gamma(x)|.
double log_gamma(double x);

/// sin(pi x) with argument reduction done before the multiplication by pi.
double sin_pi(double x);

}  // namespace fraccomp::special
