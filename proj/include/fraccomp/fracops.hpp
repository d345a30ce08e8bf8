#pragma once

#include <cstddef>
#include <span>

#include "fraccomp/grid.hpp"

namespace fraccomp::fracops {

/// Riemann-Liouville integral J^beta y by product integration of the
/// piecewise-linear interpolant of y. beta in (0, 2]. Output[0] = 0.
TimeSeries rl_integral(const TimeSeries& y, double beta);

/// L1 approximation of the Caputo derivative of order alpha in (0, 1). Output[0] = 0.
TimeSeries caputo_l1(const TimeSeries& y, double alpha);

struct ExtremumCheck {
    std::size_t t_min_index = 0;
    double caputo_at_min = 0.0;
    double tolerance = 0.0;
    bool holds = false;
};

/// At a minimum attained for t > 0 the Caputo derivative is <= 0.
/// Throws NotApplicable when the sampled minimum sits at t_0.
ExtremumCheck extremum_check(const TimeSeries& y, double alpha);

/// L1 coefficients of row k: out[j-1] = b_{k,j}, j = 1..k, so that
/// D y(t_k) ~ sum_j b_{k,j} (y_j - y_{j-1}). out.size() >= k.
void l1_row(const TimeGrid& g, double alpha, std::size_t k, std::span<double> out);

/// (t - s0)^e - (t - s1)^e for s0 < s1 <= t, free of cancellation.
double power_gap(double s0, double s1, double t, double e);

}  // namespace fraccomp::fracops
