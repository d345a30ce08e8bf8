#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fraccomp {

enum class Grading { uniform, graded };

/// Time nodes 0 = t_0 < t_1 < ... < t_N = T, N >= 2.
class TimeGrid {
public:
    static TimeGrid uniform(double horizon, std::size_t steps);
    /// t_k = T (k/N)^r with r >= 1.
    static TimeGrid graded(double horizon, std::size_t steps, double r);
    /// Arbitrary nodes; validated (t_0 = 0, strictly increasing, at least 3 nodes).
    explicit TimeGrid(std::vector<double> nodes);

    std::size_t steps() const { return nodes_.size() - 1; }
    std::size_t size() const { return nodes_.size(); }
    double horizon() const { return nodes_.back(); }
    double operator[](std::size_t k) const { return nodes_[k]; }
    std::span<const double> nodes() const { return nodes_; }
    double step(std::size_t k) const { return nodes_[k] - nodes_[k - 1]; }  // tau_k, k >= 1
    double max_step() const;
    Grading grading() const { return grading_; }
    double grading_exponent() const { return exponent_; }

    bool operator==(const TimeGrid& o) const { return nodes_ == o.nodes_; }

private:
    std::vector<double> nodes_;
    Grading grading_ = Grading::uniform;
    double exponent_ = 1.0;
};

struct TimeSeries {
    TimeGrid grid;
    std::vector<double> values;

    TimeSeries(TimeGrid g, std::vector<double> v);
    static TimeSeries sample(const TimeGrid& g, const std::function<double(double)>& f);
    double operator[](std::size_t k) const { return values[k]; }
};

/// Uniform spatial grid on [x_lo, x_hi] with n interior nodes and both endpoints.
class Grid1D {
public:
    Grid1D(double x_lo, double x_hi, std::size_t interior);

    double x_lo() const { return x_lo_; }
    double x_hi() const { return x_hi_; }
    std::size_t interior() const { return n_; }
    std::size_t size() const { return n_ + 2; }
    double h() const { return h_; }
    double x(std::size_t i) const { return i + 1 == size() ? x_hi_ : x_lo_ + h_ * i; }
    double length() const { return x_hi_ - x_lo_; }
    std::vector<double> nodes() const;

    bool operator==(const Grid1D& o) const { return x_lo_ == o.x_lo_ && x_hi_ == o.x_hi_ && n_ == o.n_; }

private:
    double x_lo_, x_hi_;
    std::size_t n_;
    double h_;
};

struct SpaceField {
    Grid1D grid;
    std::vector<double> values;

    SpaceField(Grid1D g, std::vector<double> v);
    static SpaceField sample(const Grid1D& g, const std::function<double(double)>& f);
    static SpaceField constant(const Grid1D& g, double c);
    double operator[](std::size_t i) const { return values[i]; }
    double& operator[](std::size_t i) { return values[i]; }
};

/// u(x_i, t_k) on a tensor grid, stored time-major.
class Field {
public:
    Field(Grid1D g, TimeGrid tg);
    Field(Grid1D g, TimeGrid tg, std::vector<double> values);

    const Grid1D& grid() const { return grid_; }
    const TimeGrid& tgrid() const { return tgrid_; }
    std::size_t nx() const { return grid_.size(); }
    std::size_t nt() const { return tgrid_.size(); }

    double operator()(std::size_t i, std::size_t k) const { return values_[k * nx() + i]; }
    double& operator()(std::size_t i, std::size_t k) { return values_[k * nx() + i]; }
    std::span<const double> slice(std::size_t k) const { return {values_.data() + k * nx(), nx()}; }
    std::span<double> slice(std::size_t k) { return {values_.data() + k * nx(), nx()}; }
    SpaceField at_time(std::size_t k) const;
    TimeSeries at_node(std::size_t i) const;
    const std::vector<double>& values() const { return values_; }

    /// Samples g(x, t) on the tensor grid.
    static Field sample(const Grid1D& g, const TimeGrid& tg, const std::function<double(double, double)>& f);

private:
    Grid1D grid_;
    TimeGrid tgrid_;
    std::vector<double> values_;
};

/// Throws GridMismatch unless both fields live on the same space-time grid.
void require_same_grids(const Field& a, const Field& b, const char* who);

}  // namespace fraccomp
