#include "fraccomp/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fraccomp/errors.hpp"

namespace fraccomp {

TimeGrid TimeGrid::uniform(double horizon, std::size_t steps) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw InvalidParameter("TimeGrid: horizon must be > 0");
    if (steps < 2) throw InvalidParameter("TimeGrid: need N >= 2 steps");
    std::vector<double> t(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) t[k] = horizon * static_cast<double>(k) / steps;
    t.back() = horizon;
    TimeGrid g(std::move(t));
    return g;
}

TimeGrid TimeGrid::graded(double horizon, std::size_t steps, double r) {
    if (!(r >= 1.0) || !std::isfinite(r)) throw InvalidParameter("TimeGrid: grading exponent must be >= 1");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw InvalidParameter("TimeGrid: horizon must be > 0");
    if (steps < 2) throw InvalidParameter("TimeGrid: need N >= 2 steps");
    std::vector<double> t(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) t[k] = horizon * std::pow(static_cast<double>(k) / steps, r);
    t.back() = horizon;
    TimeGrid g(std::move(t));
    if (r != 1.0) {
        g.grading_ = Grading::graded;
        g.exponent_ = r;
    }
    return g;
}

TimeGrid::TimeGrid(std::vector<double> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.size() < 3) throw InvalidParameter("TimeGrid: need N >= 2 steps");
    if (nodes_[0] != 0.0) throw InvalidParameter("TimeGrid: t_0 must be 0");
    for (std::size_t k = 1; k < nodes_.size(); ++k)
        if (!(nodes_[k] > nodes_[k - 1]) || !std::isfinite(nodes_[k]))
            throw InvalidParameter("TimeGrid: nodes must be finite and strictly increasing");
}

double TimeGrid::max_step() const {
    double m = 0.0;
    for (std::size_t k = 1; k < nodes_.size(); ++k) m = std::max(m, nodes_[k] - nodes_[k - 1]);
    return m;
}

TimeSeries::TimeSeries(TimeGrid g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
    if (values.size() != grid.size()) throw GridMismatch("TimeSeries: length does not match grid");
}

TimeSeries TimeSeries::sample(const TimeGrid& g, const std::function<double(double)>& f) {
    std::vector<double> v(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) v[k] = f(g[k]);
    return TimeSeries(g, std::move(v));
}

Grid1D::Grid1D(double x_lo, double x_hi, std::size_t interior) : x_lo_(x_lo), x_hi_(x_hi), n_(interior) {
    if (!(x_lo < x_hi) || !std::isfinite(x_lo) || !std::isfinite(x_hi))
        throw InvalidParameter("Grid1D: need finite x_lo < x_hi");
    if (interior < 3) throw InvalidParameter("Grid1D: need at least 3 interior nodes");
    h_ = (x_hi - x_lo) / static_cast<double>(interior + 1);
}

std::vector<double> Grid1D::nodes() const {
    std::vector<double> x(size());
    for (std::size_t i = 0; i < size(); ++i) x[i] = this->x(i);
    return x;
}

SpaceField::SpaceField(Grid1D g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size()) throw GridMismatch("SpaceField: length does not match grid");
}

SpaceField SpaceField::sample(const Grid1D& g, const std::function<double(double)>& f) {
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = f(g.x(i));
    return SpaceField(g, std::move(v));
}

SpaceField SpaceField::constant(const Grid1D& g, double c) { return SpaceField(g, std::vector<double>(g.size(), c)); }

Field::Field(Grid1D g, TimeGrid tg) : grid_(g), tgrid_(std::move(tg)), values_(grid_.size() * tgrid_.size(), 0.0) {}

Field::Field(Grid1D g, TimeGrid tg, std::vector<double> values)
    : grid_(g), tgrid_(std::move(tg)), values_(std::move(values)) {
    if (values_.size() != grid_.size() * tgrid_.size()) throw GridMismatch("Field: value count does not match grids");
}

SpaceField Field::at_time(std::size_t k) const {
    auto s = slice(k);
    return SpaceField(grid_, std::vector<double>(s.begin(), s.end()));
}

TimeSeries Field::at_node(std::size_t i) const {
    std::vector<double> v(nt());
    for (std::size_t k = 0; k < nt(); ++k) v[k] = (*this)(i, k);
    return TimeSeries(tgrid_, std::move(v));
}

Field Field::sample(const Grid1D& g, const TimeGrid& tg, const std::function<double(double, double)>& f) {
    Field out(g, tg);
    for (std::size_t k = 0; k < tg.size(); ++k)
        for (std::size_t i = 0; i < g.size(); ++i) out(i, k) = f(g.x(i), tg[k]);
    return out;
}

void require_same_grids(const Field& a, const Field& b, const char* who) {
    if (!(a.grid() == b.grid()) || !(a.tgrid() == b.tgrid()))
        throw GridMismatch(std::string(who) + ": fields live on different grids");
}

}  // namespace fraccomp
