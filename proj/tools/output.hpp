#pragma once

#include <chrono>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "fraccomp/grid.hpp"

namespace fraccomp::cli {

/// `x,t,u` rows, t-major, 17 significant digits.
void write_field_csv(const std::string& path, const Field& u);

/// Columns of equal length under a header line.
void write_table_csv(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& columns);

struct PlotSeries {
    std::string label;
    std::vector<double> x, y;
};

struct PlotSpec {
    std::string title, x_label, y_label;
    bool log_y = false;
};

/// Polyline SVG with axes, tick labels and a legend.
void write_svg(const std::string& path, const PlotSpec& spec, const std::vector<PlotSeries>& series);

class Manifest {
public:
    explicit Manifest(std::string command);

    void config(const RunConfig& cfg);
    void phase(const std::string& name, double seconds);
    void set(const std::string& key, nlohmann::json value) { j_[key] = std::move(value); }
    void check(const std::string& name, bool pass, double worst, double tol);
    void verdict(const std::string& v, int exit_code);
    /// Writes manifest.json into dir; creates dir when needed.
    void write(const std::string& dir) const;
    const nlohmann::json& json() const { return j_; }

private:
    nlohmann::json j_;
};

class PhaseTimer {
public:
    PhaseTimer(Manifest& m, std::string name) : m_(m), name_(std::move(name)), t0_(std::chrono::steady_clock::now()) {}
    ~PhaseTimer() {
        m_.phase(name_, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count());
    }

private:
    Manifest& m_;
    std::string name_;
    std::chrono::steady_clock::time_point t0_;
};

std::string format_g17(double v);

/// dir/name, creating dir.
std::string output_path(const std::string& dir, const std::string& name);

}  // namespace fraccomp::cli
