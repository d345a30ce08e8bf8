#include "output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace fraccomp::cli {

namespace fs = std::filesystem;

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string output_path(const std::string& dir, const std::string& name) {
    fs::create_directories(dir);
    return (fs::path(dir) / name).string();
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    return out;
}

}  // namespace

void write_field_csv(const std::string& path, const Field& u) {
    auto out = open_out(path);
    out << "x,t,u\n";
    const auto& g = u.grid();
    const auto& tg = u.tgrid();
    for (std::size_t k = 0; k < u.nt(); ++k)
        for (std::size_t i = 0; i < u.nx(); ++i)
            out << format_g17(g.x(i)) << ',' << format_g17(tg[k]) << ',' << format_g17(u(i, k)) << '\n';
}

void write_table_csv(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& columns) {
    if (header.size() != columns.size()) throw std::invalid_argument("write_table_csv: header/column mismatch");
    auto out = open_out(path);
    for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
    out << '\n';
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << format_g17(columns[c][r]);
        out << '\n';
    }
}

void write_svg(const std::string& path, const PlotSpec& spec, const std::vector<PlotSeries>& series) {
    constexpr double W = 720, H = 480, L = 80, R = 180, Tm = 40, B = 60;
    const double pw = W - L - R, ph = H - Tm - B;
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    auto ty = [&](double y) { return spec.log_y ? std::log10(y) : y; };
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (spec.log_y && !(s.y[i] > 0.0)) continue;
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, ty(s.y[i]));
            y1 = std::max(y1, ty(s.y[i]));
        }
    if (!(x1 > x0)) x0 -= 0.5, x1 += 0.5;
    if (!(y1 > y0)) y0 -= 0.5, y1 += 0.5;
    auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return Tm + ph - (ty(y) - y0) / (y1 - y0) * ph; };

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};
    auto out = open_out(path);
    char buf[256];
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << L + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << spec.title
        << "</text>\n";
    std::snprintf(buf, sizeof buf, "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" stroke=\"black\"/>\n",
                  L, Tm, pw, ph);
    out << buf;
    for (int i = 0; i <= 4; ++i) {
        const double xv = x0 + (x1 - x0) * i / 4.0, yv = y0 + (y1 - y0) * i / 4.0;
        const double xp = L + pw * i / 4.0, yp = Tm + ph - ph * i / 4.0;
        std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" text-anchor=\"middle\">%.3g</text>\n", xp, Tm + ph + 18,
                      xv);
        out << buf;
        std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" text-anchor=\"end\">%s%.3g</text>\n", L - 6, yp + 4,
                      spec.log_y ? "1e" : "", yv);
        out << buf;
    }
    out << "<text x=\"" << L + pw / 2 << "\" y=\"" << H - 16 << "\" text-anchor=\"middle\">" << spec.x_label
        << "</text>\n";
    out << "<text x=\"18\" y=\"" << Tm + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << Tm + ph / 2 << ")\">" << spec.y_label << "</text>\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* col = colors[s % 7];
        out << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < series[s].x.size(); ++i) {
            const double x = series[s].x[i], y = series[s].y[i];
            if ((spec.log_y && !(y > 0.0)) || !std::isfinite(x) || !std::isfinite(y)) continue;
            std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(x), py(y));
            out << buf;
        }
        out << "\"/>\n";
        const double ly = Tm + 14 + 18.0 * static_cast<double>(s);
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"%s\" stroke-width=\"2\"/>"
                      "<text x=\"%g\" y=\"%g\">",
                      L + pw + 10, ly, L + pw + 30, ly, col, L + pw + 36, ly + 4);
        out << buf << series[s].label << "</text>\n";
    }
    out << "</svg>\n";
}

Manifest::Manifest(std::string command) {
    j_["command"] = std::move(command);
    j_["modules"] = {{"special_ml", "1.0.0"},      {"fracops", "1.0.0"}, {"elliptic", "1.0.0"},
                     {"evolve_linear", "1.0.0"},   {"evolve_semilinear", "1.0.0"},
                     {"compare", "1.0.0"},         {"cli", "1.0.0"}};
    j_["phases"] = nlohmann::json::object();
    j_["checks"] = nlohmann::json::array();
    j_["verdict"] = "incomplete";
}

void Manifest::config(const RunConfig& cfg) {
    nlohmann::json c = nlohmann::json::object();
    for (const auto& [k, v] : cfg.entries()) c[k] = v;
    j_["config"] = c;
}

void Manifest::phase(const std::string& name, double seconds) { j_["phases"][name] = seconds; }

void Manifest::check(const std::string& name, bool pass, double worst, double tol) {
    j_["checks"].push_back({{"name", name}, {"pass", pass}, {"worst_violation", worst}, {"tolerance", tol}});
}

void Manifest::verdict(const std::string& v, int exit_code) {
    j_["verdict"] = v;
    j_["exit_code"] = exit_code;
}

void Manifest::write(const std::string& dir) const {
    auto out = open_out(output_path(dir, "manifest.json"));
    out << j_.dump(2) << '\n';
}

}  // namespace fraccomp::cli
