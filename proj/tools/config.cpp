#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace fraccomp::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_number(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (trim(v.substr(used)).empty() && std::isfinite(d)) return d;
    } catch (const std::exception&) {
    }
    // Allow constant expressions such as 2/0.5 or pi/4.
    try {
        const Expression e = Expression::parse(v);
        if (e.is_constant() && std::isfinite(e(0.0))) return e(0.0);
    } catch (const ParseError&) {
    }
    throw ConfigError("config key '" + key + "': expected a number, got '" + v + "'");
}

}  // namespace

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        "alpha",      "domain",   "n_space",  "n_time",   "time_grading", "grading_r", "T",
        "a",          "b",        "c",        "c0",       "sigma_lo",     "sigma_hi",  "b0",
        "initial",    "source",   "semilinear", "mu",     "slope",        "shift",     "box",
        "tol",        "c_pos",    "picard_tol", "picard_max", "out",      "seed",      "cross_oracle",
        "bounds",     "epsilon",  "delta1",   "M",        "iterations",   "beta",      "z",
        "count"};
    return keys;
}

RunConfig RunConfig::from_text(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        try {
            cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const ConfigError& e) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return from_text(ss.str(), path);
}

void RunConfig::set(const std::string& key, const std::string& value) {
    const auto& keys = known_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw ConfigError("unknown config key '" + key + "'");
    if (value.empty()) throw ConfigError("config key '" + key + "' has an empty value");
    values_[key] = value;
}

void RunConfig::apply_override(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not key=value");
    set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

std::string RunConfig::text(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

std::string RunConfig::text(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing required config key '" + key + "'");
    return it->second;
}

double RunConfig::number(const std::string& key) const { return to_number(key, text(key)); }

double RunConfig::number(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
}

long RunConfig::integer(const std::string& key, long fallback) const {
    if (!has(key)) return fallback;
    const double d = number(key);
    if (d != std::floor(d)) throw ConfigError("config key '" + key + "' must be an integer");
    return static_cast<long>(d);
}

bool RunConfig::flag(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string v = text(key);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("config key '" + key + "' must be true or false");
}

Expression RunConfig::expression(const std::string& key, const std::string& fallback) const {
    try {
        return Expression::parse(text(key, fallback));
    } catch (const ParseError& e) {
        throw ConfigError("config key '" + key + "': " + e.what());
    }
}

namespace {

void require_finite(const Expression& e, const std::string& key, const Grid1D& g, const TimeGrid& tg) {
    const std::size_t stride = std::max<std::size_t>(1, tg.size() / 16);
    for (std::size_t k = 0; k < tg.size(); k += stride)
        for (std::size_t i = 0; i < g.size(); ++i)
            if (!std::isfinite(e(g.x(i), tg[k])))
                throw ConfigError("config key '" + key + "' is not finite at x = " + std::to_string(g.x(i)) +
                                  ", t = " + std::to_string(tg[k]));
}

}  // namespace

evolve::ProblemSpec build_problem(const RunConfig& cfg) {
    const double alpha = cfg.number("alpha");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
    double x_lo = 0.0, x_hi = 1.0;
    if (cfg.has("domain")) {
        std::string d = cfg.text("domain");
        std::replace(d.begin(), d.end(), ',', ' ');
        std::istringstream in(d);
        if (!(in >> x_lo >> x_hi) || !(x_hi > x_lo)) throw ConfigError("domain must be two increasing numbers");
    }
    const long n_space = cfg.integer("n_space", 64);
    const long n_time = cfg.integer("n_time", 512);
    if (n_space < 3 || n_time < 2) throw ConfigError("need n_space >= 3 and n_time >= 2");
    const double T = cfg.number("T", 1.0);
    if (!(T > 0.0)) throw ConfigError("T must be positive");
    const Grid1D grid(x_lo, x_hi, static_cast<std::size_t>(n_space));
    const std::string grading = cfg.text("time_grading", "graded");
    TimeGrid tg = TimeGrid::uniform(T, static_cast<std::size_t>(n_time));
    if (grading == "graded") {
        const double r = cfg.number("grading_r", 2.0 / alpha);
        if (!(r >= 1.0)) throw ConfigError("grading_r must be >= 1");
        tg = TimeGrid::graded(T, static_cast<std::size_t>(n_time), r);
    } else if (grading != "uniform") {
        throw ConfigError("time_grading must be uniform or graded");
    }

    elliptic::EllipticSpec es;
    const Expression a = cfg.expression("a", "1");
    if (a.uses_t()) throw ConfigError("diffusion coefficient a must not depend on t");
    require_finite(a, "a", grid, tg);
    es.a = [a](double x) { return a(x); };
    if (cfg.has("b")) {
        const Expression b = cfg.expression("b", "0");
        require_finite(b, "b", grid, tg);
        es.b = [b](double x, double t) { return b(x, t); };
    }
    if (cfg.has("c")) {
        const Expression c = cfg.expression("c", "0");
        require_finite(c, "c", grid, tg);
        es.c = [c](double x, double t) { return c(x, t); };
    }
    if (cfg.has("b0")) {
        const Expression b0 = cfg.expression("b0", "1");
        require_finite(b0, "b0", grid, tg);
        es.b0 = [b0](double x, double t) { return b0(x, t); };
    }
    es.c0 = cfg.number("c0", 1.0);
    es.sigma_lo = cfg.number("sigma_lo", 0.0);
    es.sigma_hi = cfg.number("sigma_hi", 0.0);

    const Expression init = cfg.expression("initial", "0");
    require_finite(init, "initial", grid, tg);
    SpaceField a0 = SpaceField::sample(grid, [&](double x) { return init(x, 0.0); });

    evolve::Source src;
    if (cfg.has("source")) {
        const Expression f = cfg.expression("source", "0");
        require_finite(f, "source", grid, tg);
        src = evolve::Source::function([f](double x, double t) { return f(x, t); });
    }
    evolve::ProblemSpec p{grid, tg, alpha, es, a0, src};
    try {
        evolve::validate(p);
        (void)elliptic::assemble(es, grid, 0.0);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return p;
}

std::optional<semilinear::SemilinearTerm> build_term(const RunConfig& cfg) {
    const std::string name = cfg.text("semilinear", "none");
    std::optional<semilinear::SemilinearTerm> f;
    if (name == "none") return f;
    if (name == "enzyme") {
        f = semilinear::builtin_enzyme();
    } else if (name == "burgers") {
        const Expression mu = cfg.expression("mu", "1");
        f = semilinear::builtin_burgers([mu](double x) { return mu(x); });
    } else if (name == "linear") {
        f = semilinear::builtin_linear(cfg.number("slope", -1.0));
    } else {
        throw ConfigError("semilinear must be none, enzyme, burgers or linear");
    }
    if (cfg.has("shift")) f = semilinear::shifted(*f, cfg.number("shift"));
    return f;
}

}  // namespace fraccomp::cli
