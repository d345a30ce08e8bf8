#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>

#include <CLI11.hpp>

#include "fraccomp/compare.hpp"
#include "fraccomp/errors.hpp"
#include "fraccomp/gamma.hpp"
#include "fraccomp/mittag_leffler.hpp"
#include "suites.hpp"

namespace fraccomp::cli {

namespace {

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

nlohmann::json report_json(const compare::ComparisonReport& r) {
    return {{"property", r.property_name},
            {"holds", r.holds},
            {"worst_violation", r.worst_violation},
            {"node", r.location.node},
            {"time_index", r.location.time},
            {"tolerance", r.tolerance_used}};
}

bool record(CommandContext& ctx, const std::string& name, bool pass, double worst, double tol) {
    ctx.manifest->check(name, pass, worst, tol);
    *ctx.out << format_check({name, pass, worst, tol}) << '\n';
    return pass;
}

bool record(CommandContext& ctx, const std::string& name, const compare::ComparisonReport& r) {
    return record(ctx, name, r.holds, r.worst_violation, r.tolerance_used);
}

std::vector<double> time_axis(const TimeGrid& tg) { return {tg.nodes().begin(), tg.nodes().end()}; }

/// Per-time max or min over x of v(i, k).
std::vector<double> reduce_x(const Field& u, const std::function<double(std::size_t, std::size_t)>& v,
                             bool take_max) {
    std::vector<double> out(u.nt());
    for (std::size_t k = 0; k < u.nt(); ++k) {
        double m = take_max ? -INFINITY : INFINITY;
        for (std::size_t i = 0; i < u.nx(); ++i) m = take_max ? std::max(m, v(i, k)) : std::min(m, v(i, k));
        out[k] = m;
    }
    return out;
}

void slice_plot(const std::string& path, const Field& u, const std::string& title) {
    std::vector<PlotSeries> series;
    const auto& tg = u.tgrid();
    const std::vector<double> x = u.grid().nodes();
    for (double frac : {0.0, 0.01, 0.1, 0.5, 1.0}) {
        std::size_t k = 0;
        while (k + 1 < tg.size() && tg[k] < frac * tg.horizon()) ++k;
        const auto s = u.slice(k);
        series.push_back({"t = " + fmt("%.3g", tg[k]), x, {s.begin(), s.end()}});
    }
    write_svg(path, {title, "x", "u"}, series);
}

/// Built-in entries first, user entries on top.
RunConfig merged(const std::string& builtin, const RunConfig& user) {
    RunConfig cfg = RunConfig::from_text(builtin, "<builtin>");
    for (const auto& [k, v] : user.entries()) cfg.set(k, v);
    return cfg;
}

double tolerance_or(const CommandContext& ctx, const RunConfig& cfg, double fallback) {
    if (ctx.tol) return *ctx.tol;
    return cfg.number("tol", fallback);
}

int reproduce_ex1(const RunConfig& user, CommandContext& ctx) {
    // A = -d2/dx2 with Neumann ends, a = 0, F = 1: u = t^alpha / Gamma(alpha + 1) exactly.
    const RunConfig cfg = merged("alpha = 0.5\nn_space = 64\nn_time = 512\nc0 = 0\ninitial = 0\nsource = 1\n", user);
    ctx.manifest->config(cfg);
    const auto p = build_problem(cfg);
    Field u(p.grid, p.tgrid);
    {
        PhaseTimer t(*ctx.manifest, "solve");
        u = evolve::solve_linear_spectral(p);
    }
    const auto bound = compare::example1_lower_bound(p.alpha, 0.0, 1.0, p.tgrid);
    const auto umin = reduce_x(u, [&](std::size_t i, std::size_t k) { return u(i, k); }, false);
    double slack = INFINITY;
    std::size_t at = 0;
    for (std::size_t k = 0; k < umin.size(); ++k)
        if (umin[k] - bound[k] < slack) {
            slack = umin[k] - bound[k];
            at = k;
        }
    const double tol = tolerance_or(ctx, cfg, compare::default_tolerance(p.grid, p.tgrid, p.alpha, 1.0));
    const auto ts = time_axis(p.tgrid);
    write_table_csv(output_path(ctx.out_dir, "ex1.csv"), {"t", "min_x_u", "bound"}, {ts, umin, bound.values});
    write_field_csv(output_path(ctx.out_dir, "u.csv"), u);
    write_svg(output_path(ctx.out_dir, "ex1.svg"), {"Example 1 lower bound", "t", "u"},
              {{"min_x u(., t)", ts, umin}, {fmt("%.6f t^alpha", bound.values.back() / std::pow(ts.back(), p.alpha)), ts,
                                             bound.values}});
    ctx.manifest->set("margin", slack);
    ctx.manifest->set("margin_time", ts[at]);
    return record(ctx, "ex1.lower_bound", slack >= -tol, std::max(0.0, -slack), tol) ? exit_ok : exit_property;
}

int reproduce_e3(const RunConfig& user, CommandContext& ctx) {
    const RunConfig cfg =
        merged("alpha = 0.5\nn_space = 64\nn_time = 512\ninitial = 1 + cos(pi*x)\nsemilinear = enzyme\n", user);
    ctx.manifest->config(cfg);
    const auto p = build_problem(cfg);
    const auto f = build_term(cfg).value_or(semilinear::builtin_enzyme());
    std::optional<compare::E3Bounds> r;
    {
        PhaseTimer t(*ctx.manifest, "solve_and_check");
        r = compare::barrier_bounds_e3(p, f, ctx.tol);
    }
    const Field& u = r->solution;
    const auto ts = time_axis(p.tgrid);
    std::vector<double> band(ts.size());
    for (std::size_t k = 0; k < ts.size(); ++k) band[k] = r->rho * std::pow(ts[k], p.alpha);
    const auto dmax = reduce_x(u, [&](std::size_t i, std::size_t k) { return u(i, k) - p.initial[i]; }, true);
    const auto dmin = reduce_x(u, [&](std::size_t i, std::size_t k) { return u(i, k) - p.initial[i]; }, false);
    const auto umin = reduce_x(u, [&](std::size_t i, std::size_t k) { return u(i, k); }, false);
    write_field_csv(output_path(ctx.out_dir, "u.csv"), u);
    write_table_csv(output_path(ctx.out_dir, "e3.csv"), {"t", "rho_t_alpha", "max_x_u_minus_a", "min_x_u_minus_a", "min_x_u"},
                    {ts, band, dmax, dmin, umin});
    write_svg(output_path(ctx.out_dir, "e3.svg"), {"Example e3 band", "t", "u - a"},
              {{"rho t^alpha", ts, band}, {"max_x (u - a)", ts, dmax}, {"min_x (u - a)", ts, dmin}, {"min_x u", ts, umin}});
    double margin = INFINITY;
    for (std::size_t k = 0; k < ts.size(); ++k) margin = std::min({margin, umin[k], band[k] - dmax[k]});
    ctx.manifest->set("rho", r->rho);
    ctx.manifest->set("margin", margin);
    ctx.manifest->set("min_u_minus_a", r->min_u_minus_a);
    ctx.manifest->set("band", report_json(r->report));
    *ctx.out << "INFO e3 rho " << fmt("%.6e", r->rho) << " min(u - a) " << fmt("%.6e", r->min_u_minus_a) << '\n';
    bool ok = record(ctx, "e3.band", r->report);
    ok = record(ctx, "e3.upper_solution", r->upper_barrier) && ok;
    ok = record(ctx, "e3.lower_solution", r->lower_barrier) && ok;
    return ok ? exit_ok : exit_property;
}

int reproduce_e4(const RunConfig& user, CommandContext& ctx) {
    const RunConfig cfg = merged(
        "alpha = 0.5\nn_space = 64\nn_time = 512\ninitial = 1\nsemilinear = linear\nslope = 1\nepsilon = 0.1\n"
        "delta1 = 1\n",
        user);
    ctx.manifest->config(cfg);
    const auto p = build_problem(cfg);
    const auto f = build_term(cfg);
    if (!f) throw ConfigError("e4 needs an increasing semilinear term");
    std::optional<compare::E4Bounds> r;
    {
        PhaseTimer t(*ctx.manifest, "solve_and_check");
        r = compare::barrier_bounds_e4(p, *f, cfg.number("epsilon"), cfg.number("delta1"), ctx.tol);
    }
    const Field& u = r->solution;
    const auto ts = time_axis(p.tgrid);
    const double eps = cfg.number("epsilon");
    std::vector<double> up(ts.size()), lo(ts.size()), m3(ts.size());
    for (std::size_t k = 0; k < ts.size(); ++k) {
        up[k] = ts[k] <= r->T1 ? std::pow(ts[k], p.alpha - eps) : NAN;
        lo[k] = ts[k] <= r->T2 ? -r->lower_coeff * std::pow(ts[k], p.alpha) : NAN;
        m3[k] = ts[k] <= r->T3 ? r->M3 * std::pow(ts[k], p.alpha) : NAN;
    }
    const auto dmax = reduce_x(u, [&](std::size_t i, std::size_t k) { return u(i, k) - p.initial[i]; }, true);
    const auto dmin = reduce_x(u, [&](std::size_t i, std::size_t k) { return u(i, k) - p.initial[i]; }, false);
    write_field_csv(output_path(ctx.out_dir, "u.csv"), u);
    write_table_csv(output_path(ctx.out_dir, "e4.csv"),
                    {"t", "upper_t_alpha_minus_eps", "lower_minus_coeff_t_alpha", "upper_M3_t_alpha", "max_x_u_minus_a",
                     "min_x_u_minus_a"},
                    {ts, up, lo, m3, dmax, dmin});
    write_svg(output_path(ctx.out_dir, "e4.svg"), {"Example e4 bounds", "t", "u - a"},
              {{"t^(alpha-eps), t <= T1", ts, up}, {"-c t^alpha, t <= T2", ts, lo}, {"M3 t^alpha, t <= T3", ts, m3},
               {"max_x (u - a)", ts, dmax}, {"min_x (u - a)", ts, dmin}});
    double margin = INFINITY;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        if (!std::isnan(up[k])) margin = std::min(margin, up[k] - dmax[k]);
        if (!std::isnan(lo[k])) margin = std::min(margin, dmin[k] - lo[k]);
        if (!std::isnan(m3[k])) margin = std::min(margin, m3[k] - dmax[k]);
    }
    ctx.manifest->set("T1", r->T1);
    ctx.manifest->set("T2", r->T2);
    ctx.manifest->set("T3", r->T3);
    ctx.manifest->set("M3", r->M3);
    ctx.manifest->set("lower_coeff", r->lower_coeff);
    ctx.manifest->set("margin", margin);
    bool ok = record(ctx, "e4.upper_T1", r->upper_report);
    ok = record(ctx, "e4.lower_T2", r->lower_report) && ok;
    ok = record(ctx, "e4.upper_M3_T3", r->m3_report) && ok;
    ok = record(ctx, "e4.upper_solution", r->upper_barrier) && ok;
    ok = record(ctx, "e4.lower_solution", r->lower_barrier) && ok;
    return ok ? exit_ok : exit_property;
}

int reproduce_prop32(const RunConfig& user, CommandContext& ctx) {
    // c = -1 and c0 = 1: lambda_1 = 1 under Neumann ends, T^alpha = 20.
    RunConfig cfg = merged("alpha = 0.5\nn_space = 32\nn_time = 512\ngrading_r = 2\nc = -1\n"
                           "initial = 1 + cos(pi*x)\nsemilinear = enzyme\n",
                           user);
    if (!user.has("T")) cfg.set("T", format_g17(std::pow(20.0, 1.0 / cfg.number("alpha"))));
    ctx.manifest->config(cfg);
    const auto p = build_problem(cfg);
    const auto f = build_term(cfg).value_or(semilinear::builtin_enzyme());
    const auto eig = evolve::spectral_basis(p);
    Field u(p.grid, p.tgrid);
    {
        PhaseTimer t(*ctx.manifest, "solve");
        u = semilinear::solve_semilinear(p, f, eig);
    }
    const SpaceField u_inf = semilinear::solve_semilinear_stationary(p.elliptic, p.grid, f);
    const auto fit = compare::asymptotic_decay_check(u, u_inf, eig, p.alpha);
    const auto ts = time_axis(p.tgrid);
    const auto dev = reduce_x(u, [&](std::size_t i, std::size_t k) { return std::abs(u(i, k) - u_inf[i]); }, true);
    std::vector<double> model(ts.size());
    for (std::size_t k = 0; k < ts.size(); ++k) model[k] = fit.fitted_C * ml::ml_relaxation(p.alpha, fit.lambda1, ts[k]);
    write_field_csv(output_path(ctx.out_dir, "u.csv"), u);
    write_table_csv(output_path(ctx.out_dir, "prop32.csv"), {"t", "max_x_abs_u_minus_u_inf", "C_E_alpha"},
                    {ts, dev, model});
    write_svg(output_path(ctx.out_dir, "prop32.svg"), {"Decay towards the stationary state", "t", "deviation", true},
              {{"max_x |u - u_inf|", ts, dev}, {"C E(-lambda_1 t^alpha)", ts, model}});
    const double spread = std::abs(fit.third_quarter_C - fit.last_quarter_C) /
                          std::max(fit.third_quarter_C, fit.last_quarter_C);
    ctx.manifest->set("lambda1", fit.lambda1);
    ctx.manifest->set("fitted_C", fit.fitted_C);
    ctx.manifest->set("late_C", fit.late_C);
    ctx.manifest->set("margin", 0.1 - spread);
    bool ok = record(ctx, "prop32.fit_stable", fit.stable, spread, 0.1);
    ok = record(ctx, "prop32.t_power_envelope", fit.envelope_holds, fit.envelope_ratio, 1.1) && ok;
    return ok ? exit_ok : exit_property;
}

int reproduce_monotone_linear(const RunConfig& user, CommandContext& ctx) {
    const RunConfig cfg = merged("alpha = 0.5\nn_space = 64\nn_time = 512\ninitial = 1 + cos(pi*x)\n"
                                 "c = -0.5 - 0.3*x\niterations = 12\nb0 = 1\n",
                                 user);
    ctx.manifest->config(cfg);
    auto p = build_problem(cfg);
    p.elliptic.b0 = {};
    const double b0 = cfg.number("b0");
    std::optional<compare::LinearSequence> seq;
    Field direct(p.grid, p.tgrid);
    {
        PhaseTimer t(*ctx.manifest, "iterate");
        seq = compare::linear_monotone_sequence(p, b0, static_cast<int>(cfg.integer("iterations", 12)), ctx.tol);
        direct = evolve::solve_linear_spectral(p);
    }
    std::vector<double> n, err, umin;
    double worst_ratio = 0.0;
    for (std::size_t j = 0; j < seq->iterates.size(); ++j) {
        const Field& it = seq->iterates[j];
        double e = 0.0, m = INFINITY;
        for (std::size_t q = 0; q < it.values().size(); ++q) {
            e = std::max(e, std::abs(it.values()[q] - direct.values()[q]));
            m = std::min(m, it.values()[q]);
        }
        if (j >= 3 && err.back() > 1e-11) worst_ratio = std::max(worst_ratio, e / err.back());
        n.push_back(static_cast<double>(j + 1));
        err.push_back(e);
        umin.push_back(m);
    }
    write_table_csv(output_path(ctx.out_dir, "monotone_linear.csv"), {"n", "max_abs_u_n_minus_u", "min_u_n"},
                    {n, err, umin});
    write_svg(output_path(ctx.out_dir, "monotone_linear.svg"), {"Linear monotone sequence", "n", "max |u_n - u|", true},
              {{"max |u_n - u|", n, err}});
    ctx.manifest->set("margin", *std::min_element(umin.begin(), umin.end()));
    bool ok = record(ctx, "monotone_linear.nonnegative", seq->nonnegativity);
    ok = record(ctx, "monotone_linear.geometric_ratio", worst_ratio < 0.9, worst_ratio, 0.9) && ok;
    return ok ? exit_ok : exit_property;
}

}  // namespace

int cmd_ml(double alpha, double beta, const std::vector<double>& z, CommandContext& ctx) {
    std::ostream& out = *ctx.out;
    out << "z value regime est_abs_error\n";
    nlohmann::json rows = nlohmann::json::array();
    PhaseTimer t(*ctx.manifest, "evaluate");
    for (double zi : z) {
        const auto r = ml::ml(alpha, beta, zi);
        out << format_g17(zi) << ' ' << format_g17(r.value) << ' ' << ml::regime_name(r.regime) << ' '
            << fmt("%.3e", r.est_abs_error) << '\n';
        rows.push_back({{"z", zi}, {"value", r.value}, {"regime", ml::regime_name(r.regime)}, {"est_abs_error", r.est_abs_error}});
    }
    ctx.manifest->set("ml", {{"alpha", alpha}, {"beta", beta}, {"rows", rows}});
    return exit_ok;
}

int cmd_solve(const RunConfig& cfg, CommandContext& ctx) {
    ctx.manifest->config(cfg);
    const auto p = build_problem(cfg);
    const auto term = build_term(cfg);
    const double ptol = cfg.number("picard_tol", 1e-10);
    const int pmax = static_cast<int>(cfg.integer("picard_max", 50));
    const double box = cfg.number("box", INFINITY);
    std::optional<elliptic::EigenDecomposition> eig;
    {
        PhaseTimer t(*ctx.manifest, "eigen");
        eig = evolve::spectral_basis(p);
    }
    evolve::SolveStats stats;
    Field u(p.grid, p.tgrid);
    {
        PhaseTimer t(*ctx.manifest, "solve");
        u = term ? semilinear::solve_semilinear(p, *term, *eig, ptol, pmax, box, &stats)
                 : evolve::solve_linear_spectral(p, *eig, ptol, pmax, &stats);
    }
    int max_it = 0;
    for (int v : stats.iterations) max_it = std::max(max_it, v);
    ctx.manifest->set("solver", {{"max_picard_iterations", max_it}, {"max_contraction", stats.max_contraction}});
    {
        PhaseTimer t(*ctx.manifest, "write");
        write_field_csv(output_path(ctx.out_dir, "u.csv"), u);
        slice_plot(output_path(ctx.out_dir, "slices.svg"), u, "u(x, t) at selected times");
        const auto ts = time_axis(p.tgrid);
        const auto umax = reduce_x(u, [&](std::size_t i, std::size_t k) { return std::abs(u(i, k)); }, true);
        write_svg(output_path(ctx.out_dir, "decay.svg"), {"max_x |u(., t)|", "t", "max |u|", true},
                  {{"max_x |u|", ts, umax}});
    }
    int code = exit_ok;
    if (cfg.flag("cross_oracle", false)) {
        if (term) throw ConfigError("cross_oracle applies to linear problems only");
        Field v(p.grid, p.tgrid);
        {
            PhaseTimer t(*ctx.manifest, "l1_oracle");
            v = evolve::solve_linear_l1(p);
        }
        write_field_csv(output_path(ctx.out_dir, "u_l1.csv"), v);
        double d = 0.0;
        for (std::size_t q = 0; q < u.values().size(); ++q) d = std::max(d, std::abs(u.values()[q] - v.values()[q]));
        ctx.manifest->set("max_difference", d);
        *ctx.out << "max_difference " << format_g17(d) << '\n';
    }
    if (cfg.has("bounds")) {
        if (cfg.text("bounds") != "e3") throw ConfigError("bounds must be e3");
        const auto r = compare::barrier_bounds_e3(p, term.value_or(semilinear::builtin_enzyme()), ctx.tol);
        const auto ts = time_axis(p.tgrid);
        std::vector<double> band(ts.size());
        for (std::size_t k = 0; k < ts.size(); ++k) band[k] = r.rho * std::pow(ts[k], p.alpha);
        const Field& w = r.solution;
        const auto dmax = reduce_x(w, [&](std::size_t i, std::size_t k) { return w(i, k) - p.initial[i]; }, true);
        const auto umin = reduce_x(w, [&](std::size_t i, std::size_t k) { return w(i, k); }, false);
        write_table_csv(output_path(ctx.out_dir, "bounds.csv"), {"t", "rho_t_alpha", "max_x_u_minus_a", "min_x_u"},
                        {ts, band, dmax, umin});
        ctx.manifest->set("bounds", {{"rho", r.rho}, {"band", report_json(r.report)}});
        if (!record(ctx, "e3.band", r.report)) code = exit_property;
    }
    return code;
}

int cmd_verify(const std::string& suite, const RunConfig& cfg, CommandContext& ctx) {
    ctx.manifest->config(cfg);
    SuiteOptions opt;
    opt.seed = ctx.seed ? *ctx.seed : static_cast<std::uint64_t>(cfg.integer("seed", 1));
    opt.tol = ctx.tol;
    if (!opt.tol && cfg.has("tol")) opt.tol = cfg.number("tol");
    opt.c_pos = cfg.number("c_pos", 10.0);
    opt.n_space = static_cast<std::size_t>(cfg.integer("n_space", 32));
    opt.n_time = static_cast<std::size_t>(cfg.integer("n_time", 256));
    opt.alpha = cfg.number("alpha", 0.5);
    if (!(opt.alpha > 0.0 && opt.alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
    if (opt.n_space < 3 || opt.n_time < 2) throw ConfigError("need n_space >= 3 and n_time >= 2");
    ctx.manifest->set("seed", opt.seed);
    std::vector<CheckLine> lines;
    {
        PhaseTimer t(*ctx.manifest, "suite_" + suite);
        lines = run_suite(suite, opt);
    }
    bool ok = true;
    for (const auto& c : lines) ok = record(ctx, c.name, c.pass, c.worst, c.tol) && ok;
    return ok ? exit_ok : exit_property;
}

int cmd_reproduce(const std::string& example, const RunConfig& cfg, CommandContext& ctx) {
    if (example == "ex1") return reproduce_ex1(cfg, ctx);
    if (example == "e3") return reproduce_e3(cfg, ctx);
    if (example == "e4") return reproduce_e4(cfg, ctx);
    if (example == "prop32") return reproduce_prop32(cfg, ctx);
    if (example == "monotone_linear") return reproduce_monotone_linear(cfg, ctx);
    throw ConfigError("unknown example '" + example + "'");
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Time-fractional diffusion solver and comparison-principle verifier", "fraccomp"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_path, out_dir = "fraccomp_out";
    std::vector<std::string> overrides;
    std::uint64_t seed = 0;
    double tol = 0.0;
    auto* seed_opt = app.add_option("--seed", seed, "Seed for randomized suites");
    auto* tol_opt = app.add_option("--tol", tol, "Override comparison tolerance");
    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--set", overrides, "Config override key=value (repeatable)");

    double alpha = 0.0, beta = 1.0;
    std::vector<double> zs;
    auto* ml_cmd = app.add_subcommand("ml", "Evaluate E_{alpha,beta}(z)");
    ml_cmd->add_option("--alpha", alpha, "alpha > 0")->required();
    ml_cmd->add_option("--beta", beta, "beta > 0");
    ml_cmd->add_option("--z", zs, "Arguments (repeatable)")->required()->allow_extra_args();

    double run_alpha = 0.0;
    auto* solve_cmd = app.add_subcommand("solve", "Solve the configured problem, write u.csv and plots");
    auto* solve_alpha = solve_cmd->add_option("--alpha", run_alpha, "Override alpha");

    std::string suite = "all";
    auto* verify_cmd = app.add_subcommand("verify", "Run a verification suite");
    verify_cmd->add_option("--suite", suite, "Suite name")->check(CLI::IsMember(suite_names()));
    auto* verify_alpha = verify_cmd->add_option("--alpha", run_alpha, "Override alpha");

    std::string example;
    auto* repro_cmd = app.add_subcommand("reproduce", "Reproduce a worked example");
    repro_cmd->add_option("example", example, "ex1 | e3 | e4 | prop32 | monotone_linear")
        ->required()
        ->check(CLI::IsMember({"ex1", "e3", "e4", "prop32", "monotone_linear"}));
    auto* repro_alpha = repro_cmd->add_option("--alpha", run_alpha, "Override alpha");

    std::string command = argc > 1 ? argv[1] : "";
    Manifest manifest(command);
    CommandContext ctx;
    ctx.manifest = &manifest;
    ctx.out = &out;

    int code = exit_ok;
    bool write_manifest = true;
    try {
        app.parse(argc, argv);
        command = app.get_subcommands().front()->get_name();
        manifest.set("command", command);
        ctx.out_dir = out_dir;
        if (*seed_opt) ctx.seed = seed;
        if (*tol_opt) ctx.tol = tol;
        RunConfig cfg;
        if (!config_path.empty()) cfg = RunConfig::load(config_path);
        for (const auto& o : overrides) cfg.apply_override(o);
        if (*solve_alpha || *verify_alpha || *repro_alpha) cfg.set("alpha", format_g17(run_alpha));
        if (cfg.has("out") && out_dir == "fraccomp_out") ctx.out_dir = cfg.text("out");

        if (*ml_cmd) code = cmd_ml(alpha, beta, zs, ctx);
        else if (*solve_cmd) code = cmd_solve(cfg, ctx);
        else if (*verify_cmd) code = cmd_verify(suite, cfg, ctx);
        else code = cmd_reproduce(example, cfg, ctx);
        manifest.verdict(code == exit_ok ? "pass" : "fail", code);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        write_manifest = false;
        code = exit_ok;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        code = exit_usage;
        manifest.set("error", e.what());
        manifest.verdict("usage_error", code);
    } catch (const ConvergenceFailure& e) {
        code = exit_solver;
        err << "solver failure: " << e.what() << " (node " << e.node() << ", residual " << e.residual() << ")\n";
        manifest.set("error", {{"kind", "convergence"}, {"message", e.what()}, {"node", e.node()}, {"residual", e.residual()}});
        manifest.verdict("solver_failure", code);
    } catch (const BoxExit& e) {
        code = exit_solver;
        err << "solver failure: " << e.what() << " (node " << e.node() << ", value " << e.value() << ")\n";
        manifest.set("error", {{"kind", "box_exit"}, {"message", e.what()}, {"node", e.node()}, {"value", e.value()}});
        manifest.verdict("solver_failure", code);
    } catch (const SingularSystem& e) {
        code = exit_solver;
        err << "solver failure: " << e.what() << '\n';
        manifest.set("error", {{"kind", "singular"}, {"message", e.what()}});
        manifest.verdict("solver_failure", code);
    } catch (const DegenerateSpectrum& e) {
        code = exit_solver;
        err << "solver failure: " << e.what() << '\n';
        manifest.set("error", {{"kind", "degenerate_spectrum"}, {"message", e.what()}});
        manifest.verdict("solver_failure", code);
    } catch (const std::invalid_argument& e) {  // ConfigError, InvalidParameter, GridMismatch
        code = exit_usage;
        err << "error: " << e.what() << '\n';
        manifest.set("error", {{"kind", "usage"}, {"message", e.what()}});
        manifest.verdict("usage_error", code);
    } catch (const HypothesisViolation& e) {
        code = exit_usage;
        err << "error: " << e.what() << '\n';
        manifest.set("error", {{"kind", "hypothesis"}, {"message", e.what()}});
        manifest.verdict("usage_error", code);
    } catch (const NotApplicable& e) {
        code = exit_usage;
        err << "error: " << e.what() << '\n';
        manifest.set("error", {{"kind", "not_applicable"}, {"message", e.what()}});
        manifest.verdict("usage_error", code);
    } catch (const std::exception& e) {
        code = exit_solver;
        err << "error: " << e.what() << '\n';
        manifest.set("error", {{"kind", "internal"}, {"message", e.what()}});
        manifest.verdict("solver_failure", code);
    }
    if (write_manifest) {
        try {
            manifest.write(ctx.out_dir);
        } catch (const std::exception& e) {
            err << "cannot write manifest: " << e.what() << '\n';
        }
    }
    return code;
}

}  // namespace fraccomp::cli
