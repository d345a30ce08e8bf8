#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "output.hpp"

namespace fraccomp::cli {

enum ExitCode : int { exit_ok = 0, exit_property = 1, exit_usage = 2, exit_solver = 3 };

struct CommandContext {
    std::string out_dir = "fraccomp_out";
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    Manifest* manifest = nullptr;
    std::ostream* out = nullptr;
};

/// Prints `z value regime est_abs_error` for each argument.
int cmd_ml(double alpha, double beta, const std::vector<double>& z, CommandContext& ctx);
int cmd_solve(const RunConfig& cfg, CommandContext& ctx);
int cmd_verify(const std::string& suite, const RunConfig& cfg, CommandContext& ctx);
/// ex1 | e3 | e4 | prop32 | monotone_linear; cfg entries override the built-in setup.
int cmd_reproduce(const std::string& example, const RunConfig& cfg, CommandContext& ctx);

/// Parses argv, dispatches and writes exactly one manifest. Returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fraccomp::cli
