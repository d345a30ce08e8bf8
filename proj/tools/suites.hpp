#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fraccomp::cli {

struct CheckLine {
    std::string name;
    bool pass = false;
    double worst = 0.0;
    double tol = 0.0;
};

struct SuiteOptions {
    std::uint64_t seed = 1;
    std::optional<double> tol;   // overrides the comparison tolerances
    double c_pos = 10.0;
    std::size_t n_space = 32;
    std::size_t n_time = 256;
    double alpha = 0.5;
};

const std::vector<std::string>& suite_names();  // ml ... decay, all

/// Throws ConfigError for an unknown suite.
std::vector<CheckLine> run_suite(const std::string& suite, const SuiteOptions& opt);

/// `PASS|FAIL name worst tol`.
std::string format_check(const CheckLine& c);

}  // namespace fraccomp::cli
