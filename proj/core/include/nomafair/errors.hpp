#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nomafair {

// Invalid scenario or experiment configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A solver hit its iteration cap before reaching tolerance (CLI exit code 3).
// Carries the best iterate seen so the caller can inspect it.
struct ConvergenceError : std::runtime_error {
    ConvergenceError(const std::string& msg, std::vector<double> best_iterate,
                     double best_value, double residual, long iterations)
        : std::runtime_error(msg),
          best(std::move(best_iterate)),
          value(best_value),
          residual(residual),
          iterations(iterations) {}

    std::vector<double> best;
    double value;
    double residual;
    long iterations;
};

// A requested target (fairness index, feasible set member) is unattainable.
struct InfeasibleError : std::runtime_error {
    explicit InfeasibleError(const std::string& msg, double best_seen = 0.0)
        : std::runtime_error(msg), best_seen(best_seen) {}
    double best_seen;
};

}  // namespace nomafair
