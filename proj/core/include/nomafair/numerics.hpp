#pragma once

#include <functional>
#include <span>
#include <vector>

#include "nomafair/errors.hpp"

namespace nomafair {

// Search interval for a monotone root: the function must change sign on
// (lo, hi). tol is on the function value, matching the paper-style stopping
// rule |f(x)| <= tol.
struct Bracket {
    double lo;
    double hi;
    double tol = 1e-9;
};

struct BisectResult {
    double root;
    int iterations;       // number of halvings performed
    double width;         // final bracket width
};

// Bisection on a monotone function with a sign change in the bracket.
// Halves the bracket every iteration; stops when |f(mid)| <= tol or the
// bracket reaches machine resolution. Throws InfeasibleError when the
// endpoint signs do not differ.
BisectResult bisect(const std::function<double(double)>& f, const Bracket& bracket);

// Smooth convex objective with gradient, linear inequality constraints
// A x <= c, and optional per-coordinate bounds (use +-inf to disable).
struct ConvexProgram {
    int n = 0;
    // Returns the value and fills grad (size n).
    std::function<double(std::span<const double>, std::span<double>)> objective;
    std::vector<std::vector<double>> A;  // rows of length n
    std::vector<double> c;
    std::vector<double> lower;  // may be empty (no bounds)
    std::vector<double> upper;
};

struct MinimizeResult {
    std::vector<double> x;
    double value;
    double stationarity;  // KKT stationarity residual norm
    long iterations;
};

// Minimizes a linearly constrained smooth convex function from a strictly
// feasible start. Log-barrier continuation with quasi-Newton inner solves;
// deterministic given (prog, x0, tol). The returned stationarity residual is
// ||grad f + A^T lambda|| with barrier multiplier estimates.
// Throws ConvergenceError with the best iterate when the iteration cap (1e5)
// is exceeded, and InfeasibleError for an infeasible start.
MinimizeResult minimize_convex(const ConvexProgram& prog, std::span<const double> x0,
                               double tol = 1e-8);

struct GridResult1D {
    double arg;
    double value;
};

struct GridResult2D {
    double arg0;
    double arg1;
    double value;
};

// Exhaustive search over an inclusive uniform grid. Ties keep the
// lexicographically smallest argument.
GridResult1D grid_search(const std::function<double(double)>& f, double lo, double hi,
                         int steps);
GridResult2D grid_search(const std::function<double(double, double)>& f, double lo0,
                         double hi0, int steps0, double lo1, double hi1, int steps1);

// Golden-section refinement of a unimodal maximum on [lo, hi].
GridResult1D golden_section_max(const std::function<double(double)>& f, double lo,
                                double hi, double tol);

}  // namespace nomafair
