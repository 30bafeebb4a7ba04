#pragma once

#include <vector>

#include "nomafair/config.hpp"
#include "nomafair/types.hpp"

namespace nomafair {

// One point of the structured search for the alpha < 1 regime: k0 powers
// pinned to the shape P_k = (d_1/d_k)^beta P1 below the (1-alpha)/2 floor,
// the tail solved as a concave subproblem.
struct StructuredCandidate {
    int k0 = 0;
    double P1 = 0.0;
    std::vector<double> tail;  // P_{k0+1} .. P_K
    double value = 0.0;        // sum of G over the assembled vector
};

// Closed-form proportional-fairness solution (alpha = 1):
// P_k proportional to 1/sqrt(Gamma_k) with the budget binding.
SolveReport solve_alpha_eq_1(const SystemConfig& cfg);

// Convex solve of the alpha > 1 problem (minimize sum exp((alpha-1)/P_k)).
SolveReport solve_alpha_gt_1(const SystemConfig& cfg);

// Concave tail subproblem for fixed (k0, P1): maximize sum_{k>k0} G(P_k)
// over the reduced budget, ordering chain and (1-alpha)/2 floors.
// Throws InfeasibleError naming the failed membership condition when
// (k0, P1) lies outside the feasible set.
StructuredCandidate solve_fp4(const SystemConfig& cfg, int k0, double P1);

// Two-dimensional structured search over (k0, P1) for 0 <= alpha < 1.
SolveReport solve_alpha_lt_1(const SystemConfig& cfg);

// Dispatches on cfg.alpha() to the three regimes above.
SolveReport solve_statistical(const SystemConfig& cfg);

// Assembles a SolveReport (physical powers, throughputs, Jain index,
// objective) from a normalized allocation. Shared with the baselines module.
SolveReport report_from_normalized(const SystemConfig& cfg, std::vector<double> normalized,
                                   long iterations);

}  // namespace nomafair
