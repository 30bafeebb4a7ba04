#pragma once

#include <vector>

#include "nomafair/config.hpp"
#include "nomafair/types.hpp"

namespace nomafair {

// Residual vector of the K-1 transformed KKT equations of the
// instantaneous-rate problem:
//   f_{1,k} = R_{k+1}(b_{k+1},b_{k+2}) / R_k(b_k,b_{k+1})
//           - ((b_{k+1} + 1/H_k) / (b_{k+1} + 1/H_{k+1}))^{1/alpha}.
// Requires a strictly decreasing interior b.
std::vector<double> kkt_residual(const CumulativePowers& b, const ChannelRealization& H,
                                 double alpha);

// Unique root of the single-variable KKT equation on (b_k2, b_k) for a fixed
// outer pair, found by bisection to |f| <= eps1. Channel-gain ties use the
// closed-form equal-rate root.
double inner_root(double b_k, double b_k2, int k, const ChannelRealization& H,
                  double alpha, double eps1);

// Alternating root-finding sweep over k = 1..K-1, starting from b^{(0)} = 0,
// until the KKT residual norm drops below eps2. Stores the per-sweep trace.
// An explicit start for b_2..b_K (strictly decreasing, below P) may be given
// to probe uniqueness.
SolveReport solve_ao(const ChannelRealization& H, const SystemConfig& cfg,
                     const std::vector<double>* start = nullptr);

// Independent convex solve of the same problem over (b_2..b_K); the
// cross-check oracle for solve_ao.
SolveReport solve_baseline(const ChannelRealization& H, const SystemConfig& cfg);

// Unweighted sum-rate corner (alpha = 0): all power to the strongest user.
SolveReport solve_sum_rate_alpha0(const ChannelRealization& H, const SystemConfig& cfg);

// Dispatches on cfg.alpha(): the alternating solver for alpha > 0, the
// sum-rate corner for alpha = 0. `use_baseline` selects the convex solver.
SolveReport solve_perfect(const ChannelRealization& H, const SystemConfig& cfg,
                          bool use_baseline = false);

}  // namespace nomafair
