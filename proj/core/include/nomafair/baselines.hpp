#pragma once

#include <vector>

#include "nomafair/config.hpp"
#include "nomafair/types.hpp"

namespace nomafair {

// Per-slot powers of the K-slot TDMA baseline; budget (1/K) sum P_k^T <= P.
struct TdmaAllocation {
    std::vector<double> powers;
};

// Geometric fixed-NOMA split P~_k = 2^{K-k} P / (2^K - 1); sums exactly to P.
PowerAllocation fixed_noma_powers(const SystemConfig& cfg);

// Whether the fixed split meets the NOMA ordering constraint (always true
// for rhat0 <= 1).
bool fixed_noma_satisfies_ordering(const SystemConfig& cfg);

// Evaluates the fixed split under the statistical regime (closed-form
// throughputs) and under one fading block of the perfect regime.
SolveReport fixed_noma_statistical_report(const SystemConfig& cfg);
SolveReport fixed_noma_perfect_report(const ChannelRealization& H, const SystemConfig& cfg);

// Optimal alpha-fair TDMA power allocation with statistical knowledge: each
// user targets K*r0 per active slot, so F_k^T = r0 exp(-(2^{K r0}-1) d_k^b / P_k^T).
SolveReport tdma_statistical_solve(const SystemConfig& cfg);

// Optimal alpha-fair TDMA allocation for one fading block:
// R_k^T = (1/K) ln(1 + H_k P_k^T). At alpha = 0 this is water-filling.
SolveReport tdma_perfect_solve(const ChannelRealization& H, const SystemConfig& cfg);

// Closed-form water-filling levels for sum-rate TDMA (test oracle too).
std::vector<double> water_filling(const std::vector<double>& H, double total_power);

}  // namespace nomafair
