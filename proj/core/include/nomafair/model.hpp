#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nomafair/config.hpp"
#include "nomafair/types.hpp"

namespace nomafair {

// Alpha-fair utility: ln(x) at alpha = 1, else x^{1-alpha}/(1-alpha).
// Interpolates no fairness (alpha = 0), proportional fairness (alpha = 1)
// and max-min fairness (alpha -> infinity).
double alpha_utility(double x, double alpha);

// SINR seen by user k (0-based) when decoding the message of user l <= k,
// given the physical power vector and user k's channel power gain.
double sinr(int l, int k, const PowerAllocation& physical, double H_k);

// Budget coefficients Gamma_k = (rhat0+1)^{k-1} d_k^beta of the normalized
// power constraint. Strictly decreasing by the config's standing assumption.
std::vector<double> gamma_coefficients(const SystemConfig& cfg);

// Outage probability of user k under a normalized allocation whose ordering
// invariant d_1^b P_1 >= ... >= d_K^b P_K holds, which collapses the max-form
// to the k-th term: 1 - exp(-1/P_k). P_k = 0 yields certain outage (1).
double outage_probability(int k, const PowerAllocation& normalized,
                          const SystemConfig& cfg);

// Throughput F_k = r0 (1 - outage) = r0 exp(-1/P_k), in BPCU.
double throughput(int k, const PowerAllocation& normalized, const SystemConfig& cfg);

// Instantaneous rate R_k = ln((1 + H_k b_k)/(1 + H_k b_{k+1})), in NPCU.
double instantaneous_rate(int k, const CumulativePowers& b, const ChannelRealization& H);

// Converts between the physical / equivalent / normalized parameterizations.
// Throws ConfigError when a physical vector violates the NOMA ordering
// constraint P~_k >= rhat0 * sum_{m>k} P~_m (the equivalent power would be
// negative), naming the offending user.
PowerAllocation convert_powers(const PowerAllocation& p, PowerKind target,
                               const SystemConfig& cfg);

// Jain fairness index (sum x)^2 / (K sum x^2), in [1/K, 1].
double jain_index(std::span<const double> x);

// alpha_utility extended to x = 0 by its limit where one exists: 0 for
// alpha < 1, -inf otherwise. Used when assembling reports that may contain
// zero-throughput users.
double utility_or_limit(double x, double alpha);

// Draws K independent exponential gains with means d_k^{-beta} via inverse
// CDF on a splittable counter-based stream, sorts ascending and records the
// permutation. Deterministic given (cfg, seed).
ChannelRealization sample_channels(const SystemConfig& cfg, uint64_t seed);

}  // namespace nomafair
