#pragma once

#include <cstdint>

#include "nomafair/config.hpp"
#include "nomafair/types.hpp"

namespace nomafair {

enum class Scheme { Noma, Tdma };
enum class Regime { Statistical, Perfect };
enum class SearchStrategy { Bisection, Grid };

// Specification of the alpha search: find the smallest alpha whose optimal
// allocation meets the fairness-index requirement FIr while maximizing the
// achieved sum metric.
struct AlphaSearchSpec {
    double fir = 1.0;  // target Jain index in [1/K, 1]
    Scheme scheme = Scheme::Noma;
    Regime regime = Regime::Statistical;
    double alpha_lo = 0.0;
    double alpha_hi = 200.0;
    SearchStrategy strategy = SearchStrategy::Bisection;
    int grid_steps = 60;       // log-spaced points for the grid strategy
    int pilot_blocks = 200;    // seeded fading blocks averaged in the perfect regime
    uint64_t pilot_seed = 42;
};

struct AlphaSearchResult {
    double alpha = 0.0;
    double fairness = 0.0;  // FI achieved at alpha (pilot average, perfect regime)
    SolveReport report;     // representative solve at alpha
};

// Solves the alpha-selection problem. Bisection assumes FI is non-decreasing
// in alpha and falls back to the grid strategy when a monotonicity violation
// is observed between probes. Throws InfeasibleError carrying the maximum FI
// observed when FIr is unreachable on [alpha_lo, alpha_hi].
AlphaSearchResult search_alpha(const AlphaSearchSpec& spec, const SystemConfig& cfg);

}  // namespace nomafair
