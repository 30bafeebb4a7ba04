#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nomafair {

// One fading block: channel power gains sorted ascending, plus the
// permutation back to physical users (perm[i] = physical user index, 0-based,
// of the i-th smallest gain).
struct ChannelRealization {
    std::vector<double> H;
    std::vector<int> perm;
};

enum class PowerKind { Physical, Equivalent, Normalized };

// A user-power vector in one of three linked parameterizations:
//   Physical   P~_k  -- what the amplifier emits, sum <= P
//   Equivalent P^_k  -- P~_k minus rhat0 times the total later-user power
//   Normalized P_k   -- P^_k / (rhat0 d_k^beta), the variable of F.P2
struct PowerAllocation {
    PowerKind kind;
    std::vector<double> values;
};

// Tail power sums b_k = sum_{i>=k} P~_i of the perfect-CSIT problem.
// b.front() = b_1 = P, b.back() = b_{K+1} = 0, so b.size() == K+1.
struct CumulativePowers {
    std::vector<double> b;

    int users() const { return static_cast<int>(b.size()) - 1; }
};

enum class MetricUnits { Bpcu, Npcu };

// Result of one solve: the allocation, per-user throughputs or rates, the
// alpha-fair objective, fairness index, and solver telemetry.
struct SolveReport {
    std::optional<PowerAllocation> allocation;   // statistical regime
    std::optional<CumulativePowers> cumulative;  // perfect regime
    std::vector<double> per_user;                // F_k (BPCU) or R_k (NPCU)
    MetricUnits units = MetricUnits::Bpcu;
    double objective = 0.0;                      // sum of u_alpha(per_user)
    double jain = 0.0;
    double residual = 0.0;                       // KKT residual norm, perfect regime
    long iterations = 0;
    std::vector<CumulativePowers> trace;         // per-sweep b vectors when requested

    double sum_metric() const {
        double s = 0.0;
        for (double x : per_user) s += x;
        return s;
    }
};

}  // namespace nomafair
