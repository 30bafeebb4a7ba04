#include "nomafair/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "nomafair/model.hpp"
#include "nomafair/numerics.hpp"
#include "nomafair/statistical.hpp"

namespace nomafair {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// TDMA statistical substitution: with per-slot target rate K*r0, the slot-k
// throughput is r0 exp(-c d_k^b / P_k^T) with c = 2^{K r0} - 1. Writing
// Q_k = P_k^T / (c d_k^b) gives F_k^T = r0 exp(-1/Q_k) and the time-shared
// budget (1/K) sum P_k^T <= P becomes sum t_k Q_k <= P with t_k = (c/K) d_k^b.
std::vector<double> tdma_cost_coefficients(const SystemConfig& cfg) {
    const double c = std::exp2(static_cast<double>(cfg.K()) * cfg.r0()) - 1.0;
    std::vector<double> t(static_cast<size_t>(cfg.K()));
    for (int k = 0; k < cfg.K(); ++k)
        t[static_cast<size_t>(k)] = c / cfg.K() * cfg.pathloss(k);
    return t;
}

double g_value(double x, double alpha) {
    if (x <= 0) return 0.0;
    return std::exp(-(1.0 - alpha) / x);
}

SolveReport tdma_statistical_report(const SystemConfig& cfg, std::vector<double> Q,
                                    long iterations) {
    const int K = cfg.K();
    const std::vector<double> t = tdma_cost_coefficients(cfg);
    SolveReport rep;
    rep.units = MetricUnits::Bpcu;
    rep.per_user.resize(static_cast<size_t>(K));
    PowerAllocation slot{PowerKind::Physical, std::vector<double>(static_cast<size_t>(K))};
    for (int k = 0; k < K; ++k) {
        const double q = Q[static_cast<size_t>(k)];
        rep.per_user[static_cast<size_t>(k)] = q > 0 ? cfg.r0() * std::exp(-1.0 / q) : 0.0;
        rep.objective += utility_or_limit(rep.per_user[static_cast<size_t>(k)], cfg.alpha());
        slot.values[static_cast<size_t>(k)] = K * t[static_cast<size_t>(k)] * q;
    }
    rep.jain = jain_index(rep.per_user);
    rep.allocation = std::move(slot);
    rep.iterations = iterations;
    return rep;
}

SolveReport tdma_perfect_report(const SystemConfig& cfg, const ChannelRealization& H,
                                std::vector<double> powers, long iterations,
                                double residual) {
    const int K = cfg.K();
    SolveReport rep;
    rep.units = MetricUnits::Npcu;
    rep.per_user.resize(static_cast<size_t>(K));
    for (int k = 0; k < K; ++k) {
        rep.per_user[static_cast<size_t>(k)] =
            std::log1p(H.H[static_cast<size_t>(k)] * powers[static_cast<size_t>(k)]) / K;
        rep.objective += utility_or_limit(rep.per_user[static_cast<size_t>(k)], cfg.alpha());
    }
    rep.jain = jain_index(rep.per_user);
    rep.allocation = PowerAllocation{PowerKind::Physical, std::move(powers)};
    rep.iterations = iterations;
    rep.residual = residual;
    return rep;
}

// Concave TDMA tail over the active users [z, K): maximize sum G(Q_k) under
// sum t_k Q_k <= budget and Q_k >= floor. Returns -inf when the floors do not
// fit the budget.
struct TdmaTail {
    std::vector<double> Q;
    double value = -kInf;
};

TdmaTail tdma_tail_solve(const SystemConfig& cfg, const std::vector<double>& t, int z,
                         double budget) {
    const int K = cfg.K();
    const int n = K - z;
    const double alpha = cfg.alpha();
    const double floor = (1.0 - alpha) / 2.0;
    TdmaTail out;
    if (n <= 0) {
        out.Q.clear();
        out.value = 0.0;
        return out;
    }
    double floor_cost = 0.0;
    for (int k = z; k < K; ++k) floor_cost += t[static_cast<size_t>(k)] * floor;
    const double slack = budget - floor_cost;
    if (slack < -1e-12 * (1.0 + cfg.P())) return out;

    if (slack <= 1e-12 * (1.0 + cfg.P())) {
        out.Q.assign(static_cast<size_t>(n), floor);
        out.value = n * g_value(floor, alpha);
        return out;
    }
    if (n == 1) {
        out.Q.assign(1, budget / t[static_cast<size_t>(z)]);
        out.value = g_value(out.Q[0], alpha);
        return out;
    }

    ConvexProgram prog;
    prog.n = n;
    prog.A.emplace_back(t.begin() + z, t.end());
    prog.c.push_back(budget);
    prog.lower.assign(static_cast<size_t>(n), floor);
    prog.upper.assign(static_cast<size_t>(n), kInf);
    const double one_minus_alpha = 1.0 - alpha;
    prog.objective = [one_minus_alpha, n](std::span<const double> q,
                                          std::span<double> grad) {
        double v = 0.0;
        for (int i = 0; i < n; ++i) {
            const double qi = q[static_cast<size_t>(i)];
            if (!(qi > 0)) return kInf;
            const double g = std::exp(-one_minus_alpha / qi);
            v -= g;
            grad[static_cast<size_t>(i)] = -one_minus_alpha / (qi * qi) * g;
        }
        return v;
    };
    std::vector<double> x0(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        x0[static_cast<size_t>(i)] =
            floor + 0.9 * slack / (n * t[static_cast<size_t>(z + i)]);
    MinimizeResult res = minimize_convex(prog, x0, 1e-9);
    out.Q = std::move(res.x);
    out.value = -res.value;
    return out;
}

}  // namespace

PowerAllocation fixed_noma_powers(const SystemConfig& cfg) {
    const int K = cfg.K();
    PowerAllocation p{PowerKind::Physical, std::vector<double>(static_cast<size_t>(K))};
    const double denom = std::exp2(K) - 1.0;
    for (int k = 0; k < K; ++k)
        p.values[static_cast<size_t>(k)] = std::exp2(K - 1 - k) * cfg.P() / denom;
    return p;
}

bool fixed_noma_satisfies_ordering(const SystemConfig& cfg) {
    const PowerAllocation p = fixed_noma_powers(cfg);
    double tail = 0.0;
    for (int k = cfg.K() - 1; k >= 0; --k) {
        if (p.values[static_cast<size_t>(k)] < cfg.rhat0() * tail) return false;
        tail += p.values[static_cast<size_t>(k)];
    }
    return true;
}

SolveReport fixed_noma_statistical_report(const SystemConfig& cfg) {
    const PowerAllocation norm =
        convert_powers(fixed_noma_powers(cfg), PowerKind::Normalized, cfg);
    return report_from_normalized(cfg, norm.values, 0);
}

SolveReport fixed_noma_perfect_report(const ChannelRealization& H,
                                      const SystemConfig& cfg) {
    const int K = cfg.K();
    const PowerAllocation p = fixed_noma_powers(cfg);
    CumulativePowers b;
    b.b.assign(static_cast<size_t>(K) + 1, 0.0);
    for (int k = K - 1; k >= 0; --k)
        b.b[static_cast<size_t>(k)] =
            b.b[static_cast<size_t>(k) + 1] + p.values[static_cast<size_t>(k)];
    SolveReport rep;
    rep.units = MetricUnits::Npcu;
    rep.per_user.resize(static_cast<size_t>(K));
    for (int k = 0; k < K; ++k) {
        rep.per_user[static_cast<size_t>(k)] = instantaneous_rate(k, b, H);
        rep.objective += utility_or_limit(rep.per_user[static_cast<size_t>(k)], cfg.alpha());
    }
    rep.jain = jain_index(rep.per_user);
    rep.cumulative = std::move(b);
    return rep;
}

SolveReport tdma_statistical_solve(const SystemConfig& cfg) {
    const int K = cfg.K();
    const double alpha = cfg.alpha();
    const std::vector<double> t = tdma_cost_coefficients(cfg);

    if (K == 1) return tdma_statistical_report(cfg, {cfg.P() / t[0]}, 0);

    if (alpha == 1.0) {
        double sum_sqrt = 0.0;
        for (double v : t) sum_sqrt += std::sqrt(v);
        std::vector<double> Q(static_cast<size_t>(K));
        for (int k = 0; k < K; ++k)
            Q[static_cast<size_t>(k)] = cfg.P() / (std::sqrt(t[static_cast<size_t>(k)]) * sum_sqrt);
        return tdma_statistical_report(cfg, std::move(Q), 0);
    }

    if (alpha > 1.0) {
        // Same scaled log-sum-exp objective as the NOMA alpha > 1 solve, with
        // only the budget and nonnegativity constraints.
        const double c = alpha - 1.0;
        ConvexProgram prog;
        prog.n = K;
        prog.A.push_back(t);
        prog.c.push_back(cfg.P());
        prog.lower.assign(static_cast<size_t>(K), 0.0);
        prog.upper.assign(static_cast<size_t>(K), kInf);
        prog.objective = [c, K](std::span<const double> x, std::span<double> grad) {
            double mx = -kInf;
            for (int k = 0; k < K; ++k) {
                if (!(x[static_cast<size_t>(k)] > 0)) return kInf;
                mx = std::max(mx, c / x[static_cast<size_t>(k)]);
            }
            double sum = 0.0;
            for (int k = 0; k < K; ++k)
                sum += std::exp(c / x[static_cast<size_t>(k)] - mx);
            for (int k = 0; k < K; ++k) {
                const double w = std::exp(c / x[static_cast<size_t>(k)] - mx) / sum;
                grad[static_cast<size_t>(k)] =
                    -w / (x[static_cast<size_t>(k)] * x[static_cast<size_t>(k)]);
            }
            return (mx + std::log(sum)) / c;
        };
        double sum_sqrt = 0.0;
        for (double v : t) sum_sqrt += std::sqrt(v);
        std::vector<double> x0(static_cast<size_t>(K));
        for (int k = 0; k < K; ++k)
            x0[static_cast<size_t>(k)] =
                0.98 * cfg.P() / (std::sqrt(t[static_cast<size_t>(k)]) * sum_sqrt);
        MinimizeResult res = minimize_convex(prog, x0, 1e-8);
        return tdma_statistical_report(cfg, std::move(res.x), res.iterations);
    }

    // alpha < 1: without the SIC ordering chain the active set at an optimum
    // is a suffix of the cheapest users (an exchange towards a smaller t_k
    // never hurts), the objective is convex on (0, floor) so at most one
    // active user sits below the floor, and the rest form a concave tail.
    // Enumerate the zero-prefix length z, with and without a partial user.
    const double floor = (1.0 - alpha) / 2.0;
    double best_val = -kInf;
    std::vector<double> best_Q;

    auto consider = [&](double val, int z, double partial, const std::vector<double>& tail) {
        if (!(val > best_val)) return;
        best_val = val;
        best_Q.assign(static_cast<size_t>(K), 0.0);
        int k = z;
        if (partial > 0.0) best_Q[static_cast<size_t>(k++)] = partial;
        for (double q : tail) best_Q[static_cast<size_t>(k++)] = q;
    };

    for (int z = 0; z < K; ++z) {
        // All active users at or above the floor.
        TdmaTail full = tdma_tail_solve(cfg, t, z, cfg.P());
        if (full.value > -kInf) consider(full.value, z, 0.0, full.Q);

        // User z partial in (0, floor), the rest a concave tail.
        const double q_cap = std::min(floor, cfg.P() / t[static_cast<size_t>(z)]);
        if (!(q_cap > 0)) continue;
        auto partial_value = [&](double q) -> double {
            TdmaTail tail =
                tdma_tail_solve(cfg, t, z + 1, cfg.P() - t[static_cast<size_t>(z)] * q);
            if (tail.value == -kInf) return -kInf;
            return g_value(q, alpha) + tail.value;
        };
        constexpr int kSteps = 200;
        double local_best = -kInf, local_arg = 0.0;
        for (int i = 1; i <= kSteps; ++i) {
            const double q = q_cap * static_cast<double>(i) / kSteps;
            const double v = partial_value(q);
            if (v > local_best) {
                local_best = v;
                local_arg = q;
            }
        }
        if (local_best > -kInf) {
            const double step = q_cap / kSteps;
            GridResult1D ref = golden_section_max(
                partial_value, std::max(step * 1e-6, local_arg - step),
                std::min(q_cap, local_arg + step), step * 1e-3);
            if (ref.value > local_best) {
                local_best = ref.value;
                local_arg = ref.arg;
            }
            TdmaTail tail = tdma_tail_solve(
                cfg, t, z + 1, cfg.P() - t[static_cast<size_t>(z)] * local_arg);
            consider(local_best, z, local_arg, tail.Q);
        }
    }

    if (best_val == -kInf)
        throw InfeasibleError("tdma statistical solve: no feasible allocation");
    return tdma_statistical_report(cfg, std::move(best_Q), 0);
}

SolveReport tdma_perfect_solve(const ChannelRealization& H, const SystemConfig& cfg) {
    const int K = cfg.K();
    const double alpha = cfg.alpha();
    const double total = K * cfg.P();

    if (alpha == 0.0) {
        std::vector<double> p = water_filling(H.H, total);
        return tdma_perfect_report(cfg, H, std::move(p), 0, 0.0);
    }

    // alpha > 0: u'(R) -> inf as R -> 0+, so the optimum is strictly interior
    // and a single concave solve suffices.
    ConvexProgram prog;
    prog.n = K;
    prog.A.emplace_back(static_cast<size_t>(K), 1.0);
    prog.c.push_back(total);
    prog.lower.assign(static_cast<size_t>(K), 0.0);
    prog.upper.assign(static_cast<size_t>(K), kInf);
    const std::vector<double>& h = H.H;
    prog.objective = [&h, K, alpha](std::span<const double> p, std::span<double> grad) {
        std::vector<double> R(static_cast<size_t>(K)), dR(static_cast<size_t>(K));
        for (int k = 0; k < K; ++k) {
            const double pk = p[static_cast<size_t>(k)];
            if (!(pk > 0)) return kInf;
            const double hk = h[static_cast<size_t>(k)];
            R[static_cast<size_t>(k)] = std::log1p(hk * pk) / K;
            dR[static_cast<size_t>(k)] = hk / (K * (1.0 + hk * pk));
        }
        if (alpha == 1.0) {
            double v = 0.0;
            for (int k = 0; k < K; ++k) {
                v -= std::log(R[static_cast<size_t>(k)]);
                grad[static_cast<size_t>(k)] =
                    -dR[static_cast<size_t>(k)] / R[static_cast<size_t>(k)];
            }
            return v;
        }
        if (alpha < 1.0) {
            double v = 0.0;
            for (int k = 0; k < K; ++k) {
                v -= std::pow(R[static_cast<size_t>(k)], 1.0 - alpha) / (1.0 - alpha);
                grad[static_cast<size_t>(k)] =
                    -std::pow(R[static_cast<size_t>(k)], -alpha) * dR[static_cast<size_t>(k)];
            }
            return v;
        }
        // alpha > 1: scaled log of sum R^{1-alpha}; same minimizer, bounded
        // gradients even for very large alpha.
        double mx = -kInf;
        std::vector<double> e(static_cast<size_t>(K));
        for (int k = 0; k < K; ++k) {
            e[static_cast<size_t>(k)] = (1.0 - alpha) * std::log(R[static_cast<size_t>(k)]);
            mx = std::max(mx, e[static_cast<size_t>(k)]);
        }
        double sum = 0.0;
        for (int k = 0; k < K; ++k) sum += std::exp(e[static_cast<size_t>(k)] - mx);
        for (int k = 0; k < K; ++k) {
            const double w = std::exp(e[static_cast<size_t>(k)] - mx) / sum;
            grad[static_cast<size_t>(k)] =
                -w * dR[static_cast<size_t>(k)] / R[static_cast<size_t>(k)];
        }
        return (mx + std::log(sum)) / (alpha - 1.0);
    };

    std::vector<double> x0(static_cast<size_t>(K), 0.9 * cfg.P());
    MinimizeResult res = minimize_convex(prog, x0, 1e-9);
    return tdma_perfect_report(cfg, H, std::move(res.x), res.iterations, res.stationarity);
}

std::vector<double> water_filling(const std::vector<double>& H, double total_power) {
    const int n = static_cast<int>(H.size());
    for (double h : H)
        if (!(h > 0)) throw std::domain_error("water_filling requires positive gains");
    if (!(total_power > 0)) throw std::domain_error("water_filling requires positive budget");

    std::vector<int> active(static_cast<size_t>(n));
    std::iota(active.begin(), active.end(), 0);
    double mu = 0.0;
    for (;;) {
        double inv_sum = 0.0;
        for (int i : active) inv_sum += 1.0 / H[static_cast<size_t>(i)];
        mu = (total_power + inv_sum) / static_cast<double>(active.size());
        std::vector<int> next;
        for (int i : active)
            if (mu > 1.0 / H[static_cast<size_t>(i)]) next.push_back(i);
        if (next.size() == active.size() || next.empty()) break;
        active = std::move(next);
    }
    std::vector<double> p(static_cast<size_t>(n), 0.0);
    for (int i : active) {
        const double level = mu - 1.0 / H[static_cast<size_t>(i)];
        if (level > 0) p[static_cast<size_t>(i)] = level;
    }
    return p;
}

}  // namespace nomafair
