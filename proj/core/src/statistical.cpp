#include "nomafair/statistical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nomafair/model.hpp"
#include "nomafair/numerics.hpp"

namespace nomafair {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Normalized budget coefficients a_k = rhat0 * Gamma_k, so the physical
// power budget reads sum_k a_k P_k <= P.
std::vector<double> budget_coefficients(const SystemConfig& cfg) {
    std::vector<double> a = gamma_coefficients(cfg);
    for (double& v : a) v *= cfg.rhat0();
    return a;
}

// G(x) = exp(-(1-alpha)/x) for the alpha < 1 regime; G(0) = 0.
double g_value(double x, double alpha) {
    if (x <= 0) return 0.0;
    return std::exp(-(1.0 - alpha) / x);
}

double pinned_budget_cost(const SystemConfig& cfg, int k0, double P1) {
    // sum over the pinned block of a_k * (d_1/d_k)^beta * P1, telescoped
    return P1 * cfg.pathloss(0) * (std::pow(cfg.rhat0() + 1.0, k0) - 1.0);
}

}  // namespace

SolveReport report_from_normalized(const SystemConfig& cfg, std::vector<double> normalized,
                                   long iterations) {
    const int K = cfg.K();
    PowerAllocation norm{PowerKind::Normalized, std::move(normalized)};
    SolveReport rep;
    rep.units = MetricUnits::Bpcu;
    rep.per_user.resize(static_cast<size_t>(K));
    rep.objective = 0.0;
    for (int k = 0; k < K; ++k) {
        rep.per_user[static_cast<size_t>(k)] = throughput(k, norm, cfg);
        rep.objective += utility_or_limit(rep.per_user[static_cast<size_t>(k)], cfg.alpha());
    }
    rep.jain = jain_index(rep.per_user);
    rep.allocation = convert_powers(norm, PowerKind::Physical, cfg);
    rep.iterations = iterations;
    rep.residual = 0.0;
    return rep;
}

SolveReport solve_alpha_eq_1(const SystemConfig& cfg) {
    const std::vector<double> a = budget_coefficients(cfg);
    double sum_sqrt = 0.0;
    for (double v : a) sum_sqrt += std::sqrt(v);
    std::vector<double> P(a.size());
    for (size_t k = 0; k < a.size(); ++k)
        P[k] = cfg.P() / (std::sqrt(a[k]) * sum_sqrt);
    return report_from_normalized(cfg, std::move(P), 0);
}

namespace {

// Shared constraint block of F.P2: budget row, ordering chain, nonnegativity.
ConvexProgram fp2_constraints(const SystemConfig& cfg) {
    const int K = cfg.K();
    const std::vector<double> a = budget_coefficients(cfg);
    ConvexProgram prog;
    prog.n = K;
    prog.A.push_back(a);
    prog.c.push_back(cfg.P());
    for (int k = 0; k + 1 < K; ++k) {
        std::vector<double> row(static_cast<size_t>(K), 0.0);
        row[static_cast<size_t>(k)] = -cfg.pathloss(k);
        row[static_cast<size_t>(k + 1)] = cfg.pathloss(k + 1);
        prog.A.push_back(std::move(row));
        prog.c.push_back(0.0);
    }
    prog.lower.assign(static_cast<size_t>(K), 0.0);
    prog.upper.assign(static_cast<size_t>(K), kInf);
    return prog;
}

std::vector<double> lemma1_interior_start(const SystemConfig& cfg) {
    const std::vector<double> a = budget_coefficients(cfg);
    double sum_sqrt = 0.0;
    for (double v : a) sum_sqrt += std::sqrt(v);
    std::vector<double> x(a.size());
    for (size_t k = 0; k < a.size(); ++k)
        x[k] = 0.98 * cfg.P() / (std::sqrt(a[k]) * sum_sqrt);
    return x;
}

}  // namespace

SolveReport solve_alpha_gt_1(const SystemConfig& cfg) {
    const int K = cfg.K();
    const double c = cfg.alpha() - 1.0;
    ConvexProgram prog = fp2_constraints(cfg);
    // Scaled log-sum-exp transform of sum_k exp(c/P_k): same minimizer,
    // bounded gradients for any alpha.
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
    const std::vector<double> x0 = lemma1_interior_start(cfg);
    MinimizeResult res = minimize_convex(prog, x0, 1e-8);
    return report_from_normalized(cfg, std::move(res.x), res.iterations);
}

StructuredCandidate solve_fp4(const SystemConfig& cfg, int k0, double P1) {
    const int K = cfg.K();
    const double alpha = cfg.alpha();
    if (!(alpha < 1)) throw std::invalid_argument("solve_fp4 requires alpha < 1");
    const double floor = (1.0 - alpha) / 2.0;
    const std::vector<double> a = budget_coefficients(cfg);
    const double slack_eps = 1e-12 * (1.0 + cfg.P());

    if (k0 < 0 || k0 > K)
        throw InfeasibleError("solve_fp4: k0 outside [0:K]");
    if (!(P1 >= 0))
        throw InfeasibleError("solve_fp4: P1 must be nonnegative");
    if (k0 >= 1) {
        const double cap = floor * cfg.pathloss(k0 - 1) / cfg.pathloss(0);
        if (P1 > cap + slack_eps)
            throw InfeasibleError("solve_fp4: P1 exceeds the pinned-block cap");
    }
    double floor_cost = 0.0;
    for (int k = k0; k < K; ++k) floor_cost += a[static_cast<size_t>(k)] * floor;
    const double pinned_cost = pinned_budget_cost(cfg, k0, P1);
    if (pinned_cost + floor_cost > cfg.P() + slack_eps)
        throw InfeasibleError("solve_fp4: budget cannot cover the tail floors");

    StructuredCandidate cand;
    cand.k0 = k0;
    cand.P1 = P1;
    if (k0 == K) {
        cand.value = 0.0;
        return cand;
    }

    const int n = K - k0;
    const double budget = cfg.P() - pinned_cost;
    // Cross-boundary ordering cap: d_{k0+1}^b P_{k0+1} <= d_1^b P1.
    // cross_cap_dp is in d^beta*P units; cross_cap_x0 is the cap on the
    // first tail power itself.
    const double cross_cap_dp = (k0 >= 1) ? cfg.pathloss(0) * P1 : kInf;
    const double cross_cap_x0 =
        (k0 >= 1) ? cross_cap_dp / cfg.pathloss(k0) : kInf;
    if (cross_cap_x0 < floor * (1.0 - 1e-12))
        throw InfeasibleError("solve_fp4: cross-boundary ordering conflicts with the floor");

    // Strictly feasible start: floors plus a budget-weighted interior margin,
    // then a forward pass enforcing the ordering chain strictly.
    std::vector<double> x(static_cast<size_t>(n));
    const double islack = budget - floor_cost;
    for (int i = 0; i < n; ++i) {
        const double ak = a[static_cast<size_t>(k0 + i)];
        x[static_cast<size_t>(i)] =
            floor + std::max(islack, 0.0) * 0.5 / (ak * n) + 1e-12;
    }
    double prev_cap = cross_cap_dp;
    bool interior = islack > slack_eps;
    for (int i = 0; i < n && interior; ++i) {
        const double pl = cfg.pathloss(k0 + i);
        const double cap_val = prev_cap * (1.0 - 1e-9) / pl;
        if (cap_val < x[static_cast<size_t>(i)]) x[static_cast<size_t>(i)] = cap_val;
        if (!(x[static_cast<size_t>(i)] > floor)) interior = false;
        prev_cap = pl * x[static_cast<size_t>(i)];
    }

    if (!interior) {
        // Degenerate feasible region: the floors (clipped by the ordering
        // cap) are the only admissible point up to tolerance.
        cand.tail.assign(static_cast<size_t>(n), floor);
        if (cross_cap_x0 < kInf) cand.tail[0] = std::min(cand.tail[0], cross_cap_x0);
        cand.value = 0.0;
        for (double v : cand.tail) cand.value += g_value(v, alpha);
        return cand;
    }

    ConvexProgram prog;
    prog.n = n;
    prog.A.emplace_back(a.begin() + k0, a.end());
    prog.c.push_back(budget);
    for (int i = 0; i + 1 < n; ++i) {
        std::vector<double> row(static_cast<size_t>(n), 0.0);
        row[static_cast<size_t>(i)] = -cfg.pathloss(k0 + i);
        row[static_cast<size_t>(i + 1)] = cfg.pathloss(k0 + i + 1);
        prog.A.push_back(std::move(row));
        prog.c.push_back(0.0);
    }
    if (cross_cap_dp < kInf) {
        std::vector<double> row(static_cast<size_t>(n), 0.0);
        row[0] = cfg.pathloss(k0);
        prog.A.push_back(std::move(row));
        prog.c.push_back(cross_cap_dp);
    }
    prog.lower.assign(static_cast<size_t>(n), floor);
    prog.upper.assign(static_cast<size_t>(n), kInf);
    const double one_minus_alpha = 1.0 - alpha;
    prog.objective = [one_minus_alpha, n](std::span<const double> p,
                                          std::span<double> grad) {
        double v = 0.0;
        for (int i = 0; i < n; ++i) {
            const double pi = p[static_cast<size_t>(i)];
            if (!(pi > 0)) return kInf;
            const double g = std::exp(-one_minus_alpha / pi);
            v -= g;
            grad[static_cast<size_t>(i)] = -one_minus_alpha / (pi * pi) * g;
        }
        return v;
    };

    MinimizeResult res = minimize_convex(prog, x, 1e-8);
    cand.tail = std::move(res.x);
    cand.value = -res.value;
    return cand;
}

SolveReport solve_alpha_lt_1(const SystemConfig& cfg) {
    const int K = cfg.K();
    const double alpha = cfg.alpha();
    const std::vector<double> a = budget_coefficients(cfg);

    if (K == 1) {
        // Single user: the budget binds and the structure is irrelevant.
        return report_from_normalized(cfg, {cfg.P() / a[0]}, 0);
    }

    const double floor = (1.0 - alpha) / 2.0;

    auto pinned_sum = [&](int k0, double P1) {
        double s = 0.0;
        for (int k = 0; k < k0; ++k)
            s += g_value(cfg.pathloss(0) / cfg.pathloss(k) * P1, alpha);
        return s;
    };

    auto candidate_value = [&](int k0, double P1) -> double {
        try {
            StructuredCandidate c = solve_fp4(cfg, k0, P1);
            return pinned_sum(k0, P1) + c.value;
        } catch (const InfeasibleError&) {
            return -kInf;
        }
    };

    bool found = false;
    double best_val = -kInf;
    int best_k0 = 0;
    double best_P1 = 0.0;

    constexpr int kP1Steps = 400;
    for (int k0 = 0; k0 <= K; ++k0) {
        double p1_max;
        if (k0 == 0) {
            p1_max = 0.0;
        } else {
            double floor_cost = 0.0;
            for (int k = k0; k < K; ++k) floor_cost += a[static_cast<size_t>(k)] * floor;
            const double denom = cfg.pathloss(0) * (std::pow(cfg.rhat0() + 1.0, k0) - 1.0);
            const double budget_cap = (cfg.P() - floor_cost) / denom;
            const double shape_cap = floor * cfg.pathloss(k0 - 1) / cfg.pathloss(0);
            p1_max = std::min(budget_cap, shape_cap);
            if (p1_max < 0) continue;
        }

        if (p1_max == 0.0) {
            const double v = candidate_value(k0, 0.0);
            if (v > best_val) {
                best_val = v;
                best_k0 = k0;
                best_P1 = 0.0;
                found = found || v > -kInf;
            }
            continue;
        }

        double local_best = -kInf, local_arg = 0.0;
        for (int i = 0; i < kP1Steps; ++i) {
            const double p1 = p1_max * static_cast<double>(i) / (kP1Steps - 1);
            const double v = candidate_value(k0, p1);
            if (v > local_best) {
                local_best = v;
                local_arg = p1;
            }
        }
        if (local_best > -kInf) {
            const double step = p1_max / (kP1Steps - 1);
            const double lo = std::max(0.0, local_arg - step);
            const double hi = std::min(p1_max, local_arg + step);
            GridResult1D ref = golden_section_max(
                [&](double p1) { return candidate_value(k0, p1); }, lo, hi, step * 1e-3);
            if (ref.value > local_best) {
                local_best = ref.value;
                local_arg = ref.arg;
            }
            found = true;
        }
        if (local_best > best_val) {
            best_val = local_best;
            best_k0 = k0;
            best_P1 = local_arg;
        }
    }

    if (!found || best_val == -kInf)
        throw InfeasibleError(
            "statistical solve: feasible set S is empty for this (alpha, P)");

    StructuredCandidate best = solve_fp4(cfg, best_k0, best_P1);
    std::vector<double> P(static_cast<size_t>(K));
    for (int k = 0; k < best_k0; ++k)
        P[static_cast<size_t>(k)] = cfg.pathloss(0) / cfg.pathloss(k) * best_P1;
    for (int k = best_k0; k < K; ++k)
        P[static_cast<size_t>(k)] = best.tail[static_cast<size_t>(k - best_k0)];
    return report_from_normalized(cfg, std::move(P), 0);
}

SolveReport solve_statistical(const SystemConfig& cfg) {
    if (cfg.K() == 1) {
        const std::vector<double> a = budget_coefficients(cfg);
        return report_from_normalized(cfg, {cfg.P() / a[0]}, 0);
    }
    if (cfg.alpha() == 1.0) return solve_alpha_eq_1(cfg);
    if (cfg.alpha() > 1.0) return solve_alpha_gt_1(cfg);
    return solve_alpha_lt_1(cfg);
}

}  // namespace nomafair
