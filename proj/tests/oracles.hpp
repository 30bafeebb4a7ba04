// Independent numerical oracles shared by the unit and acceptance tests.
// Everything here is deliberately implemented with different mechanisms than
// the library (enumeration, dense grids, quadrature, direct counting) so the
// two sides cannot share a bug.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "nomafair/config.hpp"
#include "nomafair/model.hpp"
#include "nomafair/rng.hpp"

namespace oracles {

// Dense Gaussian elimination with partial pivoting; returns false on a
// numerically singular system.
inline bool solve_linear(std::vector<std::vector<double>> a, std::vector<double> rhs,
                         std::vector<double>& out) {
    const int n = static_cast<int>(rhs.size());
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        if (std::fabs(a[piv][col]) < 1e-12) return false;
        std::swap(a[piv], a[col]);
        std::swap(rhs[piv], rhs[col]);
        for (int r = col + 1; r < n; ++r) {
            const double m = a[r][col] / a[col][col];
            for (int c = col; c < n; ++c) a[r][c] -= m * a[col][c];
            rhs[r] -= m * rhs[col];
        }
    }
    out.assign(rhs.size(), 0.0);
    for (int r = n - 1; r >= 0; --r) {
        double s = rhs[r];
        for (int c = r + 1; c < n; ++c) s -= a[r][c] * out[c];
        out[r] = s / a[r][r];
    }
    return true;
}

// Convex quadratic program min 1/2 x'Qx + q'x s.t. Ax <= c solved by
// enumerating active sets and checking the KKT sign conditions.
struct Quadratic {
    std::vector<std::vector<double>> Q;
    std::vector<double> q;
    std::vector<std::vector<double>> A;
    std::vector<double> c;
};

inline bool quadratic_active_set(const Quadratic& p, std::vector<double>& best) {
    const int n = static_cast<int>(p.q.size());
    const int m = static_cast<int>(p.c.size());
    bool found = false;
    double best_val = std::numeric_limits<double>::infinity();
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
        std::vector<int> act;
        for (int i = 0; i < m; ++i)
            if (mask & (1u << i)) act.push_back(i);
        const int na = static_cast<int>(act.size());
        if (na > n) continue;
        // KKT system [Q A_S'; A_S 0] [x; lam] = [-q; c_S].
        const int dim = n + na;
        std::vector<std::vector<double>> M(dim, std::vector<double>(dim, 0.0));
        std::vector<double> rhs(dim, 0.0);
        for (int r = 0; r < n; ++r) {
            for (int cc = 0; cc < n; ++cc) M[r][cc] = p.Q[r][cc];
            for (int s = 0; s < na; ++s) {
                M[r][n + s] = p.A[act[s]][r];
                M[n + s][r] = p.A[act[s]][r];
            }
            rhs[r] = -p.q[r];
        }
        for (int s = 0; s < na; ++s) rhs[n + s] = p.c[act[s]];
        std::vector<double> sol;
        if (!solve_linear(M, rhs, sol)) continue;
        bool ok = true;
        for (int s = 0; s < na && ok; ++s)
            if (sol[n + s] < -1e-9) ok = false;
        for (int i = 0; i < m && ok; ++i) {
            double lhs = 0.0;
            for (int cc = 0; cc < n; ++cc) lhs += p.A[i][cc] * sol[cc];
            if (lhs > p.c[i] + 1e-8) ok = false;
        }
        if (!ok) continue;
        double val = 0.0;
        for (int r = 0; r < n; ++r) {
            val += p.q[r] * sol[r];
            for (int cc = 0; cc < n; ++cc) val += 0.5 * sol[r] * p.Q[r][cc] * sol[cc];
        }
        if (val < best_val - 1e-12) {
            best_val = val;
            best.assign(sol.begin(), sol.begin() + n);
            found = true;
        }
    }
    return found;
}

// Monte Carlo estimate of user k's (0-based) outage probability from the
// max-form SIC events, counting blocks where any decoding stage l <= k sees
// SINR below the target threshold. Returns (p_hat, 3 binomial sigma).
inline std::pair<double, double> mc_outage(int k, const nomafair::PowerAllocation& physical,
                                           const nomafair::SystemConfig& cfg, long blocks,
                                           uint64_t seed) {
    const double rhat0 = cfg.rhat0();
    const double mean = std::pow(cfg.d(k), -cfg.beta());
    long bad = 0;
    nomafair::SplitMix64 g(seed);
    for (long b = 0; b < blocks; ++b) {
        const double u = g.next_double();
        const double h = -mean * std::log1p(-u);
        bool outage = false;
        for (int l = 0; l <= k && !outage; ++l)
            if (nomafair::sinr(l, k, physical, h) < rhat0) outage = true;
        if (outage) ++bad;
    }
    const double p = static_cast<double>(bad) / static_cast<double>(blocks);
    const double sigma = std::sqrt(std::max(p * (1.0 - p), 1e-12) / static_cast<double>(blocks));
    return {p, 3.0 * sigma};
}

// Statistical-regime objective over normalized powers, shared by the
// brute-force searches below. Zero powers take the utility limit.
inline double stat_objective(const std::vector<double>& P, const nomafair::SystemConfig& cfg) {
    double s = 0.0;
    for (size_t k = 0; k < P.size(); ++k) {
        const double f = P[k] > 0 ? cfg.r0() * std::exp(-1.0 / P[k]) : 0.0;
        s += nomafair::utility_or_limit(f, cfg.alpha());
        if (!std::isfinite(s) && s < 0) return -std::numeric_limits<double>::infinity();
    }
    return s;
}

// Dense-grid brute force for K = 2: the objective increases in every
// coordinate, so the last power is the largest value allowed by the leftover
// budget and the ordering chain, leaving one free dimension.
inline double brute_force_stat2(const nomafair::SystemConfig& cfg, int steps) {
    const auto gamma = nomafair::gamma_coefficients(cfg);
    const double a1 = cfg.rhat0() * gamma[0];
    const double a2 = cfg.rhat0() * gamma[1];
    const double q1 = cfg.pathloss(0);
    const double q2 = cfg.pathloss(1);
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= steps; ++i) {
        const double p1 = (cfg.P() / a1) * i / steps;
        const double p2 = std::min((cfg.P() - a1 * p1) / a2, q1 * p1 / q2);
        if (p2 < 0) continue;
        best = std::max(best, stat_objective({p1, p2}, cfg));
    }
    return best;
}

// Same idea for K = 3 with two free dimensions.
inline double brute_force_stat3(const nomafair::SystemConfig& cfg, int steps) {
    const auto gamma = nomafair::gamma_coefficients(cfg);
    const double a1 = cfg.rhat0() * gamma[0];
    const double a2 = cfg.rhat0() * gamma[1];
    const double a3 = cfg.rhat0() * gamma[2];
    const double q1 = cfg.pathloss(0);
    const double q2 = cfg.pathloss(1);
    const double q3 = cfg.pathloss(2);
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= steps; ++i) {
        const double p1 = (cfg.P() / a1) * i / steps;
        const double rem1 = cfg.P() - a1 * p1;
        if (rem1 < 0) continue;
        const double p2_cap = std::min(rem1 / a2, q1 * p1 / q2);
        for (int j = 0; j <= steps; ++j) {
            const double p2 = p2_cap * j / steps;
            const double p3 = std::min((rem1 - a2 * p2) / a3, q2 * p2 / q3);
            if (p3 < 0) continue;
            best = std::max(best, stat_objective({p1, p2, p3}, cfg));
        }
    }
    return best;
}

// Water-filling levels recomputed independently: bisection on the water
// level mu so that sum max(0, mu - 1/H_k) equals the budget.
inline std::vector<double> water_filling_bisect(const std::vector<double>& H, double total) {
    double lo = 0.0, hi = total + 1.0;
    for (double h : H) hi = std::max(hi, total + 1.0 / h + 1.0);
    auto allocated = [&](double mu) {
        double s = 0.0;
        for (double h : H) s += std::max(0.0, mu - 1.0 / h);
        return s;
    };
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (allocated(mid) < total ? lo : hi) = mid;
    }
    const double mu = 0.5 * (lo + hi);
    std::vector<double> p(H.size());
    for (size_t k = 0; k < H.size(); ++k) p[k] = std::max(0.0, mu - 1.0 / H[k]);
    return p;
}

// E[ln(1 + P h)] for h ~ Exp(mean m) by composite Simpson quadrature on
// h = m u, u ~ Exp(1), truncated far into the tail.
inline double ergodic_rate_integral(double P, double mean) {
    const double hi = 60.0;
    const int n = 600000;  // even
    const double dh = hi / n;
    auto f = [&](double u) { return std::log1p(P * mean * u) * std::exp(-u); };
    double s = f(0.0) + f(hi);
    for (int i = 1; i < n; ++i) s += f(i * dh) * (i % 2 ? 4.0 : 2.0);
    return s * dh / 3.0;
}

// Deterministic uniform helper for test instance generation.
inline double uniform(nomafair::SplitMix64& g, double lo, double hi) {
    return lo + (hi - lo) * g.next_double();
}

// Random scenario whose distance profile respects the strictly-decreasing
// Gamma assumption with margin.
inline nomafair::SystemConfig random_config(nomafair::SplitMix64& g, int K, double alpha) {
    const double r0 = uniform(g, 0.3, 1.1);
    const double beta = 2.0;
    const double rhat0 = std::exp2(r0) - 1.0;
    const double min_ratio = std::pow(rhat0 + 1.0, 1.0 / beta) * 1.05;
    std::vector<double> d(static_cast<size_t>(K));
    d[static_cast<size_t>(K - 1)] = 1.0;
    for (int k = K - 2; k >= 0; --k)
        d[static_cast<size_t>(k)] =
            d[static_cast<size_t>(k + 1)] * uniform(g, min_ratio, min_ratio * 1.15);
    const double P = uniform(g, 20.0, 150.0);
    return nomafair::SystemConfig(K, P, beta, std::move(d), r0, alpha);
}

}  // namespace oracles
