#include "nomafair/perfect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nomafair/model.hpp"
#include "nomafair/numerics.hpp"

namespace nomafair {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double rate(double Hk, double bk, double bk1) {
    return std::log1p(Hk * bk) - std::log1p(Hk * bk1);
}

SolveReport report_from_b(const ChannelRealization& H, const SystemConfig& cfg,
                          CumulativePowers b, long iterations, double residual,
                          std::vector<CumulativePowers> trace) {
    const int K = cfg.K();
    SolveReport rep;
    rep.units = MetricUnits::Npcu;
    rep.per_user.resize(static_cast<size_t>(K));
    rep.objective = 0.0;
    for (int k = 0; k < K; ++k) {
        const double r = instantaneous_rate(k, b, H);
        rep.per_user[static_cast<size_t>(k)] = r;
        if (r > 0)
            rep.objective += alpha_utility(r, cfg.alpha());
        else
            rep.objective += cfg.alpha() < 1 ? 0.0 : -kInf;
    }
    rep.jain = jain_index(rep.per_user);
    rep.cumulative = std::move(b);
    rep.iterations = iterations;
    rep.residual = residual;
    rep.trace = std::move(trace);
    return rep;
}

}  // namespace

std::vector<double> kkt_residual(const CumulativePowers& b, const ChannelRealization& H,
                                 double alpha) {
    const int K = b.users();
    if (!(alpha > 0)) throw std::domain_error("kkt_residual requires alpha > 0");
    for (int k = 0; k < K; ++k)
        if (!(b.b[static_cast<size_t>(k)] > b.b[static_cast<size_t>(k) + 1]))
            throw std::domain_error("kkt_residual requires strictly decreasing b");
    std::vector<double> f(static_cast<size_t>(std::max(K - 1, 0)));
    for (int k = 0; k + 1 < K; ++k) {
        const double Hk = H.H[static_cast<size_t>(k)];
        const double Hk1 = H.H[static_cast<size_t>(k) + 1];
        const double bk = b.b[static_cast<size_t>(k)];
        const double bk1 = b.b[static_cast<size_t>(k) + 1];
        const double bk2 = b.b[static_cast<size_t>(k) + 2];
        const double ratio = (bk1 + 1.0 / Hk) / (bk1 + 1.0 / Hk1);
        f[static_cast<size_t>(k)] =
            rate(Hk1, bk1, bk2) / rate(Hk, bk, bk1) - std::pow(ratio, 1.0 / alpha);
    }
    return f;
}

double inner_root(double b_k, double b_k2, int k, const ChannelRealization& H,
                  double alpha, double eps1) {
    if (!(b_k2 < b_k))
        throw std::invalid_argument("inner_root: degenerate bracket b_{k+2} >= b_k");
    const double Hk = H.H[static_cast<size_t>(k)];
    const double Hk1 = H.H[static_cast<size_t>(k) + 1];

    if (std::fabs(Hk - Hk1) <= 1e-12 * Hk1) {
        // Tied gains: the KKT equation degenerates to equal adjacent rates,
        // whose root is the geometric-mean point.
        const double g = std::sqrt((1.0 + Hk * b_k) * (1.0 + Hk * b_k2));
        return (g - 1.0) / Hk;
    }

    auto f = [&](double x) {
        const double num = rate(Hk1, x, b_k2);
        const double den = rate(Hk, b_k, x);
        const double ratio = (x + 1.0 / Hk) / (x + 1.0 / Hk1);
        return num / den - std::pow(ratio, 1.0 / alpha);
    };
    return bisect(f, Bracket{b_k2, b_k, eps1}).root;
}

SolveReport solve_ao(const ChannelRealization& H, const SystemConfig& cfg,
                     const std::vector<double>* start) {
    const int K = cfg.K();
    const double alpha = cfg.alpha();
    if (!(alpha > 0)) throw std::invalid_argument("solve_ao requires alpha > 0");

    if (K == 1) {
        CumulativePowers b{{cfg.P(), 0.0}};
        return report_from_b(H, cfg, std::move(b), 0, 0.0, {});
    }

    // b indexed 0..K: b[0] = b_1 = P, b[K] = b_{K+1} = 0.
    std::vector<double> b(static_cast<size_t>(K) + 1, 0.0);
    b[0] = cfg.P();
    if (start) {
        if (static_cast<int>(start->size()) != K - 1)
            throw std::invalid_argument("solve_ao: start must hold b_2..b_K");
        for (int i = 0; i < K - 1; ++i) b[static_cast<size_t>(i) + 1] = (*start)[static_cast<size_t>(i)];
    }

    std::vector<CumulativePowers> trace;
    trace.push_back(CumulativePowers{b});

    // The outer residual plateaus at the accuracy of the inner roots. A stop
    // on |f| <= eps1 alone leaves slop in b wherever f is flat, and that slop
    // feeds components that are hypersensitive to their neighbors, so the
    // inner roots are driven essentially to bracket resolution.
    const double inner_tol = std::min(cfg.eps1(), cfg.eps2() * 1e-8);

    constexpr long kMaxSweeps = 10000;
    long t = 0;
    double res_norm = kInf;
    double stall_best = kInf;
    int stall_count = 0;
    while (true) {
        if (++t > kMaxSweeps)
            throw ConvergenceError("solve_ao: sweep cap exceeded", b, res_norm, res_norm, t);
        const std::vector<double> b_prev = b;
        for (int k = 0; k + 1 < K; ++k) {
            const double hi = b[static_cast<size_t>(k)];            // b_k^{(t)}
            const double lo = b_prev[static_cast<size_t>(k) + 2];   // b_{k+2}^{(t-1)}
            b[static_cast<size_t>(k) + 1] = inner_root(hi, lo, k, H, alpha, inner_tol);
        }
        trace.push_back(CumulativePowers{b});

        // An inner root landing on its bracket edge means the optimum pins a
        // user to zero power; the interior fixed-point iteration cannot
        // represent that, so report non-convergence.
        for (int k = 0; k < K; ++k)
            if (!(b[static_cast<size_t>(k)] > b[static_cast<size_t>(k) + 1]))
                throw ConvergenceError("solve_ao: iterate hit the ordering boundary", b,
                                       res_norm, res_norm, t);

        double s = 0.0;
        for (double v : kkt_residual(CumulativePowers{b}, H, alpha)) s += v * v;
        res_norm = std::sqrt(s);
        if (res_norm <= cfg.eps2()) break;
        // Boundary optima (possible at small alpha) make the sweeps stall
        // with the residual pinned above eps2; bail out early.
        if (res_norm < 0.99 * stall_best) {
            stall_best = res_norm;
            stall_count = 0;
        } else if (++stall_count >= 100) {
            throw ConvergenceError("solve_ao: residual stalled above tolerance", b,
                                   res_norm, res_norm, t);
        }
    }

    return report_from_b(H, cfg, CumulativePowers{b}, t, res_norm, std::move(trace));
}

SolveReport solve_baseline(const ChannelRealization& H, const SystemConfig& cfg) {
    const int K = cfg.K();
    const double alpha = cfg.alpha();
    if (!(alpha > 0)) throw std::invalid_argument("solve_baseline requires alpha > 0");
    if (K == 1) {
        CumulativePowers b{{cfg.P(), 0.0}};
        return report_from_b(H, cfg, std::move(b), 0, 0.0, {});
    }

    const int n = K - 1;  // variables b_2..b_K
    const double P = cfg.P();

    // Gaussian elimination with partial pivoting for the Newton polish below.
    auto solve_newton_step = [](std::vector<std::vector<double>> a, std::vector<double> rhs,
                                std::vector<double>& out) {
        const int m = static_cast<int>(rhs.size());
        for (int col = 0; col < m; ++col) {
            int piv = col;
            for (int r = col + 1; r < m; ++r)
                if (std::fabs(a[static_cast<size_t>(r)][static_cast<size_t>(col)]) >
                    std::fabs(a[static_cast<size_t>(piv)][static_cast<size_t>(col)]))
                    piv = r;
            if (std::fabs(a[static_cast<size_t>(piv)][static_cast<size_t>(col)]) < 1e-14)
                return false;
            std::swap(a[static_cast<size_t>(piv)], a[static_cast<size_t>(col)]);
            std::swap(rhs[static_cast<size_t>(piv)], rhs[static_cast<size_t>(col)]);
            for (int r = col + 1; r < m; ++r) {
                const double mult = a[static_cast<size_t>(r)][static_cast<size_t>(col)] /
                                    a[static_cast<size_t>(col)][static_cast<size_t>(col)];
                for (int c2 = col; c2 < m; ++c2)
                    a[static_cast<size_t>(r)][static_cast<size_t>(c2)] -=
                        mult * a[static_cast<size_t>(col)][static_cast<size_t>(c2)];
                rhs[static_cast<size_t>(r)] -= mult * rhs[static_cast<size_t>(col)];
            }
        }
        out.assign(rhs.size(), 0.0);
        for (int r = m - 1; r >= 0; --r) {
            double s = rhs[static_cast<size_t>(r)];
            for (int c2 = r + 1; c2 < m; ++c2)
                s -= a[static_cast<size_t>(r)][static_cast<size_t>(c2)] *
                     out[static_cast<size_t>(c2)];
            out[static_cast<size_t>(r)] = s / a[static_cast<size_t>(r)][static_cast<size_t>(r)];
        }
        return true;
    };

    // Rates and their partials for a candidate x.
    auto rates_of = [&](std::span<const double> x, std::vector<double>& R) {
        for (int k = 0; k < K; ++k) {
            const double bk = (k == 0) ? P : x[static_cast<size_t>(k) - 1];
            const double bk1 = (k == K - 1) ? 0.0 : x[static_cast<size_t>(k)];
            R[static_cast<size_t>(k)] = rate(H.H[static_cast<size_t>(k)], bk, bk1);
        }
    };

    ConvexProgram prog;
    prog.n = n;
    {
        std::vector<double> row(static_cast<size_t>(n), 0.0);
        row[0] = 1.0;
        prog.A.push_back(std::move(row));  // b_2 <= P
        prog.c.push_back(P);
    }
    for (int i = 1; i < n; ++i) {
        std::vector<double> row(static_cast<size_t>(n), 0.0);
        row[static_cast<size_t>(i)] = 1.0;
        row[static_cast<size_t>(i) - 1] = -1.0;
        prog.A.push_back(std::move(row));  // b_{i+2} <= b_{i+1}
        prog.c.push_back(0.0);
    }
    prog.lower.assign(static_cast<size_t>(n), 0.0);
    prog.upper.assign(static_cast<size_t>(n), kInf);

    prog.objective = [&, n, K, alpha, P](std::span<const double> x,
                                         std::span<double> grad) -> double {
        thread_local std::vector<double> R;
        R.assign(static_cast<size_t>(K), 0.0);
        rates_of(x, R);
        for (double r : R)
            if (!(r > 0)) return kInf;
        std::fill(grad.begin(), grad.end(), 0.0);

        // weight w_k multiplies dR_k in the gradient of the minimized form
        std::vector<double> w(static_cast<size_t>(K));
        double value;
        if (alpha == 1.0) {
            value = 0.0;
            for (int k = 0; k < K; ++k) {
                value -= std::log(R[static_cast<size_t>(k)]);
                w[static_cast<size_t>(k)] = -1.0 / R[static_cast<size_t>(k)];
            }
        } else if (alpha < 1.0) {
            value = 0.0;
            for (int k = 0; k < K; ++k) {
                value -= std::pow(R[static_cast<size_t>(k)], 1.0 - alpha) / (1.0 - alpha);
                w[static_cast<size_t>(k)] = -std::pow(R[static_cast<size_t>(k)], -alpha);
            }
        } else {
            // log-sum-exp transform of sum R^{1-alpha} keeps values and
            // gradients bounded for large alpha
            double mx = -kInf;
            std::vector<double> l(static_cast<size_t>(K));
            for (int k = 0; k < K; ++k) {
                l[static_cast<size_t>(k)] = (1.0 - alpha) * std::log(R[static_cast<size_t>(k)]);
                mx = std::max(mx, l[static_cast<size_t>(k)]);
            }
            double s = 0.0;
            for (int k = 0; k < K; ++k) s += std::exp(l[static_cast<size_t>(k)] - mx);
            value = (mx + std::log(s)) / (alpha - 1.0);
            for (int k = 0; k < K; ++k)
                w[static_cast<size_t>(k)] =
                    -std::exp(l[static_cast<size_t>(k)] - mx) / (s * R[static_cast<size_t>(k)]);
        }

        for (int k = 0; k < K; ++k) {
            const double Hk = H.H[static_cast<size_t>(k)];
            const double bk = (k == 0) ? P : x[static_cast<size_t>(k) - 1];
            const double bk1 = (k == K - 1) ? 0.0 : x[static_cast<size_t>(k)];
            if (k >= 1) grad[static_cast<size_t>(k) - 1] += w[static_cast<size_t>(k)] * Hk / (1.0 + Hk * bk);
            if (k <= K - 2) grad[static_cast<size_t>(k)] -= w[static_cast<size_t>(k)] * Hk / (1.0 + Hk * bk1);
        }
        return value;
    };

    std::vector<double> x0(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        x0[static_cast<size_t>(i)] = P * static_cast<double>(K - 1 - i) / K;

    // The ratio-form KKT equations amplify gradient-scale error (the ratio
    // carries a 1/alpha power), so solve well past the outer tolerance.
    MinimizeResult res = minimize_convex(prog, x0, 1e-13);

    std::vector<double> b(static_cast<size_t>(K) + 1, 0.0);
    b[0] = P;
    for (int i = 0; i < n; ++i) b[static_cast<size_t>(i) + 1] = res.x[static_cast<size_t>(i)];
    CumulativePowers cum{std::move(b)};

    auto norm_of = [&](const CumulativePowers& c) {
        double s = 0.0;
        for (double v : kkt_residual(c, H, alpha)) s += v * v;
        return std::sqrt(s);
    };

    // Boundary optima (a user squeezed to zero power) make the interior
    // stationarity system inapplicable; report the gradient-scale residual.
    for (int k = 0; k <= K; ++k) {
        const double gap = cum.b[static_cast<size_t>(std::max(k - 1, 0))] -
                           cum.b[static_cast<size_t>(k)];
        if (k > 0 && gap <= 1e-9 * P)
            return report_from_b(H, cfg, std::move(cum), res.iterations, res.stationarity,
                                 {});
    }

    // Damped Newton polish of the stacked stationarity system: the barrier
    // method parks within machine flatness of the optimum, but the ratio-form
    // residual magnifies that last stretch, so push it below eps2 directly.
    double best = norm_of(cum);
    for (int it = 0; it < 25 && best > 0.1 * cfg.eps2(); ++it) {
        const std::vector<double> f = kkt_residual(cum, H, alpha);
        std::vector<std::vector<double>> J(static_cast<size_t>(n),
                                           std::vector<double>(static_cast<size_t>(n)));
        bool jacobian_ok = true;
        for (int j = 0; j < n && jacobian_ok; ++j) {
            CumulativePowers pert = cum;
            const double gap_up = pert.b[static_cast<size_t>(j)] -
                                  pert.b[static_cast<size_t>(j) + 1];
            const double h =
                std::min(std::max(1e-7 * pert.b[static_cast<size_t>(j) + 1], 1e-12),
                         0.25 * gap_up);
            if (!(h > 0)) {
                jacobian_ok = false;
                break;
            }
            pert.b[static_cast<size_t>(j) + 1] += h;
            const std::vector<double> fp = kkt_residual(pert, H, alpha);
            for (int i = 0; i < n; ++i)
                J[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                    (fp[static_cast<size_t>(i)] - f[static_cast<size_t>(i)]) / h;
        }
        std::vector<double> step;
        if (!jacobian_ok || !solve_newton_step(J, f, step)) break;
        bool improved = false;
        for (double damp = 1.0; damp >= 1.0 / 64; damp *= 0.5) {
            CumulativePowers trial = cum;
            bool ok = true;
            for (int j = 0; j < n; ++j) {
                trial.b[static_cast<size_t>(j) + 1] -= damp * step[static_cast<size_t>(j)];
                const double lo = trial.b[static_cast<size_t>(j) + 2];
                const double hi = trial.b[static_cast<size_t>(j)];
                if (!(trial.b[static_cast<size_t>(j) + 1] > lo &&
                      trial.b[static_cast<size_t>(j) + 1] < hi)) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            const double trial_norm = norm_of(trial);
            if (trial_norm < best) {
                cum = std::move(trial);
                best = trial_norm;
                improved = true;
                break;
            }
        }
        if (!improved) break;
    }

    return report_from_b(H, cfg, std::move(cum), res.iterations, best, {});
}

SolveReport solve_sum_rate_alpha0(const ChannelRealization& H, const SystemConfig& cfg) {
    const int K = cfg.K();
    if (cfg.alpha() != 0.0)
        throw std::invalid_argument("solve_sum_rate_alpha0 requires alpha = 0");

    // Corner allocations: all power to user j. Pick the best (smallest j on
    // ties); for sorted gains this is the strongest user.
    int best_j = 0;
    double best_rate = -kInf;
    for (int j = 0; j < K; ++j) {
        const double r = std::log1p(H.H[static_cast<size_t>(j)] * cfg.P());
        if (r > best_rate) {
            best_rate = r;
            best_j = j;
        }
    }
    std::vector<double> b(static_cast<size_t>(K) + 1, 0.0);
    for (int i = 0; i <= best_j; ++i) b[static_cast<size_t>(i)] = cfg.P();
    CumulativePowers cum{std::move(b)};

    SolveReport rep;
    rep.units = MetricUnits::Npcu;
    rep.per_user.assign(static_cast<size_t>(K), 0.0);
    rep.per_user[static_cast<size_t>(best_j)] = best_rate;
    rep.objective = best_rate;  // u_0 is the identity
    rep.jain = jain_index(rep.per_user);
    rep.cumulative = std::move(cum);
    rep.iterations = 0;
    rep.residual = 0.0;
    return rep;
}

SolveReport solve_perfect(const ChannelRealization& H, const SystemConfig& cfg,
                          bool use_baseline) {
    if (cfg.alpha() == 0.0) return solve_sum_rate_alpha0(H, cfg);
    return use_baseline ? solve_baseline(H, cfg) : solve_ao(H, cfg);
}

}  // namespace nomafair
