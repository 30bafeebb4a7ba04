#include "nomafair/fairness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "nomafair/baselines.hpp"
#include "nomafair/model.hpp"
#include "nomafair/perfect.hpp"
#include "nomafair/rng.hpp"
#include "nomafair/statistical.hpp"

namespace nomafair {

namespace {

constexpr double kFiSlack = 1e-9;

struct Probe {
    double alpha = 0.0;
    double fi = 0.0;
    double sum_metric = 0.0;
    SolveReport report;
};

// Averages per-user rates, objective, Jain index and telemetry over the pilot
// blocks so the perfect-regime search sees a stable FI (short-term fairness
// averaged across fading states).
SolveReport pilot_average(const AlphaSearchSpec& spec, const SystemConfig& cfg) {
    const int K = cfg.K();
    SolveReport agg;
    agg.units = MetricUnits::Npcu;
    agg.per_user.assign(static_cast<size_t>(K), 0.0);
    for (int blk = 0; blk < spec.pilot_blocks; ++blk) {
        const ChannelRealization H =
            sample_channels(cfg, derive_seed(spec.pilot_seed, static_cast<uint64_t>(blk)));
        SolveReport rep;
        if (spec.scheme == Scheme::Noma) {
            // Fall back to the convex solver when the alternating sweeps
            // stall on a boundary optimum (small alpha).
            try {
                rep = solve_perfect(H, cfg);
            } catch (const ConvergenceError&) {
                rep = solve_perfect(H, cfg, true);
            }
        } else {
            rep = tdma_perfect_solve(H, cfg);
        }
        for (int k = 0; k < K; ++k)
            agg.per_user[static_cast<size_t>(k)] += rep.per_user[static_cast<size_t>(k)];
        agg.objective += rep.objective;
        agg.jain += rep.jain;
        agg.residual += rep.residual;
        agg.iterations += rep.iterations;
    }
    const double inv = 1.0 / spec.pilot_blocks;
    for (double& v : agg.per_user) v *= inv;
    agg.objective *= inv;
    agg.jain *= inv;
    agg.residual *= inv;
    agg.iterations = static_cast<long>(std::lround(agg.iterations * inv));
    return agg;
}

Probe evaluate(const AlphaSearchSpec& spec, const SystemConfig& base, double alpha) {
    const SystemConfig cfg = base.with_alpha(alpha);
    Probe p;
    p.alpha = alpha;
    if (spec.regime == Regime::Statistical) {
        p.report = spec.scheme == Scheme::Noma ? solve_statistical(cfg)
                                               : tdma_statistical_solve(cfg);
    } else {
        p.report = pilot_average(spec, cfg);
    }
    p.fi = p.report.jain;
    p.sum_metric = p.report.sum_metric();
    return p;
}

AlphaSearchResult to_result(Probe p) {
    AlphaSearchResult r;
    r.alpha = p.alpha;
    r.fairness = p.fi;
    r.report = std::move(p.report);
    return r;
}

AlphaSearchResult grid_strategy(const AlphaSearchSpec& spec, const SystemConfig& cfg) {
    std::vector<double> alphas;
    if (spec.alpha_lo == 0.0) alphas.push_back(0.0);
    const double lo = std::max(spec.alpha_lo, 1e-2);
    const int n = std::max(spec.grid_steps, 2);
    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / (n - 1);
        alphas.push_back(lo * std::pow(spec.alpha_hi / lo, t));
    }

    double max_fi = -std::numeric_limits<double>::infinity();
    bool have_best = false;
    Probe best;
    for (double a : alphas) {
        Probe p = evaluate(spec, cfg, a);
        max_fi = std::max(max_fi, p.fi);
        if (p.fi < spec.fir - kFiSlack) continue;
        // Feasible: keep the largest sum metric, smaller alpha on ties.
        if (!have_best || p.sum_metric > best.sum_metric) {
            best = std::move(p);
            have_best = true;
        }
    }
    if (!have_best) {
        std::ostringstream msg;
        msg << "fairness requirement " << spec.fir
            << " unreachable on the alpha range; max FI observed " << max_fi;
        throw InfeasibleError(msg.str(), max_fi);
    }
    return to_result(std::move(best));
}

}  // namespace

AlphaSearchResult search_alpha(const AlphaSearchSpec& raw, const SystemConfig& cfg) {
    if (!(raw.fir >= 1.0 / cfg.K() && raw.fir <= 1.0))
        throw ConfigError("FIr must lie in [1/K, 1]");
    if (!(raw.alpha_lo < raw.alpha_hi))
        throw ConfigError("alpha range must satisfy alpha_lo < alpha_hi");
    if (!(raw.alpha_lo >= 0)) throw ConfigError("alpha_lo must be >= 0");
    if (raw.regime == Regime::Perfect && raw.pilot_blocks < 1)
        throw ConfigError("pilot_blocks must be >= 1");

    // FI = 1 exactly is only attained in the alpha -> infinity limit; cap the
    // effective target just below so "absolute fairness" requests resolve to
    // a large finite alpha.
    AlphaSearchSpec spec = raw;
    spec.fir = std::min(raw.fir, 1.0 - 1e-4);

    if (spec.strategy == SearchStrategy::Grid) return grid_strategy(spec, cfg);

    // Bisection on the smallest feasible alpha, assuming FI non-decreasing.
    Probe lo = evaluate(spec, cfg, spec.alpha_lo);
    if (lo.fi >= spec.fir - kFiSlack) return to_result(std::move(lo));
    Probe hi = evaluate(spec, cfg, spec.alpha_hi);
    if (hi.fi < spec.fir - kFiSlack) {
        if (hi.fi < lo.fi - 1e-12) return grid_strategy(spec, cfg);  // non-monotone
        std::ostringstream msg;
        msg << "fairness requirement " << spec.fir
            << " unreachable on the alpha range; max FI observed "
            << std::max(lo.fi, hi.fi);
        throw InfeasibleError(msg.str(), std::max(lo.fi, hi.fi));
    }

    while (hi.alpha - lo.alpha > 1e-3 * (1.0 + hi.alpha)) {
        const double mid_alpha = 0.5 * (lo.alpha + hi.alpha);
        Probe mid = evaluate(spec, cfg, mid_alpha);
        if (mid.fi < lo.fi - 1e-9 || mid.fi > hi.fi + 1e-9)
            return grid_strategy(spec, cfg);  // monotonicity violated between probes
        if (mid.fi >= spec.fir - kFiSlack)
            hi = std::move(mid);
        else
            lo = std::move(mid);
    }
    return to_result(std::move(hi));
}

}  // namespace nomafair
