#include "nomafair/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "nomafair/rng.hpp"

namespace nomafair {

double alpha_utility(double x, double alpha) {
    if (!(x > 0)) throw std::domain_error("alpha_utility requires x > 0");
    if (!(alpha >= 0)) throw std::domain_error("alpha_utility requires alpha >= 0");
    if (alpha == 1.0) return std::log(x);
    return std::pow(x, 1.0 - alpha) / (1.0 - alpha);
}

double utility_or_limit(double x, double alpha) {
    if (x > 0) return alpha_utility(x, alpha);
    return alpha < 1 ? 0.0 : -std::numeric_limits<double>::infinity();
}

double sinr(int l, int k, const PowerAllocation& physical, double H_k) {
    const int K = static_cast<int>(physical.values.size());
    if (l < 0 || k < l || k >= K) throw std::out_of_range("sinr: user index out of range");
    double interference = 0.0;
    for (int m = l + 1; m < K; ++m) interference += physical.values[static_cast<size_t>(m)];
    return physical.values[static_cast<size_t>(l)] * H_k / (H_k * interference + 1.0);
}

std::vector<double> gamma_coefficients(const SystemConfig& cfg) {
    std::vector<double> g(static_cast<size_t>(cfg.K()));
    for (int k = 0; k < cfg.K(); ++k)
        g[static_cast<size_t>(k)] = std::pow(cfg.rhat0() + 1.0, k) * cfg.pathloss(k);
    return g;
}

double outage_probability(int k, const PowerAllocation& normalized,
                          const SystemConfig& cfg) {
    (void)cfg;
    if (normalized.kind != PowerKind::Normalized)
        throw std::invalid_argument("outage_probability expects a normalized allocation");
    if (k < 0 || k >= static_cast<int>(normalized.values.size()))
        throw std::out_of_range("outage_probability: user index out of range");
    const double Pk = normalized.values[static_cast<size_t>(k)];
    if (Pk == 0.0) return 1.0;
    return -std::expm1(-1.0 / Pk);
}

double throughput(int k, const PowerAllocation& normalized, const SystemConfig& cfg) {
    return cfg.r0() * (1.0 - outage_probability(k, normalized, cfg));
}

double instantaneous_rate(int k, const CumulativePowers& b, const ChannelRealization& H) {
    const int K = b.users();
    if (k < 0 || k >= K) throw std::out_of_range("instantaneous_rate: user index out of range");
    const double bk = b.b[static_cast<size_t>(k)];
    const double bk1 = b.b[static_cast<size_t>(k) + 1];
    if (bk1 < 0 || bk < bk1)
        throw std::domain_error("instantaneous_rate requires b_k >= b_{k+1} >= 0");
    const double Hk = H.H[static_cast<size_t>(k)];
    return std::log1p(Hk * bk) - std::log1p(Hk * bk1);
}

namespace {

// Exact budget identity across parameterizations: with
// P^_k = P~_k - rhat0 sum_{m>k} P~_m, telescoping gives
//   sum_k P~_k = sum_k (rhat0+1)^{k-1} P^_k = rhat0 sum_k Gamma_k P_k.
// (The extra rhat0 factor sometimes quoted in front of P^_k only holds when
// rhat0 = 1; the forms here round-trip exactly for any target rate.)

std::vector<double> physical_to_equivalent(const std::vector<double>& pt,
                                           const SystemConfig& cfg) {
    const int K = cfg.K();
    std::vector<double> pe(static_cast<size_t>(K));
    double tail = 0.0;
    for (int k = K - 1; k >= 0; --k) {
        const double e = pt[static_cast<size_t>(k)] - cfg.rhat0() * tail;
        if (e < -1e-12 * (1.0 + cfg.P()))
            throw ConfigError("NOMA ordering constraint violated at user " +
                              std::to_string(k + 1));
        pe[static_cast<size_t>(k)] = std::max(e, 0.0);
        tail += pt[static_cast<size_t>(k)];
    }
    return pe;
}

std::vector<double> equivalent_to_physical(const std::vector<double>& pe,
                                           const SystemConfig& cfg) {
    const int K = cfg.K();
    std::vector<double> pt(static_cast<size_t>(K));
    double tail = 0.0;
    for (int k = K - 1; k >= 0; --k) {
        pt[static_cast<size_t>(k)] = pe[static_cast<size_t>(k)] + cfg.rhat0() * tail;
        tail += pt[static_cast<size_t>(k)];
    }
    return pt;
}

}  // namespace

PowerAllocation convert_powers(const PowerAllocation& p, PowerKind target,
                               const SystemConfig& cfg) {
    if (static_cast<int>(p.values.size()) != cfg.K())
        throw std::invalid_argument("convert_powers: allocation size != K");
    for (double v : p.values)
        if (!(v >= 0) || !std::isfinite(v))
            throw std::domain_error("convert_powers: powers must be finite and nonnegative");
    if (p.kind == target) return p;

    // Route everything through the equivalent parameterization.
    std::vector<double> pe;
    switch (p.kind) {
        case PowerKind::Physical:
            pe = physical_to_equivalent(p.values, cfg);
            break;
        case PowerKind::Equivalent:
            pe = p.values;
            break;
        case PowerKind::Normalized: {
            pe.resize(p.values.size());
            for (int k = 0; k < cfg.K(); ++k)
                pe[static_cast<size_t>(k)] =
                    p.values[static_cast<size_t>(k)] * cfg.rhat0() * cfg.pathloss(k);
            break;
        }
    }

    PowerAllocation out;
    out.kind = target;
    switch (target) {
        case PowerKind::Physical:
            out.values = equivalent_to_physical(pe, cfg);
            break;
        case PowerKind::Equivalent:
            out.values = std::move(pe);
            break;
        case PowerKind::Normalized: {
            out.values.resize(pe.size());
            for (int k = 0; k < cfg.K(); ++k)
                out.values[static_cast<size_t>(k)] =
                    pe[static_cast<size_t>(k)] / (cfg.rhat0() * cfg.pathloss(k));
            break;
        }
    }
    return out;
}

double jain_index(std::span<const double> x) {
    double s = 0.0, s2 = 0.0;
    for (double v : x) {
        if (!(v >= 0)) throw std::domain_error("jain_index requires nonnegative entries");
        s += v;
        s2 += v * v;
    }
    if (s2 == 0.0) throw std::domain_error("jain_index: all-zero input");
    return s * s / (static_cast<double>(x.size()) * s2);
}

ChannelRealization sample_channels(const SystemConfig& cfg, uint64_t seed) {
    const int K = cfg.K();
    std::vector<std::pair<double, int>> gains(static_cast<size_t>(K));
    for (int k = 0; k < K; ++k) {
        SplitMix64 g(derive_seed(seed, static_cast<uint64_t>(k)));
        const double u = g.next_double();
        const double mean = std::pow(cfg.d(k), -cfg.beta());
        double h = -mean * std::log1p(-u);
        if (h <= 0.0) h = mean * 1e-300;  // u == 0 draw
        gains[static_cast<size_t>(k)] = {h, k};
    }
    std::sort(gains.begin(), gains.end());
    ChannelRealization r;
    r.H.resize(static_cast<size_t>(K));
    r.perm.resize(static_cast<size_t>(K));
    for (int i = 0; i < K; ++i) {
        r.H[static_cast<size_t>(i)] = gains[static_cast<size_t>(i)].first;
        r.perm[static_cast<size_t>(i)] = gains[static_cast<size_t>(i)].second;
    }
    return r;
}

}  // namespace nomafair
