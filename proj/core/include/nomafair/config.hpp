#pragma once

#include <cmath>
#include <vector>

#include "nomafair/errors.hpp"

namespace nomafair {

// Static scenario description for a K-user downlink NOMA cell.
//
// Powers are linear SNR (the noise variance is 1, so the transmit SNR equals
// the transmit power P). Distances are dimensionless and must be strictly
// decreasing: user 1 is the farthest and is decoded first by everyone.
class SystemConfig {
public:
    SystemConfig(int K, double P, double beta, std::vector<double> distances,
                 double r0, double alpha, double eps1 = 1e-5, double eps2 = 1e-6)
        : K_(K),
          P_(P),
          beta_(beta),
          d_(std::move(distances)),
          r0_(r0),
          alpha_(alpha),
          eps1_(eps1),
          eps2_(eps2),
          rhat0_(std::exp2(r0) - 1.0) {
        validate();
    }

    // Default distance profile d_k = 1.5^{K-k}.
    static SystemConfig with_default_distances(int K, double P, double beta,
                                               double r0, double alpha,
                                               double eps1 = 1e-5,
                                               double eps2 = 1e-6) {
        std::vector<double> d(static_cast<size_t>(K > 0 ? K : 0));
        for (int k = 0; k < K; ++k) d[static_cast<size_t>(k)] = std::pow(1.5, K - 1 - k);
        return SystemConfig(K, P, beta, std::move(d), r0, alpha, eps1, eps2);
    }

    int K() const { return K_; }
    double P() const { return P_; }
    double beta() const { return beta_; }
    const std::vector<double>& distances() const { return d_; }
    double d(int k) const { return d_[static_cast<size_t>(k)]; }  // 0-based
    double r0() const { return r0_; }
    double alpha() const { return alpha_; }
    double eps1() const { return eps1_; }
    double eps2() const { return eps2_; }
    double rhat0() const { return rhat0_; }

    double pathloss(int k) const { return std::pow(d_[static_cast<size_t>(k)], beta_); }

    SystemConfig with_alpha(double a) const {
        return SystemConfig(K_, P_, beta_, d_, r0_, a, eps1_, eps2_);
    }
    SystemConfig with_power(double p) const {
        return SystemConfig(K_, p, beta_, d_, r0_, alpha_, eps1_, eps2_);
    }
    SystemConfig with_r0(double r) const {
        return SystemConfig(K_, P_, beta_, d_, r, alpha_, eps1_, eps2_);
    }

private:
    void validate() const {
        if (K_ < 1) throw ConfigError("K must be >= 1");
        if (!(P_ > 0)) throw ConfigError("P must be > 0");
        if (!(beta_ > 0)) throw ConfigError("beta must be > 0");
        if (!(r0_ > 0)) throw ConfigError("r0 must be > 0");
        if (!(alpha_ >= 0)) throw ConfigError("alpha must be >= 0");
        if (!(eps1_ > 0)) throw ConfigError("eps1 must be > 0");
        if (!(eps2_ > 0)) throw ConfigError("eps2 must be > 0");
        if (d_.size() != static_cast<size_t>(K_))
            throw ConfigError("distances must have exactly K entries");
        for (int k = 0; k + 1 < K_; ++k) {
            if (!(d_[static_cast<size_t>(k)] > d_[static_cast<size_t>(k + 1)]))
                throw ConfigError("distances must be strictly decreasing: d_" +
                                  std::to_string(k + 1) + " <= d_" + std::to_string(k + 2));
        }
        for (double dk : d_)
            if (!(dk > 0)) throw ConfigError("distances must be positive");
        // Standing assumption: Gamma_i > Gamma_j for i < j with
        // Gamma_k = (rhat0+1)^{k-1} d_k^beta.
        for (int i = 0; i + 1 < K_; ++i) {
            double gi = std::pow(rhat0_ + 1.0, i) * pathloss(i);
            double gj = std::pow(rhat0_ + 1.0, i + 1) * pathloss(i + 1);
            if (!(gi > gj))
                throw ConfigError(
                    "distance/rate profile violates the decreasing-Gamma assumption "
                    "between users (" + std::to_string(i + 1) + "," +
                    std::to_string(i + 2) + ")");
        }
    }

    int K_;
    double P_;
    double beta_;
    std::vector<double> d_;
    double r0_;
    double alpha_;
    double eps1_;
    double eps2_;
    double rhat0_;
};

inline double snr_db_to_linear(double snr_db) { return std::pow(10.0, snr_db / 10.0); }

}  // namespace nomafair
