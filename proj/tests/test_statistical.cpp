#include <doctest.h>

#include <cmath>

#include "nomafair/errors.hpp"
#include "nomafair/model.hpp"
#include "nomafair/statistical.hpp"
#include "oracles.hpp"

using namespace nomafair;

namespace {

double physical_sum(const SolveReport& rep, const SystemConfig& cfg) {
    REQUIRE(rep.allocation.has_value());
    const auto phys = convert_powers(*rep.allocation, PowerKind::Physical, cfg);
    double s = 0.0;
    for (double v : phys.values) s += v;
    return s;
}

std::vector<double> normalized(const SolveReport& rep, const SystemConfig& cfg) {
    REQUIRE(rep.allocation.has_value());
    return convert_powers(*rep.allocation, PowerKind::Normalized, cfg).values;
}

}  // namespace

TEST_CASE("proportional fairness closed form, K = 2") {
    SystemConfig cfg(2, 10.0, 2.0, {1.5, 1.0}, 1.0, 1.0);
    const auto rep = solve_alpha_eq_1(cfg);
    const auto P = normalized(rep, cfg);
    // P_k = P / (rhat0 sqrt(Gamma_k) sum_j sqrt(Gamma_j)).
    const double omega = std::pow((1.0 / 10.0) * (std::sqrt(2.25) + std::sqrt(2.0)), 2.0);
    CHECK(omega == doctest::Approx(0.0849264).epsilon(1e-4));
    CHECK(P[0] == doctest::Approx(2.28765).epsilon(1e-4));
    CHECK(P[1] == doctest::Approx(2.42641).epsilon(1e-4));
    CHECK(physical_sum(rep, cfg) == doctest::Approx(10.0).epsilon(1e-9));
    // Objective assembles from the per-user throughputs.
    double obj = 0.0;
    for (double f : rep.per_user) obj += std::log(f);
    CHECK(rep.objective == doctest::Approx(obj).epsilon(1e-12));
}

TEST_CASE("single-user corner gets the whole budget") {
    SystemConfig cfg(1, 25.0, 2.0, {1.0}, 0.9, 1.0);
    for (double a : {0.0, 0.5, 1.0, 3.0}) {
        const auto rep = solve_statistical(cfg.with_alpha(a));
        const auto P = normalized(rep, cfg);
        // Normalized budget: rhat0 Gamma_1 P_1 = P.
        CHECK(P[0] == doctest::Approx(25.0 / (cfg.rhat0() * 1.0)).epsilon(1e-9));
        CHECK(physical_sum(rep, cfg) == doctest::Approx(25.0).epsilon(1e-9));
    }
}

TEST_CASE("alpha continuity across the closed-form boundary") {
    const auto cfg = SystemConfig::with_default_distances(6, 100.0, 2.0, 0.9, 1.0);
    const auto at1 = normalized(solve_statistical(cfg), cfg);
    const auto above = normalized(solve_statistical(cfg.with_alpha(1.001)), cfg);
    const auto below = normalized(solve_statistical(cfg.with_alpha(0.999)), cfg);
    for (int k = 0; k < 6; ++k) {
        // The allocation's sensitivity to alpha near 1 is ~0.2 relative, so a
        // 1e-3 step moves powers by ~2e-4; 5e-4 leaves solver headroom.
        CHECK(std::fabs(above[static_cast<size_t>(k)] - at1[static_cast<size_t>(k)]) /
                  at1[static_cast<size_t>(k)] <=
              5e-4);
        CHECK(std::fabs(below[static_cast<size_t>(k)] - at1[static_cast<size_t>(k)]) /
                  at1[static_cast<size_t>(k)] <=
              1e-3);
    }
}

TEST_CASE("absolute fairness limit equalizes throughput") {
    const auto cfg = SystemConfig::with_default_distances(6, 100.0, 2.0, 0.9, 100.0);
    const auto rep = solve_statistical(cfg);
    double lo = rep.per_user[0], hi = rep.per_user[0];
    for (double f : rep.per_user) {
        lo = std::min(lo, f);
        hi = std::max(hi, f);
    }
    CHECK(hi / lo <= 1.01);
    CHECK(rep.jain >= 0.999);
    CHECK(physical_sum(rep, cfg) == doctest::Approx(100.0).epsilon(1e-6));
}

TEST_CASE("grid brute force, K = 2") {
    SystemConfig base(2, 40.0, 2.0, {1.5, 1.0}, 0.9, 1.0);
    for (double a : {0.1, 2.0}) {
        const auto cfg = base.with_alpha(a);
        const auto rep = solve_statistical(cfg);
        const double brute = oracles::brute_force_stat2(cfg, 2000);
        CHECK(rep.objective >= brute - 1e-3);
    }
}

TEST_CASE("structured tail subproblem flags infeasible anchors") {
    SystemConfig cfg(3, 10.0, 2.0, {2.25, 1.5, 1.0}, 0.9, 0.2);
    // P1 beyond the whole budget cannot anchor any pinned block.
    CHECK_THROWS_AS(solve_fp4(cfg, 2, 1e6), InfeasibleError);
}

TEST_CASE("solver reports are internally consistent") {
    const auto cfg = SystemConfig::with_default_distances(5, 100.0, 2.0, 0.9, 0.5);
    const auto rep = solve_statistical(cfg);
    REQUIRE(static_cast<int>(rep.per_user.size()) == 5);
    const auto P = normalized(rep, cfg);
    for (int k = 0; k < 5; ++k) {
        const PowerAllocation pa{PowerKind::Normalized, P};
        CHECK(rep.per_user[static_cast<size_t>(k)] ==
              doctest::Approx(throughput(k, pa, cfg)).epsilon(1e-9));
    }
    // Ordering invariant of F.P2 holds at the solution.
    for (int k = 0; k + 1 < 5; ++k)
        CHECK(cfg.pathloss(k) * P[static_cast<size_t>(k)] >=
              cfg.pathloss(k + 1) * P[static_cast<size_t>(k + 1)] - 1e-8);
    CHECK(physical_sum(rep, cfg) <= 100.0 + 1e-6);
    CHECK(rep.jain == doctest::Approx(jain_index(rep.per_user)).epsilon(1e-12));
    CHECK(rep.units == MetricUnits::Bpcu);
}
