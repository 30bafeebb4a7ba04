#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nomafair/errors.hpp"
#include "nomafair/experiment.hpp"
#include "oracles.hpp"

using namespace nomafair;

namespace {

const char* kHeader =
    "scheme,regime,sweep_axis,sweep_value,objective_mean,metric_mean,metric_units,"
    "jain_mean,jain_stderr,metric_stderr,iterations_mean,residual_mean,blocks,"
    "failures,seed";

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

// Value comparison tolerant of the non-finite objectives large-alpha TDMA
// rows can carry (a throughput underflowing to zero has utility -inf).
void check_roundtrip(const std::string& field, double expect) {
    const double got = std::stod(field);
    if (std::isfinite(expect))
        CHECK(got == doctest::Approx(expect).epsilon(1e-8));
    else
        CHECK(got == expect);
}

ExperimentSpec tiny_perfect_spec() {
    ExperimentSpec spec;
    spec.regime = Regime::Perfect;
    spec.sweep_axis = "snr_db";
    spec.sweep_values = {10.0, 20.0};
    SchemeVariant v;
    v.base = "noma-opt";
    spec.schemes = {v};
    spec.K = 3;
    spec.blocks = 50;
    return spec;
}

}  // namespace

TEST_CASE("scheme variant labels") {
    SchemeVariant v;
    v.base = "noma-opt";
    CHECK(v.label() == "noma-opt");
    v.alpha = 100.0;
    CHECK(v.label() == "noma-opt@alpha=100");
    v.alpha.reset();
    v.fir = 0.5;
    v.K = 5;
    CHECK(v.label() == "noma-opt@k=5+fir=0.5");
}

TEST_CASE("presets are valid and shaped as expected") {
    for (const char* name : {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7"}) {
        const auto spec = preset_spec(name);
        CHECK_NOTHROW(spec.validate());
        CHECK(spec.preset == name);
        CHECK(!spec.sweep_values.empty());
        CHECK(!spec.schemes.empty());
    }
    CHECK(preset_spec("fig1").regime == Regime::Statistical);
    CHECK(preset_spec("fig1").sweep_axis == "r0");
    CHECK(preset_spec("fig5").regime == Regime::Perfect);
    CHECK(preset_spec("fig5").K == 5);
    CHECK(preset_spec("fig5").sweep_axis == "snr_db");
    CHECK(preset_spec("fig7").sweep_axis == "fir");
    CHECK_THROWS_AS(preset_spec("fig9"), ConfigError);
}

TEST_CASE("spec validation rejects malformed sweeps") {
    ExperimentSpec spec = tiny_perfect_spec();
    spec.sweep_values.clear();
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    spec = tiny_perfect_spec();
    spec.sweep_axis = "bogus";
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    spec = tiny_perfect_spec();
    spec.blocks = 0;
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    spec = tiny_perfect_spec();
    spec.schemes[0].base = "mystery";
    CHECK_THROWS_AS(spec.validate(), ConfigError);
}

TEST_CASE("csv rendering") {
    AggregateRow row;
    row.scheme = "noma-opt";
    row.regime = "statistical";
    row.sweep_axis = "snr_db";
    row.sweep_value = 20.0;
    row.objective_mean = 1.234567891234;
    row.metric_mean = 2.5;
    row.metric_units = "bpcu";
    row.blocks = 1;
    row.seed = 42;
    const std::string body = render_rows({row}, "csv");
    const auto lines = split(body, '\n');
    REQUIRE(lines.size() == 2);  // header + row; trailing \n consumed by split
    CHECK(lines[0] == kHeader);
    const auto fields = split(lines[1], ',');
    REQUIRE(fields.size() == 15);
    CHECK(fields[0] == "noma-opt");
    CHECK(fields[4] == "1.23456789");  // 9 significant digits
    CHECK(body.back() == '\n');
    CHECK(body.find("\r") == std::string::npos);
    CHECK_THROWS(render_rows({}, "csv"));
    CHECK_THROWS(render_rows({row}, "tsv"));
    const std::string jl = render_rows({row}, "json-lines");
    CHECK(jl.find("\"scheme\":\"noma-opt\"") != std::string::npos);
}

TEST_CASE("emit refuses empty rows without touching the path") {
    const std::string path = "/tmp/nomafair_test_empty.csv";
    std::remove(path.c_str());
    CHECK_THROWS(emit({}, path, "csv"));
    std::ifstream f(path);
    CHECK(!f.good());
}

TEST_CASE("statistical rows are closed form with a single block") {
    ExperimentSpec spec;
    spec.regime = Regime::Statistical;
    spec.sweep_axis = "snr_db";
    spec.sweep_values = {10.0, 20.0};
    SchemeVariant v;
    v.base = "noma-opt";
    spec.schemes = {v};
    spec.K = 4;
    const auto rows = run_experiment(spec);
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) {
        CHECK(r.blocks == 1);
        CHECK(r.jain_stderr == 0.0);
        CHECK(r.metric_stderr == 0.0);
        CHECK(r.metric_units == "bpcu");
        CHECK(r.failures == 0);
    }
    // Sum throughput grows with SNR.
    CHECK(rows[1].metric_mean > rows[0].metric_mean);
}

TEST_CASE("perfect-regime runs are deterministic") {
    const auto spec = tiny_perfect_spec();
    const auto r1 = run_experiment(spec);
    const auto r2 = run_experiment(spec);
    CHECK(render_rows(r1, "csv") == render_rows(r2, "csv"));
    REQUIRE(r1.size() == 2);
    CHECK(r1[0].blocks == 50);
    CHECK(r1[0].metric_units == "npcu");
    CHECK(r1[1].metric_mean > r1[0].metric_mean);
    CHECK(r1[0].metric_stderr > 0.0);
}

TEST_CASE("single-user ergodic rate matches quadrature") {
    ExperimentSpec spec;
    spec.regime = Regime::Perfect;
    spec.sweep_axis = "snr_db";
    spec.sweep_values = {15.0};
    SchemeVariant v;
    v.base = "noma-opt";
    spec.schemes = {v};
    spec.K = 1;
    spec.blocks = 4000;
    const auto rows = run_experiment(spec);
    REQUIRE(rows.size() == 1);
    const double expect = oracles::ergodic_rate_integral(snr_db_to_linear(15.0), 1.0);
    CHECK(std::fabs(rows[0].metric_mean - expect) <= 3.0 * rows[0].metric_stderr);
}

TEST_CASE("emitted preset output round-trips through CSV") {
    auto spec = preset_spec("fig3");
    const auto rows = run_experiment(spec);
    const std::string path = "/tmp/nomafair_test_fig3.csv";
    emit(rows, path, "csv");
    std::ifstream f(path);
    REQUIRE(f.good());
    std::string line;
    REQUIRE(std::getline(f, line));
    CHECK(line == kHeader);
    size_t i = 0;
    while (std::getline(f, line)) {
        REQUIRE(i < rows.size());
        const auto fields = split(line, ',');
        REQUIRE(fields.size() == 15);
        CHECK(fields[0] == rows[i].scheme);
        check_roundtrip(fields[3], rows[i].sweep_value);
        check_roundtrip(fields[4], rows[i].objective_mean);
        check_roundtrip(fields[5], rows[i].metric_mean);
        check_roundtrip(fields[7], rows[i].jain_mean);
        CHECK(std::stol(fields[12]) == rows[i].blocks);
        ++i;
    }
    CHECK(i == rows.size());
    std::remove(path.c_str());
}

TEST_CASE("cell config applies sweep axis and variant overrides") {
    ExperimentSpec spec;
    spec.regime = Regime::Statistical;
    spec.sweep_axis = "r0";
    spec.sweep_values = {0.5};
    SchemeVariant v;
    v.base = "noma-opt";
    v.alpha = 7.0;
    v.K = 4;
    spec.schemes = {v};
    const auto cfg = cell_config(spec, v, 0.5);
    CHECK(cfg.K() == 4);
    CHECK(cfg.r0() == doctest::Approx(0.5));
    CHECK(cfg.alpha() == doctest::Approx(7.0));
    CHECK(cfg.P() == doctest::Approx(100.0));  // 20 dB default
    const auto cfg2 = cell_config(spec, v, 0.7);
    CHECK(cfg2.r0() == doctest::Approx(0.7));
}
