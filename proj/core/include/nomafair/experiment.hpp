#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nomafair/config.hpp"
#include "nomafair/fairness.hpp"

namespace nomafair {

// One curve of a figure: a scheme plus fixed parameters that distinguish it
// from sibling curves (alpha, FIr or K variants beyond the sweep axis).
// FIr-carrying variants are solved through search_alpha at every sweep point.
struct SchemeVariant {
    std::string base;  // noma-opt | noma-fixed | tdma-opt
    std::optional<double> alpha;
    std::optional<double> fir;
    std::optional<int> K;

    std::string label() const;
};

struct ExperimentSpec {
    std::string preset;  // empty for custom specs
    Regime regime = Regime::Statistical;
    std::string sweep_axis;  // snr_db | r0 | alpha | fir | k
    std::vector<double> sweep_values;
    std::vector<SchemeVariant> schemes;

    // Base scenario; variants and the sweep axis override individual fields.
    int K = 6;
    double snr_db = 20.0;
    double r0 = 0.9;
    double beta = 2.0;
    double alpha = 1.0;
    double eps1 = 1e-5;
    double eps2 = 1e-6;

    long blocks = 10000;  // fading blocks per sweep point (perfect regime)
    uint64_t seed = 42;
    std::string out;             // output path; empty leaves emission to the caller
    std::string format = "csv";  // csv | json-lines

    void validate() const;
};

// One emitted line: aggregates over `blocks` Monte Carlo blocks (statistical
// rows are closed-form, so blocks = 1 and the stderr columns are zero).
struct AggregateRow {
    std::string scheme;
    std::string regime;
    std::string sweep_axis;
    double sweep_value = 0.0;
    double objective_mean = 0.0;
    double metric_mean = 0.0;       // sum throughput (BPCU) or ergodic sum rate (NPCU)
    std::string metric_units;
    double jain_mean = 0.0;
    double jain_stderr = 0.0;
    double metric_stderr = 0.0;
    double iterations_mean = 0.0;
    double residual_mean = 0.0;
    long blocks = 0;
    long failures = 0;
    uint64_t seed = 0;
};

// Figure presets fig1..fig7 with desk-scale block counts.
ExperimentSpec preset_spec(const std::string& name);

// Runs every (variant, sweep value) cell. Per-block work within a cell runs
// concurrently on fixed-size chunks with derived seeds; chunk sums combine in
// index order, so results do not depend on thread scheduling. Solver failures
// are counted per row and the run continues.
std::vector<AggregateRow> run_experiment(const ExperimentSpec& spec);

// Renders rows in the requested format (csv with the mandatory header, or
// json-lines), 9 significant digits, lines terminated by a single \n.
std::string render_rows(const std::vector<AggregateRow>& rows, const std::string& format);

// render_rows plus file output. Empty rows or an unwritable path raise
// std::runtime_error without creating the file.
void emit(const std::vector<AggregateRow>& rows, const std::string& path,
          const std::string& format);

// Builds the scenario for one sweep cell from the spec, a variant and the
// current sweep value.
SystemConfig cell_config(const ExperimentSpec& spec, const SchemeVariant& variant,
                         double sweep_value);

}  // namespace nomafair
