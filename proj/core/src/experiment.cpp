#include "nomafair/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "nomafair/baselines.hpp"
#include "nomafair/model.hpp"
#include "nomafair/perfect.hpp"
#include "nomafair/rng.hpp"
#include "nomafair/statistical.hpp"

namespace nomafair {

namespace {

const char* kAxes[] = {"snr_db", "r0", "alpha", "fir", "k"};
const char* kBases[] = {"noma-opt", "noma-fixed", "tdma-opt"};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

// Running sums for one chunk of blocks; merged in chunk-index order so the
// aggregate is independent of thread scheduling.
struct Accum {
    double obj = 0, metric = 0, metric2 = 0, jain = 0, jain2 = 0;
    double iters = 0, resid = 0;
    long n = 0, failures = 0;

    void add(const SolveReport& r) {
        const double m = r.sum_metric();
        obj += r.objective;
        metric += m;
        metric2 += m * m;
        jain += r.jain;
        jain2 += r.jain * r.jain;
        iters += static_cast<double>(r.iterations);
        resid += r.residual;
        ++n;
    }
    void merge(const Accum& o) {
        obj += o.obj;
        metric += o.metric;
        metric2 += o.metric2;
        jain += o.jain;
        jain2 += o.jain2;
        iters += o.iters;
        resid += o.resid;
        n += o.n;
        failures += o.failures;
    }
};

Accum pairwise_merge(std::vector<Accum>& chunks, size_t lo, size_t hi) {
    if (hi - lo == 1) return chunks[lo];
    const size_t mid = lo + (hi - lo) / 2;
    Accum a = pairwise_merge(chunks, lo, mid);
    a.merge(pairwise_merge(chunks, mid, hi));
    return a;
}

void fill_row(AggregateRow& row, const Accum& a, long attempted) {
    row.blocks = attempted;
    row.failures = a.failures;
    if (a.n == 0) return;
    const double inv = 1.0 / static_cast<double>(a.n);
    row.objective_mean = a.obj * inv;
    row.metric_mean = a.metric * inv;
    row.jain_mean = a.jain * inv;
    row.iterations_mean = a.iters * inv;
    row.residual_mean = a.resid * inv;
    if (a.n > 1) {
        const double mvar = std::max(0.0, a.metric2 * inv - row.metric_mean * row.metric_mean);
        const double jvar = std::max(0.0, a.jain2 * inv - row.jain_mean * row.jain_mean);
        row.metric_stderr = std::sqrt(mvar / static_cast<double>(a.n));
        row.jain_stderr = std::sqrt(jvar / static_cast<double>(a.n));
    }
}

SolveReport solve_statistical_scheme(const std::string& base, const SystemConfig& cfg) {
    if (base == "noma-opt") return solve_statistical(cfg);
    if (base == "noma-fixed") return fixed_noma_statistical_report(cfg);
    return tdma_statistical_solve(cfg);
}

SolveReport solve_perfect_scheme(const std::string& base, const ChannelRealization& H,
                                 const SystemConfig& cfg) {
    if (base == "noma-opt") {
        // Small alpha can push the optimum onto the ordering boundary, where
        // the alternating sweeps stall; the convex solver handles the corner.
        try {
            return solve_perfect(H, cfg);
        } catch (const ConvergenceError&) {
            return solve_perfect(H, cfg, true);
        }
    }
    if (base == "noma-fixed") return fixed_noma_perfect_report(H, cfg);
    return tdma_perfect_solve(H, cfg);
}

}  // namespace

std::string SchemeVariant::label() const {
    std::string s = base;
    std::string tags;
    auto append = [&tags](const std::string& t) {
        if (!tags.empty()) tags += '+';
        tags += t;
    };
    if (K) append("k=" + std::to_string(*K));
    if (alpha) append("alpha=" + fmt(*alpha));
    if (fir) append("fir=" + fmt(*fir));
    if (!tags.empty()) s += '@' + tags;
    return s;
}

void ExperimentSpec::validate() const {
    if (blocks < 1) throw ConfigError("blocks must be >= 1");
    if (sweep_values.empty()) throw ConfigError("sweep values must be nonempty");
    for (double v : sweep_values)
        if (!std::isfinite(v)) throw ConfigError("sweep values must be finite");
    if (std::find(std::begin(kAxes), std::end(kAxes), sweep_axis) == std::end(kAxes))
        throw ConfigError("unknown sweep axis: " + sweep_axis);
    if (schemes.empty()) throw ConfigError("at least one scheme is required");
    for (const SchemeVariant& v : schemes)
        if (std::find(std::begin(kBases), std::end(kBases), v.base) == std::end(kBases))
            throw ConfigError("unknown scheme: " + v.base);
    if (format != "csv" && format != "json-lines")
        throw ConfigError("format must be csv or json-lines");
    if (K < 1) throw ConfigError("K must be >= 1");
}

SystemConfig cell_config(const ExperimentSpec& spec, const SchemeVariant& variant,
                         double sweep_value) {
    int K = variant.K.value_or(spec.K);
    double snr_db = spec.snr_db;
    double r0 = spec.r0;
    double alpha = variant.alpha.value_or(spec.alpha);
    if (spec.sweep_axis == "k") K = static_cast<int>(std::lround(sweep_value));
    if (spec.sweep_axis == "snr_db") snr_db = sweep_value;
    if (spec.sweep_axis == "r0") r0 = sweep_value;
    if (spec.sweep_axis == "alpha") alpha = sweep_value;
    return SystemConfig::with_default_distances(K, snr_db_to_linear(snr_db), spec.beta,
                                                r0, alpha, spec.eps1, spec.eps2);
}

std::vector<AggregateRow> run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    std::vector<AggregateRow> rows;

    for (const SchemeVariant& variant : spec.schemes) {
        for (double value : spec.sweep_values) {
            AggregateRow row;
            row.scheme = variant.label();
            row.regime = spec.regime == Regime::Statistical ? "statistical" : "perfect";
            row.sweep_axis = spec.sweep_axis;
            row.sweep_value = value;
            row.metric_units = spec.regime == Regime::Statistical ? "bpcu" : "npcu";
            row.seed = spec.seed;

            const long attempted = spec.regime == Regime::Statistical ? 1 : spec.blocks;
            Accum total;
            try {
                SystemConfig cfg = cell_config(spec, variant, value);

                std::optional<double> fir = variant.fir;
                if (spec.sweep_axis == "fir") fir = value;
                if (fir && variant.base != "noma-fixed") {
                    AlphaSearchSpec as;
                    as.fir = *fir;
                    as.scheme = variant.base == "tdma-opt" ? Scheme::Tdma : Scheme::Noma;
                    as.regime = spec.regime;
                    // TDMA's FI is not monotone in alpha under statistical
                    // CSIT, so it gets the exhaustive grid.
                    as.strategy = (as.scheme == Scheme::Tdma &&
                                   spec.regime == Regime::Statistical)
                                      ? SearchStrategy::Grid
                                      : SearchStrategy::Bisection;
                    as.pilot_seed = spec.seed;
                    cfg = cfg.with_alpha(search_alpha(as, cfg).alpha);
                }

                if (spec.regime == Regime::Statistical) {
                    total.add(solve_statistical_scheme(variant.base, cfg));
                } else {
                    constexpr long kChunk = 256;
                    const long nchunks = (spec.blocks + kChunk - 1) / kChunk;
                    std::vector<Accum> chunks(static_cast<size_t>(nchunks));
                    std::atomic<long> next{0};
                    auto worker = [&]() {
                        for (;;) {
                            const long ci = next.fetch_add(1);
                            if (ci >= nchunks) return;
                            Accum acc;
                            const long b0 = ci * kChunk;
                            const long b1 = std::min(spec.blocks, b0 + kChunk);
                            for (long b = b0; b < b1; ++b) {
                                try {
                                    const ChannelRealization H = sample_channels(
                                        cfg, derive_seed(spec.seed,
                                                         static_cast<uint64_t>(b)));
                                    acc.add(solve_perfect_scheme(variant.base, H, cfg));
                                } catch (const std::exception&) {
                                    ++acc.failures;
                                }
                            }
                            chunks[static_cast<size_t>(ci)] = acc;
                        }
                    };
                    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
                    const unsigned nthreads =
                        std::min<unsigned>(hw, static_cast<unsigned>(nchunks));
                    std::vector<std::thread> pool;
                    for (unsigned t = 1; t < nthreads; ++t) pool.emplace_back(worker);
                    worker();
                    for (std::thread& t : pool) t.join();
                    total = pairwise_merge(chunks, 0, chunks.size());
                }
            } catch (const std::exception&) {
                // Config, infeasible-alpha or convergence failure for the
                // whole cell: record and continue with the next cell.
                total.failures = attempted;
                total.n = 0;
            }
            fill_row(row, total, attempted);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::string render_rows(const std::vector<AggregateRow>& rows, const std::string& format) {
    if (rows.empty()) throw std::runtime_error("render_rows: no rows to emit");
    std::string out;
    if (format == "csv") {
        out +=
            "scheme,regime,sweep_axis,sweep_value,objective_mean,metric_mean,"
            "metric_units,jain_mean,jain_stderr,metric_stderr,iterations_mean,"
            "residual_mean,blocks,failures,seed\n";
        for (const AggregateRow& r : rows) {
            out += r.scheme + ',' + r.regime + ',' + r.sweep_axis + ',' +
                   fmt(r.sweep_value) + ',' + fmt(r.objective_mean) + ',' +
                   fmt(r.metric_mean) + ',' + r.metric_units + ',' + fmt(r.jain_mean) +
                   ',' + fmt(r.jain_stderr) + ',' + fmt(r.metric_stderr) + ',' +
                   fmt(r.iterations_mean) + ',' + fmt(r.residual_mean) + ',' +
                   std::to_string(r.blocks) + ',' + std::to_string(r.failures) + ',' +
                   std::to_string(r.seed) + '\n';
        }
    } else if (format == "json-lines") {
        for (const AggregateRow& r : rows) {
            out += std::string("{\"scheme\":\"") + r.scheme + "\",\"regime\":\"" +
                   r.regime + "\",\"sweep_axis\":\"" + r.sweep_axis +
                   "\",\"sweep_value\":" + fmt(r.sweep_value) +
                   ",\"objective_mean\":" + fmt(r.objective_mean) +
                   ",\"metric_mean\":" + fmt(r.metric_mean) + ",\"metric_units\":\"" +
                   r.metric_units + "\",\"jain_mean\":" + fmt(r.jain_mean) +
                   ",\"jain_stderr\":" + fmt(r.jain_stderr) +
                   ",\"metric_stderr\":" + fmt(r.metric_stderr) +
                   ",\"iterations_mean\":" + fmt(r.iterations_mean) +
                   ",\"residual_mean\":" + fmt(r.residual_mean) +
                   ",\"blocks\":" + std::to_string(r.blocks) +
                   ",\"failures\":" + std::to_string(r.failures) +
                   ",\"seed\":" + std::to_string(r.seed) + "}\n";
        }
    } else {
        throw std::runtime_error("render_rows: unknown format " + format);
    }
    return out;
}

void emit(const std::vector<AggregateRow>& rows, const std::string& path,
          const std::string& format) {
    const std::string body = render_rows(rows, format);  // throws before file creation
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("emit: cannot open " + path);
    f << body;
    if (!f.good()) throw std::runtime_error("emit: write failed for " + path);
}

namespace {

std::vector<double> linspace_step(double lo, double hi, double step) {
    std::vector<double> v;
    for (double x = lo; x <= hi + 1e-9; x += step) v.push_back(x);
    return v;
}

}  // namespace

ExperimentSpec preset_spec(const std::string& name) {
    ExperimentSpec s;
    s.preset = name;
    if (name == "fig1") {
        // Sum throughput and FI vs r0; K=6, SNR 20 dB, alpha in {100, 1, 0.1}.
        s.regime = Regime::Statistical;
        s.sweep_axis = "r0";
        s.sweep_values = linspace_step(0.1, 1.5, 0.1);
        s.blocks = 1;
        for (double a : {100.0, 1.0, 0.1}) {
            s.schemes.push_back({"noma-opt", a, {}, {}});
            s.schemes.push_back({"tdma-opt", a, {}, {}});
        }
        s.schemes.push_back({"noma-fixed", {}, {}, {}});
    } else if (name == "fig2") {
        // Sum throughput vs SNR; r0=0.9, K=6, FIr in {0.5, 1}.
        s.regime = Regime::Statistical;
        s.sweep_axis = "snr_db";
        s.sweep_values = linspace_step(0, 30, 5);
        s.blocks = 1;
        for (double f : {0.5, 1.0}) {
            s.schemes.push_back({"noma-opt", {}, f, {}});
            s.schemes.push_back({"tdma-opt", {}, f, {}});
        }
    } else if (name == "fig3") {
        // Sum throughput vs FIr; r0=0.9, SNR 20 dB, K in {5, 6}.
        s.regime = Regime::Statistical;
        s.sweep_axis = "fir";
        s.sweep_values = linspace_step(0.2, 1.0, 0.1);
        s.blocks = 1;
        for (int k : {5, 6}) {
            s.schemes.push_back({"noma-opt", {}, {}, k});
            s.schemes.push_back({"tdma-opt", {}, {}, k});
        }
    } else if (name == "fig4") {
        // Convergence telemetry of the alternating solver: mean KKT residual
        // and sweep counts; K in {4, 8}, alpha in {5, 2, 1}, SNR 20 dB.
        s.regime = Regime::Perfect;
        s.sweep_axis = "alpha";
        s.sweep_values = {1.0, 2.0, 5.0};
        s.blocks = 200;
        s.schemes.push_back({"noma-opt", {}, {}, 4});
        s.schemes.push_back({"noma-opt", {}, {}, 8});
    } else if (name == "fig5") {
        // Ergodic sum rate and average FI vs SNR; K=5, alpha in {100, 1, 0.5}.
        s.regime = Regime::Perfect;
        s.sweep_axis = "snr_db";
        s.sweep_values = linspace_step(0, 30, 5);
        s.K = 5;
        s.blocks = 1000;
        for (double a : {100.0, 1.0, 0.5}) {
            s.schemes.push_back({"noma-opt", a, {}, {}});
            s.schemes.push_back({"tdma-opt", a, {}, {}});
        }
        s.schemes.push_back({"noma-fixed", {}, {}, {}});
    } else if (name == "fig6") {
        // Ergodic sum rate vs SNR; K=5, FIr in {0.6, 1}.
        s.regime = Regime::Perfect;
        s.sweep_axis = "snr_db";
        s.sweep_values = linspace_step(0, 30, 5);
        s.K = 5;
        s.blocks = 1000;
        for (double f : {0.6, 1.0}) {
            s.schemes.push_back({"noma-opt", {}, f, {}});
            s.schemes.push_back({"tdma-opt", {}, f, {}});
        }
    } else if (name == "fig7") {
        // Ergodic sum rate vs FIr; SNR 20 dB, K in {4, 5, 6}.
        s.regime = Regime::Perfect;
        s.sweep_axis = "fir";
        s.sweep_values = linspace_step(0.3, 1.0, 0.1);
        s.blocks = 500;
        for (int k : {4, 5, 6}) {
            s.schemes.push_back({"noma-opt", {}, {}, k});
            s.schemes.push_back({"tdma-opt", {}, {}, k});
        }
    } else {
        throw ConfigError("unknown preset: " + name);
    }
    return s;
}

}  // namespace nomafair
