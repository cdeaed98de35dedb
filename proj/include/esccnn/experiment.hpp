#pragma once

#include "esccnn/constructive.hpp"
#include "esccnn/dataset.hpp"
#include "esccnn/metrics.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace esccnn {

enum class ModelKind { esc_cnn, es_cnn, sc_cnn, scn, rvfl };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

enum class MetricSpace { scaled, original };

/**
 * Everything a reproducible run needs. Defaults reproduce the stochastic-
 * trend benchmark: 500 synthetic observations, 15-step windows, one-step
 * horizon, all five model families, ten repeats, metrics on the scaled
 * series.
 */
struct ExperimentConfig {
    // Data source: "ar1" or a CSV path.
    std::string dataset = "ar1";
    std::string csv_column = "0";
    std::size_t ar1_length = 500;
    double ar1_alpha = 0.01;
    double ar1_noise = 0.25;
    double ar1_start = 0.0;
    std::uint64_t ar1_seed = 26;

    int embed_dim = 15;
    int horizon = 1;

    // The benchmark protocol scales before splitting, so the default uses
    // full-series statistics; train_only is the leak-free alternative.
    ScalerFit scale_fit = ScalerFit::full_series;

    std::vector<ModelKind> models = {ModelKind::esc_cnn, ModelKind::es_cnn,
                                     ModelKind::sc_cnn, ModelKind::scn, ModelKind::rvfl};

    // Construction parameters shared by every incremental model; the random
    // perceptron reuses max_filters as its unit count.
    int max_filters = 50;
    double tolerance = 0.0;
    std::vector<double> lambda_set = {0.5, 1.0, 3.0, 5.0, 10.0, 30.0, 50.0, 100.0};
    std::vector<double> rate_set = {0.9, 0.99, 0.999, 0.9999, 0.99999};
    int candidates_per_pool = 300;
    int pool_kernel = 3;
    int conv_kernel = 0;  // 0 derives floor(embed_dim / 4)
    double es_lambda = 1.0;
    double rvfl_lambda = 1.0;
    bool normalized_margin = false;

    // Protocol.
    int repeats = 10;
    std::uint64_t seed = 42;
    std::vector<std::uint64_t> repeat_seeds;  // optional override, one per repeat
    MetricSpace metric_space = MetricSpace::scaled;
    std::string output_dir = "out";

    void validate() const;
};

struct IterationMetrics {
    int iteration = 0;
    MetricTriple train;
    MetricTriple test;
};

/// Result of one (model, repeat) cell; failures are isolated per cell.
struct CellResult {
    ModelKind model = ModelKind::esc_cnn;
    int repeat = 0;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    std::vector<IterationMetrics> trajectory;
    std::vector<BuildRecord> build_log;
    double initial_train_sse = 0.0;
    /// Fraction of iterations whose residual energy dropped by at least the
    /// iteration's reduction rate; monitored, never asserted. NaN when the
    /// model has no reduction rate.
    double decay_fraction = 0.0;

    /// Per-metric minimum over the trajectory (best-on-test protocol).
    MetricTriple best_test() const;
};

struct ModelSummary {
    ModelKind model = ModelKind::esc_cnn;
    int ok_cells = 0;
    std::vector<MetricTriple> per_repeat_best;
    MetricTriple mean_best;
};

struct RunReport {
    ExperimentConfig config;
    std::vector<CellResult> cells;
    std::vector<ModelSummary> summaries;
    double wall_clock_sec = 0.0;

    bool all_ok() const;
    bool any_ok() const;
};

/// Recompute the per-model summaries from the cell trajectories.
std::vector<ModelSummary> summarize(const ExperimentConfig& config,
                                    const std::vector<CellResult>& cells);

/**
 * Build every (model, repeat) cell on the chronological split, capturing
 * train/test metrics after each constructive iteration. A failing cell is
 * recorded with its error and does not abort the run. Deterministic for a
 * fixed config.
 */
RunReport run_experiment(const ExperimentConfig& config);

/**
 * Write summary.csv (model,horizon,metric,mean_best), convergence.csv
 * (model,repeat,iteration,train_rmse,test_rmse), config.json, and
 * report.json (the full report for later re-emission) into `dir`.
 * Numbers are written with 17 significant digits.
 */
void emit_reports(const RunReport& report, const std::string& dir);

/// Reload a report.json previously written by emit_reports.
RunReport load_report(const std::string& dir);

/// 17-significant-digit decimal form that parses back to the same double.
std::string format_double(double v);

}  // namespace esccnn
