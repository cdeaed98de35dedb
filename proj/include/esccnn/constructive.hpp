#pragma once

#include "esccnn/dataset.hpp"
#include "esccnn/randconv.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace esccnn {

/// Why an incremental build stopped.
enum class BuildStatus {
    reached_max_filters,
    tolerance_met,
    configuration_exhausted,  // no admissible candidate anywhere on the grid
};

/**
 * Parameters of an incremental stochastic-configuration build. The grids are
 * scanned in the given order, half-width outer and reduction rate inner, and
 * the scan stops at the first grid cell that yields an admissible candidate.
 */
struct BuildConfig {
    int max_filters = 50;
    double tolerance = 0.0;  // on the Frobenius norm of the training residual
    std::vector<double> lambda_set = {0.5, 1.0, 3.0, 5.0, 10.0, 30.0, 50.0, 100.0};
    std::vector<double> rate_set = {0.9, 0.99, 0.999, 0.9999, 0.99999};
    int candidates_per_pool = 300;
    ConvShape shape{};
    std::uint64_t seed = 0;

    /// Half-width used by the unconditional builder (one draw per iteration).
    double single_draw_lambda = 1.0;

    /// Divide the admission margin by |g|^2 (the classical normalization)
    /// instead of the plain squared inner products.
    bool normalized_margin = false;

    void validate() const;
};

/// Candidate quality relative to the current residual and reduction rate.
/// xi >= 0 marks the candidate admissible.
struct FilterScore {
    double xi = 0.0;
    Vector zeta_per_horizon;
    double delta = 0.0;
};

/**
 * Score one candidate's pooled features against the residual:
 *
 *   delta    = sum_h (1 - rate) |e^h|^2
 *   zeta^h   = sum_i <e^h,p^i>^2 / |p^i|^2
 *              - 2 sum_{i != j} <e^h,p^i><e^h,p^j> / min_i |p^i|^2
 *   xi       = sum_h zeta^h - delta
 *
 * The cross sum runs over ordered pairs (both (i,j) and (j,i)) and includes
 * the constant column in both the sums and the minimum norm.
 */
FilterScore score_candidate(const Matrix& residual, const PooledFeatures& feats, double rate);

/**
 * Admission margin of a single-feature candidate g (the classical
 * stochastic-configuration inequality with unit activation bound):
 *
 *   sum_h <e^h, g>^2 [/ |g|^2 when normalized] - (1 - rate) |e|^2
 */
double admission_margin(const Matrix& residual, const Vector& feature, double rate,
                        bool normalized = false);

struct Selection {
    FilterCandidate filter;
    PooledFeatures features;
    FilterScore score;
    double lambda = 0.0;
    double rate = 0.0;
};

/**
 * Scan the (lambda, rate) grid; per cell draw a fresh pool of candidates and
 * return the admissible one with the highest score (ties resolved to the
 * lowest candidate index). Returns nullopt when every grid cell fails, which
 * callers treat as construction exhaustion, not an error. Candidate pools
 * depend only on (seed, iteration, grid position).
 */
std::optional<Selection> select_filter(const Matrix& inputs, const Matrix& residual,
                                       const BuildConfig& cfg, int iteration);

/// One line of a build log.
struct BuildRecord {
    int iteration = 0;
    double lambda = 0.0;     // NaN when not applicable
    double rate = 0.0;       // NaN when not applicable
    double score = 0.0;      // xi or admission margin; NaN when not applicable
    double train_sse = 0.0;  // after this iteration's update
};

/**
 * Additive convolutional forecaster: each filter carries its own readout
 * block, fit once against the residual at the time the filter was added and
 * never revisited. Predictions are the sum of per-filter contributions.
 */
struct EscModel {
    ConvShape shape{};
    int horizon = 0;
    ScalerParams scaler = ScalerParams::identity();
    std::vector<FilterCandidate> filters;
    std::vector<Matrix> readouts;  // feature_cols x horizon per filter
    std::vector<BuildRecord> build_log;
    BuildStatus status = BuildStatus::reached_max_filters;

    std::size_t filter_count() const { return filters.size(); }

    /// Forecast in scaled space; a zero-filter model predicts all zeros.
    Matrix predict(const Matrix& inputs) const;
    /// Forecast mapped back to original units through the stored scaler.
    Matrix predict_original(const Matrix& inputs) const;
};

/**
 * Shared-readout variant: each filter contributes the single feature
 * g = sum of its pooled columns (no constant term), one weight per filter
 * and no bias, and every accepted filter triggers a global least-squares
 * refit of all weights.
 */
struct SharedConvModel {
    ConvShape shape{};
    int horizon = 0;
    ScalerParams scaler = ScalerParams::identity();
    std::vector<FilterCandidate> filters;
    Matrix readout;  // filter_count x horizon
    std::vector<BuildRecord> build_log;
    BuildStatus status = BuildStatus::reached_max_filters;

    std::size_t filter_count() const { return filters.size(); }

    Matrix predict(const Matrix& inputs) const;
    Matrix predict_original(const Matrix& inputs) const;
};

using EscMonitor = std::function<void(const EscModel&, const BuildRecord&)>;
using SharedConvMonitor = std::function<void(const SharedConvModel&, const BuildRecord&)>;

/**
 * Incremental build with candidate selection: while the filter budget and
 * residual tolerance allow, select an admissible filter, fit its readout
 * block against the current residual, and subtract the fitted contribution.
 * Stops early with configuration_exhausted when the whole grid yields no
 * admissible candidate.
 */
EscModel build_esc_cnn(const SupervisedWindows& train, const BuildConfig& cfg,
                       const EscMonitor& monitor = {});

/// Ablation of the selection step: one unconditional draw per iteration from
/// [-single_draw_lambda, +single_draw_lambda], readout fit identically.
EscModel build_es_cnn(const SupervisedWindows& train, const BuildConfig& cfg,
                      const EscMonitor& monitor = {});

/// Ablation of the error feedback: summed pooled features, admission by
/// margin, and a global readout refit after every accepted filter.
SharedConvModel build_sc_cnn(const SupervisedWindows& train, const BuildConfig& cfg,
                             const SharedConvMonitor& monitor = {});

}  // namespace esccnn
