#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace esccnn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// A scalar time series in observation order.
struct RawSeries {
    std::string name;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
};

/**
 * Synthesize a stochastic-trend series x_t = alpha + x_{t-1} + eps_t with
 * eps_t i.i.d. uniform on (-noise_halfwidth, +noise_halfwidth). The returned
 * series holds x_1..x_n; the start value x_0 is not included.
 */
RawSeries generate_ar1(std::size_t n, double alpha = 0.01,
                       double noise_halfwidth = 0.25, double x0 = 0.0,
                       std::uint64_t seed = 0);

/**
 * Load one column of a CSV file as a series. A single header row is
 * auto-detected (present when the first row is not fully numeric). `column`
 * selects by header name, or by zero-based index when it parses as an
 * integer. Parse failures report the 1-based physical line number.
 */
RawSeries load_csv(const std::string& path, const std::string& column = "0");

/// Which part of the series the scaler statistics are computed from.
enum class ScalerFit {
    train_only,   // min/max over the chronological training prefix (leak-free)
    full_series,  // min/max over every observation
};

/**
 * Affine map onto [-1, 1]: v -> -1 + 2 (v - min) / (max - min).
 * transform(min) == -1 and transform(max) == +1 exactly; values outside the
 * fit range map outside [-1, 1] and are deliberately not clipped.
 */
struct ScalerParams {
    double min = -1.0;
    double max = 1.0;

    static ScalerParams identity() { return ScalerParams{-1.0, 1.0}; }

    double transform(double v) const { return -1.0 + 2.0 * (v - min) / (max - min); }
    double inverse(double u) const { return min + (u + 1.0) * (max - min) / 2.0; }

    Matrix transform(const Matrix& m) const;
    Matrix inverse(const Matrix& m) const;
};

/// Number of leading raw observations consumed by the training windows of a
/// two-thirds split (the scaler prefix for ScalerFit::train_only).
std::size_t train_prefix_length(std::size_t series_len, int embed_dim, int horizon);

/**
 * Fit the [-1,1] scaler. For train_only the statistics come from the prefix
 * of the series that the training windows will cover, so embed_dim and
 * horizon must be supplied; full_series ignores them.
 */
ScalerParams fit_scaler(const RawSeries& series, ScalerFit fit,
                        int embed_dim = 0, int horizon = 0);

/**
 * Supervised forecasting samples: row i of `inputs` holds the scaled window
 * x_{i+1..i+T} and row i of `targets` the next H scaled observations.
 */
struct SupervisedWindows {
    Matrix inputs;   // N x embed_dim
    Matrix targets;  // N x horizon
    int embed_dim = 0;
    int horizon = 0;

    Eigen::Index count() const { return inputs.rows(); }
};

/// Stride-1 sliding windows over the scaled series; N = len - T - H + 1.
SupervisedWindows make_windows(const RawSeries& series, const ScalerParams& scaler,
                               int embed_dim, int horizon);

struct SplitWindows {
    SupervisedWindows train;
    SupervisedWindows test;
};

/// Chronological split: the first floor(2N/3) samples train, the rest test.
SplitWindows split_two_thirds(const SupervisedWindows& windows);

}  // namespace esccnn
