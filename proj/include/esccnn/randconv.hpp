#pragma once

#include "esccnn/dataset.hpp"

#include <cstdint>
#include <vector>

namespace esccnn {

/**
 * Geometry of one convolution + average-pooling stage over a window of
 * length `input_len`:
 *
 *   map value    m^t = sigmoid(sum_k w^k x_{t+k-1} + b),  t = 1..map_len
 *   pooled value p^i = mean(m^i..m^{i+pool_kernel-1}),    i = 1..pooled_len
 *
 * with map_len = input_len - conv_kernel + 1 and stride-1 pooling, so
 * pooled_len = input_len - conv_kernel - pool_kernel + 2. The feature matrix
 * adds a leading all-ones column, hence feature_cols = pooled_len + 1.
 */
struct ConvShape {
    int input_len = 0;    // window length T
    int conv_kernel = 0;  // convolution taps
    int pool_kernel = 0;  // pooling width

    int combined_kernel() const { return conv_kernel + pool_kernel; }
    int map_len() const { return input_len - conv_kernel + 1; }
    int pooled_len() const { return input_len - combined_kernel() + 2; }
    int feature_cols() const { return pooled_len() + 1; }
};

/// Validate an explicitly chosen kernel pair.
ConvShape make_shape(int input_len, int conv_kernel, int pool_kernel);

/// Default geometry: conv_kernel = floor(input_len / 4). Use make_shape to
/// override the kernel size directly.
ConvShape derive_shape(int input_len, int pool_kernel = 3);

/// One random 1-D filter; every weight and the bias is drawn uniformly from
/// [-lambda, +lambda].
struct FilterCandidate {
    Vector weights;
    double bias = 0.0;
    double lambda = 0.0;
};

/**
 * Draw `count` independent filter candidates from the given stream seed.
 * The batch depends only on (stream_seed, conv_kernel, lambda, count); the
 * caller derives stream seeds per iteration and grid position so batches
 * are reproducible regardless of how candidates are later evaluated.
 */
std::vector<FilterCandidate> sample_candidates(int count, int conv_kernel,
                                               double lambda, std::uint64_t stream_seed);

/**
 * Per-sample subsampled feature matrix for one candidate. Column 0 is the
 * constant 1; columns 1..pooled_len are the average-pooled sigmoid map, each
 * mathematically in (0,1) (extreme pre-activations can saturate to exactly
 * 0 or 1 in double precision).
 */
struct PooledFeatures {
    Matrix matrix;  // N x feature_cols
    ConvShape shape;
};

PooledFeatures extract_features(const FilterCandidate& candidate,
                                const Matrix& inputs, const ConvShape& shape);

/// Overflow-safe logistic function; never returns NaN.
inline double stable_sigmoid(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double z = std::exp(x);
    return z / (1.0 + z);
}

}  // namespace esccnn
