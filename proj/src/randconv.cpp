#include "esccnn/randconv.hpp"

#include "esccnn/rng.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace esccnn {

ConvShape make_shape(int input_len, int conv_kernel, int pool_kernel) {
    if (input_len < 1 || conv_kernel < 1 || pool_kernel < 1)
        throw std::invalid_argument("make_shape: lengths must be >= 1");
    if (conv_kernel > input_len)
        throw std::invalid_argument("make_shape: conv_kernel exceeds input_len");
    ConvShape s{input_len, conv_kernel, pool_kernel};
    if (s.pooled_len() < 1) {
        throw std::invalid_argument(
            "make_shape: no pooled positions (input_len " + std::to_string(input_len) +
            ", conv_kernel " + std::to_string(conv_kernel) +
            ", pool_kernel " + std::to_string(pool_kernel) + ")");
    }
    return s;
}

ConvShape derive_shape(int input_len, int pool_kernel) {
    if (input_len < 4)
        throw std::invalid_argument("derive_shape: input_len must be >= 4");
    return make_shape(input_len, input_len / 4, pool_kernel);
}

std::vector<FilterCandidate> sample_candidates(int count, int conv_kernel,
                                               double lambda, std::uint64_t stream_seed) {
    if (count < 1) throw std::invalid_argument("sample_candidates: count must be >= 1");
    if (conv_kernel < 1) throw std::invalid_argument("sample_candidates: conv_kernel must be >= 1");
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("sample_candidates: lambda must be positive and finite");

    Rng rng(stream_seed);
    std::vector<FilterCandidate> batch(count);
    for (auto& c : batch) {
        c.weights.resize(conv_kernel);
        for (int k = 0; k < conv_kernel; ++k) c.weights[k] = rng.uniform_sym(lambda);
        c.bias = rng.uniform_sym(lambda);
        c.lambda = lambda;
    }
    return batch;
}

PooledFeatures extract_features(const FilterCandidate& candidate,
                                const Matrix& inputs, const ConvShape& shape) {
    if (inputs.cols() != shape.input_len)
        throw std::invalid_argument("extract_features: inputs width does not match shape");
    if (candidate.weights.size() != shape.conv_kernel)
        throw std::invalid_argument("extract_features: candidate kernel does not match shape");
    if (!inputs.allFinite())
        throw std::invalid_argument("extract_features: inputs must be finite");

    const Eigen::Index n = inputs.rows();
    const int map_len = shape.map_len();
    const int pooled = shape.pooled_len();

    Matrix maps(n, map_len);
    for (int t = 0; t < map_len; ++t) {
        maps.col(t) = inputs.middleCols(t, shape.conv_kernel) * candidate.weights;
    }
    maps.array() += candidate.bias;
    maps = maps.unaryExpr([](double x) { return stable_sigmoid(x); });

    PooledFeatures feats;
    feats.shape = shape;
    feats.matrix.resize(n, shape.feature_cols());
    feats.matrix.col(0).setOnes();
    for (int i = 0; i < pooled; ++i) {
        feats.matrix.col(i + 1) =
            maps.middleCols(i, shape.pool_kernel).rowwise().sum() / shape.pool_kernel;
    }
    return feats;
}

}  // namespace esccnn
