#pragma once

#include "esccnn/constructive.hpp"
#include "esccnn/dataset.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace esccnn {

/**
 * Random single-hidden-layer perceptron: sigmoid units with fixed random
 * weights and a least-squares readout. Produced either in one shot (all
 * units sampled at once) or incrementally under the stochastic-configuration
 * admission rule with a global readout refit per accepted unit.
 */
struct RandMlpModel {
    Matrix hidden_weights;  // L x embed_dim
    Vector hidden_biases;   // L
    Matrix output_weights;  // L x horizon
    double lambda = 0.0;
    ScalerParams scaler = ScalerParams::identity();
    std::vector<BuildRecord> build_log;
    BuildStatus status = BuildStatus::reached_max_filters;

    Eigen::Index unit_count() const { return hidden_weights.rows(); }

    /// Sigmoid activations of all units, rows aligned with `inputs`.
    Matrix activations(const Matrix& inputs) const;
    Matrix predict(const Matrix& inputs) const;
    Matrix predict_original(const Matrix& inputs) const;
};

/// All `neuron_count` units sampled at once from [-lambda, +lambda]; the
/// readout solved once against the targets.
RandMlpModel build_rvfl(const SupervisedWindows& train, int neuron_count,
                        double lambda, std::uint64_t seed);

using MlpMonitor = std::function<void(const RandMlpModel&, const BuildRecord&)>;

/**
 * Incremental build: per iteration scan the (lambda, rate) grid, draw a pool
 * of unit candidates, admit those with nonnegative margin (admission_margin),
 * keep the best, then refit every output weight globally by least squares.
 * Grid exhaustion stops construction with configuration_exhausted.
 */
RandMlpModel build_scn(const SupervisedWindows& train, const BuildConfig& cfg,
                       const MlpMonitor& monitor = {});

}  // namespace esccnn
