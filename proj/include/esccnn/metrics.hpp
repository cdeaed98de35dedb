#pragma once

#include "esccnn/dataset.hpp"

namespace esccnn {

/// Floor applied to |y| (percentage error) and |y + yhat| (symmetric
/// percentage error) denominators.
constexpr double kMetricDenomFloor = 1e-8;

struct MetricTriple {
    double mape = 0.0;
    double smape = 0.0;
    double rmse = 0.0;
};

// Accuracy measures, averaged over every element of the flattened pair:
//   mape  = mean |y - yhat| / |y|
//   smape = mean |y - yhat| / |y + yhat|   (no factor 2)
//   rmse  = sqrt(mean (y - yhat)^2)
double mape(const Vector& y, const Vector& yhat);
double smape(const Vector& y, const Vector& yhat);
double rmse(const Vector& y, const Vector& yhat);

/// All three measures flattened over every sample and horizon column.
MetricTriple compute_metrics(const Matrix& targets, const Matrix& predictions);

}  // namespace esccnn
