#include "esccnn/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace esccnn {

namespace {

void check_pair(Eigen::Index n, Eigen::Index m) {
    if (n != m) throw std::invalid_argument("metrics: length mismatch");
    if (n < 1) throw std::invalid_argument("metrics: need at least one value");
}

}  // namespace

double mape(const Vector& y, const Vector& yhat) {
    check_pair(y.size(), yhat.size());
    double acc = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        acc += std::abs(y[i] - yhat[i]) / std::max(std::abs(y[i]), kMetricDenomFloor);
    }
    return acc / static_cast<double>(y.size());
}

double smape(const Vector& y, const Vector& yhat) {
    check_pair(y.size(), yhat.size());
    double acc = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        acc += std::abs(y[i] - yhat[i]) / std::max(std::abs(y[i] + yhat[i]), kMetricDenomFloor);
    }
    return acc / static_cast<double>(y.size());
}

double rmse(const Vector& y, const Vector& yhat) {
    check_pair(y.size(), yhat.size());
    return std::sqrt((y - yhat).squaredNorm() / static_cast<double>(y.size()));
}

MetricTriple compute_metrics(const Matrix& targets, const Matrix& predictions) {
    if (targets.rows() != predictions.rows() || targets.cols() != predictions.cols())
        throw std::invalid_argument("compute_metrics: shape mismatch");
    const Vector y = Eigen::Map<const Vector>(targets.data(), targets.size());
    const Vector yhat = Eigen::Map<const Vector>(predictions.data(), predictions.size());
    return MetricTriple{mape(y, yhat), smape(y, yhat), rmse(y, yhat)};
}

}  // namespace esccnn
