#include "esccnn/baselines.hpp"

#include "esccnn/linsolve.hpp"
#include "esccnn/rng.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>

namespace esccnn {

namespace {

void check_training_set(const SupervisedWindows& train) {
    if (train.count() < 1) throw std::invalid_argument("build: empty training set");
    if (train.targets.rows() != train.inputs.rows() || train.targets.cols() < 1)
        throw std::invalid_argument("build: malformed targets");
    if (!train.inputs.allFinite() || !train.targets.allFinite())
        throw std::invalid_argument("build: non-finite training data");
}

/// One unit: embed_dim weights then the bias, all uniform on [-lambda, lambda].
void sample_unit(Rng& rng, double lambda, Eigen::RowVectorXd& weights, double& bias) {
    for (Eigen::Index i = 0; i < weights.size(); ++i) weights[i] = rng.uniform_sym(lambda);
    bias = rng.uniform_sym(lambda);
}

}  // namespace

Matrix RandMlpModel::activations(const Matrix& inputs) const {
    if (unit_count() < 1)
        throw std::invalid_argument("RandMlpModel: model has no hidden units");
    if (inputs.cols() != hidden_weights.cols())
        throw std::invalid_argument("RandMlpModel: input width mismatch");
    Matrix pre = inputs * hidden_weights.transpose();
    pre.rowwise() += hidden_biases.transpose();
    return pre.unaryExpr([](double x) { return stable_sigmoid(x); });
}

Matrix RandMlpModel::predict(const Matrix& inputs) const {
    return activations(inputs) * output_weights;
}

Matrix RandMlpModel::predict_original(const Matrix& inputs) const {
    return scaler.inverse(predict(inputs));
}

RandMlpModel build_rvfl(const SupervisedWindows& train, int neuron_count,
                        double lambda, std::uint64_t seed) {
    check_training_set(train);
    if (neuron_count < 1) throw std::invalid_argument("build_rvfl: neuron_count must be >= 1");
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("build_rvfl: lambda must be positive and finite");

    RandMlpModel model;
    model.lambda = lambda;
    model.hidden_weights.resize(neuron_count, train.embed_dim);
    model.hidden_biases.resize(neuron_count);

    Rng rng(derive_seed(seed, {0}));
    Eigen::RowVectorXd weights(train.embed_dim);
    for (int j = 0; j < neuron_count; ++j) {
        sample_unit(rng, lambda, weights, model.hidden_biases[j]);
        model.hidden_weights.row(j) = weights;
    }

    const Matrix act = model.activations(train.inputs);
    const LsqSolution lsq = solve_lsq(act, train.targets);
    model.output_weights = lsq.coefficients;
    model.status = BuildStatus::reached_max_filters;

    const double sse = (train.targets - act * model.output_weights).squaredNorm();
    model.build_log.push_back(BuildRecord{neuron_count, lambda,
                                          std::numeric_limits<double>::quiet_NaN(),
                                          std::numeric_limits<double>::quiet_NaN(), sse});
    return model;
}

RandMlpModel build_scn(const SupervisedWindows& train, const BuildConfig& cfg,
                       const MlpMonitor& monitor) {
    cfg.validate();
    check_training_set(train);

    RandMlpModel model;
    model.lambda = cfg.lambda_set.front();
    model.hidden_weights.resize(0, train.embed_dim);
    model.hidden_biases.resize(0);
    model.status = BuildStatus::reached_max_filters;

    const Eigen::Index n = train.count();
    Matrix act(n, 0);
    Matrix residual = train.targets;
    int count = 0;
    while (count + 1 <= cfg.max_filters) {
        if (residual.norm() < cfg.tolerance) {
            model.status = BuildStatus::tolerance_met;
            break;
        }

        struct Best {
            Eigen::RowVectorXd weights;
            double bias;
            Vector activation;
            double margin;
            double lambda;
            double rate;
        };
        std::optional<Best> best;
        for (std::size_t li = 0; li < cfg.lambda_set.size() && !best; ++li) {
            for (std::size_t ri = 0; ri < cfg.rate_set.size() && !best; ++ri) {
                const double lambda = cfg.lambda_set[li];
                const double rate = cfg.rate_set[ri];
                Rng rng(derive_seed(cfg.seed,
                                    {static_cast<std::uint64_t>(count + 1), li, ri}));
                std::optional<Best> cell_best;
                Eigen::RowVectorXd weights(train.embed_dim);
                for (int s = 0; s < cfg.candidates_per_pool; ++s) {
                    double bias;
                    sample_unit(rng, lambda, weights, bias);
                    Vector g = (train.inputs * weights.transpose()).array() + bias;
                    g = g.unaryExpr([](double x) { return stable_sigmoid(x); });
                    if (!(g.squaredNorm() > 0.0)) continue;
                    const double margin =
                        admission_margin(residual, g, rate, cfg.normalized_margin);
                    if (margin >= 0.0 && (!cell_best || margin > cell_best->margin)) {
                        cell_best = Best{weights, bias, std::move(g), margin, lambda, rate};
                    }
                }
                if (cell_best) best = std::move(cell_best);
            }
        }
        if (!best) {
            model.status = BuildStatus::configuration_exhausted;
            break;
        }

        model.hidden_weights.conservativeResize(count + 1, Eigen::NoChange);
        model.hidden_weights.row(count) = best->weights;
        model.hidden_biases.conservativeResize(count + 1);
        model.hidden_biases[count] = best->bias;
        act.conservativeResize(n, count + 1);
        act.col(count) = best->activation;

        const LsqSolution lsq = solve_lsq(act, train.targets);
        model.output_weights = lsq.coefficients;
        residual = train.targets - act * model.output_weights;

        BuildRecord rec{count + 1, best->lambda, best->rate, best->margin,
                        residual.squaredNorm()};
        model.build_log.push_back(rec);
        ++count;
        if (monitor) monitor(model, rec);
    }
    return model;
}

}  // namespace esccnn
