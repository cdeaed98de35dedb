#include "esccnn/constructive.hpp"

#include "esccnn/linsolve.hpp"
#include "esccnn/rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace esccnn {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_training_set(const SupervisedWindows& train, const ConvShape& shape) {
    if (train.count() < 1)
        throw std::invalid_argument("build: empty training set");
    if (train.inputs.cols() != shape.input_len)
        throw std::invalid_argument("build: window length does not match the configured shape");
    if (train.targets.rows() != train.inputs.rows() || train.targets.cols() < 1)
        throw std::invalid_argument("build: malformed targets");
    if (!train.inputs.allFinite() || !train.targets.allFinite())
        throw std::invalid_argument("build: non-finite training data");
}

}  // namespace

void BuildConfig::validate() const {
    if (max_filters < 1) throw std::invalid_argument("BuildConfig: max_filters must be >= 1");
    if (!(tolerance >= 0.0)) throw std::invalid_argument("BuildConfig: tolerance must be >= 0");
    if (candidates_per_pool < 1)
        throw std::invalid_argument("BuildConfig: candidates_per_pool must be >= 1");
    if (lambda_set.empty() || rate_set.empty())
        throw std::invalid_argument("BuildConfig: lambda_set and rate_set must be non-empty");
    for (double l : lambda_set) {
        if (!(l > 0.0) || !std::isfinite(l))
            throw std::invalid_argument("BuildConfig: every lambda must be positive and finite");
    }
    for (double r : rate_set) {
        if (!(r > 0.0 && r < 1.0))
            throw std::invalid_argument("BuildConfig: every rate must lie in (0, 1)");
    }
    if (!(single_draw_lambda > 0.0))
        throw std::invalid_argument("BuildConfig: single_draw_lambda must be positive");
}

FilterScore score_candidate(const Matrix& residual, const PooledFeatures& feats, double rate) {
    if (!(rate > 0.0 && rate < 1.0))
        throw std::invalid_argument("score_candidate: rate must lie in (0, 1)");
    if (residual.rows() != feats.matrix.rows())
        throw std::invalid_argument("score_candidate: residual/features row mismatch");

    const Matrix& p = feats.matrix;
    const Vector col_sq = p.colwise().squaredNorm();
    const double min_sq = col_sq.minCoeff();
    if (!(min_sq > 0.0))
        throw std::invalid_argument("score_candidate: degenerate candidate (zero-norm feature column)");

    const Eigen::Index horizons = residual.cols();
    const Matrix dots = residual.transpose() * p;  // horizons x feature_cols

    FilterScore score;
    score.delta = (1.0 - rate) * residual.squaredNorm();
    score.zeta_per_horizon.resize(horizons);
    for (Eigen::Index h = 0; h < horizons; ++h) {
        const auto d = dots.row(h);
        const double direct = (d.array().square() / col_sq.transpose().array()).sum();
        // sum over ordered pairs i != j of d_i d_j
        const double cross = d.sum() * d.sum() - d.squaredNorm();
        score.zeta_per_horizon[h] = direct - 2.0 * cross / min_sq;
    }
    score.xi = score.zeta_per_horizon.sum() - score.delta;
    return score;
}

double admission_margin(const Matrix& residual, const Vector& feature, double rate,
                        bool normalized) {
    if (!(rate > 0.0 && rate < 1.0))
        throw std::invalid_argument("admission_margin: rate must lie in (0, 1)");
    if (residual.rows() != feature.size())
        throw std::invalid_argument("admission_margin: residual/feature length mismatch");
    const double feature_sq = feature.squaredNorm();
    if (!(feature_sq > 0.0))
        throw std::invalid_argument("admission_margin: degenerate candidate (zero-norm feature)");

    double gain = (residual.transpose() * feature).squaredNorm();
    if (normalized) gain /= feature_sq;
    return gain - (1.0 - rate) * residual.squaredNorm();
}

std::optional<Selection> select_filter(const Matrix& inputs, const Matrix& residual,
                                       const BuildConfig& cfg, int iteration) {
    cfg.validate();
    for (std::size_t li = 0; li < cfg.lambda_set.size(); ++li) {
        for (std::size_t ri = 0; ri < cfg.rate_set.size(); ++ri) {
            const double lambda = cfg.lambda_set[li];
            const double rate = cfg.rate_set[ri];
            const std::uint64_t stream = derive_seed(
                cfg.seed, {static_cast<std::uint64_t>(iteration), li, ri});
            const auto pool = sample_candidates(cfg.candidates_per_pool,
                                                cfg.shape.conv_kernel, lambda, stream);

            std::optional<Selection> best;
            for (const auto& candidate : pool) {
                PooledFeatures feats = extract_features(candidate, inputs, cfg.shape);
                if (!(feats.matrix.colwise().squaredNorm().minCoeff() > 0.0)) {
                    continue;  // saturated to zero everywhere; discard
                }
                const FilterScore score = score_candidate(residual, feats, rate);
                if (score.xi >= 0.0 && (!best || score.xi > best->score.xi)) {
                    best = Selection{candidate, std::move(feats), score, lambda, rate};
                }
            }
            if (best) return best;
        }
    }
    return std::nullopt;
}

Matrix EscModel::predict(const Matrix& inputs) const {
    if (inputs.cols() != shape.input_len && !filters.empty())
        throw std::invalid_argument("EscModel::predict: window length mismatch");
    Matrix out = Matrix::Zero(inputs.rows(), horizon);
    for (std::size_t j = 0; j < filters.size(); ++j) {
        out += extract_features(filters[j], inputs, shape).matrix * readouts[j];
    }
    return out;
}

Matrix EscModel::predict_original(const Matrix& inputs) const {
    return scaler.inverse(predict(inputs));
}

Matrix SharedConvModel::predict(const Matrix& inputs) const {
    if (inputs.cols() != shape.input_len && !filters.empty())
        throw std::invalid_argument("SharedConvModel::predict: window length mismatch");
    Matrix out = Matrix::Zero(inputs.rows(), horizon);
    if (filters.empty()) return out;
    Matrix g(inputs.rows(), static_cast<Eigen::Index>(filters.size()));
    for (std::size_t j = 0; j < filters.size(); ++j) {
        const PooledFeatures feats = extract_features(filters[j], inputs, shape);
        g.col(static_cast<Eigen::Index>(j)) =
            feats.matrix.rightCols(feats.matrix.cols() - 1).rowwise().sum();
    }
    return g * readout;
}

Matrix SharedConvModel::predict_original(const Matrix& inputs) const {
    return scaler.inverse(predict(inputs));
}

EscModel build_esc_cnn(const SupervisedWindows& train, const BuildConfig& cfg,
                       const EscMonitor& monitor) {
    cfg.validate();
    check_training_set(train, cfg.shape);

    EscModel model;
    model.shape = cfg.shape;
    model.horizon = train.horizon;
    model.status = BuildStatus::reached_max_filters;

    Matrix residual = train.targets;
    int count = 0;
    while (count + 1 <= cfg.max_filters) {
        if (residual.norm() < cfg.tolerance) {
            model.status = BuildStatus::tolerance_met;
            break;
        }
        auto selection = select_filter(train.inputs, residual, cfg, count + 1);
        if (!selection) {
            model.status = BuildStatus::configuration_exhausted;
            break;
        }
        const LsqSolution lsq = solve_lsq(selection->features.matrix, residual);
        residual -= selection->features.matrix * lsq.coefficients;
        model.filters.push_back(std::move(selection->filter));
        model.readouts.push_back(lsq.coefficients);

        BuildRecord rec{count + 1, selection->lambda, selection->rate,
                        selection->score.xi, residual.squaredNorm()};
        model.build_log.push_back(rec);
        ++count;
        if (monitor) monitor(model, rec);
    }
    return model;
}

EscModel build_es_cnn(const SupervisedWindows& train, const BuildConfig& cfg,
                      const EscMonitor& monitor) {
    cfg.validate();
    check_training_set(train, cfg.shape);

    EscModel model;
    model.shape = cfg.shape;
    model.horizon = train.horizon;
    model.status = BuildStatus::reached_max_filters;

    Matrix residual = train.targets;
    int count = 0;
    while (count + 1 <= cfg.max_filters) {
        if (residual.norm() < cfg.tolerance) {
            model.status = BuildStatus::tolerance_met;
            break;
        }
        const std::uint64_t stream =
            derive_seed(cfg.seed, {static_cast<std::uint64_t>(count + 1), 0, 0});
        FilterCandidate candidate =
            sample_candidates(1, cfg.shape.conv_kernel, cfg.single_draw_lambda, stream).front();
        const PooledFeatures feats = extract_features(candidate, train.inputs, cfg.shape);

        const LsqSolution lsq = solve_lsq(feats.matrix, residual);
        residual -= feats.matrix * lsq.coefficients;
        model.filters.push_back(std::move(candidate));
        model.readouts.push_back(lsq.coefficients);

        BuildRecord rec{count + 1, cfg.single_draw_lambda, kNaN, kNaN, residual.squaredNorm()};
        model.build_log.push_back(rec);
        ++count;
        if (monitor) monitor(model, rec);
    }
    return model;
}

SharedConvModel build_sc_cnn(const SupervisedWindows& train, const BuildConfig& cfg,
                             const SharedConvMonitor& monitor) {
    cfg.validate();
    check_training_set(train, cfg.shape);

    SharedConvModel model;
    model.shape = cfg.shape;
    model.horizon = train.horizon;
    model.status = BuildStatus::reached_max_filters;

    const Eigen::Index n = train.count();
    Matrix features(n, 0);
    Matrix residual = train.targets;
    int count = 0;
    while (count + 1 <= cfg.max_filters) {
        if (residual.norm() < cfg.tolerance) {
            model.status = BuildStatus::tolerance_met;
            break;
        }

        struct Best {
            FilterCandidate filter;
            Vector feature;
            double margin;
            double lambda;
            double rate;
        };
        std::optional<Best> best;
        for (std::size_t li = 0; li < cfg.lambda_set.size() && !best; ++li) {
            for (std::size_t ri = 0; ri < cfg.rate_set.size() && !best; ++ri) {
                const double lambda = cfg.lambda_set[li];
                const double rate = cfg.rate_set[ri];
                const std::uint64_t stream = derive_seed(
                    cfg.seed, {static_cast<std::uint64_t>(count + 1), li, ri});
                const auto pool = sample_candidates(cfg.candidates_per_pool,
                                                    cfg.shape.conv_kernel, lambda, stream);
                std::optional<Best> cell_best;
                for (const auto& candidate : pool) {
                    const PooledFeatures feats = extract_features(candidate, train.inputs, cfg.shape);
                    const Vector g =
                        feats.matrix.rightCols(feats.matrix.cols() - 1).rowwise().sum();
                    if (!(g.squaredNorm() > 0.0)) continue;
                    const double margin =
                        admission_margin(residual, g, rate, cfg.normalized_margin);
                    if (margin >= 0.0 && (!cell_best || margin > cell_best->margin)) {
                        cell_best = Best{candidate, g, margin, lambda, rate};
                    }
                }
                if (cell_best) best = std::move(cell_best);
            }
        }
        if (!best) {
            model.status = BuildStatus::configuration_exhausted;
            break;
        }

        features.conservativeResize(n, count + 1);
        features.col(count) = best->feature;
        model.filters.push_back(std::move(best->filter));

        // Global refit of every filter weight against the original targets.
        const LsqSolution lsq = solve_lsq(features, train.targets);
        model.readout = lsq.coefficients;
        residual = train.targets - features * model.readout;

        BuildRecord rec{count + 1, best->lambda, best->rate, best->margin,
                        residual.squaredNorm()};
        model.build_log.push_back(rec);
        ++count;
        if (monitor) monitor(model, rec);
    }
    return model;
}

}  // namespace esccnn
