#include "esccnn/model_io.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace esccnn {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

// NaN is not representable in JSON; build-log fields that do not apply are
// stored as null.
json num_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

double num_from(const json& j) {
    if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
    return j.get<double>();
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& j, Eigen::Index expect_cols = -1) {
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    Eigen::Index cols = expect_cols;
    if (rows > 0) cols = static_cast<Eigen::Index>(j.at(0).size());
    if (cols < 0) cols = 0;
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const json& row = j.at(r);
        if (static_cast<Eigen::Index>(row.size()) != cols)
            throw std::runtime_error("model file: ragged matrix");
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row.at(c).get<double>();
    }
    return m;
}

json vector_to_json(const Vector& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

Vector vector_from_json(const json& j) {
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = j.at(i).get<double>();
    return v;
}

std::string status_to_string(BuildStatus s) {
    switch (s) {
        case BuildStatus::reached_max_filters: return "reached-max-filters";
        case BuildStatus::tolerance_met: return "tolerance-met";
        case BuildStatus::configuration_exhausted: return "configuration-exhausted";
    }
    return "reached-max-filters";
}

BuildStatus status_from_string(const std::string& s) {
    if (s == "tolerance-met") return BuildStatus::tolerance_met;
    if (s == "configuration-exhausted") return BuildStatus::configuration_exhausted;
    return BuildStatus::reached_max_filters;
}

json log_to_json(const std::vector<BuildRecord>& log) {
    json arr = json::array();
    for (const auto& rec : log) {
        arr.push_back(json{{"iteration", rec.iteration},
                           {"lambda", num_or_null(rec.lambda)},
                           {"rate", num_or_null(rec.rate)},
                           {"score", num_or_null(rec.score)},
                           {"train_sse", rec.train_sse}});
    }
    return arr;
}

std::vector<BuildRecord> log_from_json(const json& arr) {
    std::vector<BuildRecord> log;
    for (const auto& j : arr) {
        log.push_back(BuildRecord{j.at("iteration").get<int>(), num_from(j.at("lambda")),
                                  num_from(j.at("rate")), num_from(j.at("score")),
                                  j.at("train_sse").get<double>()});
    }
    return log;
}

json shape_to_json(const ConvShape& s) {
    return json{{"input_len", s.input_len},
                {"conv_kernel", s.conv_kernel},
                {"pool_kernel", s.pool_kernel}};
}

ConvShape shape_from_json(const json& j) {
    return make_shape(j.at("input_len").get<int>(), j.at("conv_kernel").get<int>(),
                      j.at("pool_kernel").get<int>());
}

json filters_to_json(const std::vector<FilterCandidate>& filters) {
    json arr = json::array();
    for (const auto& f : filters) {
        arr.push_back(json{{"weights", vector_to_json(f.weights)},
                           {"bias", f.bias},
                           {"lambda", f.lambda}});
    }
    return arr;
}

std::vector<FilterCandidate> filters_from_json(const json& arr) {
    std::vector<FilterCandidate> filters;
    for (const auto& j : arr) {
        FilterCandidate f;
        f.weights = vector_from_json(j.at("weights"));
        f.bias = j.at("bias").get<double>();
        f.lambda = j.at("lambda").get<double>();
        filters.push_back(std::move(f));
    }
    return filters;
}

json header(const std::string& kind) {
    return json{{"format", "esccnn-model"}, {"version", kFormatVersion}, {"kind", kind}};
}

void write_file(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_model: cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

json read_file(const std::string& path, const std::string& expect_kind) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_model: cannot open '" + path + "'");
    json j = json::parse(in);
    if (j.value("format", "") != "esccnn-model")
        throw std::runtime_error("load_model: '" + path + "' is not a model file");
    if (j.value("version", 0) != kFormatVersion)
        throw std::runtime_error("load_model: unsupported version in '" + path + "'");
    if (!expect_kind.empty() && j.value("kind", "") != expect_kind)
        throw std::runtime_error("load_model: '" + path + "' holds a '" +
                                 j.value("kind", "?") + "' model, expected '" + expect_kind + "'");
    return j;
}

}  // namespace

void save_model(const EscModel& model, const std::string& path) {
    json j = header("additive-conv");
    j["shape"] = shape_to_json(model.shape);
    j["horizon"] = model.horizon;
    j["scaler"] = json{{"min", model.scaler.min}, {"max", model.scaler.max}};
    j["status"] = status_to_string(model.status);
    j["filters"] = filters_to_json(model.filters);
    json readouts = json::array();
    for (const auto& r : model.readouts) readouts.push_back(matrix_to_json(r));
    j["readouts"] = std::move(readouts);
    j["build_log"] = log_to_json(model.build_log);
    write_file(j, path);
}

void save_model(const SharedConvModel& model, const std::string& path) {
    json j = header("shared-conv");
    j["shape"] = shape_to_json(model.shape);
    j["horizon"] = model.horizon;
    j["scaler"] = json{{"min", model.scaler.min}, {"max", model.scaler.max}};
    j["status"] = status_to_string(model.status);
    j["filters"] = filters_to_json(model.filters);
    j["readout"] = matrix_to_json(model.readout);
    j["build_log"] = log_to_json(model.build_log);
    write_file(j, path);
}

void save_model(const RandMlpModel& model, const std::string& path) {
    json j = header("rand-mlp");
    j["horizon"] = static_cast<int>(model.output_weights.cols());
    j["scaler"] = json{{"min", model.scaler.min}, {"max", model.scaler.max}};
    j["status"] = status_to_string(model.status);
    j["lambda"] = model.lambda;
    j["hidden_weights"] = matrix_to_json(model.hidden_weights);
    j["hidden_biases"] = vector_to_json(model.hidden_biases);
    j["output_weights"] = matrix_to_json(model.output_weights);
    j["build_log"] = log_to_json(model.build_log);
    write_file(j, path);
}

std::string model_kind(const std::string& path) {
    return read_file(path, "").value("kind", "");
}

EscModel load_esc_model(const std::string& path) {
    const json j = read_file(path, "additive-conv");
    EscModel model;
    model.shape = shape_from_json(j.at("shape"));
    model.horizon = j.at("horizon").get<int>();
    model.scaler = ScalerParams{j.at("scaler").at("min").get<double>(),
                                j.at("scaler").at("max").get<double>()};
    model.status = status_from_string(j.at("status").get<std::string>());
    model.filters = filters_from_json(j.at("filters"));
    for (const auto& r : j.at("readouts")) {
        model.readouts.push_back(matrix_from_json(r, model.horizon));
    }
    model.build_log = log_from_json(j.at("build_log"));
    if (model.readouts.size() != model.filters.size())
        throw std::runtime_error("load_model: filter/readout count mismatch in '" + path + "'");
    return model;
}

SharedConvModel load_shared_conv_model(const std::string& path) {
    const json j = read_file(path, "shared-conv");
    SharedConvModel model;
    model.shape = shape_from_json(j.at("shape"));
    model.horizon = j.at("horizon").get<int>();
    model.scaler = ScalerParams{j.at("scaler").at("min").get<double>(),
                                j.at("scaler").at("max").get<double>()};
    model.status = status_from_string(j.at("status").get<std::string>());
    model.filters = filters_from_json(j.at("filters"));
    model.readout = matrix_from_json(j.at("readout"), model.horizon);
    model.build_log = log_from_json(j.at("build_log"));
    if (model.readout.rows() != static_cast<Eigen::Index>(model.filters.size()))
        throw std::runtime_error("load_model: filter/readout count mismatch in '" + path + "'");
    return model;
}

RandMlpModel load_rand_mlp_model(const std::string& path) {
    const json j = read_file(path, "rand-mlp");
    RandMlpModel model;
    model.scaler = ScalerParams{j.at("scaler").at("min").get<double>(),
                                j.at("scaler").at("max").get<double>()};
    model.status = status_from_string(j.at("status").get<std::string>());
    model.lambda = j.at("lambda").get<double>();
    model.hidden_weights = matrix_from_json(j.at("hidden_weights"));
    model.hidden_biases = vector_from_json(j.at("hidden_biases"));
    model.output_weights = matrix_from_json(j.at("output_weights"), j.at("horizon").get<int>());
    model.build_log = log_from_json(j.at("build_log"));
    return model;
}

}  // namespace esccnn
