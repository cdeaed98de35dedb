#include "esccnn/experiment.hpp"

#include "esccnn/baselines.hpp"
#include "esccnn/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace esccnn {

namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

json num_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
double num_from(const json& j) { return j.is_null() ? kNaN : j.get<double>(); }

struct DataBundle {
    ScalerParams scaler;
    SplitWindows split;
};

DataBundle prepare_data(const ExperimentConfig& cfg) {
    RawSeries series = cfg.dataset == "ar1"
                           ? generate_ar1(cfg.ar1_length, cfg.ar1_alpha, cfg.ar1_noise,
                                          cfg.ar1_start, cfg.ar1_seed)
                           : load_csv(cfg.dataset, cfg.csv_column);
    DataBundle bundle;
    bundle.scaler = fit_scaler(series, cfg.scale_fit, cfg.embed_dim, cfg.horizon);
    const SupervisedWindows windows =
        make_windows(series, bundle.scaler, cfg.embed_dim, cfg.horizon);
    bundle.split = split_two_thirds(windows);
    return bundle;
}

BuildConfig make_build_config(const ExperimentConfig& cfg, std::uint64_t seed) {
    BuildConfig bc;
    bc.max_filters = cfg.max_filters;
    bc.tolerance = cfg.tolerance;
    bc.lambda_set = cfg.lambda_set;
    bc.rate_set = cfg.rate_set;
    bc.candidates_per_pool = cfg.candidates_per_pool;
    bc.shape = cfg.conv_kernel > 0
                   ? make_shape(cfg.embed_dim, cfg.conv_kernel, cfg.pool_kernel)
                   : derive_shape(cfg.embed_dim, cfg.pool_kernel);
    bc.seed = seed;
    bc.single_draw_lambda = cfg.es_lambda;
    bc.normalized_margin = cfg.normalized_margin;
    return bc;
}

double decay_fraction_from_log(const std::vector<BuildRecord>& log, double initial_sse) {
    int applicable = 0;
    int satisfied = 0;
    double prev = initial_sse;
    for (const auto& rec : log) {
        if (std::isfinite(rec.rate)) {
            ++applicable;
            if (rec.train_sse <= rec.rate * prev) ++satisfied;
        }
        prev = rec.train_sse;
    }
    if (applicable == 0) return kNaN;
    return static_cast<double>(satisfied) / applicable;
}

CellResult run_cell(const ExperimentConfig& cfg, const DataBundle& data,
                    ModelKind kind, int repeat) {
    CellResult cell;
    cell.model = kind;
    cell.repeat = repeat;
    const std::uint64_t base = cfg.repeat_seeds.empty()
                                   ? derive_seed(cfg.seed, {static_cast<std::uint64_t>(repeat)})
                                   : cfg.repeat_seeds[static_cast<std::size_t>(repeat)];
    cell.seed = derive_seed(base, {static_cast<std::uint64_t>(kind)});
    cell.initial_train_sse = data.split.train.targets.squaredNorm();

    const auto record = [&](int iteration, const auto& model) {
        Matrix train_pred = model.predict(data.split.train.inputs);
        Matrix test_pred = model.predict(data.split.test.inputs);
        Matrix train_y = data.split.train.targets;
        Matrix test_y = data.split.test.targets;
        if (cfg.metric_space == MetricSpace::original) {
            train_pred = data.scaler.inverse(train_pred);
            test_pred = data.scaler.inverse(test_pred);
            train_y = data.scaler.inverse(train_y);
            test_y = data.scaler.inverse(test_y);
        }
        cell.trajectory.push_back(IterationMetrics{iteration,
                                                   compute_metrics(train_y, train_pred),
                                                   compute_metrics(test_y, test_pred)});
    };

    try {
        switch (kind) {
            case ModelKind::esc_cnn: {
                auto model = build_esc_cnn(
                    data.split.train, make_build_config(cfg, cell.seed),
                    [&](const EscModel& m, const BuildRecord& r) { record(r.iteration, m); });
                model.scaler = data.scaler;
                cell.build_log = model.build_log;
                if (cell.trajectory.empty()) record(0, model);
                break;
            }
            case ModelKind::es_cnn: {
                auto model = build_es_cnn(
                    data.split.train, make_build_config(cfg, cell.seed),
                    [&](const EscModel& m, const BuildRecord& r) { record(r.iteration, m); });
                model.scaler = data.scaler;
                cell.build_log = model.build_log;
                if (cell.trajectory.empty()) record(0, model);
                break;
            }
            case ModelKind::sc_cnn: {
                auto model = build_sc_cnn(
                    data.split.train, make_build_config(cfg, cell.seed),
                    [&](const SharedConvModel& m, const BuildRecord& r) { record(r.iteration, m); });
                model.scaler = data.scaler;
                cell.build_log = model.build_log;
                if (cell.trajectory.empty()) record(0, model);
                break;
            }
            case ModelKind::scn: {
                BuildConfig bc;
                // The perceptron baselines share every parameter that has a
                // counterpart: grids, pool size, tolerance, unit budget.
                bc.max_filters = cfg.max_filters;
                bc.tolerance = cfg.tolerance;
                bc.lambda_set = cfg.lambda_set;
                bc.rate_set = cfg.rate_set;
                bc.candidates_per_pool = cfg.candidates_per_pool;
                bc.seed = cell.seed;
                bc.normalized_margin = cfg.normalized_margin;
                auto model = build_scn(
                    data.split.train, bc,
                    [&](const RandMlpModel& m, const BuildRecord& r) { record(r.iteration, m); });
                model.scaler = data.scaler;
                cell.build_log = model.build_log;
                if (cell.trajectory.empty()) record(0, model);
                break;
            }
            case ModelKind::rvfl: {
                auto model =
                    build_rvfl(data.split.train, cfg.max_filters, cfg.rvfl_lambda, cell.seed);
                model.scaler = data.scaler;
                cell.build_log = model.build_log;
                record(cfg.max_filters, model);
                break;
            }
        }
        cell.decay_fraction = decay_fraction_from_log(cell.build_log, cell.initial_train_sse);
        cell.ok = true;
    } catch (const std::exception& ex) {
        cell.ok = false;
        cell.error = ex.what();
        cell.trajectory.clear();
        cell.build_log.clear();
        cell.decay_fraction = kNaN;
    }
    return cell;
}

void append_csv_row(std::string& out, std::initializer_list<std::string> cells) {
    bool first = true;
    for (const auto& c : cells) {
        if (!first) out += ',';
        out += c;
        first = false;
    }
    out += '\n';
}

json config_to_json(const ExperimentConfig& c) {
    json j;
    j["dataset"] = c.dataset;
    j["csv-column"] = c.csv_column;
    j["ar1-length"] = c.ar1_length;
    j["ar1-alpha"] = c.ar1_alpha;
    j["ar1-noise"] = c.ar1_noise;
    j["ar1-start"] = c.ar1_start;
    j["ar1-seed"] = c.ar1_seed;
    j["embed-dim"] = c.embed_dim;
    j["horizon"] = c.horizon;
    j["scale-fit"] = c.scale_fit == ScalerFit::full_series ? "full" : "train";
    json models = json::array();
    for (auto m : c.models) models.push_back(to_string(m));
    j["models"] = std::move(models);
    j["max-filters"] = c.max_filters;
    j["tolerance"] = c.tolerance;
    j["lambda-set"] = c.lambda_set;
    j["rate-set"] = c.rate_set;
    j["candidates"] = c.candidates_per_pool;
    j["pool-kernel"] = c.pool_kernel;
    j["conv-kernel"] = c.conv_kernel;
    j["es-lambda"] = c.es_lambda;
    j["rvfl-lambda"] = c.rvfl_lambda;
    j["normalized-margin"] = c.normalized_margin;
    j["repeats"] = c.repeats;
    j["seed"] = c.seed;
    j["repeat-seeds"] = c.repeat_seeds;
    j["metric-space"] = c.metric_space == MetricSpace::scaled ? "scaled" : "original";
    j["output-dir"] = c.output_dir;
    return j;
}

ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig c;
    c.dataset = j.at("dataset").get<std::string>();
    c.csv_column = j.at("csv-column").get<std::string>();
    c.ar1_length = j.at("ar1-length").get<std::size_t>();
    c.ar1_alpha = j.at("ar1-alpha").get<double>();
    c.ar1_noise = j.at("ar1-noise").get<double>();
    c.ar1_start = j.at("ar1-start").get<double>();
    c.ar1_seed = j.at("ar1-seed").get<std::uint64_t>();
    c.embed_dim = j.at("embed-dim").get<int>();
    c.horizon = j.at("horizon").get<int>();
    c.scale_fit = j.at("scale-fit").get<std::string>() == "train" ? ScalerFit::train_only
                                                                  : ScalerFit::full_series;
    c.models.clear();
    for (const auto& m : j.at("models")) c.models.push_back(model_kind_from_string(m));
    c.max_filters = j.at("max-filters").get<int>();
    c.tolerance = j.at("tolerance").get<double>();
    c.lambda_set = j.at("lambda-set").get<std::vector<double>>();
    c.rate_set = j.at("rate-set").get<std::vector<double>>();
    c.candidates_per_pool = j.at("candidates").get<int>();
    c.pool_kernel = j.at("pool-kernel").get<int>();
    c.conv_kernel = j.at("conv-kernel").get<int>();
    c.es_lambda = j.at("es-lambda").get<double>();
    c.rvfl_lambda = j.at("rvfl-lambda").get<double>();
    c.normalized_margin = j.at("normalized-margin").get<bool>();
    c.repeats = j.at("repeats").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.repeat_seeds = j.at("repeat-seeds").get<std::vector<std::uint64_t>>();
    c.metric_space = j.at("metric-space").get<std::string>() == "original"
                         ? MetricSpace::original
                         : MetricSpace::scaled;
    c.output_dir = j.at("output-dir").get<std::string>();
    return c;
}

json triple_to_json(const MetricTriple& t) {
    return json{{"mape", num_or_null(t.mape)}, {"smape", num_or_null(t.smape)},
                {"rmse", num_or_null(t.rmse)}};
}

MetricTriple triple_from_json(const json& j) {
    return MetricTriple{num_from(j.at("mape")), num_from(j.at("smape")), num_from(j.at("rmse"))};
}

}  // namespace

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::esc_cnn: return "esc-cnn";
        case ModelKind::es_cnn: return "es-cnn";
        case ModelKind::sc_cnn: return "sc-cnn";
        case ModelKind::scn: return "scn";
        case ModelKind::rvfl: return "rvfl";
    }
    throw std::invalid_argument("to_string: unknown model kind");
}

ModelKind model_kind_from_string(const std::string& name) {
    if (name == "esc-cnn") return ModelKind::esc_cnn;
    if (name == "es-cnn") return ModelKind::es_cnn;
    if (name == "sc-cnn") return ModelKind::sc_cnn;
    if (name == "scn") return ModelKind::scn;
    if (name == "rvfl") return ModelKind::rvfl;
    throw std::invalid_argument("unknown model '" + name +
                                "' (expected esc-cnn, es-cnn, sc-cnn, scn or rvfl)");
}

void ExperimentConfig::validate() const {
    if (dataset.empty()) throw std::invalid_argument("config: dataset must be set");
    if (dataset != "ar1" && !std::filesystem::exists(dataset))
        throw std::invalid_argument("config: dataset file '" + dataset + "' does not exist");
    if (embed_dim < 1 || horizon < 1)
        throw std::invalid_argument("config: embed-dim and horizon must be >= 1");
    if (models.empty()) throw std::invalid_argument("config: at least one model required");
    if (repeats < 1) throw std::invalid_argument("config: repeats must be >= 1");
    if (!repeat_seeds.empty() && repeat_seeds.size() != static_cast<std::size_t>(repeats))
        throw std::invalid_argument("config: repeat-seeds must list one seed per repeat");
    if (max_filters < 1) throw std::invalid_argument("config: max-filters must be >= 1");
    if (output_dir.empty()) throw std::invalid_argument("config: output-dir must be set");
}

MetricTriple CellResult::best_test() const {
    MetricTriple best{kNaN, kNaN, kNaN};
    for (const auto& im : trajectory) {
        if (!(best.mape <= im.test.mape)) best.mape = im.test.mape;
        if (!(best.smape <= im.test.smape)) best.smape = im.test.smape;
        if (!(best.rmse <= im.test.rmse)) best.rmse = im.test.rmse;
    }
    return best;
}

bool RunReport::all_ok() const {
    return std::all_of(cells.begin(), cells.end(), [](const CellResult& c) { return c.ok; });
}

bool RunReport::any_ok() const {
    return std::any_of(cells.begin(), cells.end(), [](const CellResult& c) { return c.ok; });
}

std::vector<ModelSummary> summarize(const ExperimentConfig& config,
                                    const std::vector<CellResult>& cells) {
    std::vector<ModelSummary> summaries;
    for (ModelKind kind : config.models) {
        ModelSummary s;
        s.model = kind;
        for (const auto& cell : cells) {
            if (cell.model != kind || !cell.ok || cell.trajectory.empty()) continue;
            s.per_repeat_best.push_back(cell.best_test());
            ++s.ok_cells;
        }
        if (s.ok_cells > 0) {
            MetricTriple mean;
            for (const auto& b : s.per_repeat_best) {
                mean.mape += b.mape;
                mean.smape += b.smape;
                mean.rmse += b.rmse;
            }
            mean.mape /= s.ok_cells;
            mean.smape /= s.ok_cells;
            mean.rmse /= s.ok_cells;
            s.mean_best = mean;
        } else {
            s.mean_best = MetricTriple{kNaN, kNaN, kNaN};
        }
        summaries.push_back(std::move(s));
    }
    return summaries;
}

RunReport run_experiment(const ExperimentConfig& config) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();

    RunReport report;
    report.config = config;
    const DataBundle data = prepare_data(config);
    for (ModelKind kind : config.models) {
        for (int rep = 0; rep < config.repeats; ++rep) {
            report.cells.push_back(run_cell(config, data, kind, rep));
        }
    }
    report.summaries = summarize(config, report.cells);
    report.wall_clock_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v,
                                   std::chars_format::general, 17);
    if (ec != std::errc{}) throw std::runtime_error("format_double failed");
    return std::string(buf, ptr);
}

void emit_reports(const RunReport& report, const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("emit_reports: cannot create '" + dir + "': " + ec.message());

    const auto write = [&](const std::string& name, const std::string& body) {
        const std::string path = (fs::path(dir) / name).string();
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("emit_reports: cannot write '" + path + "'");
        out << body;
    };

    // summary.csv: one row per surviving model and metric.
    std::string summary = "model,horizon,metric,mean_best\n";
    for (const auto& s : report.summaries) {
        if (s.ok_cells == 0) continue;
        const std::string h = std::to_string(report.config.horizon);
        append_csv_row(summary, {to_string(s.model), h, "mape", format_double(s.mean_best.mape)});
        append_csv_row(summary, {to_string(s.model), h, "smape", format_double(s.mean_best.smape)});
        append_csv_row(summary, {to_string(s.model), h, "rmse", format_double(s.mean_best.rmse)});
    }
    write("summary.csv", summary);

    // convergence.csv: full rmse trajectories.
    std::string convergence = "model,repeat,iteration,train_rmse,test_rmse\n";
    for (const auto& cell : report.cells) {
        for (const auto& im : cell.trajectory) {
            append_csv_row(convergence,
                           {to_string(cell.model), std::to_string(cell.repeat),
                            std::to_string(im.iteration), format_double(im.train.rmse),
                            format_double(im.test.rmse)});
        }
    }
    write("convergence.csv", convergence);

    write("config.json", config_to_json(report.config).dump(2) + "\n");

    json j;
    j["format"] = "esccnn-report";
    j["version"] = 1;
    j["config"] = config_to_json(report.config);
    j["wall_clock_sec"] = report.wall_clock_sec;
    json cells = json::array();
    for (const auto& cell : report.cells) {
        json cj;
        cj["model"] = to_string(cell.model);
        cj["repeat"] = cell.repeat;
        cj["seed"] = cell.seed;
        cj["ok"] = cell.ok;
        cj["error"] = cell.error;
        cj["initial_train_sse"] = cell.initial_train_sse;
        cj["decay_fraction"] = num_or_null(cell.decay_fraction);
        json traj = json::array();
        for (const auto& im : cell.trajectory) {
            traj.push_back(json{{"iteration", im.iteration},
                                {"train", triple_to_json(im.train)},
                                {"test", triple_to_json(im.test)}});
        }
        cj["trajectory"] = std::move(traj);
        json log = json::array();
        for (const auto& rec : cell.build_log) {
            log.push_back(json{{"iteration", rec.iteration},
                               {"lambda", num_or_null(rec.lambda)},
                               {"rate", num_or_null(rec.rate)},
                               {"score", num_or_null(rec.score)},
                               {"train_sse", rec.train_sse}});
        }
        cj["build_log"] = std::move(log);
        cells.push_back(std::move(cj));
    }
    j["cells"] = std::move(cells);
    write("report.json", j.dump(2) + "\n");
}

RunReport load_report(const std::string& dir) {
    const std::string path = (std::filesystem::path(dir) / "report.json").string();
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_report: cannot open '" + path + "'");
    const json j = json::parse(in);
    if (j.value("format", "") != "esccnn-report")
        throw std::runtime_error("load_report: '" + path + "' is not a report file");

    RunReport report;
    report.config = config_from_json(j.at("config"));
    report.wall_clock_sec = j.at("wall_clock_sec").get<double>();
    for (const auto& cj : j.at("cells")) {
        CellResult cell;
        cell.model = model_kind_from_string(cj.at("model").get<std::string>());
        cell.repeat = cj.at("repeat").get<int>();
        cell.seed = cj.at("seed").get<std::uint64_t>();
        cell.ok = cj.at("ok").get<bool>();
        cell.error = cj.at("error").get<std::string>();
        cell.initial_train_sse = cj.at("initial_train_sse").get<double>();
        cell.decay_fraction = num_from(cj.at("decay_fraction"));
        for (const auto& tj : cj.at("trajectory")) {
            cell.trajectory.push_back(IterationMetrics{tj.at("iteration").get<int>(),
                                                       triple_from_json(tj.at("train")),
                                                       triple_from_json(tj.at("test"))});
        }
        for (const auto& lj : cj.at("build_log")) {
            cell.build_log.push_back(BuildRecord{lj.at("iteration").get<int>(),
                                                 num_from(lj.at("lambda")),
                                                 num_from(lj.at("rate")),
                                                 num_from(lj.at("score")),
                                                 lj.at("train_sse").get<double>()});
        }
        report.cells.push_back(std::move(cell));
    }
    report.summaries = summarize(report.config, report.cells);
    return report;
}

}  // namespace esccnn
