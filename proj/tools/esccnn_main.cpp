// Command-line front end: synthesize benchmark series, run experiments from
// a key=value config file (any field overridable by flag), and re-emit the
// CSV reports from a stored run.

#include "esccnn/dataset.hpp"
#include "esccnn/experiment.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& csv, const std::string& what) {
    std::vector<double> out;
    for (const auto& tok : split_list(csv)) {
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw CLI::ValidationError(what, "'" + tok + "' is not a number");
        }
    }
    return out;
}

int run_generate(const std::string& out_path, std::size_t n, double alpha, double noise,
                 double x0, std::uint64_t seed, const std::string& name) {
    const auto series = esccnn::generate_ar1(n, alpha, noise, x0, seed);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write '" << out_path << "'\n";
        return 1;
    }
    out << name << "\n";
    for (double v : series.values) out << esccnn::format_double(v) << "\n";
    std::cout << "wrote " << series.size() << " values to " << out_path << "\n";
    return 0;
}

void print_summary(const esccnn::RunReport& report) {
    std::cout << "\nmodel      cells  mean best test (mape / smape / rmse)\n";
    for (const auto& s : report.summaries) {
        std::cout << std::left << std::setw(11) << esccnn::to_string(s.model)
                  << std::setw(7) << s.ok_cells;
        if (s.ok_cells > 0) {
            std::cout << std::setprecision(6) << s.mean_best.mape << " / " << s.mean_best.smape
                      << " / " << s.mean_best.rmse;
        } else {
            std::cout << "all repeats failed";
        }
        std::cout << "\n";
    }
    for (const auto& cell : report.cells) {
        if (!cell.ok) {
            std::cout << "failed: " << esccnn::to_string(cell.model) << " repeat "
                      << cell.repeat << ": " << cell.error << "\n";
        }
    }
    std::cout << "wall clock: " << std::setprecision(3) << report.wall_clock_sec << " s\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Incremental random convolutional forecasters and baselines"};
    app.require_subcommand(1);

    // generate ------------------------------------------------------------
    auto* gen = app.add_subcommand("generate", "Synthesize a stochastic-trend series to CSV");
    std::string gen_out = "ar1.csv";
    std::string gen_name = "value";
    std::size_t gen_n = 500;
    double gen_alpha = 0.01, gen_noise = 0.25, gen_x0 = 0.0;
    std::uint64_t gen_seed = 26;
    gen->add_option("--out", gen_out, "Output CSV path");
    gen->add_option("--n", gen_n, "Number of observations");
    gen->add_option("--alpha", gen_alpha, "Per-step drift");
    gen->add_option("--noise", gen_noise, "Uniform noise half-width");
    gen->add_option("--x0", gen_x0, "Start value");
    gen->add_option("--seed", gen_seed, "Generator seed");
    gen->add_option("--name", gen_name, "Header name of the value column");

    // run -----------------------------------------------------------------
    auto* run = app.add_subcommand("run", "Run an experiment and write reports");
    run->set_config("--config", "", "Key=value config file; flags override its fields");
    esccnn::ExperimentConfig cfg;
    std::string models_csv = "esc-cnn,es-cnn,sc-cnn,scn,rvfl";
    std::string lambda_csv = "0.5,1,3,5,10,30,50,100";
    std::string rate_csv = "0.9,0.99,0.999,0.9999,0.99999";
    std::string seeds_csv;
    std::string scale_fit = "full";
    std::string metric_space = "scaled";
    run->add_option("--dataset", cfg.dataset, "'ar1' or a CSV file path");
    run->add_option("--csv-column", cfg.csv_column, "CSV column name or zero-based index");
    run->add_option("--ar1-length", cfg.ar1_length, "Synthetic series length");
    run->add_option("--ar1-alpha", cfg.ar1_alpha, "Synthetic drift");
    run->add_option("--ar1-noise", cfg.ar1_noise, "Synthetic noise half-width");
    run->add_option("--ar1-start", cfg.ar1_start, "Synthetic start value");
    run->add_option("--ar1-seed", cfg.ar1_seed, "Synthetic series seed");
    run->add_option("--embed-dim", cfg.embed_dim, "Window length fed to the models");
    run->add_option("--horizon", cfg.horizon, "Forecast steps predicted jointly");
    run->add_option("--scale-fit", scale_fit, "Scaler statistics: 'full' or 'train'")
        ->check(CLI::IsMember({"full", "train"}));
    run->add_option("--models", models_csv, "Comma-separated model list");
    run->add_option("--max-filters", cfg.max_filters, "Unit budget per model");
    run->add_option("--tolerance", cfg.tolerance, "Residual norm stop tolerance");
    run->add_option("--lambda-set", lambda_csv, "Comma-separated weight half-widths");
    run->add_option("--rate-set", rate_csv, "Comma-separated reduction rates in (0,1)");
    run->add_option("--candidates", cfg.candidates_per_pool, "Candidates per grid cell");
    run->add_option("--pool-kernel", cfg.pool_kernel, "Average-pooling width");
    run->add_option("--conv-kernel", cfg.conv_kernel,
                    "Convolution taps (0 = embed-dim/4)");
    run->add_option("--es-lambda", cfg.es_lambda, "Half-width for the unconditional builder");
    run->add_option("--rvfl-lambda", cfg.rvfl_lambda, "Half-width for the one-shot perceptron");
    run->add_flag("--normalized-margin", cfg.normalized_margin,
                  "Normalize admission margins by the feature norm");
    run->add_option("--repeats", cfg.repeats, "Independent repeats per model");
    run->add_option("--seed", cfg.seed, "Master seed");
    run->add_option("--repeat-seeds", seeds_csv, "Comma-separated per-repeat seeds");
    run->add_option("--metric-space", metric_space, "'scaled' or 'original'")
        ->check(CLI::IsMember({"scaled", "original"}));
    run->add_option("--output-dir", cfg.output_dir, "Report directory");

    // report ----------------------------------------------------------------
    auto* rep = app.add_subcommand("report", "Re-emit CSV reports from a stored run");
    std::string rep_from, rep_out;
    rep->add_option("--from", rep_from, "Directory holding report.json")->required();
    rep->add_option("--out", rep_out, "Destination directory (default: same)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            return run_generate(gen_out, gen_n, gen_alpha, gen_noise, gen_x0, gen_seed, gen_name);
        }
        if (run->parsed()) {
            cfg.scale_fit = scale_fit == "train" ? esccnn::ScalerFit::train_only
                                                 : esccnn::ScalerFit::full_series;
            cfg.metric_space = metric_space == "original" ? esccnn::MetricSpace::original
                                                          : esccnn::MetricSpace::scaled;
            cfg.models.clear();
            for (const auto& name : split_list(models_csv))
                cfg.models.push_back(esccnn::model_kind_from_string(name));
            cfg.lambda_set = parse_double_list(lambda_csv, "--lambda-set");
            cfg.rate_set = parse_double_list(rate_csv, "--rate-set");
            cfg.repeat_seeds.clear();
            for (const auto& tok : split_list(seeds_csv))
                cfg.repeat_seeds.push_back(std::stoull(tok));

            const auto report = esccnn::run_experiment(cfg);
            esccnn::emit_reports(report, cfg.output_dir);
            print_summary(report);
            std::cout << "reports written to " << cfg.output_dir << "\n";
            return report.all_ok() ? 0 : 2;
        }
        if (rep->parsed()) {
            const auto report = esccnn::load_report(rep_from);
            esccnn::emit_reports(report, rep_out.empty() ? rep_from : rep_out);
            print_summary(report);
            return report.all_ok() ? 0 : 2;
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
