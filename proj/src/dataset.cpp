#include "esccnn/dataset.hpp"

#include "esccnn/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace esccnn {

namespace {

bool parse_double(const std::string& token, double& out) {
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last && !token.empty();
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

}  // namespace

RawSeries generate_ar1(std::size_t n, double alpha, double noise_halfwidth,
                       double x0, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("generate_ar1: n must be >= 1");
    if (!std::isfinite(alpha) || !std::isfinite(noise_halfwidth) || !std::isfinite(x0))
        throw std::invalid_argument("generate_ar1: parameters must be finite");
    if (noise_halfwidth < 0.0)
        throw std::invalid_argument("generate_ar1: noise_halfwidth must be >= 0");

    Rng rng(seed);
    RawSeries series;
    series.name = "ar1";
    series.values.resize(n);
    double x = x0;
    for (std::size_t t = 0; t < n; ++t) {
        x = alpha + x + (noise_halfwidth > 0.0 ? rng.uniform_sym(noise_halfwidth) : 0.0);
        series.values[t] = x;
    }
    return series;
}

RawSeries load_csv(const std::string& path, const std::string& column) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_csv: cannot open '" + path + "'");

    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!trim(line).empty()) lines.push_back(line);
    }
    if (lines.empty()) throw std::runtime_error("load_csv: '" + path + "' is empty");

    // Header detection: a first row that is not fully numeric is a header.
    const auto first = split_csv_line(lines.front());
    bool has_header = false;
    for (const auto& cell : first) {
        double v;
        if (!parse_double(cell, v)) { has_header = true; break; }
    }

    // Resolve the column selector: header name first, then numeric index.
    std::optional<std::size_t> col;
    if (has_header) {
        for (std::size_t i = 0; i < first.size(); ++i) {
            if (first[i] == column) { col = i; break; }
        }
    }
    if (!col) {
        int idx = -1;
        auto [ptr, ec] = std::from_chars(column.data(), column.data() + column.size(), idx);
        if (ec == std::errc{} && ptr == column.data() + column.size() && idx >= 0) {
            col = static_cast<std::size_t>(idx);
        }
    }
    if (!col) {
        throw std::runtime_error("load_csv: column '" + column + "' not found in '" + path + "'");
    }

    RawSeries series;
    series.name = has_header && *col < first.size() ? first[*col] : column;
    series.values.reserve(lines.size());
    for (std::size_t r = has_header ? 1 : 0; r < lines.size(); ++r) {
        const auto cells = split_csv_line(lines[r]);
        const std::size_t lineno = r + 1;  // physical 1-based line number
        if (*col >= cells.size()) {
            throw std::runtime_error("load_csv: row " + std::to_string(lineno) +
                                     " has no column " + std::to_string(*col));
        }
        double v;
        if (!parse_double(cells[*col], v)) {
            throw std::runtime_error("load_csv: non-numeric cell '" + cells[*col] +
                                     "' at row " + std::to_string(lineno));
        }
        if (!std::isfinite(v)) {
            throw std::runtime_error("load_csv: non-finite value at row " + std::to_string(lineno));
        }
        series.values.push_back(v);
    }
    if (series.values.empty()) {
        throw std::runtime_error("load_csv: '" + path + "' holds no data rows");
    }
    return series;
}

Matrix ScalerParams::transform(const Matrix& m) const {
    return ((m.array() - min) * (2.0 / (max - min)) - 1.0).matrix();
}

Matrix ScalerParams::inverse(const Matrix& m) const {
    return ((m.array() + 1.0) * ((max - min) / 2.0) + min).matrix();
}

std::size_t train_prefix_length(std::size_t series_len, int embed_dim, int horizon) {
    if (embed_dim < 1 || horizon < 1)
        throw std::invalid_argument("train_prefix_length: embed_dim and horizon must be >= 1");
    const std::size_t span = static_cast<std::size_t>(embed_dim) + static_cast<std::size_t>(horizon);
    if (series_len < span)
        throw std::invalid_argument("train_prefix_length: series shorter than one window");
    const std::size_t n_windows = series_len - span + 1;
    const std::size_t n_train = 2 * n_windows / 3;
    return n_train + span - 1;
}

ScalerParams fit_scaler(const RawSeries& series, ScalerFit fit,
                        int embed_dim, int horizon) {
    std::size_t len = series.size();
    if (len == 0) throw std::invalid_argument("fit_scaler: empty series");
    if (fit == ScalerFit::train_only) len = train_prefix_length(len, embed_dim, horizon);

    double lo = series.values[0];
    double hi = series.values[0];
    for (std::size_t i = 0; i < len; ++i) {
        const double v = series.values[i];
        if (!std::isfinite(v)) throw std::invalid_argument("fit_scaler: non-finite observation");
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!(hi > lo)) {
        throw std::invalid_argument("fit_scaler: constant fit range (" + series.name +
                                    "), scaler would be degenerate");
    }
    return ScalerParams{lo, hi};
}

SupervisedWindows make_windows(const RawSeries& series, const ScalerParams& scaler,
                               int embed_dim, int horizon) {
    if (embed_dim < 1 || horizon < 1)
        throw std::invalid_argument("make_windows: embed_dim and horizon must be >= 1");
    const std::size_t len = series.size();
    const std::size_t span = static_cast<std::size_t>(embed_dim) + static_cast<std::size_t>(horizon);
    if (len < span) {
        throw std::invalid_argument("make_windows: series of length " + std::to_string(len) +
                                    " is shorter than the required minimum " + std::to_string(span));
    }
    for (double v : series.values) {
        if (!std::isfinite(v)) throw std::invalid_argument("make_windows: non-finite observation");
    }

    std::vector<double> scaled(len);
    for (std::size_t i = 0; i < len; ++i) scaled[i] = scaler.transform(series.values[i]);

    const Eigen::Index n = static_cast<Eigen::Index>(len - span + 1);
    SupervisedWindows w;
    w.embed_dim = embed_dim;
    w.horizon = horizon;
    w.inputs.resize(n, embed_dim);
    w.targets.resize(n, horizon);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (int j = 0; j < embed_dim; ++j) w.inputs(i, j) = scaled[i + j];
        for (int k = 0; k < horizon; ++k) w.targets(i, k) = scaled[i + embed_dim + k];
    }
    return w;
}

SplitWindows split_two_thirds(const SupervisedWindows& windows) {
    const Eigen::Index n = windows.count();
    if (n < 3) {
        throw std::invalid_argument("split_two_thirds: need at least 3 samples, got " +
                                    std::to_string(n));
    }
    const Eigen::Index n_train = 2 * n / 3;

    SplitWindows s;
    s.train.embed_dim = s.test.embed_dim = windows.embed_dim;
    s.train.horizon = s.test.horizon = windows.horizon;
    s.train.inputs = windows.inputs.topRows(n_train);
    s.train.targets = windows.targets.topRows(n_train);
    s.test.inputs = windows.inputs.bottomRows(n - n_train);
    s.test.targets = windows.targets.bottomRows(n - n_train);
    return s;
}

}  // namespace esccnn
