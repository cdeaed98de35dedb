#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "esccnn/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

using namespace esccnn;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& body)
        : path("/tmp/esccnn_test_" + name) {
        std::ofstream out(path, std::ios::binary);
        out << body;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("generate_ar1 zero-noise recursion") {
    const auto s = generate_ar1(5, 0.01, 0.0, 0.0, 7);
    REQUIRE(s.size() == 5);
    const double expect[] = {0.01, 0.02, 0.03, 0.04, 0.05};
    for (int i = 0; i < 5; ++i) CHECK(s.values[i] == doctest::Approx(expect[i]).epsilon(1e-15));
}

TEST_CASE("generate_ar1 zero-noise closed form is exact for dyadic drift") {
    // alpha representable in binary; the recursion must hit alpha*t exactly.
    const double alpha = 0.25;
    const double x0 = 2.0;
    const auto s = generate_ar1(400, alpha, 0.0, x0, 0);
    for (std::size_t t = 1; t <= s.size(); ++t) {
        CHECK(s.values[t - 1] - x0 == alpha * static_cast<double>(t));
    }
}

TEST_CASE("generate_ar1 determinism and seed sensitivity") {
    const auto a = generate_ar1(500, 0.01, 0.25, 0.0, 42);
    const auto b = generate_ar1(500, 0.01, 0.25, 0.0, 42);
    const auto c = generate_ar1(500, 0.01, 0.25, 0.0, 43);
    CHECK(a.values == b.values);
    CHECK(a.values != c.values);
    for (double v : a.values) CHECK(std::isfinite(v));
}

TEST_CASE("generate_ar1 noise bounds and parameter validation") {
    const double hw = 0.25;
    const auto s = generate_ar1(2000, 0.0, hw, 0.0, 9);
    for (std::size_t t = 1; t < s.size(); ++t) {
        const double eps = s.values[t] - s.values[t - 1];
        CHECK(eps >= -hw);
        CHECK(eps <= hw);
    }
    CHECK_THROWS_AS((void)generate_ar1(0), std::invalid_argument);
    CHECK_THROWS_AS((void)generate_ar1(5, 0.01, -1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)generate_ar1(5, std::nan("")), std::invalid_argument);
}

TEST_CASE("load_csv with header column by name") {
    TempFile f("hdr.csv", "date,price\n1,10.5\n2,11.25\n3,9.75\n");
    const auto s = load_csv(f.path, "price");
    REQUIRE(s.size() == 3);
    CHECK(s.values[0] == 10.5);
    CHECK(s.values[2] == 9.75);
    CHECK(s.name == "price");
}

TEST_CASE("load_csv headerless single column") {
    TempFile f("plain.csv", "1\n2\n3\n");
    const auto s = load_csv(f.path, "0");
    REQUIRE(s.size() == 3);
    CHECK(s.values[0] == 1.0);
    CHECK(s.values[1] == 2.0);
    CHECK(s.values[2] == 3.0);
}

TEST_CASE("load_csv column by index with header present") {
    TempFile f("idx.csv", "a,b\n1,4\n2,5\n");
    const auto s = load_csv(f.path, "1");
    REQUIRE(s.size() == 2);
    CHECK(s.values[1] == 5.0);
}

TEST_CASE("load_csv error names the offending row") {
    TempFile f("bad.csv", "v\n1\n2\n3\n4\n5\nabc\n7\n");
    try {
        (void)load_csv(f.path, "v");
        FAIL("expected parse error");
    } catch (const std::runtime_error& ex) {
        CHECK(std::string(ex.what()).find("row 7") != std::string::npos);
        CHECK(std::string(ex.what()).find("abc") != std::string::npos);
    }
}

TEST_CASE("load_csv missing column and empty file") {
    TempFile f("m.csv", "a,b\n1,2\n");
    CHECK_THROWS_AS((void)load_csv(f.path, "price"), std::runtime_error);
    TempFile e("empty.csv", "");
    CHECK_THROWS_AS((void)load_csv(e.path, "0"), std::runtime_error);
    CHECK_THROWS_AS((void)load_csv("/nonexistent/x.csv", "0"), std::runtime_error);
}

TEST_CASE("scaler endpoints and midpoint") {
    RawSeries s{"t", {-2.0, 0.0, 2.0}};
    const auto p = fit_scaler(s, ScalerFit::full_series);
    CHECK(p.transform(-2.0) == -1.0);
    CHECK(p.transform(2.0) == 1.0);
    CHECK(p.transform(0.0) == 0.0);
}

TEST_CASE("scaler round-trip within 1e-12") {
    const auto s = generate_ar1(200, 0.01, 0.25, 0.0, 5);
    const auto p = fit_scaler(s, ScalerFit::full_series);
    for (double v : s.values) {
        CHECK(p.inverse(p.transform(v)) == doctest::Approx(v).epsilon(1e-12));
    }
}

TEST_CASE("scaler rejects a constant fit range") {
    RawSeries s{"c", {3.0, 3.0, 3.0, 3.0}};
    CHECK_THROWS_AS((void)fit_scaler(s, ScalerFit::full_series), std::invalid_argument);
}

TEST_CASE("train-only scaling leaves drifting test values outside [-1,1]") {
    const auto s = generate_ar1(500, 0.01, 0.25, 0.0, 26);
    const int t_len = 15, horizon = 1;
    const auto p = fit_scaler(s, ScalerFit::train_only, t_len, horizon);
    const std::size_t prefix = train_prefix_length(s.size(), t_len, horizon);
    double max_scaled_test = -1e300;
    double min_scaled_test = 1e300;
    for (std::size_t i = prefix; i < s.size(); ++i) {
        max_scaled_test = std::max(max_scaled_test, p.transform(s.values[i]));
        min_scaled_test = std::min(min_scaled_test, p.transform(s.values[i]));
    }
    // accepted, not clipped
    CHECK((max_scaled_test > 1.0 || min_scaled_test < -1.0));
}

TEST_CASE("make_windows index arithmetic") {
    RawSeries s{"t", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}};
    const auto p = fit_scaler(s, ScalerFit::full_series);
    const auto w = make_windows(s, p, 3, 1);
    REQUIRE(w.count() == 7);
    for (int j = 0; j < 3; ++j) CHECK(w.inputs(0, j) == p.transform(s.values[j]));
    CHECK(w.targets(0, 0) == p.transform(s.values[3]));
    // last window ends at the last observation
    CHECK(w.targets(6, 0) == p.transform(s.values[9]));
}

TEST_CASE("make_windows count for the benchmark sizes") {
    const auto s = generate_ar1(500, 0.01, 0.25, 0.0, 3);
    const auto p = fit_scaler(s, ScalerFit::full_series);
    CHECK(make_windows(s, p, 15, 6).count() == 480);
    CHECK(make_windows(s, p, 15, 1).count() == 485);
}

TEST_CASE("make_windows boundary and sizing error") {
    RawSeries s{"t", {1, 2, 3, 4}};
    const auto p = fit_scaler(s, ScalerFit::full_series);
    CHECK(make_windows(s, p, 3, 1).count() == 1);
    CHECK_THROWS_AS((void)make_windows(s, p, 4, 1), std::invalid_argument);
    try {
        (void)make_windows(s, p, 4, 2);
    } catch (const std::invalid_argument& ex) {
        CHECK(std::string(ex.what()).find("6") != std::string::npos);  // states the minimum
    }
}

TEST_CASE("window reconstruction equals the scaled slice exactly") {
    const auto s = generate_ar1(60, 0.01, 0.25, 0.0, 11);
    const auto p = fit_scaler(s, ScalerFit::full_series);
    const int t_len = 5, horizon = 3;
    const auto w = make_windows(s, p, t_len, horizon);
    for (Eigen::Index i = 0; i < w.count(); ++i) {
        for (int j = 0; j < t_len; ++j) CHECK(w.inputs(i, j) == p.transform(s.values[i + j]));
        for (int k = 0; k < horizon; ++k)
            CHECK(w.targets(i, k) == p.transform(s.values[i + t_len + k]));
    }
}

TEST_CASE("split_two_thirds sizes and order") {
    const auto s = generate_ar1(500, 0.01, 0.25, 0.0, 3);
    const auto p = fit_scaler(s, ScalerFit::full_series);
    const auto w = make_windows(s, p, 15, 6);
    const auto split = split_two_thirds(w);
    CHECK(split.train.count() == 320);
    CHECK(split.test.count() == 160);
    // partition: contiguous, order preserved
    CHECK(split.train.inputs.row(319) == w.inputs.row(319));
    CHECK(split.test.inputs.row(0) == w.inputs.row(320));
    CHECK(split.test.inputs.row(159) == w.inputs.row(479));
}

TEST_CASE("split_two_thirds boundaries") {
    SupervisedWindows w;
    w.embed_dim = 2;
    w.horizon = 1;
    w.inputs = Matrix::Random(3, 2);
    w.targets = Matrix::Random(3, 1);
    auto s3 = split_two_thirds(w);
    CHECK(s3.train.count() == 2);
    CHECK(s3.test.count() == 1);

    w.inputs = Matrix::Random(7, 2);
    w.targets = Matrix::Random(7, 1);
    auto s7 = split_two_thirds(w);
    CHECK(s7.train.count() == 4);
    CHECK(s7.test.count() == 3);

    w.inputs = Matrix::Random(2, 2);
    w.targets = Matrix::Random(2, 1);
    CHECK_THROWS_AS((void)split_two_thirds(w), std::invalid_argument);
}
