#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "esccnn/metrics.hpp"
#include "esccnn/rng.hpp"
#include "oracles.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace esccnn;

TEST_CASE("perfect prediction scores zero everywhere") {
    Vector y(3);
    y << 1, 2, 4;
    CHECK(mape(y, y) == 0.0);
    CHECK(smape(y, y) == 0.0);
    CHECK(rmse(y, y) == 0.0);
}

TEST_CASE("single-sample hand values") {
    Vector y(1), yhat(1);
    y << 2;
    yhat << 1;
    CHECK(mape(y, yhat) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(smape(y, yhat) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(rmse(y, yhat) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("degenerate symmetric denominator engages the floor") {
    Vector y(2), yhat(2);
    y << 1, -1;
    yhat << -1, 1;
    const double s = smape(y, yhat);
    CHECK(std::isfinite(s));
    CHECK(s == doctest::Approx(2.0 / 1e-8).epsilon(1e-12));
    // mape floor likewise
    Vector z(1), zh(1);
    z << 0;
    zh << 1;
    CHECK(std::isfinite(mape(z, zh)));
    CHECK(mape(z, zh) == doctest::Approx(1.0 / 1e-8).epsilon(1e-12));
}

TEST_CASE("length mismatch and empty input are rejected") {
    Vector a(2), b(3);
    a.setZero();
    b.setZero();
    CHECK_THROWS_AS((void)mape(a, b), std::invalid_argument);
    CHECK_THROWS_AS((void)smape(a, b), std::invalid_argument);
    CHECK_THROWS_AS((void)rmse(a, b), std::invalid_argument);
    Vector e(0);
    CHECK_THROWS_AS((void)rmse(e, e), std::invalid_argument);
}

TEST_CASE("rmse is zero exactly when predictions equal targets") {
    Vector y(3), yhat(3);
    y << 1, 2, 3;
    yhat << 1, 2, 3 + 1e-12;
    CHECK(rmse(y, yhat) > 0.0);
    yhat[2] = 3;
    CHECK(rmse(y, yhat) == 0.0);
}

TEST_CASE("matrix metrics flatten over samples and horizons") {
    Matrix y(2, 2), yhat(2, 2);
    y << 1, 2, 3, 4;
    yhat << 1, 2, 3, 5;
    const auto t = compute_metrics(y, yhat);
    // one error of 1 among 4 entries
    CHECK(t.rmse == doctest::Approx(std::sqrt(1.0 / 4.0)).epsilon(1e-15));
    CHECK(t.mape == doctest::Approx(0.25 * (1.0 / 4.0)).epsilon(1e-15));
    CHECK(t.smape == doctest::Approx(0.25 * (1.0 / 9.0)).epsilon(1e-15));
    CHECK_THROWS_AS((void)compute_metrics(y, Matrix::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("metrics match the high-precision scalar reference") {
    Rng rng(77);
    for (int trial = 0; trial < 400; ++trial) {
        const int n = 1 + static_cast<int>(rng.next_u64() % 40);
        std::vector<double> y(n), yhat(n);
        for (int i = 0; i < n; ++i) {
            y[i] = rng.uniform_sym(3.0);
            yhat[i] = y[i] + rng.uniform_sym(0.5);
        }
        const Vector ye = Eigen::Map<const Vector>(y.data(), n);
        const Vector pe = Eigen::Map<const Vector>(yhat.data(), n);
        const auto expect = oracle::metrics(y, yhat);
        CHECK(mape(ye, pe) == doctest::Approx(expect.mape).epsilon(1e-12));
        CHECK(smape(ye, pe) == doctest::Approx(expect.smape).epsilon(1e-12));
        CHECK(rmse(ye, pe) == doctest::Approx(expect.rmse).epsilon(1e-12));
    }
}
