#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "sldiff/dataset.hpp"
#include "sldiff/metrics.hpp"
#include "sldiff/model.hpp"
#include "sldiff/rng.hpp"
#include "support/oracles.hpp"

using namespace sldiff;

namespace {
Eigen::ArrayXd to_array(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::ArrayXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}
}  // namespace

TEST_CASE("perfect prediction") {
    Eigen::ArrayXd x(3);
    x << 1.0, 2.0, 3.0;
    AccuracyReport r = accuracy(x, x);
    CHECK(r.mae == 0.0);
    CHECK(r.rmse == 0.0);
    CHECK(r.mape == 0.0);
    CHECK(r.classification == AccuracyClass::high);
    CHECK(r.n == 3);
}

TEST_CASE("trend accuracy on the 1990-2021 window") {
    TimeSeries train = builtin_series("us-natgas").slice(1990.0, 2021.0);
    SlParams p(-0.03828096, 0.0673062);
    Eigen::ArrayXd predicted = mean_curve(p, 1990.0, 11.85815, train.times());
    AccuracyReport r = accuracy(train.values(), predicted);

    CHECK(std::abs(r.mae - 1.718274) < 1e-3);
    REQUIRE(r.mape_vs_predicted.has_value());
    CHECK(std::abs(*r.mape_vs_predicted - 7.559711) < 1e-2);
    // Dividing by the observed values instead gives 8.4722 on this data.
    CHECK(std::abs(r.mape - 8.472207) < 1e-2);
    CHECK(r.classification == AccuracyClass::high);

    SUBCASE("rmse against the two-pass oracle") {
        std::vector<double> errors;
        for (Eigen::Index i = 0; i < train.size(); ++i) {
            errors.push_back(train.value(i) - predicted[i]);
        }
        double oracle = oracles::two_pass_rmse(errors);
        CHECK(std::abs(r.rmse - oracle) < 1e-12);
        CHECK(r.rmse >= r.mae);
        // The stated formula cannot produce a value near n * rmse.
        CHECK(r.rmse < 3.0);
    }
}

TEST_CASE("rmse dominates mae") {
    CounterRng rng(314159);
    for (int c = 0; c < 100; ++c) {
        int n = 1 + static_cast<int>(rng.uniform(0, c) * 40);
        std::vector<double> obs(n), pred(n);
        for (int i = 0; i < n; ++i) {
            obs[i] = 0.1 + 50.0 * rng.uniform(1, c * 100 + i);
            pred[i] = obs[i] + 20.0 * (rng.uniform(2, c * 100 + i) - 0.5);
        }
        AccuracyReport r = accuracy(to_array(obs), to_array(pred));
        CHECK(r.rmse >= r.mae);
    }
}

TEST_CASE("permutation invariance") {
    CounterRng rng(99);
    int n = 37;
    std::vector<double> obs(n), pred(n);
    for (int i = 0; i < n; ++i) {
        obs[i] = 0.5 + 30.0 * rng.uniform(0, i);
        pred[i] = 0.5 + 30.0 * rng.uniform(1, i);
    }
    AccuracyReport base = accuracy(to_array(obs), to_array(pred));

    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    // Fisher-Yates with the deterministic stream.
    for (int i = n - 1; i > 0; --i) {
        int j = static_cast<int>(rng.uniform(2, i) * (i + 1));
        std::swap(idx[i], idx[j]);
    }
    std::vector<double> obs2(n), pred2(n);
    for (int i = 0; i < n; ++i) {
        obs2[i] = obs[idx[i]];
        pred2[i] = pred[idx[i]];
    }
    AccuracyReport shuffled = accuracy(to_array(obs2), to_array(pred2));
    CHECK(shuffled.mae == doctest::Approx(base.mae).epsilon(1e-12));
    CHECK(shuffled.rmse == doctest::Approx(base.rmse).epsilon(1e-12));
    CHECK(shuffled.mape == doctest::Approx(base.mape).epsilon(1e-12));
}

TEST_CASE("scale behavior") {
    Eigen::ArrayXd obs(4), pred(4);
    obs << 2.0, 4.0, 9.0, 5.5;
    pred << 2.5, 3.5, 8.0, 6.0;
    AccuracyReport base = accuracy(obs, pred);
    const double c = 17.5;
    AccuracyReport scaled = accuracy(obs * c, pred * c);
    CHECK(scaled.mae == doctest::Approx(base.mae * c).epsilon(1e-12));
    CHECK(scaled.rmse == doctest::Approx(base.rmse * c).epsilon(1e-12));
    CHECK(scaled.mape == doctest::Approx(base.mape).epsilon(1e-12));
}

TEST_CASE("input validation") {
    Eigen::ArrayXd a(2), b(3), neg(2);
    a << 1.0, 2.0;
    b << 1.0, 2.0, 3.0;
    neg << 1.0, -2.0;
    CHECK_THROWS_AS(accuracy(a, b), LengthMismatch);
    CHECK_THROWS_AS(accuracy(neg, a), InvalidInput);
    CHECK_THROWS_AS(accuracy(Eigen::ArrayXd(0), Eigen::ArrayXd(0)), InvalidInput);

    // Non-positive predictions only disable the predicted-base variant.
    Eigen::ArrayXd pred(2);
    pred << 1.0, -2.0;
    AccuracyReport r = accuracy(a, pred);
    CHECK_FALSE(r.mape_vs_predicted.has_value());
    CHECK(r.mae > 0.0);
}

TEST_CASE("lewis classification boundaries") {
    auto classify = [](double mape_percent) {
        Eigen::ArrayXd obs(1), pred(1);
        obs << 1.0;
        pred << 1.0 - mape_percent / 100.0;
        return accuracy(obs, pred).classification;
    };
    // Dyadic error fractions keep the computed MAPE exact; 50% is an exact
    // boundary hit for the inclusive upper edge of "reasonable".
    CHECK(classify(0.0) == AccuracyClass::high);
    CHECK(classify(9.375) == AccuracyClass::high);
    CHECK(classify(10.15625) == AccuracyClass::good);
    CHECK(classify(19.921875) == AccuracyClass::good);
    CHECK(classify(20.3125) == AccuracyClass::reasonable);
    CHECK(classify(50.0) == AccuracyClass::reasonable);
    CHECK(classify(50.78125) == AccuracyClass::inaccurate);

    CHECK(to_string(AccuracyClass::high) == "high");
    CHECK(to_string(AccuracyClass::inaccurate) == "inaccurate");
}
