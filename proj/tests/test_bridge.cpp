#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fpt/bridge.hpp"
#include "fpt/error.hpp"
#include "fpt/stats.hpp"
#include "helpers.hpp"

using namespace fpt;

namespace {

EstimateCI column_mean(const PathMatrix& m, Eigen::Index j) {
    RunningStats stats;
    for (Eigen::Index i = 0; i < m.rows(); ++i) stats.push(m(i, j));
    return to_estimate(stats);
}

std::vector<double> column(const PathMatrix& m, Eigen::Index j) {
    std::vector<double> v(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) v[static_cast<std::size_t>(i)] = m(i, j);
    return v;
}

}  // namespace

TEST_SUITE("bridge") {

TEST_CASE("endpoints are pinned") {
    for (auto scheme : {BridgeScheme::sde_euler, BridgeScheme::three_bridge}) {
        const PathBatch one = sample_bridge({1.0, 1.0}, 1000, 1, 42, scheme);
        CHECK(one.values(0, 0) == 1.0);
        CHECK(one.values(0, 1000) == 0.0);
        CHECK(one.values.minCoeff() >= 0.0);
        CHECK(one.time(500) == doctest::Approx(0.5));
    }
}

TEST_CASE("collapse near the pinning time") {
    const PathBatch batch = sample_sde({1.0, 1.0}, 1000, 2000, 3);
    const std::vector<double> late = batch.marginal(999);
    double mean = 0.0;
    for (double v : late) mean += v / static_cast<double>(late.size());
    // Exact mean one step before the pin is about 0.0504; Euler overshoots it.
    CHECK(mean < 1.5 * bridge_mean({1.0, 1.0}, 0.999));
    for (double v : batch.marginal(1000)) CHECK(v == 0.0);
}

TEST_CASE("Euler from a tiny start reaches the Maxwell mean") {
    const int idx[] = {500};
    const PathMatrix m = sample_marginals({0.001, 1.0}, 1000, 20000, 11, BridgeScheme::sde_euler, idx);
    const EstimateCI e = column_mean(m, 0);
    CHECK(e.covers(bridge_mean({0.0, 1.0}, 0.5)));
    CHECK(bridge_mean({0.0, 1.0}, 0.5) == doctest::Approx(0.7978846).epsilon(1e-7));
}

TEST_CASE("three-bridge marginal from the origin") {
    const int idx[] = {500};
    const PathMatrix m = sample_marginals({0.0, 1.0}, 1000, 20000, 5, BridgeScheme::three_bridge, idx);
    CHECK(column_mean(m, 0).covers(0.79788456080286536));
}

TEST_CASE("three-bridge marginal follows the transition law") {
    const BridgeSpec spec{1.0, 1.0};
    const int idx[] = {250, 500, 750};
    const PathMatrix m = sample_marginals(spec, 1000, 10000, 17, BridgeScheme::three_bridge, idx);
    for (Eigen::Index j = 0; j < 3; ++j) {
        const double u = 0.25 * static_cast<double>(j + 1);
        const KsResult ks = ks_one_sample(column(m, j), [&](double y) { return bridge_marginal_cdf(spec, u, y); });
        CHECK(ks.statistic < ks.critical_1pct);
        CHECK(column_mean(m, j).covers(bridge_mean(spec, u)));
    }
}

TEST_CASE("schemes agree in law") {
    const BridgeSpec spec{1.0, 1.0};
    const int idx[] = {250, 500, 750};
    const PathMatrix euler = sample_marginals(spec, 1000, 10000, 21, BridgeScheme::sde_euler, idx);
    const PathMatrix exact = sample_marginals(spec, 1000, 10000, 22, BridgeScheme::three_bridge, idx);
    for (Eigen::Index j = 0; j < 3; ++j) CHECK(ks_two_sample(column(euler, j), column(exact, j)).passes());
}

TEST_CASE("marginals match full batches bit for bit") {
    const BridgeSpec spec{0.7, 1.3};
    const int idx[] = {3, 40, 77};
    for (auto scheme : {BridgeScheme::sde_euler, BridgeScheme::three_bridge}) {
        const PathBatch batch = sample_bridge(spec, 80, 9000, 99, scheme);
        const PathMatrix m = sample_marginals(spec, 80, 9000, 99, scheme, idx);
        for (Eigen::Index j = 0; j < 3; ++j) CHECK(m.col(j) == batch.values.col(idx[j]));
    }
}

TEST_CASE("seeded batches are reproducible and worker independent") {
    SamplingOptions one, many;
    one.workers = 1;
    many.workers = 4;
    const PathBatch a = sample_bridge({1.0, 1.0}, 50, 10000, 8, BridgeScheme::three_bridge, one);
    const PathBatch b = sample_bridge({1.0, 1.0}, 50, 10000, 8, BridgeScheme::three_bridge, many);
    CHECK(a.values == b.values);
    const PathBatch c = sample_bridge({1.0, 1.0}, 50, 10000, 9, BridgeScheme::three_bridge, one);
    CHECK(a.values != c.values);
}

TEST_CASE("functional values") {
    const PathBatch batch = sample_bridge({1.0, 1.0}, 200, 3000, 4, BridgeScheme::three_bridge);
    for (double v : functional_values(batch, testing::linear())) CHECK(v == 1.0);
    for (double v : functional_values(batch, testing::quadratic())) {
        CHECK(v > 0.0);
        CHECK(v <= 1.0);
    }
    const EstimateCI flat = functional_mean({1.0, 1.0}, testing::linear(), 200, 3000, 4, BridgeScheme::three_bridge);
    CHECK(flat.mean == 1.0);
    CHECK(flat.std_error == 0.0);
    // Streaming mean equals the mean of stored values.
    const EstimateCI streamed = functional_mean({1.0, 1.0}, testing::quadratic(), 200, 3000, 4, BridgeScheme::three_bridge);
    RunningStats stored;
    for (double v : functional_values(batch, testing::quadratic())) stored.push(v);
    CHECK(streamed.mean == doctest::Approx(stored.mean).epsilon(1e-14));
}

TEST_CASE("integral of the bridge from the origin and its exponential") {
    // Pathwise \int_0^1 X du with f'' = 1 has mean \int_0^1 bridge_mean = 0.6266571.
    const PathBatch batch = sample_bridge({0.0, 1.0}, 256, 20000, 12, BridgeScheme::three_bridge);
    RunningStats integral;
    for (double v : functional_values(batch, testing::quadratic())) integral.push(-std::log(v));
    CHECK(to_estimate(integral).covers(0.62665706865775013));

    // Golden value from a 10^6-path run: 0.5407985 (std error 8.0e-5).
    const EstimateCI e = functional_mean({0.0, 1.0}, testing::quadratic(), 256, 100000, 77, BridgeScheme::three_bridge);
    CHECK(std::abs(e.mean - 0.5407985) < 3.0 * std::hypot(e.std_error, 8.0e-5));
}

TEST_CASE("both schemes give overlapping functional intervals") {
    const EstimateCI euler = functional_mean({1.0, 1.0}, testing::quadratic(), 512, 20000, 30, BridgeScheme::sde_euler);
    const EstimateCI exact = functional_mean({1.0, 1.0}, testing::quadratic(), 512, 20000, 31, BridgeScheme::three_bridge);
    CHECK(euler.lower() <= exact.upper());
    CHECK(exact.lower() <= euler.upper());
}

TEST_CASE("argument validation") {
    CHECK_THROWS_AS(sample_bridge({1.0, 1.0}, 5, 10, 0, BridgeScheme::sde_euler), InvalidArgument);
    CHECK_THROWS_AS(sample_bridge({1.0, 1.0}, 100, 0, 0, BridgeScheme::sde_euler), InvalidArgument);
    CHECK_THROWS_AS(sample_bridge({1.0, 0.0}, 100, 10, 0, BridgeScheme::sde_euler), DomainError);
    CHECK_THROWS_AS(bridge_scheme_from_string("milstein"), InvalidArgument);
    CHECK(bridge_scheme_from_string("three_bridge") == BridgeScheme::three_bridge);
}

}
