#include <doctest.h>

#include <cmath>
#include <random>

#include "fpt/error.hpp"
#include "fpt/quadrature.hpp"
#include "fpt/stats.hpp"
#include "fpt/tridiagonal.hpp"

using namespace fpt;

TEST_SUITE("numerics") {

TEST_CASE("adaptive quadrature") {
    CHECK(quad::integrate([](double x) { return std::sin(x); }, 0.0, M_PI).value == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(quad::integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0).value == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
    CHECK(quad::integrate_to_infinity([](double x) { return std::exp(-x); }, 0.0).value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(quad::integrate_piecewise([](double x) { return std::abs(x - 0.3); }, {0.0, 0.3, 1.0}).value ==
          doctest::Approx(0.045 + 0.245).epsilon(1e-14));
    CHECK_THROWS_AS(quad::integrate([](double x) { return 1.0 / x; }, -1.0, 1.0, {1e-12, 1e-300, 50}), QuadratureFailure);
}

TEST_CASE("tridiagonal solve") {
    Tridiagonal<double> a(5);
    a.lower.setConstant(-1.0);
    a.diag.setConstant(4.0);
    a.upper.setConstant(-1.0);
    Eigen::VectorXd x(5);
    x << 1.0, -2.0, 0.5, 3.0, 0.0;
    const Eigen::VectorXd back = a.solve(a.apply(x));
    CHECK((back - x).cwiseAbs().maxCoeff() < 1e-14);

    Tridiagonal<double> singular(2);
    CHECK_THROWS_AS(singular.solve(Eigen::VectorXd::Ones(2)), NonConvergence);
}

TEST_CASE("running statistics merge in order") {
    RunningStats whole, left, right;
    for (int i = 0; i < 100; ++i) {
        const double x = std::sin(i * 0.7) + 0.01 * i;
        whole.push(x);
        (i < 37 ? left : right).push(x);
    }
    left.merge(right);
    CHECK(left.n == whole.n);
    CHECK(left.mean == doctest::Approx(whole.mean).epsilon(1e-14));
    CHECK(left.variance() == doctest::Approx(whole.variance()).epsilon(1e-12));
    const EstimateCI e = to_estimate(whole);
    CHECK(e.std_error == doctest::Approx(std::sqrt(whole.variance() / 100.0)));
    CHECK(e.covers(e.mean));
}

TEST_CASE("Kolmogorov-Smirnov tests") {
    CHECK(kolmogorov_survival(1.628) == doctest::Approx(0.01).epsilon(0.01));
    CHECK(ks_critical_coefficient(0.01) == doctest::Approx(1.628).epsilon(1e-3));

    std::mt19937_64 engine(7);
    std::normal_distribution<double> normal;
    std::vector<double> a(4000), b(4000), shifted(4000);
    for (auto& v : a) v = normal(engine);
    for (auto& v : b) v = normal(engine);
    for (auto& v : shifted) v = normal(engine) + 0.2;
    const auto phi = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
    CHECK(ks_one_sample(a, phi).passes());
    CHECK_FALSE(ks_one_sample(shifted, phi).passes());
    CHECK(ks_two_sample(a, b).passes());
    CHECK_FALSE(ks_two_sample(a, shifted).passes());
}

}
