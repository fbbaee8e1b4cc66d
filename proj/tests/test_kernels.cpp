#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>

#include "fpt/error.hpp"
#include "fpt/kernels.hpp"
#include "fpt/quadrature.hpp"

using namespace fpt;

TEST_SUITE("kernels") {

TEST_CASE("level hitting density") {
    CHECK(level_hitting_density(1.0, 1.0) == doctest::Approx(0.24197072451914335).epsilon(1e-14));
    CHECK(level_hitting_density(1.0, 2.0) == doctest::Approx(0.1079819330263761).epsilon(1e-14));
    CHECK(level_hitting_density(1.0, -1.0) == level_hitting_density(1.0, 1.0));
    CHECK_THROWS_AS(level_hitting_density(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(level_hitting_density(1.0, 0.0), DomainError);
}

TEST_CASE("level hitting distribution") {
    CHECK(level_hitting_cdf(1.0, 1.0) == doctest::Approx(0.3173105078629141).epsilon(1e-14));
    CHECK(level_hitting_cdf(1e12, 1.0) == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(level_hitting_cdf(1e-4, 1.0) < 1e-12);
    for (double a : {0.3, 1.0, 2.5}) {
        const double far = quad::integrate([&](double s) { return level_hitting_density(s, a); }, 2.0, 400.0).value;
        CHECK(far == doctest::Approx(level_hitting_cdf(400.0, a) - level_hitting_cdf(2.0, a)).epsilon(1e-10));
        const double partial = quad::integrate([&](double s) { return level_hitting_density(s, a); }, 0.0, 2.0).value;
        CHECK(partial == doctest::Approx(level_hitting_cdf(2.0, a)).epsilon(1e-10));
    }
}

TEST_CASE("heat kernel") {
    CHECK(heat_kernel(1.0, 0.0) == doctest::Approx(0.39894228040143268).epsilon(1e-14));
    CHECK(heat_kernel(2.0, 1.0) == doctest::Approx(0.2196956447338612).epsilon(1e-14));
    CHECK(heat_kernel(1.0, 0.7) == heat_kernel(1.0, -0.7));
    for (double sigma : {0.01, 1.0, 7.0}) {
        const auto k = [&](double x) { return heat_kernel(sigma, x); };
        const double total = 2.0 * quad::integrate_to_infinity(k, 0.0).value;
        CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
    }
    CHECK_THROWS_AS(heat_kernel(-1.0, 0.0), DomainError);
    CHECK(heat_kernel(1e-15, 1.0) == 0.0);
    CHECK_THROWS_AS(heat_kernel(1e-15, 0.0), DomainError);
}

TEST_CASE("complex step derivative of the level density") {
    using C = std::complex<double>;
    const double step = 1e-30;
    const double derivative = level_hitting_density(C(0.5), C(0.7, step)).imag() / step;
    const double h = level_hitting_density(0.5, 0.7);
    CHECK(derivative / h == doctest::Approx(1.0 / 0.7 - 0.7 / 0.5).epsilon(1e-12));
    CHECK(1.0 / 0.7 - 0.7 / 0.5 == doctest::Approx(0.028571428571428571).epsilon(1e-13));
}

TEST_CASE("absorbed density") {
    CHECK(absorbed_density(1.0, 0.0, 0.0, 1.0) == doctest::Approx(0.34495131388824463).epsilon(1e-14));
    CHECK(absorbed_density(1.0, 0.0, 1.0 - 1e-12, 1.0) < 1e-11);
    CHECK(std::abs(absorbed_density(1.0, 0.0, 0.0, 10.0) - heat_kernel(1.0, 0.0)) < 1e-12);
    CHECK_THROWS_AS(absorbed_density(1.0, 0.0, 1.5, 1.0), DomainError);
    for (double x : {0.0, 0.6}) {
        const auto d = [&](double y) { return absorbed_density(1.3, x, 1.0 - y, 1.0); };
        const double survive = quad::integrate_to_infinity(d, 0.0, {1e-12, 1e-15, 2000}).value;
        CHECK(survive == doctest::Approx(1.0 - level_hitting_cdf(1.3, 1.0 - x)).epsilon(1e-8));
    }
}

TEST_CASE("bridge transition density") {
    const BridgeSpec spec{1.0, 1.0};
    CHECK(bridge_transition(spec, 0.0, 1.0, 0.5, 1.0) == doctest::Approx(0.95015550442882137).epsilon(1e-13));
    CHECK(bridge_transition(spec, 0.0, 1.0, 0.5, 0.0) == 0.0);
    const auto g = [&](double y) { return bridge_transition(spec, 0.0, 1.0, 0.5, y); };
    CHECK(quad::integrate_to_infinity(g, 0.0, {1e-12, 1e-300, 4000}).value == doctest::Approx(1.0).epsilon(1e-8));
    CHECK_THROWS_AS(bridge_transition(spec, 0.5, 1.0, 0.5, 1.0), DomainError);
    CHECK_THROWS_AS(bridge_transition(spec, 0.0, 1.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(bridge_transition(spec, 0.0, 0.0, 0.5, 1.0), DomainError);
    CHECK_THROWS_AS((BridgeSpec{-1.0, 1.0}).validate(), DomainError);
}

TEST_CASE("Chapman-Kolmogorov for the bridge") {
    const BridgeSpec spec{1.0, 2.0};
    const struct {
        double t, x, r, tau, y;
    } cases[] = {{0.0, 1.0, 0.6, 1.2, 0.8}, {0.2, 0.5, 0.9, 1.5, 0.3}, {0.0, 1.0, 1.0, 1.9, 0.1}};
    for (const auto& c : cases) {
        const auto integrand = [&](double z) {
            return bridge_transition(spec, c.t, c.x, c.r, z) * bridge_transition(spec, c.r, z, c.tau, c.y);
        };
        const double composed = quad::integrate_to_infinity(integrand, 0.0, {1e-11, 1e-300, 4000}).value;
        CHECK(composed == doctest::Approx(bridge_transition(spec, c.t, c.x, c.tau, c.y)).epsilon(1e-6));
    }
}

TEST_CASE("bridge mean") {
    CHECK(bridge_mean({0.0, 1.0}, 0.5) == doctest::Approx(0.79788456080286536).epsilon(1e-14));
    CHECK(bridge_mean({1.0, 1.0}, 0.5) == doctest::Approx(0.92466021665622925).epsilon(1e-10));
    CHECK(bridge_mean({0.0, 1.0}, 1e-10) < 1e-4);
    CHECK(bridge_mean({1.0, 1.0}, 1e-8) == doctest::Approx(1.0).epsilon(1e-3));
    for (double u : {0.1, 0.3, 0.45}) CHECK(bridge_mean({0.0, 1.0}, u) == doctest::Approx(bridge_mean({0.0, 1.0}, 1.0 - u)));

    // Non-central chi mean with three degrees of freedom.
    for (double a : {0.2, 1.0, 3.0})
        for (double u : {0.1, 0.5, 0.9}) {
            const BridgeSpec spec{a, 1.0};
            const double sd = bridge_component_sd(spec, u);
            const double mu = a * (1.0 - u);
            const double closed = sd * std::sqrt(2.0 / M_PI) * std::exp(-mu * mu / (2.0 * sd * sd)) +
                                  (mu + sd * sd / mu) * std::erf(mu / (sd * std::sqrt(2.0)));
            CHECK(bridge_mean(spec, u) == doctest::Approx(closed).epsilon(1e-9));
        }
    const double area = quad::integrate([](double u) { return bridge_mean({0.0, 1.0}, u); }, 0.0, 1.0).value;
    CHECK(area == doctest::Approx(0.62665706865775013).epsilon(1e-8));
    CHECK_THROWS_AS(bridge_mean({1.0, 1.0}, 1.0), DomainError);
}

TEST_CASE("bridge marginal distribution") {
    const BridgeSpec spec{1.0, 1.0};
    CHECK(bridge_marginal_cdf(spec, 0.5, 0.0) == 0.0);
    CHECK(bridge_marginal_cdf(spec, 0.5, 20.0) == doctest::Approx(1.0).epsilon(1e-10));
    double previous = 0.0;
    for (double y = 0.1; y < 3.0; y += 0.1) {
        const double c = bridge_marginal_cdf(spec, 0.5, y);
        CHECK(c >= previous);
        previous = c;
    }
    // Maxwell law at a = 0 against quadrature of its density.
    const BridgeSpec origin{0.0, 1.0};
    const double sd = bridge_component_sd(origin, 0.5);
    const auto maxwell = [&](double y) {
        return std::sqrt(2.0 / M_PI) * y * y / (sd * sd * sd) * std::exp(-y * y / (2.0 * sd * sd));
    };
    CHECK(bridge_marginal_cdf(origin, 0.5, 0.6) == doctest::Approx(quad::integrate(maxwell, 0.0, 0.6).value).epsilon(1e-12));
}

TEST_CASE("normal distribution function") {
    CHECK(normal_cdf(0.0) == 0.5);
    CHECK(normal_cdf(-2.0) == doctest::Approx(0.022750131948179209).epsilon(1e-14));
}

}
