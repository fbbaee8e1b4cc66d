#include <doctest.h>

#include <cmath>

#include "fpt/bounds.hpp"
#include "fpt/error.hpp"
#include "fpt/pde.hpp"
#include "helpers.hpp"

using namespace fpt;
using fpt::testing::linear;
using fpt::testing::quadratic;

TEST_SUITE("bounds") {

TEST_CASE("envelope collapses without curvature") {
    const BoundsEnvelope env = theorem_envelope(linear(), {0.5, 1.0, 2.0});
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(env.lower[i] == env.upper[i]);
        CHECK(env.upper[i] == doctest::Approx(closed_form_density(linear(), env.s_grid[i])).epsilon(1e-13));
    }
    CHECK(env.upper[1] == doctest::Approx(0.0539910).epsilon(1e-6));
}

TEST_CASE("envelope brackets the quadratic density") {
    const Boundary q = quadratic();
    const BoundsEnvelope env = theorem_envelope(q, {0.5, 1.0, 2.0});
    for (std::size_t i = 0; i < 3; ++i) CHECK(env.lower[i] < env.upper[i]);
    // Girsanov golden value at s = 1 (10^6 paths): 0.0912237 +- 1.7e-5.
    CHECK(env.lower[1] < 0.0912237 - 3 * 1.7e-5);
    CHECK(env.upper[1] > 0.0912237 + 3 * 1.7e-5);
    const DensityCurve fk = fk_curve(q, {0.5, 1.0, 2.0}, 1000, 1000);
    CHECK(envelope_contains(env, fk, 0.0));
}

TEST_CASE("log gap is linear in the curvature scale") {
    const Boundary q = quadratic(1.0, 0.2, 0.5);
    const BoundsEnvelope env = theorem_envelope(q, {0.3, 1.0, 1.7});
    for (double lambda : {0.1, 0.5, 1.0}) {
        const BoundsEnvelope scaled = theorem_envelope(q.with_scaled_curvature(lambda), env.s_grid);
        for (std::size_t i = 0; i < env.s_grid.size(); ++i)
            CHECK(std::abs(scaled.log_gap(i) - lambda * env.log_gap(i)) < 1e-12 * env.log_gap(i));
    }
}

TEST_CASE("envelope on a tabulated boundary") {
    std::vector<Boundary::Knot> knots;
    for (int i = 0; i <= 20; ++i) knots.emplace_back(0.1 * i, 1.0 + 0.5 * 0.01 * i * i);
    const Boundary tab = Boundary::tabulated(1.0, knots);
    const BoundsEnvelope env = theorem_envelope(tab, {1.0});
    const BoundsEnvelope exact = theorem_envelope(quadratic(), {1.0});
    CHECK(env.lower[0] == doctest::Approx(exact.lower[0]).epsilon(1e-3));
    CHECK_THROWS_AS(theorem_envelope(tab, {2.5}), OutOfTabulatedRange);
}

TEST_CASE("explicit flux bounds") {
    const auto [lo, hi] = corollary_flux_bounds(linear(), 1.0);
    CHECK(lo == hi);
    CHECK(hi == doctest::Approx(std::exp(-0.5) / std::sqrt(2.0 * M_PI)).epsilon(1e-14));
    const auto [qlo, qhi] = corollary_flux_bounds(quadratic(), 1.0);
    CHECK(std::log(qhi / qlo) == doctest::Approx(0.62665706865775013).epsilon(1e-10));
    CHECK_THROWS_AS(corollary_flux_bounds(quadratic(), 0.0), DomainError);
}

TEST_CASE("small-gap flux lies inside the explicit flux bounds") {
    const Boundary small = quadratic(0.01, 0.0, 0.5);
    const auto [lo, hi] = corollary_flux_bounds(small, 1.0);
    const DensityCurve heat = solve_killed_heat(small, 1.0, 10000, 2500, 5.0);
    const double scaled = heat.at(1.0) / 0.01;
    CHECK(scaled >= 0.95 * lo);
    CHECK(scaled <= 1.05 * hi);
}

TEST_CASE("fractional integral") {
    const auto one = [](double) { return 1.0; };
    CHECK(fractional_integral(one, 1.5, 1.0) == doctest::Approx(0.75225277806367505).epsilon(1e-12));
    CHECK(fractional_integral([](double) { return 0.0; }, 0.5, 1.0) == 0.0);
    CHECK(fractional_integral([](double y) { return y; }, 1.0, 2.0) == doctest::Approx(2.0).epsilon(1e-14));
    // J^{1/2} y at x = 1 is Gamma(2) / Gamma(5/2).
    CHECK(fractional_integral([](double y) { return y; }, 0.5, 1.0) == doctest::Approx(1.0 / std::tgamma(2.5)).epsilon(1e-12));
    // Semigroup: J^{1/2} J^{1/2} 1 = J^1 1.
    const auto half = [&](double y) { return y > 0.0 ? fractional_integral(one, 0.5, y) : 0.0; };
    CHECK(fractional_integral(half, 0.5, 0.8) == doctest::Approx(0.8).epsilon(1e-9));
    CHECK_THROWS_AS(fractional_integral(one, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(fractional_integral(one, 1.0, 0.0), DomainError);
}

TEST_CASE("envelope containment helper") {
    BoundsEnvelope env{{1.0}, {0.1}, {0.2}};
    DensityCurve inside, above;
    inside.s_grid = above.s_grid = {1.0};
    inside.phi = {0.15};
    above.phi = {0.205};
    CHECK(envelope_contains(env, inside, 0.0));
    CHECK_FALSE(envelope_contains(env, above, 0.0));
    CHECK(envelope_contains(env, above, 0.05));
    BoundsEnvelope bad{{1.0}, {0.3}, {0.2}};
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

}
