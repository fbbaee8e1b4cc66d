#pragma once

// Closed-form densities: the heat kernel k, the level-hitting density h, the
// absorbed Brownian density and the transition density of the
// 3-dimensional Bessel bridge pinned at zero.
//
// heat_kernel and level_hitting_density are templated on the scalar so they
// can be evaluated at complex arguments (complex-step differentiation).

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "fpt/error.hpp"

namespace fpt {

inline constexpr double kNearSingular = 1e-14;

namespace detail {
template <class Scalar>
double real_part(const Scalar& x) {
    using std::real;
    return real(x);
}
}  // namespace detail

/// k(sigma, kappa) = exp(-kappa^2 / (2 sigma)) / sqrt(2 pi sigma).
template <class Scalar>
Scalar heat_kernel(Scalar sigma, Scalar kappa) {
    using std::exp;
    using std::sqrt;
    const double sig = detail::real_part(sigma);
    if (!(sig > 0.0)) throw DomainError("heat_kernel needs sigma > 0, got " + std::to_string(sig));
    if (sig < kNearSingular) {
        if (detail::real_part(kappa) == 0.0) throw DomainError("heat_kernel evaluated at its source point");
        return Scalar(0.0);
    }
    return exp(-kappa * kappa / (Scalar(2.0) * sigma)) / sqrt(Scalar(2.0 * std::numbers::pi) * sigma);
}

/// h(s, a) = |a| exp(-a^2 / (2 s)) / sqrt(2 pi s^3): density of the first
/// time a standard Brownian motion reaches level a.
template <class Scalar>
Scalar level_hitting_density(Scalar s, Scalar a) {
    using std::exp;
    using std::sqrt;
    const double sr = detail::real_part(s);
    const double ar = detail::real_part(a);
    if (!(sr > 0.0)) throw DomainError("level_hitting_density needs s > 0, got " + std::to_string(sr));
    if (ar == 0.0) throw DomainError("level_hitting_density needs a != 0");
    if (sr < kNearSingular) return Scalar(0.0);
    const Scalar gap = ar < 0.0 ? Scalar(-a) : a;
    return gap * exp(-a * a / (Scalar(2.0) * s)) / sqrt(Scalar(2.0 * std::numbers::pi) * s * s * s);
}

/// Standard normal distribution function.
double normal_cdf(double x);

/// \int_0^t h(s, a) ds = 2 (1 - Phi(a / sqrt t)).
double level_hitting_cdf(double t, double a);

/// Sub-probability density of Brownian motion started at x, still below the
/// level `a` after elapsed time t, at position y:
/// k(t, y - x) - k(t, 2a - y - x).
double absorbed_density(double t, double x, double y, double a);

/// A 3-dimensional Bessel bridge started at a >= 0 and pinned at 0 at time s.
struct BridgeSpec {
    double a = 1.0;
    double s = 1.0;

    void validate() const;
};

/// G(t, x; tau, y): transition density of the bridge from x at time t to y at
/// time tau, 0 <= t < tau < s.
double bridge_transition(const BridgeSpec& spec, double t, double x, double tau, double y);

/// Standard deviation of each Cartesian component of the bridge at time u,
/// sqrt(u (s - u) / s).
double bridge_component_sd(const BridgeSpec& spec, double u);

/// E[X_u]. Closed form for a = 0, quadrature of y G(0, a; u, y) otherwise.
double bridge_mean(const BridgeSpec& spec, double u);

/// Marginal distribution function P(X_u <= y) by quadrature of G(0, a; u, .).
/// Closed form (Maxwell law) when a = 0.
double bridge_marginal_cdf(const BridgeSpec& spec, double u, double y);

}  // namespace fpt
