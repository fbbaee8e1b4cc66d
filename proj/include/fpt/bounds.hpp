#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "fpt/boundary.hpp"
#include "fpt/montecarlo.hpp"

namespace fpt {

/// Jensen bounds lower(s) <= phi(s) <= upper(s).
struct BoundsEnvelope {
    std::vector<double> s_grid;
    std::vector<double> lower;
    std::vector<double> upper;

    void validate() const;
    /// log(upper / lower) at grid point i.
    double log_gap(std::size_t i) const;
};

/// upper = exp(-a f'(0) - 1/2 \int_0^s (f')^2) h(s, a);
/// lower = upper exp(-\int_0^s f''(u) E[X_u] du) with X the bridge from a.
BoundsEnvelope theorem_envelope(const Boundary& boundary, const std::vector<double>& s_grid);

/// Whether every point of the curve lies in the envelope widened by
/// `relative_tolerance` on each side. Curve grid points are matched exactly.
bool envelope_contains(const BoundsEnvelope& envelope, const DensityCurve& curve, double relative_tolerance);

/// Bounds on the small-gap limit phi(s) / a:
/// upper = exp(-1/2 \int_0^s (f')^2) / sqrt(2 pi s^3),
/// lower = upper exp(-2 sqrt(2/pi) \int_0^s f''(u) sqrt(s-u) sqrt(u/s) du).
std::pair<double, double> corollary_flux_bounds(const Boundary& boundary, double s);

/// Riemann-Liouville integral (1/Gamma(alpha)) \int_0^x (x-y)^(alpha-1) g(y) dy.
double fractional_integral(const std::function<double(double)>& g, double alpha, double x);

}  // namespace fpt
