#include "fpt/kernels.hpp"

#include <algorithm>
#include <limits>
#include <vector>

#include "fpt/quadrature.hpp"

namespace fpt {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double level_hitting_cdf(double t, double a) {
    if (!(t > 0.0) || !(a > 0.0)) throw DomainError("level_hitting_cdf needs t > 0 and a > 0");
    if (std::isinf(t)) return 1.0;
    return std::erfc(a / std::sqrt(2.0 * t));
}

double absorbed_density(double t, double x, double y, double a) {
    if (!(x < a) || !(y < a)) throw DomainError("absorbed_density needs x < a and y < a");
    if (!(t > 0.0)) throw DomainError("absorbed_density needs t > 0");
    return std::max(0.0, heat_kernel(t, y - x) - heat_kernel(t, 2.0 * a - y - x));
}

void BridgeSpec::validate() const {
    if (!(s > 0.0)) throw DomainError("bridge pinning time s must be positive");
    if (!(a >= 0.0) || !std::isfinite(a)) throw DomainError("bridge start a must be nonnegative");
}

double bridge_transition(const BridgeSpec& spec, double t, double x, double tau, double y) {
    spec.validate();
    const double s = spec.s;
    if (!(t >= 0.0 && t < tau && tau < s)) throw DomainError("bridge_transition needs 0 <= t < tau < s");
    if (!(x > 0.0)) throw DomainError("bridge_transition needs x > 0");
    if (y < 0.0) throw DomainError("bridge_transition needs y >= 0");
    if (y == 0.0) return 0.0;
    const double remaining_from = s - t;
    const double remaining_to = s - tau;
    const double elapsed = tau - t;
    if (elapsed < kNearSingular) return 0.0;
    // k(s-tau, y)/k(s-t, x) * k(tau-t, y-x) folded into one exponent, and
    // k(tau-t, y-x) - k(tau-t, x+y) = k(tau-t, y-x) (1 - exp(-2xy/(tau-t))).
    const double exponent = -y * y / (2.0 * remaining_to) + x * x / (2.0 * remaining_from) -
                            (y - x) * (y - x) / (2.0 * elapsed);
    const double ratio = std::sqrt(remaining_from / remaining_to);
    const double reflect = -std::expm1(-2.0 * x * y / elapsed);
    return (y / x) * (remaining_from / remaining_to) * ratio * std::exp(exponent) * reflect /
           std::sqrt(2.0 * std::numbers::pi * elapsed);
}

double bridge_component_sd(const BridgeSpec& spec, double u) {
    return std::sqrt(u * (spec.s - u) / spec.s);
}

namespace {

// Break points around the bulk of the marginal at time u: the drift line
// a (1 - u/s) plus/minus several component deviations.
std::vector<double> marginal_breaks(const BridgeSpec& spec, double u, double upper) {
    const double centre = spec.a * (1.0 - u / spec.s);
    const double sd = bridge_component_sd(spec, u);
    std::vector<double> pts = {0.0};
    for (double k : {-8.0, -2.0, 0.0, 2.0, 8.0}) {
        const double p = centre + k * sd;
        if (p > pts.back() && p < upper) pts.push_back(p);
    }
    pts.push_back(upper);
    return pts;
}

}  // namespace

double bridge_mean(const BridgeSpec& spec, double u) {
    spec.validate();
    if (!(u > 0.0 && u < spec.s)) throw DomainError("bridge_mean needs 0 < u < s");
    const double sd = bridge_component_sd(spec, u);
    if (spec.a == 0.0) return 2.0 * std::sqrt(2.0 / std::numbers::pi) * sd;
    const auto integrand = [&](double y) { return y * bridge_transition(spec, 0.0, spec.a, u, y); };
    const double upper = spec.a * (1.0 - u / spec.s) + 40.0 * sd;
    const quad::Options opts{1e-12, 1e-300, 4000};
    return quad::integrate_piecewise(integrand, marginal_breaks(spec, u, upper), opts).value;
}

double bridge_marginal_cdf(const BridgeSpec& spec, double u, double y) {
    spec.validate();
    if (!(u > 0.0 && u < spec.s)) throw DomainError("bridge_marginal_cdf needs 0 < u < s");
    if (y <= 0.0) return 0.0;
    if (spec.a == 0.0) {
        // Maxwell law of the modulus of three independent N(0, sd^2) components.
        const double z = y / bridge_component_sd(spec, u);
        return std::erf(z / std::numbers::sqrt2) - std::sqrt(2.0 / std::numbers::pi) * z * std::exp(-0.5 * z * z);
    }
    const auto density = [&](double z) { return bridge_transition(spec, 0.0, spec.a, u, z); };
    std::vector<double> pts;
    for (double p : marginal_breaks(spec, u, std::numeric_limits<double>::infinity()))
        if (p < y) pts.push_back(p);
    pts.push_back(y);
    const quad::Options opts{1e-12, 1e-15, 4000};
    return std::clamp(quad::integrate_piecewise(density, pts, opts).value, 0.0, 1.0);
}

}  // namespace fpt
