#include "fpt/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fpt/error.hpp"
#include "fpt/kernels.hpp"
#include "fpt/quadrature.hpp"

namespace fpt {

void BoundsEnvelope::validate() const {
    if (lower.size() != s_grid.size() || upper.size() != s_grid.size())
        throw InvalidArgument("envelope lists differ in length");
    for (std::size_t i = 0; i < s_grid.size(); ++i) {
        if (!(s_grid[i] > 0.0) || (i > 0 && !(s_grid[i] > s_grid[i - 1])))
            throw InvalidArgument("envelope grid must be positive and increasing");
        if (!(lower[i] >= 0.0) || !(lower[i] <= upper[i])) throw InvalidArgument("envelope needs 0 <= lower <= upper");
    }
}

double BoundsEnvelope::log_gap(std::size_t i) const { return std::log(upper.at(i)) - std::log(lower.at(i)); }

namespace {

// Break points of f'' inside (0, s): knots of a tabulated boundary.
std::vector<double> curvature_breaks(const Boundary& boundary, double s) {
    std::vector<double> points{0.0};
    if (boundary.kind() == BoundaryKind::tabulated)
        for (const auto& [t, f] : boundary.knots())
            if (t > 0.0 && t < s) points.push_back(t);
    points.push_back(s);
    return points;
}

double curvature_integral(const Boundary& boundary, double s, const std::function<double(double)>& weight) {
    if (boundary.is_affine()) return 0.0;
    const auto integrand = [&](double u) { return boundary.d2f(u) * weight(u); };
    return quad::integrate_piecewise(integrand, curvature_breaks(boundary, s), {1e-11, 1e-300, 4000}).value;
}

}  // namespace

BoundsEnvelope theorem_envelope(const Boundary& boundary, const std::vector<double>& s_grid) {
    BoundsEnvelope env;
    for (double s : s_grid) {
        if (!(s > 0.0)) throw DomainError("envelope needs s > 0");
        if (s > boundary.horizon()) throw OutOfTabulatedRange("envelope grid beyond the boundary horizon");
        const BridgeSpec spec{boundary.a(), s};
        const double upper = girsanov_prefactor(boundary, s);
        const double exponent = curvature_integral(boundary, s, [&](double u) {
            return u <= 0.0 ? spec.a : (u >= s ? 0.0 : bridge_mean(spec, u));
        });
        env.s_grid.push_back(s);
        env.upper.push_back(upper);
        env.lower.push_back(upper * std::exp(-exponent));
    }
    env.validate();
    return env;
}

bool envelope_contains(const BoundsEnvelope& envelope, const DensityCurve& curve, double relative_tolerance) {
    for (std::size_t j = 0; j < curve.s_grid.size(); ++j) {
        const auto it = std::find(envelope.s_grid.begin(), envelope.s_grid.end(), curve.s_grid[j]);
        if (it == envelope.s_grid.end()) throw InvalidArgument("curve grid point missing from the envelope");
        const auto i = static_cast<std::size_t>(std::distance(envelope.s_grid.begin(), it));
        const double phi = curve.phi[j];
        if (phi < envelope.lower[i] * (1.0 - relative_tolerance) || phi > envelope.upper[i] * (1.0 + relative_tolerance))
            return false;
    }
    return true;
}

std::pair<double, double> corollary_flux_bounds(const Boundary& boundary, double s) {
    if (!(s > 0.0)) throw DomainError("flux bounds need s > 0");
    const double upper = std::exp(-0.5 * boundary.integral_df_sq(s)) / std::sqrt(2.0 * std::numbers::pi * s * s * s);
    const double exponent = 2.0 * std::sqrt(2.0 / std::numbers::pi) *
                            curvature_integral(boundary, s, [&](double u) {
                                return std::sqrt(std::max(0.0, s - u)) * std::sqrt(std::max(0.0, u / s));
                            });
    return {upper * std::exp(-exponent), upper};
}

double fractional_integral(const std::function<double(double)>& g, double alpha, double x) {
    if (!(alpha > 0.0)) throw DomainError("fractional order must be positive");
    if (!(x > 0.0)) throw DomainError("fractional integral needs x > 0");
    const double scale = 1.0 / std::tgamma(alpha);
    const quad::Options opts{1e-12, 1e-300, 4000};
    if (alpha >= 1.0) {
        const auto integrand = [&](double y) { return std::pow(x - y, alpha - 1.0) * g(y); };
        return scale * quad::integrate(integrand, 0.0, x, opts).value;
    }
    // w = (x - y)^alpha / alpha removes the endpoint singularity.
    const auto integrand = [&](double w) { return g(x - std::pow(alpha * w, 1.0 / alpha)); };
    return scale * quad::integrate(integrand, 0.0, std::pow(x, alpha) / alpha, opts).value;
}

}  // namespace fpt
