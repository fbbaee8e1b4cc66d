#include "fpt/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fpt/bounds.hpp"
#include "fpt/error.hpp"
#include "fpt/io.hpp"
#include "fpt/kernels.hpp"
#include "fpt/pde.hpp"
#include "fpt/quadrature.hpp"
#include "fpt/spectral.hpp"
#include "fpt/stats.hpp"

namespace fpt {

ValidationScale ValidationScale::full() {
    ValidationScale scale;
    scale.girsanov_paths = 1000000;
    scale.pde_nt = 2000;
    scale.pde_nx = 2000;
    return scale;
}

nlohmann::json ValidationScale::to_json() const {
    return {{"girsanov_paths", girsanov_paths}, {"girsanov_steps", girsanov_steps},
            {"direct_paths", direct_paths},     {"direct_steps", direct_steps},
            {"pde_nt", pde_nt},                 {"pde_nx", pde_nx},
            {"bridge_paths", bridge_paths},     {"bridge_steps", bridge_steps},
            {"martingale_paths", martingale_paths}, {"martingale_steps", martingale_steps},
            {"seed", seed}};
}

namespace {

Boundary linear_boundary() { return make_boundary(BoundaryKind::linear, 1.0, {1.0}); }
Boundary quadratic_boundary() { return make_boundary(BoundaryKind::quadratic, 1.0, {0.0, 0.5}); }

CheckResult at_most(std::string name, double observed, double tolerance) {
    return {std::move(name), observed <= tolerance, observed, tolerance};
}

CheckResult at_least(std::string name, double observed, double tolerance) {
    return {std::move(name), observed >= tolerance, observed, tolerance};
}

double relative_difference(double x, double y) {
    const double scale = 0.5 * (std::abs(x) + std::abs(y));
    return scale > 0.0 ? std::abs(x - y) / scale : 0.0;
}

// Smallest observed order over successive halvings of a residual sequence.
double min_order(const std::vector<double>& residuals) {
    double order = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < residuals.size(); ++i) order = std::min(order, std::log2(residuals[i - 1] / residuals[i]));
    return order;
}

// Residual study on t in [0, s/2], x in [0.5, 2.5] with dt = dx = h0 / 2^k.
template <class Measure>
std::vector<double> refinement_residuals(const SpectralProfile& profile, const Boundary& boundary, double s,
                                         const Measure& measure) {
    constexpr double h0 = 0.025;
    std::vector<double> residuals;
    for (int level = 0; level < 4; ++level) {
        const double h = h0 / (1 << level);
        const FieldGrid w = fourier_field(profile, boundary, s, uniform_grid(0.0, 0.5 * s, static_cast<int>(std::lround(0.5 * s / h))),
                                          uniform_grid(0.5, 2.5, static_cast<int>(std::lround(2.0 / h))));
        residuals.push_back(measure(w));
    }
    return residuals;
}

}  // namespace

std::vector<double> agreement_grid(const Boundary& boundary) {
    std::vector<double> grid;
    for (double s : {0.5, 1.0, 2.0})
        if (s <= boundary.horizon()) grid.push_back(s);
    if (grid.empty()) {
        const double h = boundary.horizon();
        grid = {0.25 * h, 0.5 * h, h};
    }
    return grid;
}

MethodCurves compute_method_curves(const Boundary& boundary, const std::vector<double>& s_grid,
                                   const ValidationScale& scale) {
    MethodCurves curves;
    curves.s_grid = s_grid;
    curves.girsanov = girsanov_curve(boundary, s_grid, scale.girsanov_steps, scale.girsanov_paths, scale.seed);
    curves.fk = fk_curve(boundary, s_grid, scale.pde_nt, scale.pde_nx);
    const double t_max = s_grid.back();
    const DensityCurve heat = solve_killed_heat(boundary, t_max, scale.pde_nt, scale.pde_nx, default_y_max(boundary, t_max));
    curves.heat.method = DensityMethod::heat_pde;
    curves.heat.boundary_digest = heat.boundary_digest;
    for (double s : s_grid) {
        curves.heat.s_grid.push_back(s);
        curves.heat.phi.push_back(heat.at(s));
    }
    return curves;
}

std::vector<CheckResult> check_linear_exactness(const ValidationScale& scale) {
    const Boundary lin = linear_boundary();
    const EstimateCI est = fpt_density_girsanov(lin, 1.0, scale.girsanov_steps, scale.girsanov_paths, scale.seed);
    return {at_most("linear_girsanov_vs_closed_form", std::abs(est.mean - closed_form_density(lin, 1.0)), 1e-12),
            at_most("linear_girsanov_vs_reference_0.0539910", std::abs(est.mean - 0.0539910), 5e-8),
            at_most("linear_girsanov_std_error", est.std_error, 0.0)};
}

std::vector<CheckResult> check_direct_mc(const ValidationScale& scale) {
    const Boundary lin = linear_boundary();
    const DirectMcResult res = fpt_direct_mc(lin, 1.0, scale.direct_steps, scale.direct_paths, scale.seed);
    const double z = std::abs(res.cdf.mean - closed_form_cdf(lin, 1.0)) / res.cdf.std_error;
    return {at_most("direct_mc_cdf_z_score", z, 3.0)};
}

std::vector<CheckResult> check_method_agreement(const Boundary& boundary, const MethodCurves& curves) {
    const auto worst = [&](const DensityCurve& x, const DensityCurve& y) {
        double d = 0.0;
        for (std::size_t i = 0; i < curves.s_grid.size(); ++i) d = std::max(d, relative_difference(x.phi[i], y.phi[i]));
        return d;
    };
    std::vector<CheckResult> out{at_most("agreement_girsanov_fk", worst(curves.girsanov, curves.fk), 0.02),
                                 at_most("agreement_girsanov_heat", worst(curves.girsanov, curves.heat), 0.02),
                                 at_most("agreement_fk_heat", worst(curves.fk, curves.heat), 0.02)};
    if (boundary.is_affine()) {
        for (const auto& curve : curves.all()) {
            double d = 0.0;
            for (std::size_t i = 0; i < curves.s_grid.size(); ++i)
                d = std::max(d, relative_difference(curve.phi[i], closed_form_density(boundary, curves.s_grid[i])));
            out.push_back(at_most("agreement_closed_form_" + to_string(curve.method), d, 0.02));
        }
    }
    return out;
}

std::vector<CheckResult> check_envelope(const Boundary& boundary, const MethodCurves& curves) {
    constexpr double pde_band = 0.005;
    const BoundsEnvelope env = theorem_envelope(boundary, curves.s_grid);
    std::vector<CheckResult> out;
    for (const auto& curve : curves.all()) {
        bool inside = true;
        double excursion = -std::numeric_limits<double>::infinity();
        double band_used = 0.0;
        for (std::size_t i = 0; i < curve.s_grid.size(); ++i) {
            const double phi = curve.phi[i];
            const double band = curve.ci_high ? ((*curve.ci_high)[i] - phi) / phi : pde_band;
            const double outside = std::max(env.lower[i] - phi, phi - env.upper[i]) / phi;
            inside = inside && outside <= band;
            excursion = std::max(excursion, outside);
            band_used = std::max(band_used, band);
        }
        out.push_back({"envelope_contains_" + to_string(curve.method), inside, excursion, band_used});
    }
    const BoundsEnvelope flat = theorem_envelope(boundary.with_scaled_curvature(0.0), curves.s_grid);
    double gap = 0.0;
    for (std::size_t i = 0; i < flat.s_grid.size(); ++i) gap = std::max(gap, flat.log_gap(i));
    out.push_back(at_most("envelope_gap_at_zero_curvature", gap, 1e-12));

    const BoundsEnvelope half = theorem_envelope(boundary.with_scaled_curvature(0.5), curves.s_grid);
    double scaling = 0.0;
    for (std::size_t i = 0; i < env.s_grid.size(); ++i)
        if (env.log_gap(i) > 0.0) scaling = std::max(scaling, std::abs(half.log_gap(i) / env.log_gap(i) - 0.5));
    out.push_back(at_most("envelope_gap_linear_in_curvature", scaling, 1e-12));
    return out;
}

std::vector<CheckResult> check_bridge_law(const ValidationScale& scale) {
    const BridgeSpec spec{1.0, 1.0};
    const std::vector<double> us{0.25, 0.5, 0.75};
    std::vector<int> indices;
    for (double u : us) indices.push_back(static_cast<int>(std::lround(u * scale.bridge_steps)));
    const PathMatrix euler =
        sample_marginals(spec, scale.bridge_steps, scale.bridge_paths, scale.seed, BridgeScheme::sde_euler, indices);
    const PathMatrix exact =
        sample_marginals(spec, scale.bridge_steps, scale.bridge_paths, scale.seed + 1, BridgeScheme::three_bridge, indices);

    std::vector<CheckResult> out;
    for (std::size_t j = 0; j < us.size(); ++j) {
        const auto column = [&](const PathMatrix& m) {
            std::vector<double> v(static_cast<std::size_t>(m.rows()));
            for (Eigen::Index i = 0; i < m.rows(); ++i) v[static_cast<std::size_t>(i)] = m(i, static_cast<Eigen::Index>(j));
            return v;
        };
        const double u = us[j];
        const KsResult two = ks_two_sample(column(euler), column(exact));
        out.push_back(at_least("bridge_ks_two_sample_u" + io::format_number(u), two.p_value, 0.01));
        const KsResult one = ks_one_sample(column(exact), [&](double y) { return bridge_marginal_cdf(spec, u, y); });
        out.push_back(at_least("bridge_ks_one_sample_u" + io::format_number(u), one.p_value, 0.01));
    }

    double mass_error = 0.0;
    const struct {
        double t, x, tau;
    } cases[] = {{0.0, 1.0, 0.5}, {0.0, 1.0, 0.25}, {0.2, 0.3, 0.9}, {0.5, 2.0, 0.75}, {0.1, 0.05, 0.2}};
    for (const auto& c : cases) {
        const auto density = [&](double y) { return bridge_transition(spec, c.t, c.x, c.tau, y); };
        const double mass = quad::integrate_to_infinity(density, 0.0, {1e-12, 1e-300, 4000}).value;
        mass_error = std::max(mass_error, std::abs(mass - 1.0));
    }
    out.push_back(at_most("bridge_transition_normalization", mass_error, 1e-8));
    return out;
}

std::vector<CheckResult> check_martingale(const ValidationScale& scale) {
    std::vector<CheckResult> out;
    for (const auto& [name, boundary] : {std::pair{"linear", linear_boundary()}, std::pair{"quadratic", quadratic_boundary()}}) {
        const EstimateCI z = martingale_check(boundary, 1.0, scale.martingale_steps, scale.martingale_paths, scale.seed);
        const double score = z.std_error > 0.0 ? std::abs(z.mean - 1.0) / z.std_error : std::abs(z.mean - 1.0);
        out.push_back(at_most(std::string("martingale_z_score_") + name, score, 3.0));
    }
    return out;
}

std::vector<CheckResult> check_residual_orders() {
    const Boundary quad = quadratic_boundary();
    constexpr double s = 1.0;
    std::vector<CheckResult> out;
    for (const auto& [name, profile] :
         {std::pair{"unit", SpectralProfile::unit()}, std::pair{"gaussian", SpectralProfile::gaussian(1.0)}}) {
        const auto residuals =
            refinement_residuals(profile, quad, s, [&](const FieldGrid& w) { return residual_w(w, quad, s); });
        out.push_back(at_least(std::string("residual_w_order_") + name, min_order(residuals), 1.8));
    }

    // Heat residual of omega itself, tau in [0.5, 1], xi in [-1, 1].
    std::vector<double> heat;
    for (int level = 0; level < 4; ++level) {
        const double h = 0.025 / (1 << level);
        const SpectralProfile profile = SpectralProfile::gaussian(1.0);
        const FieldGrid omega = make_field(uniform_grid(0.5, 1.0, static_cast<int>(std::lround(0.5 / h))),
                                           uniform_grid(-1.0, 1.0, static_cast<int>(std::lround(2.0 / h))),
                                           [&](double tau, double xi) { return omega_from_profile(profile, tau, xi); },
                                           FieldMeaning::omega_field);
        heat.push_back(heat_residual(omega));
    }
    out.push_back(at_least("omega_heat_residual_order", min_order(heat), 1.8));

    // Gauge identity with the exponent integrals evaluated by quadrature.
    double gauge = 0.0;
    for (const auto& profile : {SpectralProfile::unit(), SpectralProfile::gaussian(1.0)}) {
        for (double t : {0.0, 0.2, 0.45, 0.8}) {
            const double energy = quad::integrate([&](double u) { return quad.df(u) * quad.df(u); }, t, s).value;
            const double shift = quad::integrate([&](double u) { return quad.df(u); }, t, s).value;
            for (double x : {0.1, 0.7, 1.3, 2.4}) {
                const double direct = fourier_w(profile, quad, s, t, x);
                const double gauged = std::exp(0.5 * energy + x * quad.df(t)) * omega_from_profile(profile, s - t, x + shift);
                gauge = std::max(gauge, std::abs(direct - gauged) / std::abs(gauged));
            }
        }
    }
    out.push_back(at_most("fourier_gauge_identity", gauge, 1e-10));

    // With a = s and f'' = 0, omega(s, a + \int f') is the density at s.
    const Boundary lin = linear_boundary();
    const double omega = omega_from_profile(SpectralProfile::unit(), 1.0, 1.0 + lin.integral_df(0.0, 1.0));
    out.push_back(at_most("omega_linear_density_relation", std::abs(omega - closed_form_density(lin, 1.0)), 1e-8));
    return out;
}

std::vector<CheckResult> check_burgers() {
    const Boundary flat = make_boundary(BoundaryKind::linear, 1.0, {0.0});
    constexpr double s_kernel = 2.0;
    const FieldGrid kernel = make_field(uniform_grid(0.5, 0.5 + 4e-4, 4), uniform_grid(0.2, 1.5, 26),
                                        [](double t, double x) { return heat_kernel(s_kernel - t, x); },
                                        FieldMeaning::w_field);
    std::vector<CheckResult> out{at_most("burgers_heat_kernel", burgers_residual(kernel, flat), 1e-8)};

    const Boundary quad = quadratic_boundary();
    const auto residuals = refinement_residuals(SpectralProfile::gaussian(1.0), quad, 1.0,
                                                [&](const FieldGrid& w) { return burgers_residual(w, quad); });
    out.push_back(at_least("burgers_order_quadratic", min_order(residuals), 1.8));
    return out;
}

std::vector<CheckResult> check_ratio_gauge() {
    double gauge = 0.0;
    for (double tau : {0.05, 0.3, 0.5, 1.0, 2.0})
        for (double x : {0.05, 0.3, 0.7, 1.5, 3.0}) gauge = std::max(gauge, gauge_deviation(tau, x));
    std::vector<CheckResult> out{at_most("ratio_gauge_pointwise", gauge, 1e-10)};

    const Boundary quad = quadratic_boundary();
    constexpr double s = 1.0;
    const auto residuals = refinement_residuals(SpectralProfile::unit(), quad, s, [&](const FieldGrid& w) {
        return ratio_identity_check(w, quad, s).max_residual;
    });
    out.push_back(at_least("ratio_residual_order", min_order(residuals), 1.8));
    return out;
}

std::vector<CheckResult> check_thread_invariance(const ValidationScale& scale) {
    const Boundary quad = quadratic_boundary();
    const std::size_t paths = 3 * kDefaultChunkSize + 17;
    SamplingOptions one, many;
    one.workers = 1;
    many.workers = 3;
    const EstimateCI a = fpt_density_girsanov(quad, 1.0, 64, paths, scale.seed, BridgeScheme::three_bridge, one);
    const EstimateCI b = fpt_density_girsanov(quad, 1.0, 64, paths, scale.seed, BridgeScheme::three_bridge, many);
    DirectMcOptions d1, d3;
    d1.sampling = one;
    d3.sampling = many;
    const DirectMcResult c = fpt_direct_mc(quad, 1.0, 100, paths, scale.seed, d1);
    const DirectMcResult d = fpt_direct_mc(quad, 1.0, 100, paths, scale.seed, d3);
    const double girsanov_diff = std::abs(a.mean - b.mean) + std::abs(a.std_error - b.std_error);
    double direct_diff = std::abs(c.cdf.mean - d.cdf.mean);
    for (std::size_t i = 0; i < c.density.phi.size(); ++i) direct_diff += std::abs(c.density.phi[i] - d.density.phi[i]);
    return {at_most("thread_invariance_girsanov", girsanov_diff, 0.0),
            at_most("thread_invariance_direct_mc", direct_diff, 0.0)};
}

std::vector<CheckResult> run_validation_suite(const Boundary& boundary, const ValidationScale& scale) {
    std::vector<CheckResult> all;
    const auto append = [&](std::vector<CheckResult> part) { all.insert(all.end(), part.begin(), part.end()); };
    append(check_linear_exactness(scale));
    append(check_direct_mc(scale));
    const MethodCurves curves = compute_method_curves(boundary, agreement_grid(boundary), scale);
    append(check_method_agreement(boundary, curves));
    append(check_envelope(boundary, curves));
    append(check_bridge_law(scale));
    append(check_martingale(scale));
    append(check_residual_orders());
    append(check_burgers());
    append(check_ratio_gauge());
    append(check_thread_invariance(scale));
    return all;
}

nlohmann::json validation_report(const Boundary& boundary, const ValidationScale& scale,
                                 const std::vector<CheckResult>& checks) {
    nlohmann::json list = nlohmann::json::array();
    bool ok = true;
    for (const auto& c : checks) {
        ok = ok && c.passed;
        list.push_back({{"check_name", c.name},
                        {"status", c.passed ? "pass" : "fail"},
                        {"observed", c.observed},
                        {"tolerance", c.tolerance}});
    }
    return {{"schema_version", io::kSchemaVersion},
            {"boundary", io::boundary_to_json(boundary)},
            {"boundary_digest", boundary_digest(boundary)},
            {"scale", scale.to_json()},
            {"status", ok ? "pass" : "fail"},
            {"checks", list}};
}

}  // namespace fpt
