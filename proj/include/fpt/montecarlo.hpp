#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fpt/boundary.hpp"
#include "fpt/bridge.hpp"
#include "fpt/stats.hpp"

namespace fpt {

enum class DensityMethod { girsanov_mc, direct_mc, fk_pde, heat_pde, closed_form };

std::string to_string(DensityMethod method);
DensityMethod density_method_from_string(const std::string& name);

/// First-passage density phi(s) on a grid, optionally with confidence bands.
struct DensityCurve {
    std::vector<double> s_grid;
    std::vector<double> phi;
    std::optional<std::vector<double>> ci_low;
    std::optional<std::vector<double>> ci_high;
    DensityMethod method = DensityMethod::closed_form;
    std::string boundary_digest;

    /// Throws InvalidArgument when lengths, ordering or band invariants fail.
    void validate() const;
    /// Linear interpolation of phi at s inside the grid.
    double at(double s) const;
};

/// Density and distribution of T for an affine boundary f(t) = a + b t.
double closed_form_density(const Boundary& boundary, double s);
double closed_form_cdf(const Boundary& boundary, double t);

/// exp(-a f'(0) - 1/2 \int_0^s (f')^2) h(s, a): the deterministic factor of
/// the bridge representation, and the upper Jensen bound.
double girsanov_prefactor(const Boundary& boundary, double s);

struct DirectMcResult {
    EstimateCI cdf;        // P(T <= t_max)
    DensityCurve density;  // histogram
};

struct DirectMcOptions {
    int bins = 50;
    SamplingOptions sampling;
};

/// Simulates B on a uniform grid, detecting crossings between grid points
/// with the Brownian-bridge probability exp(-2 d0 d1 / dt) against the
/// locally linear boundary.
DirectMcResult fpt_direct_mc(const Boundary& boundary, double t_max, int n_steps, std::size_t n_paths,
                             std::uint64_t seed, const DirectMcOptions& opts = {});

/// phi(s) = prefactor * E[exp(-\int_0^s f'' X du)] over bridges from a
/// pinned at s. The standard error comes from the functional mean only.
EstimateCI fpt_density_girsanov(const Boundary& boundary, double s, int n_steps, std::size_t n_paths,
                                std::uint64_t seed, BridgeScheme scheme = BridgeScheme::three_bridge,
                                const SamplingOptions& opts = {});

/// Girsanov estimates over a grid; point j uses the stream seed + j.
DensityCurve girsanov_curve(const Boundary& boundary, const std::vector<double>& s_grid, int n_steps,
                            std::size_t n_paths, std::uint64_t seed, BridgeScheme scheme = BridgeScheme::three_bridge,
                            const SamplingOptions& opts = {});

/// Sample mean of Z_t = exp(\int f' dB - 1/2 \int (f')^2 du) along Euler
/// paths of B; must be 1.
EstimateCI martingale_check(const Boundary& boundary, double t, int n_steps, std::size_t n_paths,
                            std::uint64_t seed, const SamplingOptions& opts = {});

}  // namespace fpt
