#pragma once

#include <cstdint>
#include <json.hpp>
#include <string>
#include <vector>

#include "fpt/boundary.hpp"
#include "fpt/montecarlo.hpp"

namespace fpt {

struct CheckResult {
    std::string name;
    bool passed = false;
    double observed = 0.0;
    double tolerance = 0.0;
};

/// Sample sizes and grids for the cross-validation suite.
struct ValidationScale {
    std::size_t girsanov_paths = 100000;
    int girsanov_steps = 256;
    std::size_t direct_paths = 100000;
    int direct_steps = 1000;
    int pde_nt = 1000;
    int pde_nx = 1000;
    std::size_t bridge_paths = 10000;
    int bridge_steps = 1000;
    std::size_t martingale_paths = 100000;
    int martingale_steps = 100;
    std::uint64_t seed = 0;

    /// Full-size runs: 10^6 Girsanov paths and 2000 x 2000 PDE grids.
    static ValidationScale full();
    nlohmann::json to_json() const;
};

/// Densities of one boundary by each numerical method on a common grid.
struct MethodCurves {
    std::vector<double> s_grid;
    DensityCurve girsanov;
    DensityCurve fk;
    DensityCurve heat;
    std::vector<DensityCurve> all() const { return {girsanov, fk, heat}; }
};

/// {0.5, 1, 2} clipped to the boundary's horizon.
std::vector<double> agreement_grid(const Boundary& boundary);

MethodCurves compute_method_curves(const Boundary& boundary, const std::vector<double>& s_grid,
                                   const ValidationScale& scale);

std::vector<CheckResult> check_linear_exactness(const ValidationScale& scale);
std::vector<CheckResult> check_direct_mc(const ValidationScale& scale);
/// Pairwise relative differences (and closed form for affine boundaries).
std::vector<CheckResult> check_method_agreement(const Boundary& boundary, const MethodCurves& curves);
/// Containment in the Jensen envelope and collapse of the envelope at zero curvature.
std::vector<CheckResult> check_envelope(const Boundary& boundary, const MethodCurves& curves);
std::vector<CheckResult> check_bridge_law(const ValidationScale& scale);
std::vector<CheckResult> check_martingale(const ValidationScale& scale);
std::vector<CheckResult> check_residual_orders();
std::vector<CheckResult> check_burgers();
std::vector<CheckResult> check_ratio_gauge();
/// Girsanov and direct Monte Carlo outputs compared bitwise across worker counts.
std::vector<CheckResult> check_thread_invariance(const ValidationScale& scale);

/// Every check above, for `boundary` where a boundary is involved.
std::vector<CheckResult> run_validation_suite(const Boundary& boundary, const ValidationScale& scale);

/// {"schema_version", "boundary", "scale", "checks": [{check_name, status, observed, tolerance}]}
nlohmann::json validation_report(const Boundary& boundary, const ValidationScale& scale,
                                 const std::vector<CheckResult>& checks);

}  // namespace fpt
