#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "fpt/boundary.hpp"
#include "fpt/pde.hpp"

namespace fpt {

enum class ProfileKind { gaussian, unit, table };

std::string to_string(ProfileKind kind);
ProfileKind profile_kind_from_string(const std::string& name);

/// The spectral weight Pi(y).
///   unit:     Pi = 1, no parameters.
///   gaussian: Pi = exp(-c y^2 / 2), params = [c] with c >= 0.
///   table:    params = [y0, p0, y1, p1, ...] with increasing y; Pi is the
///             piecewise-linear interpolant, zero outside [y0, y_last].
struct SpectralProfile {
    ProfileKind kind = ProfileKind::unit;
    std::vector<double> params;

    void validate() const;
    double operator()(double y) const;

    static SpectralProfile unit() { return {ProfileKind::unit, {}}; }
    static SpectralProfile gaussian(double c) { return {ProfileKind::gaussian, {c}}; }
};

/// Real part of (1/2 pi) \int Pi(y) exp(-y^2 tau / 2 + i y xi) dy, a solution
/// of omega_tau = 1/2 omega_xixi.
double omega_from_profile(const SpectralProfile& profile, double tau, double xi);

/// exp(1/2 \int_t^s (f')^2 + x f'(t)) omega(s - t, x + \int_t^s f'), a solution
/// of -w_t + f''(t) x w = 1/2 w_xx for t < s.
double fourier_w(const SpectralProfile& profile, const Boundary& boundary, double s, double t, double x);

/// fourier_w sampled on a tensor grid (all t < s).
FieldGrid fourier_field(const SpectralProfile& profile, const Boundary& boundary, double s,
                        const Eigen::VectorXd& t_grid, const Eigen::VectorXd& x_grid);

/// Heat-equation residual max |omega_tau - 1/2 omega_xixi| of an omega field
/// whose time axis is tau.
double heat_residual(const FieldGrid& omega);

/// With kappa = -d/dx log w by centred differences, the maximum over nodes
/// at least two cells from the x-edges and one from the t-edges of
/// |kappa kappa_x - kappa_t - 1/2 kappa_xx - f''(t)|.
double burgers_residual(const FieldGrid& wfield, const Boundary& boundary);

}  // namespace fpt
