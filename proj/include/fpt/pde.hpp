#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "fpt/boundary.hpp"
#include "fpt/montecarlo.hpp"

namespace fpt {

enum class FieldMeaning { v_field, w_field, u_field, omega_field, kappa_field };

std::string to_string(FieldMeaning meaning);

/// Values of a PDE solution on a (time x space) tensor grid; row n is time
/// t_grid(n), column i is position x_grid(i).
struct FieldGrid {
    Eigen::VectorXd t_grid;
    Eigen::VectorXd x_grid;
    Eigen::MatrixXd values;
    FieldMeaning meaning = FieldMeaning::w_field;

    /// Dimension checks, increasing grids, and v_field values in [0, 1].
    void validate() const;
    /// Uniform spacing of each grid; throws InvalidArgument otherwise.
    double dt() const;
    double dx() const;
};

/// Samples fn(t, x) on the tensor grid.
FieldGrid make_field(const Eigen::VectorXd& t_grid, const Eigen::VectorXd& x_grid,
                     const std::function<double(double, double)>& fn, FieldMeaning meaning);

/// n + 1 equally spaced points from lo to hi.
Eigen::VectorXd uniform_grid(double lo, double hi, int n);

// ---------------------------------------------------------------------------
// Feynman-Kac face: v(t, x) = E[exp(-\int_t^s f''(u) X_u du) | X_t = x].

/// Smallest spatial truncation the solvers accept: 5 max(a, sqrt(s)).
double min_x_max(const Boundary& boundary, double s);
/// Truncation used when the caller does not choose one.
double default_x_max(const Boundary& boundary, double s);

/// Solves -v_t + f''(t) x v = 1/2 v_xx + (1/x - x/(s-t)) v_x backward from
/// v(s, .) = 1 by Crank-Nicolson (two implicit half-steps on the first two
/// steps). The drift is differenced centrally where the cell Peclet number
/// |b| dx <= 1 and upwind elsewhere; x = 0 uses the radially symmetric limit
/// of the Bessel generator, x_max the straight-line Dirichlet value.
FieldGrid solve_fk_cauchy(const Boundary& boundary, double s, int n_t, int n_x, double x_max);

/// Value of row `row` of a field at position x (cubic Lagrange interpolation).
double interpolate_row(const FieldGrid& field, Eigen::Index row, double x);

/// prefactor * v(0, a): the first-passage density at s.
double density_from_v(const FieldGrid& vfield, const Boundary& boundary, double s);

/// density_from_v(solve_fk_cauchy(...)) over a grid of s values.
DensityCurve fk_curve(const Boundary& boundary, const std::vector<double>& s_grid, int n_t, int n_x);

// ---------------------------------------------------------------------------
// Killed heat equation in boundary-fixed coordinates y = f(t) - x.

struct KilledHeatResult {
    DensityCurve density;          // phi on t_1 .. t_n
    std::vector<double> mass;      // \int q(t_k, y) dy, k = 1 .. n
    double max_mass_defect = 0.0;  // max_k |mass + \int_0^{t_k} phi - 1|
};

double default_y_max(const Boundary& boundary, double t_max);

/// Solves q_t = 1/2 q_yy - f'(t) q_y, q(t, 0) = 0, from the absorbed heat
/// kernel profile at t = dt, and returns phi(t) = 1/2 q_y(t, 0).
KilledHeatResult solve_killed_heat_full(const Boundary& boundary, double t_max, int n_t, int n_y, double y_max);

DensityCurve solve_killed_heat(const Boundary& boundary, double t_max, int n_t, int n_y, double y_max);

// ---------------------------------------------------------------------------
// Residual checkers. All use centred differences on interior nodes of a
// uniform grid (one-cell margin) and return the maximum absolute residual.

/// |-w_t + f''(t) x w - 1/2 w_xx|
double residual_w(const FieldGrid& wfield, const Boundary& boundary, double s);
/// |-u_t + [-1/(s-t) + f''(t) x] u - 1/2 u_xx - u_x / x|
double residual_u(const FieldGrid& ufield, const Boundary& boundary, double s);
/// |-v_t + f''(t) x v - 1/2 v_xx - (1/x - x/(s-t)) v_x|
double residual_v(const FieldGrid& vfield, const Boundary& boundary, double s);

/// Relative deviation between 1/x - x/tau and h_x(tau, x)/h(tau, x), with h_x
/// by complex-step differentiation.
double gauge_deviation(double tau, double x);

struct RatioCheck {
    double max_residual = 0.0;         // residual_v of w / h(s - t, x)
    double max_gauge_deviation = 0.0;  // over the same interior nodes
};

/// Forms v = w / h(s - t, x) and checks it against the Feynman-Kac equation.
RatioCheck ratio_identity_check(const FieldGrid& wfield, const Boundary& boundary, double s);

/// max_x |w(t_last, x) / h(s - t_last, x) - 1| on the last time row.
double terminal_ratio_deviation(const FieldGrid& wfield, double s);

}  // namespace fpt
