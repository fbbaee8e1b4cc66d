#include "fpt/pde.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "fpt/error.hpp"
#include "fpt/kernels.hpp"
#include "fpt/quadrature.hpp"
#include "fpt/tridiagonal.hpp"

namespace fpt {

std::string to_string(FieldMeaning meaning) {
    switch (meaning) {
        case FieldMeaning::v_field: return "v_field";
        case FieldMeaning::w_field: return "w_field";
        case FieldMeaning::u_field: return "u_field";
        case FieldMeaning::omega_field: return "omega_field";
        case FieldMeaning::kappa_field: return "kappa_field";
    }
    return "unknown";
}

namespace {

double uniform_step(const Eigen::VectorXd& grid, const char* what) {
    if (grid.size() < 2) throw InvalidArgument(std::string(what) + " grid needs at least two points");
    const double step = (grid(grid.size() - 1) - grid(0)) / static_cast<double>(grid.size() - 1);
    for (Eigen::Index i = 1; i < grid.size(); ++i) {
        if (std::abs(grid(i) - grid(i - 1) - step) > 1e-9 * std::max(1.0, std::abs(step)) + 1e-12)
            throw InvalidArgument(std::string(what) + " grid is not uniform");
    }
    return step;
}

}  // namespace

void FieldGrid::validate() const {
    if (values.rows() != t_grid.size() || values.cols() != x_grid.size())
        throw InvalidArgument("field dimensions do not match its grids");
    for (Eigen::Index i = 1; i < t_grid.size(); ++i)
        if (!(t_grid(i) > t_grid(i - 1))) throw InvalidArgument("time grid must increase");
    for (Eigen::Index i = 1; i < x_grid.size(); ++i)
        if (!(x_grid(i) > x_grid(i - 1))) throw InvalidArgument("space grid must increase");
    if (meaning == FieldMeaning::v_field && (values.minCoeff() < 0.0 || values.maxCoeff() > 1.0))
        throw InvalidArgument("v_field values must lie in [0, 1]");
}

double FieldGrid::dt() const { return uniform_step(t_grid, "time"); }
double FieldGrid::dx() const { return uniform_step(x_grid, "space"); }

FieldGrid make_field(const Eigen::VectorXd& t_grid, const Eigen::VectorXd& x_grid,
                     const std::function<double(double, double)>& fn, FieldMeaning meaning) {
    FieldGrid field{t_grid, x_grid, Eigen::MatrixXd(t_grid.size(), x_grid.size()), meaning};
    for (Eigen::Index n = 0; n < t_grid.size(); ++n)
        for (Eigen::Index i = 0; i < x_grid.size(); ++i) field.values(n, i) = fn(t_grid(n), x_grid(i));
    return field;
}

Eigen::VectorXd uniform_grid(double lo, double hi, int n) {
    if (n < 1) throw InvalidArgument("grid needs at least one interval");
    Eigen::VectorXd g(n + 1);
    for (int i = 0; i <= n; ++i) g(i) = lo + (hi - lo) * static_cast<double>(i) / n;
    g(n) = hi;
    return g;
}

namespace {

// Second-difference diffusion plus drift b d/dx. Central differencing while
// the cell Peclet number |b| dx stays below 1, upwind beyond.
struct Stencil {
    double lower, diag, upper;
};

Stencil diffusion_drift(double b, double dx) {
    const double diff = 0.5 / (dx * dx);
    if (std::abs(b) * dx <= 1.0) return {diff - b / (2.0 * dx), -2.0 * diff, diff + b / (2.0 * dx)};
    if (b > 0.0) return {diff, -2.0 * diff - b / dx, diff + b / dx};
    return {diff - b / dx, -2.0 * diff + b / dx, diff};
}

// One theta-step of du/dtau = L(tau) u between two times; unknowns exclude a
// Dirichlet node on the right whose values at both ends are supplied.
template <class Assemble>
Eigen::VectorXd theta_step(const Eigen::VectorXd& from, double h, double theta, const Assemble& assemble,
                           double t_from, double t_to, double edge_from, double edge_to) {
    double coupling_from = 0.0, coupling_to = 0.0;
    const Tridiagonal<double> op_from = assemble(t_from, coupling_from);
    const Tridiagonal<double> op_to = assemble(t_to, coupling_to);
    const Eigen::Index n = from.size();

    Eigen::VectorXd rhs = from;
    if (theta < 1.0) {
        rhs += (1.0 - theta) * h * op_from.apply(from);
        rhs(n - 1) += (1.0 - theta) * h * coupling_from * edge_from;
    }
    rhs(n - 1) += theta * h * coupling_to * edge_to;

    Tridiagonal<double> system(n);
    system.lower = -theta * h * op_to.lower;
    system.upper = -theta * h * op_to.upper;
    system.diag = Eigen::VectorXd::Ones(n) - theta * h * op_to.diag;
    return system.solve(rhs);
}

}  // namespace

double min_x_max(const Boundary& boundary, double s) { return 5.0 * std::max(boundary.a(), std::sqrt(s)); }

double default_x_max(const Boundary& boundary, double s) { return 1.5 * min_x_max(boundary, s); }

FieldGrid solve_fk_cauchy(const Boundary& boundary, double s, int n_t, int n_x, double x_max) {
    if (!(s > 0.0)) throw DomainError("Feynman-Kac solve needs s > 0");
    if (n_x < 200) throw GridTooCoarse("n_x = " + std::to_string(n_x) + " < 200");
    if (n_t < 4) throw GridTooCoarse("n_t must be at least 4");
    if (x_max < min_x_max(boundary, s) * (1.0 - 1e-12))
        throw GridTooCoarse("x_max = " + std::to_string(x_max) + " below 5 max(a, sqrt(s))");
    const double dx = x_max / n_x;
    const double dt = s / n_t;
    if (x_max / s * dx > 1.0) throw GridTooCoarse("cell Peclet number above 1 at t = 0");

    const Eigen::Index unknowns = n_x;  // nodes 0 .. n_x - 1; node n_x is Dirichlet
    auto assemble = [&](double t, double& coupling) {
        const double remaining = std::max(s - t, 0.5 * dt);
        const double curvature = boundary.d2f(t);
        Tridiagonal<double> op(unknowns);
        // x = 0: 1/2 v_xx + v_x / x -> 3/2 v_xx for an even profile.
        op.diag(0) = -3.0 / (dx * dx);
        op.upper(0) = 3.0 / (dx * dx);
        for (Eigen::Index i = 1; i < unknowns; ++i) {
            const double x = dx * static_cast<double>(i);
            const Stencil st = diffusion_drift(1.0 / x - x / remaining, dx);
            op.lower(i) = st.lower;
            op.diag(i) = st.diag - curvature * x;
            op.upper(i) = st.upper;
        }
        coupling = op.upper(unknowns - 1);
        op.upper(unknowns - 1) = 0.0;
        return op;
    };
    // Straight-line limit at the far edge: the bridge from x_max at time t
    // follows x_max (s - u) / (s - t) to zero.
    auto edge = [&](double t) {
        if (t >= s) return 1.0;
        const auto integrand = [&](double u) { return boundary.d2f(u) * (s - u); };
        const double integral = quad::integrate(integrand, t, s, {1e-12, 1e-300, 500}).value;
        return std::exp(-x_max * integral / (s - t));
    };

    FieldGrid field;
    field.meaning = FieldMeaning::v_field;
    field.t_grid = uniform_grid(0.0, s, n_t);
    field.x_grid = uniform_grid(0.0, x_max, n_x);
    field.values.resize(n_t + 1, n_x + 1);

    Eigen::VectorXd v = Eigen::VectorXd::Ones(unknowns);
    field.values.row(n_t).setOnes();
    double edge_prev = 1.0;
    for (int j = n_t - 1; j >= 0; --j) {
        const double t_from = field.t_grid(j + 1);
        const double t_to = field.t_grid(j);
        const double edge_to = edge(t_to);
        if (j >= n_t - 2) {
            // Rannacher start: two implicit half-steps damp the terminal layer.
            const double t_mid = 0.5 * (t_from + t_to);
            const double edge_mid = edge(t_mid);
            v = theta_step(v, 0.5 * dt, 1.0, assemble, t_from, t_mid, edge_prev, edge_mid);
            v = theta_step(v, 0.5 * dt, 1.0, assemble, t_mid, t_to, edge_mid, edge_to);
        } else {
            v = theta_step(v, dt, 0.5, assemble, t_from, t_to, edge_prev, edge_to);
        }
        field.values.row(j).head(unknowns) = v.transpose();
        field.values(j, n_x) = edge_to;
        edge_prev = edge_to;
    }
    // Round-off excursions outside the admissible range.
    field.values = field.values.cwiseMax(0.0).cwiseMin(1.0);
    return field;
}

double interpolate_row(const FieldGrid& field, Eigen::Index row, double x) {
    const Eigen::VectorXd& g = field.x_grid;
    const Eigen::Index n = g.size();
    if (x < g(0) || x > g(n - 1)) throw DomainError("interpolation point outside the space grid");
    if (n < 4) throw InvalidArgument("cubic interpolation needs four nodes");
    const auto* it = std::upper_bound(g.data(), g.data() + n, x);
    Eigen::Index i = std::distance(g.data(), it) - 1;
    Eigen::Index start = std::clamp<Eigen::Index>(i - 1, 0, n - 4);
    double value = 0.0;
    for (Eigen::Index p = start; p < start + 4; ++p) {
        double basis = 1.0;
        for (Eigen::Index q = start; q < start + 4; ++q)
            if (q != p) basis *= (x - g(q)) / (g(p) - g(q));
        value += basis * field.values(row, p);
    }
    return value;
}

double density_from_v(const FieldGrid& vfield, const Boundary& boundary, double s) {
    if (std::abs(vfield.t_grid(0)) > 1e-14) throw InvalidArgument("v field must start at t = 0");
    const double v0 = std::clamp(interpolate_row(vfield, 0, boundary.a()), 0.0, 1.0);
    return girsanov_prefactor(boundary, s) * v0;
}

DensityCurve fk_curve(const Boundary& boundary, const std::vector<double>& s_grid, int n_t, int n_x) {
    DensityCurve curve;
    curve.method = DensityMethod::fk_pde;
    curve.boundary_digest = boundary_digest(boundary);
    for (double s : s_grid) {
        const FieldGrid v = solve_fk_cauchy(boundary, s, n_t, n_x, default_x_max(boundary, s));
        curve.s_grid.push_back(s);
        curve.phi.push_back(density_from_v(v, boundary, s));
    }
    curve.validate();
    return curve;
}

double default_y_max(const Boundary& boundary, double t_max) {
    return std::max(min_x_max(boundary, t_max), boundary.f(t_max) + 8.0 * std::sqrt(t_max));
}

KilledHeatResult solve_killed_heat_full(const Boundary& boundary, double t_max, int n_t, int n_y, double y_max) {
    if (!(t_max > 0.0)) throw DomainError("killed heat solve needs t_max > 0");
    if (n_y < 200) throw GridTooCoarse("n_y = " + std::to_string(n_y) + " < 200");
    if (n_t < 4) throw GridTooCoarse("n_t must be at least 4");
    if (y_max < min_x_max(boundary, t_max) * (1.0 - 1e-12))
        throw GridTooCoarse("y_max = " + std::to_string(y_max) + " below 5 max(a, sqrt(t_max))");
    const double dy = y_max / n_y;
    const double dt = t_max / n_t;
    const Eigen::Index unknowns = n_y - 1;  // nodes 1 .. n_y - 1

    auto assemble = [&](double t, double& coupling) {
        const double velocity = -boundary.df(t);
        Tridiagonal<double> op(unknowns);
        const Stencil st = diffusion_drift(velocity, dy);
        op.lower.setConstant(st.lower);
        op.diag.setConstant(st.diag);
        op.upper.setConstant(st.upper);
        op.lower(0) = 0.0;
        coupling = 0.0;
        op.upper(unknowns - 1) = 0.0;
        return op;
    };

    // Point mass at distance a evolved for one step: absorbed heat kernel
    // centred on the boundary distance at t = dt.
    const double centre = boundary.f(dt);
    Eigen::VectorXd q(unknowns);
    for (Eigen::Index j = 0; j < unknowns; ++j) {
        const double y = dy * static_cast<double>(j + 1);
        q(j) = std::max(0.0, heat_kernel(dt, y - centre) - heat_kernel(dt, y + centre));
    }
    auto flux_of = [&](const Eigen::VectorXd& profile) {
        return 0.5 * (4.0 * profile(0) - profile(1)) / (2.0 * dy);
    };
    // Trapezoid with the Euler-Maclaurin end correction dy^2/12 q_y(0).
    auto mass_of = [&](const Eigen::VectorXd& profile) {
        return profile.sum() * dy + dy * dy / 6.0 * flux_of(profile);
    };
    const double expected = std::erf(centre / std::sqrt(2.0 * dt));
    const double initial_mass = mass_of(q);
    if (std::abs(initial_mass - expected) > 1e-3) {
        throw DeltaApproximationError("initial profile mass " + std::to_string(initial_mass) + " vs " +
                                      std::to_string(expected) + "; refine the space grid");
    }

    KilledHeatResult result;
    DensityCurve& curve = result.density;
    curve.method = DensityMethod::heat_pde;
    curve.boundary_digest = boundary_digest(boundary);
    double absorbed = 0.5 * dt * std::max(0.0, flux_of(q));  // trapezoid from phi(0) = 0
    auto record = [&](double t) {
        const double phi = std::max(0.0, flux_of(q));
        curve.s_grid.push_back(t);
        curve.phi.push_back(phi);
        const double mass = mass_of(q);
        result.mass.push_back(mass);
        result.max_mass_defect = std::max(result.max_mass_defect, std::abs(mass + absorbed - 1.0));
    };
    record(dt);
    for (int k = 1; k < n_t; ++k) {
        const double t_from = dt * k;
        const double t_to = dt * (k + 1);
        const double phi_from = curve.phi.back();
        if (k <= 2) {
            const double t_mid = 0.5 * (t_from + t_to);
            q = theta_step(q, 0.5 * dt, 1.0, assemble, t_from, t_mid, 0.0, 0.0);
            q = theta_step(q, 0.5 * dt, 1.0, assemble, t_mid, t_to, 0.0, 0.0);
        } else {
            q = theta_step(q, dt, 0.5, assemble, t_from, t_to, 0.0, 0.0);
        }
        absorbed += 0.5 * dt * (phi_from + std::max(0.0, flux_of(q)));
        record(t_to);
    }
    curve.validate();
    return result;
}

DensityCurve solve_killed_heat(const Boundary& boundary, double t_max, int n_t, int n_y, double y_max) {
    return solve_killed_heat_full(boundary, t_max, n_t, n_y, y_max).density;
}

namespace {

struct Derivatives {
    double t, x, value, dt, dx, dxx;
};

// Max over interior nodes of |residual(node derivatives)|.
template <class Residual>
double max_interior(const FieldGrid& field, const Residual& residual) {
    field.validate();
    const double ht = field.dt();
    const double hx = field.dx();
    const Eigen::Index nt = field.values.rows();
    const Eigen::Index nx = field.values.cols();
    if (nt < 3 || nx < 3) throw InvalidArgument("residual needs at least 3 x 3 nodes");
    const Eigen::MatrixXd& w = field.values;
    double worst = 0.0;
    for (Eigen::Index n = 1; n + 1 < nt; ++n) {
        for (Eigen::Index i = 1; i + 1 < nx; ++i) {
            const Derivatives d{field.t_grid(n),
                                field.x_grid(i),
                                w(n, i),
                                (w(n + 1, i) - w(n - 1, i)) / (2.0 * ht),
                                (w(n, i + 1) - w(n, i - 1)) / (2.0 * hx),
                                (w(n, i + 1) - 2.0 * w(n, i) + w(n, i - 1)) / (hx * hx)};
            worst = std::max(worst, std::abs(residual(d)));
        }
    }
    return worst;
}

void require_before_terminal(const FieldGrid& field, double s) {
    if (!(field.t_grid(field.t_grid.size() - 1) < s)) throw DomainError("field must stay strictly before t = s");
}

void require_positive_space(const FieldGrid& field) {
    if (!(field.x_grid(0) > 0.0)) throw DomainError("field must stay strictly away from x = 0");
}

}  // namespace

double residual_w(const FieldGrid& wfield, const Boundary& boundary, double s) {
    (void)s;
    return max_interior(wfield, [&](const Derivatives& d) {
        return -d.dt + boundary.d2f(d.t) * d.x * d.value - 0.5 * d.dxx;
    });
}

double residual_u(const FieldGrid& ufield, const Boundary& boundary, double s) {
    require_before_terminal(ufield, s);
    require_positive_space(ufield);
    return max_interior(ufield, [&](const Derivatives& d) {
        return -d.dt + (-1.0 / (s - d.t) + boundary.d2f(d.t) * d.x) * d.value - 0.5 * d.dxx - d.dx / d.x;
    });
}

double residual_v(const FieldGrid& vfield, const Boundary& boundary, double s) {
    require_before_terminal(vfield, s);
    require_positive_space(vfield);
    return max_interior(vfield, [&](const Derivatives& d) {
        return -d.dt + boundary.d2f(d.t) * d.x * d.value - 0.5 * d.dxx - (1.0 / d.x - d.x / (s - d.t)) * d.dx;
    });
}

double gauge_deviation(double tau, double x) {
    if (!(tau > 0.0) || !(x > 0.0)) throw DomainError("gauge check needs tau > 0 and x > 0");
    constexpr double step = 1e-30;
    using C = std::complex<double>;
    const C shifted = level_hitting_density(C(tau, 0.0), C(x, step));
    const double h = level_hitting_density(tau, x);
    const double log_derivative = shifted.imag() / step / h;
    const double gauge = 1.0 / x - x / tau;
    return std::abs(gauge - log_derivative) / std::max(1.0, std::abs(gauge));
}

RatioCheck ratio_identity_check(const FieldGrid& wfield, const Boundary& boundary, double s) {
    require_before_terminal(wfield, s);
    require_positive_space(wfield);
    FieldGrid v = wfield;
    v.meaning = FieldMeaning::v_field;
    RatioCheck check;
    for (Eigen::Index n = 0; n < v.values.rows(); ++n) {
        for (Eigen::Index i = 0; i < v.values.cols(); ++i) {
            const double tau = s - v.t_grid(n);
            const double x = v.x_grid(i);
            v.values(n, i) = wfield.values(n, i) / level_hitting_density(tau, x);
            if (n > 0 && i > 0 && n + 1 < v.values.rows() && i + 1 < v.values.cols())
                check.max_gauge_deviation = std::max(check.max_gauge_deviation, gauge_deviation(tau, x));
        }
    }
    // w / h is a Feynman-Kac solution but need not lie in [0, 1] for an
    // arbitrary w, so the residual is taken without the v_field range check.
    v.meaning = FieldMeaning::w_field;
    check.max_residual = residual_v(v, boundary, s);
    return check;
}

double terminal_ratio_deviation(const FieldGrid& wfield, double s) {
    require_before_terminal(wfield, s);
    require_positive_space(wfield);
    const Eigen::Index last = wfield.values.rows() - 1;
    const double tau = s - wfield.t_grid(last);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < wfield.values.cols(); ++i) {
        const double ratio = wfield.values(last, i) / level_hitting_density(tau, wfield.x_grid(i));
        worst = std::max(worst, std::abs(ratio - 1.0));
    }
    return worst;
}

}  // namespace fpt
