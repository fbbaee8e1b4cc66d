#include "fpt/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fpt/error.hpp"
#include "fpt/quadrature.hpp"

namespace fpt {

std::string to_string(ProfileKind kind) {
    switch (kind) {
        case ProfileKind::gaussian: return "gaussian";
        case ProfileKind::unit: return "unit";
        case ProfileKind::table: return "table";
    }
    return "unknown";
}

ProfileKind profile_kind_from_string(const std::string& name) {
    for (auto k : {ProfileKind::gaussian, ProfileKind::unit, ProfileKind::table})
        if (to_string(k) == name) return k;
    throw InvalidArgument("unknown spectral profile '" + name + "'");
}

void SpectralProfile::validate() const {
    switch (kind) {
        case ProfileKind::unit:
            if (!params.empty()) throw InvalidArgument("unit profile takes no parameters");
            return;
        case ProfileKind::gaussian:
            if (params.size() != 1 || !(params[0] >= 0.0) || !std::isfinite(params[0]))
                throw InvalidArgument("gaussian profile takes one parameter c >= 0");
            return;
        case ProfileKind::table:
            if (params.size() < 4 || params.size() % 2 != 0)
                throw InvalidArgument("table profile needs at least two (y, value) pairs");
            for (std::size_t i = 0; i < params.size(); ++i)
                if (!std::isfinite(params[i])) throw InvalidArgument("table profile values must be finite");
            for (std::size_t i = 2; i < params.size(); i += 2)
                if (!(params[i] > params[i - 2])) throw InvalidArgument("table profile abscissae must increase");
            return;
    }
}

double SpectralProfile::operator()(double y) const {
    switch (kind) {
        case ProfileKind::unit: return 1.0;
        case ProfileKind::gaussian: return std::exp(-0.5 * params[0] * y * y);
        case ProfileKind::table: {
            const std::size_t n = params.size() / 2;
            if (y < params[0] || y > params[2 * (n - 1)]) return 0.0;
            for (std::size_t i = 1; i < n; ++i) {
                const double y0 = params[2 * (i - 1)], y1 = params[2 * i];
                if (y <= y1) {
                    const double w = (y - y0) / (y1 - y0);
                    return (1.0 - w) * params[2 * i - 1] + w * params[2 * i + 1];
                }
            }
            return params.back();
        }
    }
    return 0.0;
}

namespace {

// Trapezoid rule on the half line for exp(-alpha y^2 / 2) cos(xi y): the
// integrand is entire, so the error is the aliasing term
// exp(-(2 pi / step - |xi|)^2 / (2 alpha)) plus the truncated Gaussian tail,
// both below 1e-16 relative.
double gaussian_cosine_integral(double alpha, double xi) {
    const double step = 2.0 * std::numbers::pi / (std::abs(xi) + 10.0 * std::sqrt(alpha) + 10.0);
    const double radius = std::sqrt(78.0 / alpha);
    const auto n = static_cast<long>(std::ceil(radius / step));
    double sum = 0.5;
    for (long k = n; k >= 1; --k) {
        const double y = step * static_cast<double>(k);
        sum += std::exp(-0.5 * alpha * y * y) * std::cos(xi * y);
    }
    return 2.0 * step * sum;
}

}  // namespace

double omega_from_profile(const SpectralProfile& profile, double tau, double xi) {
    if (!(tau > 0.0)) throw DomainError("omega needs tau > 0");
    profile.validate();
    constexpr double inv_two_pi = 0.5 * std::numbers::inv_pi;
    if (profile.kind != ProfileKind::table) {
        const double c = profile.kind == ProfileKind::gaussian ? profile.params[0] : 0.0;
        return inv_two_pi * gaussian_cosine_integral(tau + c, xi);
    }
    std::vector<double> knots;
    for (std::size_t i = 0; i < profile.params.size(); i += 2) knots.push_back(profile.params[i]);
    const auto integrand = [&](double y) { return profile(y) * std::exp(-0.5 * tau * y * y) * std::cos(xi * y); };
    return inv_two_pi * quad::integrate_piecewise(integrand, knots, {1e-12, 1e-300, 4000}).value;
}

double fourier_w(const SpectralProfile& profile, const Boundary& boundary, double s, double t, double x) {
    if (!(t >= 0.0 && t < s)) throw DomainError("fourier_w needs 0 <= t < s");
    const double exponent = 0.5 * boundary.integral_df_sq(t, s) + x * boundary.df(t);
    return std::exp(exponent) * omega_from_profile(profile, s - t, x + boundary.integral_df(t, s));
}

FieldGrid fourier_field(const SpectralProfile& profile, const Boundary& boundary, double s,
                        const Eigen::VectorXd& t_grid, const Eigen::VectorXd& x_grid) {
    FieldGrid field{t_grid, x_grid, Eigen::MatrixXd(t_grid.size(), x_grid.size()), FieldMeaning::w_field};
    for (Eigen::Index n = 0; n < t_grid.size(); ++n) {
        const double t = t_grid(n);
        if (!(t >= 0.0 && t < s)) throw DomainError("fourier field needs 0 <= t < s");
        const double energy = 0.5 * boundary.integral_df_sq(t, s);
        const double slope = boundary.df(t);
        const double shift = boundary.integral_df(t, s);
        for (Eigen::Index i = 0; i < x_grid.size(); ++i) {
            const double x = x_grid(i);
            field.values(n, i) = std::exp(energy + x * slope) * omega_from_profile(profile, s - t, x + shift);
        }
    }
    return field;
}

double heat_residual(const FieldGrid& omega) {
    const double ht = omega.dt();
    const double hx = omega.dx();
    const Eigen::MatrixXd& w = omega.values;
    double worst = 0.0;
    for (Eigen::Index n = 1; n + 1 < w.rows(); ++n)
        for (Eigen::Index i = 1; i + 1 < w.cols(); ++i) {
            const double w_t = (w(n + 1, i) - w(n - 1, i)) / (2.0 * ht);
            const double w_xx = (w(n, i + 1) - 2.0 * w(n, i) + w(n, i - 1)) / (hx * hx);
            worst = std::max(worst, std::abs(w_t - 0.5 * w_xx));
        }
    return worst;
}

double burgers_residual(const FieldGrid& wfield, const Boundary& boundary) {
    const double ht = wfield.dt();
    const double hx = wfield.dx();
    const Eigen::Index nt = wfield.values.rows();
    const Eigen::Index nx = wfield.values.cols();
    if (nt < 3 || nx < 5) throw InvalidArgument("Burgers residual needs at least 3 x 5 nodes");
    if (!(wfield.values.minCoeff() > 0.0)) throw NonPositiveField("log w needs w > 0");
    const Eigen::MatrixXd log_w = wfield.values.array().log().matrix();
    // kappa at columns 1 .. nx - 2
    Eigen::MatrixXd kappa(nt, nx);
    kappa.setZero();
    for (Eigen::Index i = 1; i + 1 < nx; ++i)
        kappa.col(i) = -(log_w.col(i + 1) - log_w.col(i - 1)) / (2.0 * hx);

    double worst = 0.0;
    for (Eigen::Index n = 1; n + 1 < nt; ++n) {
        const double curvature = boundary.d2f(wfield.t_grid(n));
        for (Eigen::Index i = 2; i + 2 < nx; ++i) {
            const double k = kappa(n, i);
            const double k_x = -(log_w(n, i + 1) - 2.0 * log_w(n, i) + log_w(n, i - 1)) / (hx * hx);
            const double k_xx = (kappa(n, i + 1) - 2.0 * k + kappa(n, i - 1)) / (hx * hx);
            const double k_t = (kappa(n + 1, i) - kappa(n - 1, i)) / (2.0 * ht);
            worst = std::max(worst, std::abs(k * k_x - k_t - 0.5 * k_xx - curvature));
        }
    }
    return worst;
}

}  // namespace fpt
