#pragma once

#include <string>
#include <utility>
#include <vector>

namespace fpt {

enum class BoundaryKind { linear, quadratic, polynomial, tabulated };

std::string to_string(BoundaryKind kind);
BoundaryKind boundary_kind_from_string(const std::string& name);

/// Convexity is checked on this many points of [0, horizon].
struct ConvexityCheck {
    double horizon = 10.0;
    int points = 10000;
};

/// The moving boundary f(t) = a + \int_0^t f'(u) du with f'' >= 0.
///
/// Polynomial kinds keep the power-series coefficients of f and evaluate
/// every integral in closed form. Tabulated boundaries interpolate f' with a
/// monotone (Fritsch-Butland) cubic through derivative estimates at the
/// knots, so f' is nondecreasing and f'' >= 0 by construction; f itself is
/// the exact antiderivative of that cubic.
///
/// Values are immutable after construction.
class Boundary {
public:
    using Knot = std::pair<double, double>;

    /// `coefficients` are the terms beyond the constant: [b] for linear,
    /// [b, c] for quadratic (f = a + b t + c t^2), [c1, ..., cn] for polynomial.
    static Boundary polynomial(BoundaryKind kind, double a, std::vector<double> coefficients,
                               ConvexityCheck check = {});

    /// Knots (t, f(t)) starting at t = 0 with f(0) = a.
    static Boundary tabulated(double a, std::vector<Knot> knots, ConvexityCheck check = {});

    BoundaryKind kind() const { return kind_; }
    double a() const { return power_.empty() ? knot_f_.front() : power_.front(); }

    /// Coefficients beyond the constant term (polynomial kinds) as supplied.
    std::vector<double> coefficients() const;
    std::vector<Knot> knots() const;

    /// f (order 0), f' (order 1) or f'' (order 2) at t >= 0.
    double eval(double t, int order = 0) const;
    double f(double t) const { return eval(t, 0); }
    double df(double t) const { return eval(t, 1); }
    double d2f(double t) const { return eval(t, 2); }

    /// \int_0^t (f'(u))^2 du.
    double integral_df_sq(double t) const;
    /// \int_{t0}^{t1} (f'(u))^2 du.
    double integral_df_sq(double t0, double t1) const { return integral_df_sq(t1) - integral_df_sq(t0); }
    /// \int_{t0}^{t1} f'(u) du = f(t1) - f(t0).
    double integral_df(double t0, double t1) const;

    /// True when f'' vanishes identically (affine boundary).
    bool is_affine() const;

    /// Largest time the boundary is defined on (infinity for polynomial kinds).
    double horizon() const;

    /// The boundary whose curvature is lambda * f'': same a and f'(0).
    Boundary with_scaled_curvature(double lambda) const;

private:
    Boundary() = default;

    void check_convexity(const ConvexityCheck& check) const;
    std::size_t segment(double t) const;
    double integral_hermite(std::size_t i, double theta) const;

    BoundaryKind kind_ = BoundaryKind::polynomial;
    std::vector<double> supplied_;  // as passed in (polynomial kinds)
    std::vector<double> power_;     // f = sum power_[k] t^k
    std::vector<double> d1_, d2_;   // power series of f', f''
    std::vector<double> sq_antideriv_;  // antiderivative of (f')^2, zero at 0

    // Tabulated representation.
    std::vector<double> knot_t_, knot_f_;
    std::vector<double> slope_;      // f' at the knots
    std::vector<double> curvature_;  // f'' at the knots
    std::vector<double> cumulative_; // \int_0^{t_i} f'
    std::vector<double> cumulative_sq_;  // \int_0^{t_i} (f')^2
};

/// Stable 64-bit FNV-1a digest (16 hex digits) of the boundary definition.
std::string boundary_digest(const Boundary& b);

/// Free-function surface mirroring the member calls.
Boundary make_boundary(BoundaryKind kind, double a, std::vector<double> coefficients,
                       ConvexityCheck check = {});
inline double eval(const Boundary& b, double t, int order) { return b.eval(t, order); }
inline double integral_df_sq(const Boundary& b, double t) { return b.integral_df_sq(t); }
inline double integral_df(const Boundary& b, double t0, double t1) { return b.integral_df(t0, t1); }

}  // namespace fpt
