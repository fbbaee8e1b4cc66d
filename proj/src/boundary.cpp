#include "fpt/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>

#include "fpt/error.hpp"
#include "fpt/quadrature.hpp"

namespace fpt {

namespace {

double horner(const std::vector<double>& p, double t) {
    double acc = 0.0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * t + *it;
    return acc;
}

std::vector<double> derivative(const std::vector<double>& p) {
    if (p.size() <= 1) return {0.0};
    std::vector<double> d(p.size() - 1);
    for (std::size_t k = 1; k < p.size(); ++k) d[k - 1] = static_cast<double>(k) * p[k];
    return d;
}

std::vector<double> square(const std::vector<double>& p) {
    std::vector<double> q(2 * p.size() - 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < p.size(); ++j) q[i + j] += p[i] * p[j];
    return q;
}

std::vector<double> antiderivative(const std::vector<double>& p) {
    std::vector<double> q(p.size() + 1, 0.0);
    for (std::size_t k = 0; k < p.size(); ++k) q[k + 1] = p[k] / static_cast<double>(k + 1);
    return q;
}

// Fritsch-Butland slopes for monotone data; one-sided shape-preserving ends.
std::vector<double> monotone_slopes(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::vector<double> m(n, 0.0);
    if (n == 2) {
        m[0] = m[1] = (y[1] - y[0]) / (x[1] - x[0]);
        return m;
    }
    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x[i + 1] - x[i];
        delta[i] = (y[i + 1] - y[i]) / h[i];
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) continue;
        const double w1 = 2.0 * h[i] + h[i - 1];
        const double w2 = h[i] + 2.0 * h[i - 1];
        m[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
    auto end_slope = [](double h0, double h1, double d0, double d1) {
        double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (d * d0 <= 0.0) return 0.0;
        if (d0 * d1 <= 0.0 && std::abs(d) > std::abs(3.0 * d0)) return 3.0 * d0;
        return d;
    };
    m[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    m[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    return m;
}

}  // namespace

std::string to_string(BoundaryKind kind) {
    switch (kind) {
        case BoundaryKind::linear: return "linear";
        case BoundaryKind::quadratic: return "quadratic";
        case BoundaryKind::polynomial: return "polynomial";
        case BoundaryKind::tabulated: return "tabulated";
    }
    return "unknown";
}

BoundaryKind boundary_kind_from_string(const std::string& name) {
    if (name == "linear") return BoundaryKind::linear;
    if (name == "quadratic") return BoundaryKind::quadratic;
    if (name == "polynomial") return BoundaryKind::polynomial;
    if (name == "tabulated") return BoundaryKind::tabulated;
    throw InvalidBoundary("unknown boundary kind '" + name + "'");
}

Boundary Boundary::polynomial(BoundaryKind kind, double a, std::vector<double> coefficients,
                              ConvexityCheck check) {
    if (!(a > 0.0)) throw NonPositiveGap("f(0) = " + std::to_string(a) + " must be positive");
    if (kind == BoundaryKind::tabulated)
        throw InvalidBoundary("tabulated boundaries are built from knots");
    const std::size_t expected = kind == BoundaryKind::linear ? 1 : kind == BoundaryKind::quadratic ? 2 : 0;
    if (expected != 0 && coefficients.size() != expected) {
        throw InvalidBoundary(to_string(kind) + " boundary takes " + std::to_string(expected) +
                              " coefficient(s), got " + std::to_string(coefficients.size()));
    }
    for (double c : coefficients)
        if (!std::isfinite(c)) throw InvalidBoundary("non-finite coefficient");

    Boundary b;
    b.kind_ = kind;
    b.supplied_ = coefficients;
    b.power_.reserve(coefficients.size() + 1);
    b.power_.push_back(a);
    b.power_.insert(b.power_.end(), coefficients.begin(), coefficients.end());
    while (b.power_.size() > 1 && b.power_.back() == 0.0) b.power_.pop_back();
    b.d1_ = derivative(b.power_);
    b.d2_ = derivative(b.d1_);
    b.sq_antideriv_ = antiderivative(square(b.d1_));
    b.check_convexity(check);
    return b;
}

Boundary Boundary::tabulated(double a, std::vector<Knot> knots, ConvexityCheck check) {
    if (!(a > 0.0)) throw NonPositiveGap("f(0) = " + std::to_string(a) + " must be positive");
    if (knots.size() < 2) throw InvalidBoundary("tabulated boundary needs at least two knots");
    if (knots.front().first != 0.0) throw InvalidBoundary("first knot must sit at t = 0");
    if (std::abs(knots.front().second - a) > 1e-12 * std::max(1.0, std::abs(a)))
        throw InvalidBoundary("first knot value must equal a");

    Boundary b;
    b.kind_ = BoundaryKind::tabulated;
    const std::size_t n = knots.size();
    for (const auto& [t, f] : knots) {
        if (!std::isfinite(t) || !std::isfinite(f)) throw InvalidBoundary("non-finite knot");
        b.knot_t_.push_back(t);
        b.knot_f_.push_back(f);
    }
    b.knot_f_.front() = a;
    std::vector<double> h(n - 1), secant(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = b.knot_t_[i + 1] - b.knot_t_[i];
        if (!(h[i] > 0.0)) throw InvalidBoundary("knot times must be strictly increasing");
        secant[i] = (b.knot_f_[i + 1] - b.knot_f_[i]) / h[i];
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double scale = std::max({1.0, std::abs(secant[i]), std::abs(secant[i - 1])});
        if (secant[i] < secant[i - 1] - 1e-12 * scale) {
            throw NonConvexBoundary("knot secants decrease at t = " + std::to_string(b.knot_t_[i]));
        }
    }

    // Three-point derivative estimates; each lies between adjacent secants,
    // so the sequence is nondecreasing whenever the data are convex.
    b.slope_.assign(n, 0.0);
    if (n == 2) {
        b.slope_[0] = b.slope_[1] = secant[0];
    } else {
        for (std::size_t i = 1; i + 1 < n; ++i)
            b.slope_[i] = (h[i] * secant[i - 1] + h[i - 1] * secant[i]) / (h[i - 1] + h[i]);
        b.slope_[0] = ((2.0 * h[0] + h[1]) * secant[0] - h[0] * secant[1]) / (h[0] + h[1]);
        b.slope_[n - 1] =
            ((2.0 * h[n - 2] + h[n - 3]) * secant[n - 2] - h[n - 2] * secant[n - 3]) / (h[n - 2] + h[n - 3]);
        for (std::size_t i = 1; i < n; ++i) b.slope_[i] = std::max(b.slope_[i], b.slope_[i - 1]);
    }
    b.curvature_ = monotone_slopes(b.knot_t_, b.slope_);
    for (double& c : b.curvature_) c = std::max(c, 0.0);

    b.cumulative_.assign(n, 0.0);
    b.cumulative_sq_.assign(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        b.cumulative_[i + 1] = b.cumulative_[i] + b.integral_hermite(i, 1.0);
        const auto sq = [&](double t) {
            const double v = b.eval(t, 1);
            return v * v;
        };
        const auto r = quad::integrate(sq, b.knot_t_[i], b.knot_t_[i + 1], {1e-12, 1e-300, 200});
        b.cumulative_sq_[i + 1] = b.cumulative_sq_[i] + r.value;
    }
    b.check_convexity(check);
    return b;
}

Boundary make_boundary(BoundaryKind kind, double a, std::vector<double> coefficients, ConvexityCheck check) {
    return Boundary::polynomial(kind, a, std::move(coefficients), check);
}

std::vector<double> Boundary::coefficients() const { return supplied_; }

std::vector<Boundary::Knot> Boundary::knots() const {
    std::vector<Knot> out;
    for (std::size_t i = 0; i < knot_t_.size(); ++i) out.emplace_back(knot_t_[i], knot_f_[i]);
    return out;
}

void Boundary::check_convexity(const ConvexityCheck& check) const {
    const double horizon_t = std::min(check.horizon, horizon());
    const int points = std::max(check.points, 2);
    for (int k = 0; k < points; ++k) {
        const double t = horizon_t * static_cast<double>(k) / static_cast<double>(points - 1);
        const double curvature = eval(t, 2);
        if (curvature < -1e-12) {
            throw NonConvexBoundary("f''(" + std::to_string(t) + ") = " + std::to_string(curvature) + " < 0");
        }
    }
}

double Boundary::horizon() const {
    return kind_ == BoundaryKind::tabulated ? knot_t_.back() : std::numeric_limits<double>::infinity();
}

std::size_t Boundary::segment(double t) const {
    const auto it = std::upper_bound(knot_t_.begin(), knot_t_.end(), t);
    const auto idx = static_cast<std::size_t>(std::distance(knot_t_.begin(), it));
    return std::min(idx == 0 ? 0 : idx - 1, knot_t_.size() - 2);
}

// \int_{t_i}^{t_i + theta h} of the Hermite cubic for f'.
double Boundary::integral_hermite(std::size_t i, double theta) const {
    const double h = knot_t_[i + 1] - knot_t_[i];
    const double th2 = theta * theta, th3 = th2 * theta, th4 = th3 * theta;
    const double i00 = 0.5 * th4 - th3 + theta;
    const double i10 = 0.25 * th4 - 2.0 * th3 / 3.0 + 0.5 * th2;
    const double i01 = -0.5 * th4 + th3;
    const double i11 = 0.25 * th4 - th3 / 3.0;
    return h * (i00 * slope_[i] + i10 * h * curvature_[i] + i01 * slope_[i + 1] + i11 * h * curvature_[i + 1]);
}

double Boundary::eval(double t, int order) const {
    if (!(t >= 0.0)) throw DomainError("boundary evaluated at negative time " + std::to_string(t));
    if (order < 0 || order > 2) throw InvalidArgument("derivative order must be 0, 1 or 2");
    if (kind_ != BoundaryKind::tabulated) {
        return horner(order == 0 ? power_ : order == 1 ? d1_ : d2_, t);
    }
    if (t > knot_t_.back()) {
        throw OutOfTabulatedRange("t = " + std::to_string(t) + " beyond last knot " +
                                  std::to_string(knot_t_.back()));
    }
    const std::size_t i = segment(t);
    const double h = knot_t_[i + 1] - knot_t_[i];
    const double theta = (t - knot_t_[i]) / h;
    const double th2 = theta * theta, th3 = th2 * theta;
    switch (order) {
        case 0:
            return knot_f_.front() + cumulative_[i] + integral_hermite(i, theta);
        case 1:
            return (2.0 * th3 - 3.0 * th2 + 1.0) * slope_[i] + (th3 - 2.0 * th2 + theta) * h * curvature_[i] +
                   (-2.0 * th3 + 3.0 * th2) * slope_[i + 1] + (th3 - th2) * h * curvature_[i + 1];
        default:
            return ((6.0 * th2 - 6.0 * theta) * slope_[i] + (-6.0 * th2 + 6.0 * theta) * slope_[i + 1]) / h +
                   (3.0 * th2 - 4.0 * theta + 1.0) * curvature_[i] + (3.0 * th2 - 2.0 * theta) * curvature_[i + 1];
    }
}

double Boundary::integral_df_sq(double t) const {
    if (!(t >= 0.0)) throw DomainError("negative upper limit " + std::to_string(t));
    if (kind_ != BoundaryKind::tabulated) return horner(sq_antideriv_, t);
    if (t > knot_t_.back()) throw OutOfTabulatedRange("t = " + std::to_string(t) + " beyond last knot");
    const std::size_t i = segment(t);
    if (t == knot_t_[i]) return cumulative_sq_[i];
    const auto sq = [this](double u) {
        const double v = eval(u, 1);
        return v * v;
    };
    return cumulative_sq_[i] + quad::integrate(sq, knot_t_[i], t, {1e-10, 1e-300, 200}).value;
}

double Boundary::integral_df(double t0, double t1) const {
    if (!(t0 >= 0.0) || t1 < t0) throw DomainError("integral_df needs 0 <= t0 <= t1");
    if (t0 == t1) return 0.0;
    return eval(t1, 0) - eval(t0, 0);
}

bool Boundary::is_affine() const {
    if (kind_ != BoundaryKind::tabulated) return power_.size() <= 2;
    return std::all_of(curvature_.begin(), curvature_.end(), [](double c) { return c == 0.0; }) &&
           std::all_of(slope_.begin(), slope_.end(), [this](double s) { return s == slope_.front(); });
}

Boundary Boundary::with_scaled_curvature(double lambda) const {
    if (!(lambda >= 0.0)) throw InvalidArgument("curvature scale must be nonnegative");
    const double a0 = a();
    const double b0 = eval(0.0, 1);
    if (kind_ != BoundaryKind::tabulated) {
        std::vector<double> coeffs = supplied_;
        for (std::size_t k = 1; k < coeffs.size(); ++k) coeffs[k] *= lambda;
        return Boundary::polynomial(kind_, a0, std::move(coeffs), {0.0, 2});
    }
    std::vector<Knot> scaled;
    for (std::size_t i = 0; i < knot_t_.size(); ++i) {
        const double line = a0 + b0 * knot_t_[i];
        scaled.emplace_back(knot_t_[i], line + lambda * (knot_f_[i] - line));
    }
    return Boundary::tabulated(a0, std::move(scaled), {0.0, 2});
}

std::string boundary_digest(const Boundary& b) {
    std::string text = to_string(b.kind());
    char buf[40];
    const auto append = [&](double v) {
        std::snprintf(buf, sizeof buf, ",%.17g", v);
        text += buf;
    };
    append(b.a());
    for (double c : b.coefficients()) append(c);
    for (const auto& [t, f] : b.knots()) {
        append(t);
        append(f);
    }
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        hash ^= ch;
        hash *= 0x100000001b3ULL;
    }
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

}  // namespace fpt
