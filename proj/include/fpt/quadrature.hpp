#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature on finite and
// semi-infinite intervals.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "fpt/error.hpp"

namespace fpt::quad {

struct Options {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_intervals = 2000;
};

struct Result {
    double value = 0.0;
    double error = 0.0;
    int intervals = 0;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the centre.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double lo, hi, value, error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

template <class F>
Segment gauss_kronrod(F& f, double lo, double hi) {
    const double centre = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = f(centre);
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kKronrodNodes[j];
        const double sum = f(centre - dx) + f(centre + dx);
        kronrod += kKronrodWeights[j] * sum;
        if (j % 2 == 1) gauss += kGaussWeights[j / 2] * sum;
    }
    kronrod *= half;
    gauss *= half;
    return {lo, hi, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace detail

/// Integrates f over [lo, hi]. Throws QuadratureFailure when the requested
/// tolerance is not reached within `max_intervals` subdivisions or the
/// integrand produces non-finite values.
template <class F>
Result integrate(F&& f, double lo, double hi, const Options& opts = {}) {
    if (lo == hi) return {};
    if (hi < lo) {
        Result r = integrate(f, hi, lo, opts);
        r.value = -r.value;
        return r;
    }
    std::priority_queue<detail::Segment> heap;
    heap.push(detail::gauss_kronrod(f, lo, hi));
    double total = heap.top().value;
    double error = heap.top().error;
    int intervals = 1;
    while (error > std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
        if (!std::isfinite(total) || !std::isfinite(error)) {
            throw QuadratureFailure("non-finite integrand on [" + std::to_string(lo) + ", " +
                                    std::to_string(hi) + "]");
        }
        if (intervals >= opts.max_intervals) {
            throw QuadratureFailure("no convergence after " + std::to_string(intervals) +
                                    " subintervals (error estimate " + std::to_string(error) + ")");
        }
        const detail::Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi)) {
            throw QuadratureFailure("subinterval underflow near " + std::to_string(mid));
        }
        const detail::Segment left = detail::gauss_kronrod(f, worst.lo, mid);
        const detail::Segment right = detail::gauss_kronrod(f, mid, worst.hi);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++intervals;
    }
    // Re-sum to shed the cancellation drift of the incremental updates.
    double value = 0.0;
    double err = 0.0;
    for (; !heap.empty(); heap.pop()) {
        value += heap.top().value;
        err += heap.top().error;
    }
    if (!std::isfinite(value)) throw QuadratureFailure("non-finite result");
    return {value, err, intervals};
}

/// Integrates f over [lo, inf) through the map x = lo + u / (1 - u).
template <class F>
Result integrate_to_infinity(F&& f, double lo, const Options& opts = {}) {
    auto mapped = [&f, lo](double u) {
        if (u >= 1.0) return 0.0;
        const double one_minus = 1.0 - u;
        const double x = lo + u / one_minus;
        const double fx = f(x);
        return fx == 0.0 ? 0.0 : fx / (one_minus * one_minus);
    };
    return integrate(mapped, 0.0, 1.0, opts);
}

/// Integrates over [lo, hi] split at the interior break points.
template <class F>
Result integrate_piecewise(F&& f, const std::vector<double>& points, const Options& opts = {}) {
    Result total;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        const Result part = integrate(f, points[i], points[i + 1], opts);
        total.value += part.value;
        total.error += part.error;
        total.intervals += part.intervals;
    }
    return total;
}

}  // namespace fpt::quad
