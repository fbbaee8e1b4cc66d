#pragma once

#include <cmath>
#include <string>

#include "fpt/boundary.hpp"

namespace fpt::testing {

inline Boundary linear(double a = 1.0, double b = 1.0) { return make_boundary(BoundaryKind::linear, a, {b}); }
inline Boundary quadratic(double a = 1.0, double b = 0.0, double c = 0.5) {
    return make_boundary(BoundaryKind::quadratic, a, {b, c});
}
inline Boundary flat(double a = 1.0) { return linear(a, 0.0); }

inline double rel(double x, double y) { return std::abs(x - y) / std::abs(y); }

/// Path for a scratch file unique to the test binary run.
std::string scratch_path(const std::string& name);

}  // namespace fpt::testing
