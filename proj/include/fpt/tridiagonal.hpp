#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "fpt/error.hpp"

namespace fpt {

/// Tridiagonal system stored by diagonals; row i reads
/// lower(i) x(i-1) + diag(i) x(i) + upper(i) x(i+1) = rhs(i).
template <class Scalar>
struct Tridiagonal {
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    Vector lower, diag, upper;

    explicit Tridiagonal(Eigen::Index n) : lower(Vector::Zero(n)), diag(Vector::Zero(n)), upper(Vector::Zero(n)) {}

    Eigen::Index size() const { return diag.size(); }

    /// y = A x
    Vector apply(const Vector& x) const {
        const Eigen::Index n = size();
        Vector y = diag.cwiseProduct(x);
        if (n > 1) {
            y.head(n - 1) += upper.head(n - 1).cwiseProduct(x.tail(n - 1));
            y.tail(n - 1) += lower.tail(n - 1).cwiseProduct(x.head(n - 1));
        }
        return y;
    }

    /// Thomas algorithm; throws NonConvergence on a vanishing pivot.
    Vector solve(const Vector& rhs) const {
        const Eigen::Index n = size();
        Vector c(n), d(n);
        Scalar pivot = diag(0);
        if (pivot == Scalar(0)) throw NonConvergence("zero pivot in tridiagonal solve");
        c(0) = upper(0) / pivot;
        d(0) = rhs(0) / pivot;
        for (Eigen::Index i = 1; i < n; ++i) {
            pivot = diag(i) - lower(i) * c(i - 1);
            if (pivot == Scalar(0)) throw NonConvergence("zero pivot in tridiagonal solve");
            c(i) = upper(i) / pivot;
            d(i) = (rhs(i) - lower(i) * d(i - 1)) / pivot;
        }
        for (Eigen::Index i = n - 2; i >= 0; --i) d(i) -= c(i) * d(i + 1);
        if (!d.allFinite()) throw NonConvergence("non-finite tridiagonal solution");
        return d;
    }
};

}  // namespace fpt
