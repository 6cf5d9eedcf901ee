#ifndef SSW_PFAFFIAN_HPP
#define SSW_PFAFFIAN_HPP

#include <cmath>
#include <complex>

#include <Eigen/Core>

#include "ssw/errors.hpp"

namespace ssw {

/// Pfaffian of a skew-symmetric matrix by pivoted congruence reduction to 2x2 blocks.
///
/// Only the strict upper triangle is read; the lower triangle is assumed to be its
/// negative. Odd dimension gives zero.
template <typename Derived>
typename Derived::Scalar pfaffian(const Eigen::MatrixBase<Derived>& a) {
    using T = typename Derived::Scalar;
    using std::abs;
    const Eigen::Index n = a.rows();
    if (a.cols() != n) throw DimensionMismatch("pfaffian of a non-square matrix");
    if (n == 0) return T(1);
    if (n % 2 != 0) return T(0);

    Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        m(i, i) = T(0);
        for (Eigen::Index j = i + 1; j < n; ++j) {
            m(i, j) = a(i, j);
            m(j, i) = -a(i, j);
        }
    }

    T pf(1);
    for (Eigen::Index k = 0; k + 1 < n; k += 2) {
        Eigen::Index pivot = k + 1;
        for (Eigen::Index j = k + 2; j < n; ++j)
            if (abs(m(k, j)) > abs(m(k, pivot))) pivot = j;
        if (pivot != k + 1) {
            m.row(k + 1).swap(m.row(pivot));
            m.col(k + 1).swap(m.col(pivot));
            pf = -pf;
        }
        const T head = m(k, k + 1);
        if (head == T(0)) return T(0);
        pf *= head;
        for (Eigen::Index i = k + 2; i < n; ++i) {
            const T c = m(k, i) / head;
            m.col(i) -= c * m.col(k + 1);
            m.row(i) -= c * m.row(k + 1);
        }
        for (Eigen::Index i = k + 2; i < n; ++i) {
            const T d = m(k + 1, i) / head;
            m.col(i) += d * m.col(k);
            m.row(i) += d * m.row(k);
        }
    }
    return pf;
}

} // namespace ssw

#endif // SSW_PFAFFIAN_HPP
