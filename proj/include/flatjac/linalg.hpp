#pragma once

#include "core.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <type_traits>

namespace flatjac {

/// Fraction-free (Bareiss) elimination; exact for integer input as long as
/// intermediate minors fit in 128 bits.
template <class Derived>
typename Derived::Scalar integer_determinant(const Eigen::MatrixBase<Derived>& input)
{
    using Scalar = typename Derived::Scalar;
    static_assert(std::is_integral_v<Scalar>);
    const Index n = input.rows();
    require(n == input.cols(), ErrorKind::invalid_arguments, "determinant of non-square matrix");
    if (n == 0) return Scalar {1};
    Eigen::Matrix<__int128, Eigen::Dynamic, Eigen::Dynamic> a = input.template cast<__int128>();
    int sign = 1;
    __int128 previous = 1;
    for (Index k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            Index swap_row = k + 1;
            while (swap_row < n && a(swap_row, k) == 0) ++swap_row;
            if (swap_row == n) return Scalar {0};
            a.row(k).swap(a.row(swap_row));
            sign = -sign;
        }
        for (Index i = k + 1; i < n; ++i) {
            for (Index j = k + 1; j < n; ++j) {
                a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / previous;
            }
        }
        previous = a(k, k);
    }
    return static_cast<Scalar>(sign * a(n - 1, n - 1));
}

template <class Derived>
typename Derived::Scalar determinant(const Eigen::MatrixBase<Derived>& m)
{
    using Scalar = typename Derived::Scalar;
    if constexpr (std::is_integral_v<Scalar>) {
        return integer_determinant(m);
    } else {
        const Index n = m.rows();
        require(n == m.cols(), ErrorKind::invalid_arguments, "determinant of non-square matrix");
        if (n == 0) return Scalar {1};
        if (n == 1) return m(0, 0);
        if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
        return Matrix<Scalar>(m).partialPivLu().determinant();
    }
}

inline double max_abs(const RealMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }
inline double max_abs(const ComplexMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

inline bool is_upper_triangular(const RealMatrix& m, double tol)
{
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < std::min(i, m.cols()); ++j)
            if (std::abs(m(i, j)) > tol) return false;
    return true;
}

inline bool is_lower_triangular(const RealMatrix& m, double tol)
{
    return is_upper_triangular(m.transpose(), tol);
}

inline double symmetry_defect(const RealMatrix& m) { return (m - m.transpose()).norm(); }
inline double symmetry_defect(const ComplexMatrix& m) { return (m - m.transpose()).norm(); }

/// Smallest eigenvalue of the symmetric part of a real square matrix.
inline double min_symmetric_eigenvalue(const RealMatrix& m)
{
    if (m.size() == 0) return 0.0;
    const RealMatrix sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(sym, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

/// Orthonormal basis (columns) of the null space, via SVD with a threshold
/// relative to the largest singular value.
inline RealMatrix null_space(const RealMatrix& m, double relative_tol = 1e-10)
{
    if (m.rows() == 0) return RealMatrix::Identity(m.cols(), m.cols());
    Eigen::JacobiSVD<RealMatrix> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double threshold = relative_tol * std::max(1.0, sv.size() ? sv(0) : 0.0);
    Index rank = 0;
    for (Index i = 0; i < sv.size(); ++i)
        if (sv(i) > threshold) ++rank;
    return svd.matrixV().rightCols(m.cols() - rank);
}

inline Index numerical_rank(const RealMatrix& m, double relative_tol = 1e-10)
{
    return m.cols() - null_space(m, relative_tol).cols();
}

/// exp of a nilpotent matrix by its finite power series.
inline RealMatrix nilpotent_exp(const RealMatrix& nilpotent)
{
    const Index n = nilpotent.rows();
    RealMatrix result = RealMatrix::Identity(n, n);
    RealMatrix term = RealMatrix::Identity(n, n);
    for (Index k = 1; k < n; ++k) {
        term = term * nilpotent / static_cast<double>(k);
        result += term;
    }
    return result;
}

} // namespace flatjac
