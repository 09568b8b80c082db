#pragma once

// Constant-coefficient exterior algebra on the torus R^n / Z^n: compound
// matrices, the Hodge star of a flat metric, wedge products and the
// integration pairing. Forms are coefficient vectors over dx_I in the
// table's canonical ordering.

#include "core.hpp"
#include "linalg.hpp"
#include "multiindex.hpp"

#include <memory>
#include <type_traits>
#include <utility>
#include <vector>

namespace flatjac {

/// Entry (P, Q) is the determinant of the minor of `m` with rows P and
/// columns Q, both taken in the order the multi-indices list them. This is
/// the matrix of the induced map on the exterior power in those bases.
template <class Derived>
Matrix<typename Derived::Scalar> compound_matrix(const Eigen::MatrixBase<Derived>& m,
    const std::vector<MultiIndex>& row_basis, const std::vector<MultiIndex>& col_basis)
{
    using Scalar = typename Derived::Scalar;
    Matrix<Scalar> out(static_cast<Index>(row_basis.size()), static_cast<Index>(col_basis.size()));
    Matrix<Scalar> minor;
    for (std::size_t p = 0; p < row_basis.size(); ++p) {
        const auto& P = row_basis[p];
        for (std::size_t q = 0; q < col_basis.size(); ++q) {
            const auto& Q = col_basis[q];
            require(P.size() == Q.size(), ErrorKind::invalid_arguments, "minor must be square");
            const Index k = static_cast<Index>(P.size());
            minor.resize(k, k);
            for (Index i = 0; i < k; ++i)
                for (Index j = 0; j < k; ++j) minor(i, j) = m(P[i] - 1, Q[j] - 1);
            out(static_cast<Index>(p), static_cast<Index>(q)) = determinant(minor);
        }
    }
    return out;
}

template <class Derived>
Matrix<typename Derived::Scalar> compound_matrix(
    const Eigen::MatrixBase<Derived>& m, const IndexTable& table, Ordering ordering)
{
    require(m.rows() == table.n() && m.cols() == table.n(), ErrorKind::invalid_arguments,
        "matrix size does not match the index table");
    return compound_matrix(m, table.basis(ordering), table.basis(ordering));
}

template <class Derived>
Matrix<typename Derived::Scalar> compound_matrix(
    const Eigen::MatrixBase<Derived>& m, int degree, Ordering ordering)
{
    require(m.rows() == m.cols(), ErrorKind::invalid_arguments, "compound of non-square matrix");
    const int n = static_cast<int>(m.rows());
    require(degree >= 1 && degree <= n, ErrorKind::invalid_arguments, "need 1 <= m <= n");
    require(ordering == Ordering::lex || 2 * degree == n, ErrorKind::invalid_arguments,
        "symlex ordering needs n = 2m");
    return compound_matrix(m, IndexTable(n, degree), ordering);
}

/// W = [[A, C], [B, D]] split along the (script-I, tilde) halves.
template <class Scalar>
struct BlockDecomposition {
    Matrix<Scalar> A;
    Matrix<Scalar> B;
    Matrix<Scalar> C;
    Matrix<Scalar> D;
};

template <class Derived>
BlockDecomposition<typename Derived::Scalar> block_decompose(const Eigen::MatrixBase<Derived>& w)
{
    require(w.rows() == w.cols() && w.rows() % 2 == 0, ErrorKind::invalid_arguments,
        "block decomposition needs an even square matrix");
    const Index N = w.rows() / 2;
    return {w.topLeftCorner(N, N), w.bottomLeftCorner(N, N), w.topRightCorner(N, N),
        w.bottomRightCorner(N, N)};
}

/// Invertible frame L with det L > 0; the flat metric is g = L^t L and the
/// rows of L form a positively oriented orthonormal coframe.
class FrameMatrix {
public:
    explicit FrameMatrix(RealMatrix L)
        : L_(std::move(L))
    {
        require(L_.rows() == L_.cols() && L_.rows() > 0, ErrorKind::invalid_arguments,
            "frame must be a non-empty square matrix");
        require(L_.allFinite(), ErrorKind::invalid_arguments, "frame has non-finite entries");
        const double det = L_.determinant();
        const double scale = std::pow(L_.cwiseAbs().maxCoeff(), static_cast<double>(L_.rows()));
        require(std::abs(det) > 1e-13 * scale, ErrorKind::invalid_arguments, "frame is singular");
        require(det > 0, ErrorKind::invalid_arguments, "frame must have det L > 0");
    }

    int n() const noexcept { return static_cast<int>(L_.rows()); }
    const RealMatrix& matrix() const noexcept { return L_; }
    RealMatrix metric() const { return L_.transpose() * L_; }
    RealMatrix inverse_transpose() const { return L_.inverse().transpose(); }

private:
    RealMatrix L_;
};

/// Matrix of the Hodge star on middle-degree forms, in the canonical
/// (symmetric lexicographic) basis of `table`.
inline RealMatrix hodge_star_matrix(const FrameMatrix& frame, const IndexTable& table)
{
    require(table.has_symlex() && table.n() == frame.n(), ErrorKind::invalid_arguments,
        "hodge_star_matrix needs the middle-degree table of the frame's dimension");
    const Index N = table.half_dimension();
    const int m = table.m();
    const double sign = (m * m) % 2 ? -1.0 : 1.0;
    // Orthonormal coframe theta = rows of L: *theta_I = theta_I~ and
    // *theta_I~ = (-1)^{m^2} theta_I.
    RealMatrix in_coframe = RealMatrix::Zero(2 * N, 2 * N);
    in_coframe.bottomLeftCorner(N, N).setIdentity();
    in_coframe.topRightCorner(N, N) = sign * RealMatrix::Identity(N, N);
    const RealMatrix to_dx = compound_matrix(frame.matrix().transpose(), table, Ordering::symlex);
    const RealMatrix from_dx = compound_matrix(frame.inverse_transpose(), table, Ordering::symlex);
    return to_dx * in_coframe * from_dx;
}

inline RealMatrix hodge_star_matrix(const FrameMatrix& frame)
{
    return hodge_star_matrix(frame, build_middle_table(frame.n()));
}

/// Gram matrix <dx_P, dx_Q> of the metric g on degree-m forms.
inline RealMatrix form_gram_matrix(const RealMatrix& g, const IndexTable& table)
{
    if (table.m() == 0) return RealMatrix::Ones(1, 1);
    return compound_matrix(RealMatrix(g.inverse()), table.basis(), table.basis());
}

/// Element of the degree-m exterior power of (R^n)^dual, real or complex.
template <class Scalar = double>
class MForm {
public:
    MForm(std::shared_ptr<const IndexTable> table, Vector<Scalar> coeffs)
        : table_(std::move(table))
        , coeffs_(std::move(coeffs))
    {
        require(table_ != nullptr, ErrorKind::invalid_arguments, "form needs an index table");
        require(coeffs_.size() == table_->dimension(), ErrorKind::invalid_arguments,
            "coefficient count must equal C(n, m)");
    }

    static MForm zero(std::shared_ptr<const IndexTable> table)
    {
        const Index dim = table->dimension();
        return MForm(std::move(table), Vector<Scalar>::Zero(dim));
    }

    /// dx_I for an arbitrary ordering of I (sign folded in).
    static MForm monomial(std::shared_ptr<const IndexTable> table, const MultiIndex& I)
    {
        auto form = zero(table);
        const auto loc = table->locate(I);
        require(loc.has_value(), ErrorKind::invalid_arguments, "invalid multi-index " + I.to_string());
        form.coeffs_(loc->position) = Scalar(loc->sign);
        return form;
    }

    const IndexTable& table() const noexcept { return *table_; }
    const std::shared_ptr<const IndexTable>& table_ptr() const noexcept { return table_; }
    int n() const noexcept { return table_->n(); }
    int degree() const noexcept { return table_->m(); }
    const Vector<Scalar>& coeffs() const noexcept { return coeffs_; }
    Vector<Scalar>& coeffs() noexcept { return coeffs_; }

private:
    std::shared_ptr<const IndexTable> table_;
    Vector<Scalar> coeffs_;
};

inline std::shared_ptr<const IndexTable> make_table(int n, int m)
{
    return std::make_shared<const IndexTable>(n, m);
}

/// Coefficient of dx_1 ^ ... ^ dx_n in a ^ b, i.e. the integral over the
/// unit-covolume torus R^n / Z^n.
template <class Scalar>
Scalar wedge_integral(const MForm<Scalar>& a, const MForm<Scalar>& b)
{
    require(a.n() == b.n(), ErrorKind::invalid_arguments, "forms live on different tori");
    require(a.degree() + b.degree() == a.n(), ErrorKind::invalid_arguments,
        "wedge_integral needs deg a + deg b = n");
    const auto& basis_a = a.table().basis();
    const auto& basis_b = b.table().basis();
    Scalar total {0};
    for (std::size_t u = 0; u < basis_a.size(); ++u) {
        if (a.coeffs()(static_cast<Index>(u)) == Scalar {0}) continue;
        for (std::size_t v = 0; v < basis_b.size(); ++v) {
            const int s = concat_sign(basis_a[u], basis_b[v]);
            if (s != 0) total += Scalar(s) * a.coeffs()(static_cast<Index>(u)) * b.coeffs()(static_cast<Index>(v));
        }
    }
    return total;
}

/// Matrix of (a, b) -> integral of a ^ b on the canonical bases of two
/// complementary-degree tables.
inline IntMatrix wedge_pairing_matrix(const IndexTable& left, const IndexTable& right)
{
    require(left.n() == right.n() && left.m() + right.m() == left.n(),
        ErrorKind::invalid_arguments, "wedge pairing needs complementary degrees");
    const auto& bl = left.basis();
    const auto& br = right.basis();
    IntMatrix out(static_cast<Index>(bl.size()), static_cast<Index>(br.size()));
    for (std::size_t u = 0; u < bl.size(); ++u)
        for (std::size_t v = 0; v < br.size(); ++v)
            out(static_cast<Index>(u), static_cast<Index>(v)) = concat_sign(bl[u], br[v]);
    return out;
}

/// Q(u, v) = -integral of (basis_u ^ basis_v) on the symmetric lexicographic
/// basis; equal to [[0, -I], [I, 0]] when m is odd.
inline IntMatrix intersection_form(const IndexTable& table)
{
    require(table.has_symlex(), ErrorKind::invalid_arguments, "intersection form needs n = 2m");
    require(table.m() % 2 == 1, ErrorKind::unsupported,
        "intersection form is symmetric for even m, not symplectic");
    return -wedge_pairing_matrix(table, table);
}

enum class WedgeSide { left, right };

/// Matrix of b -> fixed ^ b (side left) or b -> b ^ fixed (side right),
/// from the canonical basis of `source` to that of `target`.
template <class Scalar>
Matrix<Scalar> wedge_matrix(const MForm<Scalar>& fixed, const IndexTable& source,
    const IndexTable& target, WedgeSide side = WedgeSide::left)
{
    require(fixed.n() == source.n() && source.n() == target.n(), ErrorKind::invalid_arguments,
        "wedge_matrix: tables on different tori");
    require(fixed.degree() + source.m() == target.m(), ErrorKind::invalid_arguments,
        "wedge_matrix: degree mismatch");
    const auto& fixed_basis = fixed.table().basis();
    const auto& source_basis = source.basis();
    Matrix<Scalar> out = Matrix<Scalar>::Zero(target.dimension(), source.dimension());
    std::vector<int> seq;
    for (std::size_t f = 0; f < fixed_basis.size(); ++f) {
        const Scalar coeff = fixed.coeffs()(static_cast<Index>(f));
        if (coeff == Scalar {0}) continue;
        for (std::size_t s = 0; s < source_basis.size(); ++s) {
            const auto& first = side == WedgeSide::left ? fixed_basis[f] : source_basis[s];
            const auto& second = side == WedgeSide::left ? source_basis[s] : fixed_basis[f];
            seq.assign(first.begin(), first.end());
            seq.insert(seq.end(), second.begin(), second.end());
            const auto loc = target.locate(seq);
            if (!loc) continue;
            out(loc->position, static_cast<Index>(s)) += Scalar(loc->sign) * coeff;
        }
    }
    return out;
}

/// Derivation extension of an endomorphism M of 1-forms to degree-q forms:
/// D(a_1 ^ ... ^ a_q) = sum_k a_1 ^ ... ^ M a_k ^ ... ^ a_q.
inline RealMatrix derivation_matrix(const RealMatrix& m, const IndexTable& table)
{
    require(m.rows() == table.n() && m.cols() == table.n(), ErrorKind::invalid_arguments,
        "derivation_matrix: size mismatch");
    const auto& basis = table.basis();
    RealMatrix out = RealMatrix::Zero(table.dimension(), table.dimension());
    std::vector<int> seq;
    for (std::size_t q = 0; q < basis.size(); ++q) {
        for (std::size_t slot = 0; slot < basis[q].size(); ++slot) {
            for (int j = 1; j <= table.n(); ++j) {
                const double entry = m(j - 1, basis[q][slot] - 1);
                if (entry == 0.0) continue;
                seq.assign(basis[q].begin(), basis[q].end());
                seq[slot] = j;
                const auto loc = table.locate(seq);
                if (loc) out(loc->position, static_cast<Index>(q)) += loc->sign * entry;
            }
        }
    }
    return out;
}

} // namespace flatjac
