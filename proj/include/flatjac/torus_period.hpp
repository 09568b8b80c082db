#pragma once

// Period matrices of flat tori R^n / Z^n (n = 2m, m odd) with respect to the
// symmetric lexicographic symplectic basis, plus the structural checks on
// their image, the scaling family, the inverse-diagonal witness and the
// degenerate (singular metric) construction.

#include "core.hpp"
#include "exterior.hpp"
#include "linalg.hpp"
#include "multiindex.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace flatjac {

enum class Triangle { lower, upper };

/// Triangular det-1 representative with strictly positive diagonal.
class TriangularRep {
public:
    TriangularRep(RealMatrix T, Triangle orientation, double tol = 1e-12)
        : T_(std::move(T))
        , orientation_(orientation)
    {
        require(T_.rows() == T_.cols() && T_.rows() > 0, ErrorKind::invalid_arguments,
            "triangular representative must be square");
        const bool triangular = orientation_ == Triangle::lower ? is_lower_triangular(T_, 0.0)
                                                                : is_upper_triangular(T_, 0.0);
        require(triangular, ErrorKind::invalid_arguments, "matrix is not triangular");
        require((T_.diagonal().array() > 0).all(), ErrorKind::invalid_arguments,
            "diagonal must be strictly positive");
        require(std::abs(T_.diagonal().prod() - 1.0) <= tol, ErrorKind::invalid_arguments,
            "determinant must be 1");
    }

    const RealMatrix& matrix() const noexcept { return T_; }
    Triangle orientation() const noexcept { return orientation_; }

private:
    RealMatrix T_;
    Triangle orientation_;
};

struct ConformalReduction {
    double scale;
    TriangularRep rep;
};

/// P = scale * T T^t with T lower triangular, positive diagonal, det T = 1.
inline ConformalReduction reduce_conformal(const RealMatrix& P, double tol = default_tolerance)
{
    require(P.rows() == P.cols() && P.rows() > 0, ErrorKind::invalid_arguments,
        "metric must be square");
    require(P.allFinite(), ErrorKind::invalid_arguments, "metric has non-finite entries");
    require(symmetry_defect(P) <= tol * std::max(1.0, P.norm()), ErrorKind::invalid_arguments,
        "metric is not symmetric");
    const RealMatrix sym = 0.5 * (P + P.transpose());
    Eigen::LLT<RealMatrix> llt(sym);
    require(llt.info() == Eigen::Success && min_symmetric_eigenvalue(sym) > 0,
        ErrorKind::invalid_arguments, "metric is not positive definite");
    const int n = static_cast<int>(P.rows());
    RealMatrix T = llt.matrixL();
    const double scale = std::pow(T.diagonal().prod(), 2.0 / n);
    T /= std::sqrt(scale);
    // Renormalise the diagonal so that det T = 1 holds to rounding.
    const double drift = std::pow(T.diagonal().prod(), 1.0 / n);
    T /= drift;
    return {scale * drift * drift, TriangularRep(std::move(T), Triangle::lower)};
}

/// The upper-triangular frame L with L^t L = g.
inline FrameMatrix frame_from_metric(const RealMatrix& g)
{
    const auto reduction = reduce_conformal(g);
    return FrameMatrix(std::sqrt(reduction.scale) * reduction.rep.matrix().transpose());
}

/// Z = X + iY in the Siegel upper half space (symmetric, Y positive definite).
class PeriodMatrix {
public:
    explicit PeriodMatrix(ComplexMatrix Z, double tol = default_tolerance)
        : Z_(std::move(Z))
    {
        require(Z_.rows() == Z_.cols() && Z_.rows() > 0, ErrorKind::invalid_arguments,
            "period matrix must be square");
        require(Z_.allFinite(), ErrorKind::numerical_breakdown, "period matrix is not finite");
        const double scale = std::max(1.0, Z_.norm());
        require(symmetry_defect(Z_) <= tol * scale, ErrorKind::numerical_breakdown,
            "period matrix is not symmetric");
        require(min_symmetric_eigenvalue(Z_.imag()) >= tol, ErrorKind::numerical_breakdown,
            "imaginary part is not positive definite");
    }

    const ComplexMatrix& matrix() const noexcept { return Z_; }
    RealMatrix real() const { return Z_.real(); }
    RealMatrix imag() const { return Z_.imag(); }
    Index size() const noexcept { return Z_.rows(); }

private:
    ComplexMatrix Z_;
};

inline void require_odd_middle_degree(int n)
{
    require(n >= 2 && n % 4 == 2, ErrorKind::invalid_arguments,
        "period computations need n = 2m with m odd");
}

/// Raw X + iY from the block system, without the Siegel assertion.
inline ComplexMatrix period_matrix_unchecked(const FrameMatrix& frame, const IndexTable& table)
{
    require_odd_middle_degree(frame.n());
    require(table.n() == frame.n() && table.has_symlex(), ErrorKind::invalid_arguments,
        "index table does not match the frame");
    const Index N = table.half_dimension();
    const RealMatrix w = compound_matrix(frame.inverse_transpose(), table, Ordering::symlex);
    const auto blocks = block_decompose(w);
    RealMatrix system(2 * N, 2 * N);
    system << blocks.A, -blocks.B, blocks.B, blocks.A;
    RealMatrix rhs(2 * N, N);
    rhs << blocks.C, blocks.D;
    Eigen::PartialPivLU<RealMatrix> lu(system);
    const double det = lu.determinant();
    require(std::isfinite(det) && std::abs(det) > 0.0, ErrorKind::degenerate_frame,
        "block system [[A, -B], [B, A]] is singular");
    const RealMatrix xy = lu.solve(rhs);
    require(xy.allFinite() && (system * xy - rhs).norm() <= 1e-8 * std::max(1.0, rhs.norm()),
        ErrorKind::degenerate_frame, "block system solve broke down");
    ComplexMatrix Z(N, N);
    Z.real() = xy.topRows(N);
    Z.imag() = xy.bottomRows(N);
    return Z;
}

inline PeriodMatrix period_matrix(const FrameMatrix& frame, const IndexTable& table)
{
    return PeriodMatrix(period_matrix_unchecked(frame, table));
}

inline PeriodMatrix period_matrix(const FrameMatrix& frame)
{
    return period_matrix(frame, build_middle_table(frame.n()));
}

/// Period matrix with respect to an arbitrary symplectic basis given by the
/// columns of `basis` ([r_1..r_N, s_1..s_N] in canonical coordinates):
/// s_j = sum_i X_ij r_i + Y_ij *r_i.
inline ComplexMatrix period_matrix_in_basis(const RealMatrix& star, const RealMatrix& basis)
{
    require(star.rows() == basis.rows() && basis.cols() % 2 == 0, ErrorKind::invalid_arguments,
        "period_matrix_in_basis: size mismatch");
    const Index N = basis.cols() / 2;
    RealMatrix system(basis.rows(), 2 * N);
    system << basis.leftCols(N), star * basis.leftCols(N);
    Eigen::ColPivHouseholderQR<RealMatrix> qr(system);
    require(qr.rank() == 2 * N, ErrorKind::numerical_breakdown,
        "basis vectors and their stars are dependent");
    const RealMatrix xy = qr.solve(basis.rightCols(N));
    ComplexMatrix Z(N, N);
    Z.real() = xy.topRows(N);
    Z.imag() = xy.bottomRows(N);
    return Z;
}

/// E(I, J) = det T_{I,J} over I, J in script-I, lexicographic order.
inline RealMatrix minor_matrix(const RealMatrix& T, const IndexTable& table)
{
    return compound_matrix(T, table.script_i(), table.script_i());
}

/// Largest violation of the quadratic Plucker relations by `coords`, the
/// coordinates indexed by the lexicographic d-subsets of {1..ambient}.
inline double plucker_residual(const RealVector& coords, int d, int ambient)
{
    require(d >= 0 && d <= ambient, ErrorKind::invalid_arguments, "bad Grassmannian");
    require(coords.size() == binomial(ambient, d), ErrorKind::invalid_arguments,
        "Plucker vector has the wrong length");
    if (d <= 1 || d >= ambient - 1) return 0.0;
    const IndexTable table(ambient, d);
    auto coordinate = [&](const std::vector<int>& seq) {
        const auto loc = table.locate(seq, Ordering::lex);
        return loc ? loc->sign * coords(loc->position) : 0.0;
    };
    double worst = 0.0;
    std::vector<int> seq;
    for (const auto& S : lex_multiindices(ambient, d - 1)) {
        for (const auto& T : lex_multiindices(ambient, d + 1)) {
            double total = 0.0;
            for (std::size_t l = 0; l < T.size(); ++l) {
                seq.assign(S.begin(), S.end());
                seq.push_back(T[l]);
                const double first = coordinate(seq);
                if (first == 0.0) continue;
                seq.clear();
                for (std::size_t j = 0; j < T.size(); ++j)
                    if (j != l) seq.push_back(T[j]);
                total += (l % 2 ? -1.0 : 1.0) * first * coordinate(seq);
            }
            worst = std::max(worst, std::abs(total));
        }
    }
    return worst;
}

struct ImageStructureReport {
    bool x_support_ok;
    bool y_factorization_ok;
    bool e_triangular_ok;
    double x_support_residual;
    double y_residual;
    double plucker_residual;
    double max_residual;
};

/// Checks the image description of the period map at the upper-triangular
/// det-1 matrix T (frame L = T^t): X vanishes on pairs of script-I indices
/// sharing more than one entry, Y = E E^t with E the script-I minors of T,
/// E is upper triangular with positive diagonal, and the rows and columns of
/// E satisfy the Plucker relations of Gr(m-1, n-1).
inline ImageStructureReport image_structure_check(const ComplexMatrix& Z, const RealMatrix& T,
    const IndexTable& table, double tol = default_tolerance)
{
    require(table.has_symlex() && T.rows() == table.n() && T.cols() == table.n(),
        ErrorKind::invalid_arguments, "T does not match the index table");
    const Index N = table.half_dimension();
    require(Z.rows() == N && Z.cols() == N, ErrorKind::invalid_arguments,
        "Z does not match the index table");
    const auto& script = table.script_i();

    double x_residual = 0.0;
    for (Index u = 0; u < N; ++u)
        for (Index v = 0; v < N; ++v)
            if (script[u].common_count(script[v]) > 1)
                x_residual = std::max(x_residual, std::abs(Z(u, v).real()));

    const RealMatrix E = minor_matrix(T, table);
    const double y_residual = (Z.imag() - E * E.transpose()).norm();
    const bool e_triangular = is_upper_triangular(E, tol) && (E.diagonal().array() > 0).all();

    // Row/column J of E, as a function of I \ {1}, are Plucker coordinates.
    const int d = table.m() - 1;
    const int ambient = table.n() - 1;
    double plucker = 0.0;
    for (Index j = 0; j < N; ++j) {
        plucker = std::max(plucker, plucker_residual(E.col(j), d, ambient));
        plucker = std::max(plucker, plucker_residual(E.row(j).transpose(), d, ambient));
    }

    return {x_residual <= tol, y_residual <= tol, e_triangular, x_residual, y_residual, plucker,
        std::max({x_residual, y_residual, plucker})};
}

struct BlockIdentityReport {
    bool b_block_zero;
    bool a_upper_d_lower;
    double atd_residual;
    double offdiag_formula_residual;
};

/// Closed form of (A^-1 C)(u, v): with I = tilde(script_I[u]) and
/// J = tilde(script_I[v]), zero if I, J share more than one index, else
/// (-1)^{m^2} eps Omega_{1,l} / Omega_{1,1}, l the shared index and eps the
/// sign of (I, J with l replaced by 1).
template <class Scalar>
double predicted_offdiag_entry(const Matrix<Scalar>& omega, const IndexTable& table, Index u, Index v)
{
    const auto& I = table.tildes()[static_cast<std::size_t>(u)];
    const auto& J = table.tildes()[static_cast<std::size_t>(v)];
    if (I.common_count(J) != 1) return 0.0;
    const int l = std::popcount(I.mask() & J.mask()) == 1
        ? std::countr_zero(I.mask() & J.mask()) + 1
        : 0;
    std::vector<int> seq(I.begin(), I.end());
    for (int j : J) seq.push_back(j == l ? 1 : j);
    const int m = table.m();
    const double sign = sequence_sign(seq) * ((m * m) % 2 ? -1.0 : 1.0);
    return sign * static_cast<double>(omega(0, l - 1)) / static_cast<double>(omega(0, 0));
}

/// Block identities of the compound of an upper-triangular matrix: B = 0,
/// A upper and D lower triangular, A^t D = det(Omega) I and the closed form
/// of A^-1 C. Exact for integer input except for the A^-1 C comparison.
template <class Derived>
BlockIdentityReport block_identities_check(const Eigen::MatrixBase<Derived>& omega_in, const IndexTable& table)
{
    using Scalar = typename Derived::Scalar;
    const Matrix<Scalar> omega = omega_in;
    require(table.has_symlex() && omega.rows() == table.n() && omega.cols() == table.n(),
        ErrorKind::invalid_arguments, "matrix does not match the index table");
    for (Index i = 0; i < omega.rows(); ++i)
        for (Index j = 0; j < i; ++j)
            require(omega(i, j) == Scalar {0}, ErrorKind::invalid_arguments,
                "matrix is not upper triangular");

    const auto blocks = block_decompose(compound_matrix(omega, table, Ordering::symlex));
    const Index N = table.half_dimension();
    const Scalar det = determinant(omega);

    BlockIdentityReport report {};
    report.b_block_zero = (blocks.B.array() == Scalar {0}).all();
    const RealMatrix A = blocks.A.template cast<double>();
    const RealMatrix D = blocks.D.template cast<double>();
    report.a_upper_d_lower = is_upper_triangular(A, 0.0) && is_lower_triangular(D, 0.0);

    const Matrix<Scalar> atd = blocks.A.transpose() * blocks.D
        - det * Matrix<Scalar>::Identity(N, N);
    report.atd_residual = static_cast<double>(atd.cwiseAbs().maxCoeff());

    if (det != Scalar {0} && omega(0, 0) != Scalar {0}) {
        const RealMatrix x = A.partialPivLu().solve(blocks.C.template cast<double>());
        double worst = 0.0;
        for (Index u = 0; u < N; ++u)
            for (Index v = 0; v < N; ++v)
                worst = std::max(worst, std::abs(x(u, v) - predicted_offdiag_entry(omega, table, u, v)));
        report.offdiag_formula_residual = worst;
    } else {
        report.offdiag_formula_residual = std::numeric_limits<double>::quiet_NaN();
    }
    return report;
}

/// Exponent e with Z(scaled frame) = c^e Z(frame); fixed at -(4k+2) = -n by
/// direct computation.
constexpr int scaling_exponent(int n) { return -n; }

/// Multiplies entry (1,1) by c^{-4k-1} and every other entry by c. Only
/// frames whose first column is a multiple of e_1 (the frame T^t of a metric
/// T T^t with T lower triangular) obey the scaling law, so others are rejected.
inline FrameMatrix scaling_family(const FrameMatrix& frame, double c)
{
    require(c > 0 && std::isfinite(c), ErrorKind::invalid_arguments, "scale must be positive");
    const int n = frame.n();
    require_odd_middle_degree(n);
    const RealMatrix& L = frame.matrix();
    require(L.col(0).tail(n - 1).cwiseAbs().maxCoeff() <= 1e-14 * L.cwiseAbs().maxCoeff(),
        ErrorKind::invalid_arguments, "scaling family needs a frame whose first column is L11 e1");
    const int k = (n / 2 - 1) / 2;
    RealMatrix scaled = c * L;
    scaled(0, 0) = L(0, 0) * std::pow(c, -4 * k - 1);
    return FrameMatrix(std::move(scaled));
}

/// Sorted values x^t Q x over nonzero integer vectors with |x_i| <= box,
/// truncated to the first `count`. Each vector and its negative both appear.
inline std::vector<double> lattice_value_spectrum(const RealMatrix& Q, int box, std::size_t count)
{
    require(box >= 1 && Q.rows() == Q.cols(), ErrorKind::invalid_arguments, "bad spectrum request");
    const Index n = Q.rows();
    require(std::pow(2.0 * box + 1.0, static_cast<double>(n)) <= 5e7, ErrorKind::invalid_arguments,
        "enumeration box too large");
    std::vector<double> values;
    Eigen::VectorXi x = Eigen::VectorXi::Constant(n, -box);
    while (true) {
        if (!x.isZero()) {
            const RealVector xd = x.cast<double>();
            values.push_back(xd.dot(Q * xd));
        }
        Index i = 0;
        while (i < n && x(i) == box) x(i++) = -box;
        if (i == n) break;
        ++x(i);
    }
    const std::size_t keep = std::min(count, values.size());
    std::partial_sort(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(keep), values.end());
    values.resize(keep);
    return values;
}

struct InversionWitnessReport {
    double relation_residual;
    std::vector<double> invariants_f2;
    std::vector<double> invariants_finv2;
    bool invariants_differ;
};

/// For diagonal det-1 F: Z(F) = -Z(F^-1)^-1 (modular equivalence) together
/// with short-vector spectra of F^2 and F^-2, which differ whenever the two
/// lattices are not SL(n, Z)-equivalent.
inline InversionWitnessReport inversion_witness(const RealMatrix& F, int box = 3, std::size_t count = 10,
    double tol = default_tolerance)
{
    require(F.rows() == F.cols() && F.rows() > 0, ErrorKind::invalid_arguments, "F must be square");
    require(F.isDiagonal(0.0), ErrorKind::invalid_arguments, "F must be diagonal");
    require((F.diagonal().array() > 0).all(), ErrorKind::invalid_arguments,
        "F needs a positive diagonal");
    require(std::abs(F.diagonal().prod() - 1.0) <= 1e-12, ErrorKind::invalid_arguments,
        "F must have determinant 1");
    const IndexTable table = build_middle_table(static_cast<int>(F.rows()));
    const RealMatrix Finv = F.diagonal().cwiseInverse().asDiagonal();
    const ComplexMatrix Z = period_matrix(FrameMatrix(F), table).matrix();
    const ComplexMatrix Zinv = period_matrix(FrameMatrix(Finv), table).matrix();
    InversionWitnessReport report;
    report.relation_residual = (Z + Zinv.inverse()).norm();
    report.invariants_f2 = lattice_value_spectrum(F * F, box, count);
    report.invariants_finv2 = lattice_value_spectrum(Finv * Finv, box, count);
    report.invariants_differ = false;
    for (std::size_t i = 0; i < std::min(report.invariants_f2.size(), report.invariants_finv2.size()); ++i) {
        const double a = report.invariants_f2[i];
        const double b = report.invariants_finv2[i];
        if (std::abs(a - b) > tol * std::max({1.0, std::abs(a), std::abs(b)})) report.invariants_differ = true;
    }
    return report;
}

/// Symmetric positive semidefinite metric of rank 0 < r < n.
class SingularFlatMetric {
public:
    explicit SingularFlatMetric(RealMatrix g0, double tol = default_tolerance)
        : g0_(std::move(g0))
    {
        require(g0_.rows() == g0_.cols() && g0_.rows() > 1, ErrorKind::invalid_arguments,
            "singular metric must be square");
        require(symmetry_defect(g0_) <= tol, ErrorKind::invalid_arguments,
            "singular metric is not symmetric");
        Eigen::SelfAdjointEigenSolver<RealMatrix> solver(0.5 * (g0_ + g0_.transpose()));
        const auto& ev = solver.eigenvalues();
        require(ev.minCoeff() >= -tol, ErrorKind::invalid_arguments,
            "singular metric is not semidefinite");
        const double cutoff = tol * std::max(1.0, ev.maxCoeff());
        rank_ = static_cast<int>((ev.array() > cutoff).count());
        require(rank_ > 0 && rank_ < g0_.rows(), ErrorKind::invalid_arguments,
            "singular metric must have rank strictly between 0 and n");
        kernel_ = solver.eigenvectors().leftCols(g0_.rows() - rank_);
    }

    const RealMatrix& matrix() const noexcept { return g0_; }
    int n() const noexcept { return static_cast<int>(g0_.rows()); }
    int rank() const noexcept { return rank_; }
    /// Orthonormal (Euclidean) basis of ker g0 as columns.
    const RealMatrix& kernel() const noexcept { return kernel_; }

private:
    RealMatrix g0_;
    int rank_ = 0;
    RealMatrix kernel_;
};

/// Orthonormalise the columns of `vectors` with respect to g (Gram-Schmidt
/// via Cholesky of the Gram matrix).
inline RealMatrix g_orthonormalize(const RealMatrix& vectors, const RealMatrix& g)
{
    const RealMatrix gram = vectors.transpose() * g * vectors;
    Eigen::LLT<RealMatrix> llt(gram);
    require(llt.info() == Eigen::Success, ErrorKind::numerical_breakdown,
        "vectors are dependent");
    const RealMatrix R = llt.matrixU();
    return vectors * R.inverse();
}

/// Positively oriented g-orthonormal basis whose first r columns span
/// (ker g0)^{perp_g} and last n - r columns span ker g0. Throws
/// not-an-extension unless g agrees with g0 on (ker g0)^{perp_g}.
inline RealMatrix adapted_basis(const SingularFlatMetric& g0, const RealMatrix& g, double tol = default_tolerance)
{
    const int n = g0.n();
    require(g.rows() == n && g.cols() == n, ErrorKind::invalid_arguments, "extension size mismatch");
    require(symmetry_defect(g) <= tol * std::max(1.0, g.norm()), ErrorKind::invalid_arguments,
        "extension is not symmetric");
    require(min_symmetric_eigenvalue(g) > tol, ErrorKind::invalid_arguments,
        "extension is not positive definite");
    const RealMatrix& kernel = g0.kernel();
    // (ker g0)^{perp_g} = null space of kernel^t g.
    const RealMatrix perp = null_space(kernel.transpose() * g, 1e-12);
    require(perp.cols() == g0.rank(), ErrorKind::numerical_breakdown,
        "orthogonal complement has the wrong dimension");
    const RealMatrix on_perp_g = perp.transpose() * g * perp;
    const RealMatrix on_perp_g0 = perp.transpose() * g0.matrix() * perp;
    require((on_perp_g - on_perp_g0).norm() <= tol * std::max(1.0, on_perp_g.norm()),
        ErrorKind::not_an_extension, "g differs from g0 on (ker g0)^perp");

    RealMatrix basis(n, n);
    basis.leftCols(g0.rank()) = g_orthonormalize(perp, g);
    basis.rightCols(n - g0.rank()) = g_orthonormalize(kernel, g);
    // Largest entry of each column positive, so coordinate-aligned data gives
    // the coordinate vectors themselves.
    for (Index j = 0; j < n; ++j) {
        Index pivot = 0;
        basis.col(j).cwiseAbs().maxCoeff(&pivot);
        if (basis(pivot, j) < 0) basis.col(j) *= -1.0;
    }
    if (basis.determinant() < 0) basis.col(n - 1) *= -1.0;
    return basis;
}

struct SingularPeriodData {
    RealMatrix psi_matrix;
    RealMatrix star_matrix;
    RealMatrix adapted_basis;
    int rank;
};

/// Coordinates in the coframe dual to the columns of `basis` of the
/// middle-degree forms, as a matrix acting on dx-coordinates.
inline RealMatrix coframe_coordinates(const RealMatrix& basis, const IndexTable& table)
{
    return compound_matrix(RealMatrix(basis.transpose()), table, Ordering::symlex);
}

/// Projection psi killing every coframe monomial that touches ker g0, in
/// dx-coordinates of the middle degree.
inline RealMatrix kernel_projection(const RealMatrix& basis, int rank, const IndexTable& table)
{
    const RealMatrix to_coframe = coframe_coordinates(basis, table);
    RealVector keep(table.dimension());
    const auto& b = table.basis();
    for (std::size_t i = 0; i < b.size(); ++i) {
        const bool inside = std::all_of(b[i].begin(), b[i].end(), [&](int e) { return e <= rank; });
        keep(static_cast<Index>(i)) = inside ? 1.0 : 0.0;
    }
    return to_coframe.inverse() * keep.asDiagonal() * to_coframe;
}

inline SingularPeriodData singular_period(const SingularFlatMetric& g0, const RealMatrix& extension,
    double tol = default_tolerance)
{
    require(g0.n() % 2 == 0, ErrorKind::invalid_arguments, "singular period needs even n");
    const IndexTable table = build_middle_table(g0.n());
    SingularPeriodData data;
    data.adapted_basis = adapted_basis(g0, extension, tol);
    data.rank = g0.rank();
    data.psi_matrix = kernel_projection(data.adapted_basis, data.rank, table);
    data.star_matrix = hodge_star_matrix(frame_from_metric(extension), table);
    return data;
}

/// Compares the degenerate data built from two extensions g, g' of g0 via
/// the comparison map e_I^dual -> (v'_I)^dual and returns the combined
/// intertwining residual for star and psi on the integral basis.
inline double singular_extension_independence(const SingularFlatMetric& g0, const RealMatrix& g,
    const RealMatrix& g_prime, double tol = default_tolerance)
{
    const IndexTable table = build_middle_table(g0.n());
    const int n = g0.n();
    const int r = g0.rank();
    const RealMatrix e = adapted_basis(g0, g, tol);
    const RealMatrix v = adapted_basis(g0, g_prime, tol);

    // v = e [[A, 0], [C, E]]; v' = v diag(A^-1, I) = e [[I, 0], [C A^-1, E]].
    const RealMatrix change = e.inverse() * v;
    RealMatrix correction = RealMatrix::Identity(n, n);
    correction.topLeftCorner(r, r) = change.topLeftCorner(r, r).inverse();
    RealMatrix v_prime = v * correction;
    if (v_prime.determinant() < 0) v_prime.col(n - 1) *= -1.0;

    // Degree-one comparison map in dx-coordinates: row i of e^-1 -> row i of v'^-1.
    const RealMatrix one_forms = v_prime.inverse().transpose() * e.transpose();
    const RealMatrix phi = compound_matrix(one_forms, table, Ordering::symlex);

    const RealMatrix star_g = hodge_star_matrix(frame_from_metric(g), table);
    const RealMatrix star_gp = hodge_star_matrix(frame_from_metric(g_prime), table);
    const RealMatrix psi_g = kernel_projection(e, r, table);
    const RealMatrix psi_gp = kernel_projection(v_prime, r, table);
    return (phi * star_g - star_gp * phi).norm() + (phi * psi_g - psi_gp * phi).norm();
}

} // namespace flatjac
