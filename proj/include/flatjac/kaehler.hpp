#pragma once

// Flat Kaehler tori (R^n / Z^n, J, g): type projectors, the Weil operator,
// Lefschetz operators and primitive decomposition, the parity split of the
// middle degree, and the three complex structures on middle forms.

#include "core.hpp"
#include "exterior.hpp"
#include "linalg.hpp"
#include "multiindex.hpp"
#include "torus_period.hpp"

#include <Eigen/QR>

#include <cmath>
#include <map>
#include <memory>
#include <utility>
#include <vector>

namespace flatjac {

/// Pfaffian of an antisymmetric matrix by congruence elimination.
inline double pfaffian(RealMatrix a)
{
    require(a.rows() == a.cols(), ErrorKind::invalid_arguments, "pfaffian of non-square matrix");
    const Index n = a.rows();
    if (n % 2) return 0.0;
    double pf = 1.0;
    for (Index k = 0; k < n; k += 2) {
        Index pivot = k + 1;
        for (Index j = k + 2; j < n; ++j)
            if (std::abs(a(k, j)) > std::abs(a(k, pivot))) pivot = j;
        if (pivot != k + 1) {
            a.row(pivot).swap(a.row(k + 1));
            a.col(pivot).swap(a.col(k + 1));
            pf = -pf;
        }
        const double head = a(k, k + 1);
        if (head == 0.0) return 0.0;
        pf *= head;
        for (Index i = k + 2; i < n; ++i) {
            const double tau = a(k, i) / head;
            if (tau == 0.0) continue;
            a.row(i) -= tau * a.row(k + 1);
            a.col(i) -= tau * a.col(k + 1);
        }
    }
    return pf;
}

/// J acts on tangent vectors, g is the metric and Omega = J^t g is the
/// Kaehler form, Omega = sum_{i<j} Omega_ij dx_i ^ dx_j. Orientation is
/// taken from Omega^m, so Pf(Omega) > 0 is required.
class FlatKaehlerTorus {
public:
    FlatKaehlerTorus(RealMatrix J, RealMatrix g, double tol = 1e-12)
        : J_(std::move(J))
        , g_(std::move(g))
    {
        require(J_.rows() == J_.cols() && J_.rows() >= 2 && J_.rows() % 2 == 0,
            ErrorKind::invalid_arguments, "J must be an even square matrix");
        require(g_.rows() == J_.rows() && g_.cols() == J_.cols(), ErrorKind::invalid_arguments,
            "g and J differ in size");
        const Index n = J_.rows();
        const double j_scale = std::max(1.0, J_.norm() * J_.norm());
        require((J_ * J_ + RealMatrix::Identity(n, n)).norm() <= tol * j_scale,
            ErrorKind::invalid_arguments, "J^2 != -I");
        require(symmetry_defect(g_) <= tol * std::max(1.0, g_.norm()), ErrorKind::invalid_arguments,
            "g is not symmetric");
        require(min_symmetric_eigenvalue(g_) > 0, ErrorKind::invalid_arguments,
            "g is not positive definite");
        require((J_.transpose() * g_ * J_ - g_).norm() <= 1e3 * tol * j_scale * std::max(1.0, g_.norm()),
            ErrorKind::invalid_arguments, "g is not J-invariant");
        omega_ = J_.transpose() * g_;
        omega_ = 0.5 * (omega_ - omega_.transpose()).eval();
        require(pfaffian(omega_) > 0, ErrorKind::invalid_arguments,
            "Kaehler form must be positive on the standard orientation (Pf(Omega) > 0)");
    }

    /// J e_{2i-1} = e_{2i} with the Euclidean metric.
    static FlatKaehlerTorus standard(int m)
    {
        require(m >= 1, ErrorKind::invalid_arguments, "need m >= 1");
        RealMatrix J = RealMatrix::Zero(2 * m, 2 * m);
        for (int i = 0; i < m; ++i) {
            J(2 * i + 1, 2 * i) = 1.0;
            J(2 * i, 2 * i + 1) = -1.0;
        }
        return FlatKaehlerTorus(J, RealMatrix::Identity(2 * m, 2 * m));
    }

    int n() const noexcept { return static_cast<int>(J_.rows()); }
    int m() const noexcept { return n() / 2; }
    const RealMatrix& complex_structure() const noexcept { return J_; }
    const RealMatrix& metric() const noexcept { return g_; }
    const RealMatrix& kaehler_matrix() const noexcept { return omega_; }

private:
    RealMatrix J_;
    RealMatrix g_;
    RealMatrix omega_;
};

using Bidegree = std::pair<int, int>;

struct HodgeDecomposition {
    int degree;
    std::map<Bidegree, ComplexMatrix> projectors;

    const ComplexMatrix& projector(int a, int b) const
    {
        const auto it = projectors.find({a, b});
        require(it != projectors.end(), ErrorKind::invalid_arguments, "no such bidegree");
        return it->second;
    }
};

/// One term L^r eta_r of a primitive decomposition.
struct LefschetzComponent {
    int r;
    int degree;
    RealVector coeffs;
};

struct LefschetzSplit {
    RealMatrix k_basis;
    RealMatrix k_prime_basis;
    RealMatrix k_projector;
    RealMatrix k_prime_projector;
    int k_parity;
};

/// Operators of a flat Kaehler torus on all degrees, built once. Degree-q
/// forms use the canonical basis of IndexTable(n, q).
class KaehlerCalculus {
public:
    explicit KaehlerCalculus(FlatKaehlerTorus torus)
        : torus_(std::move(torus))
    {
        const int n = torus_.n();
        for (int q = 0; q <= n; ++q) tables_.push_back(make_table(n, q));
        const RealMatrix g_inverse = torus_.metric().inverse();
        for (int q = 0; q <= n; ++q) {
            const auto& t = *tables_[static_cast<std::size_t>(q)];
            grams_.push_back(q == 0 ? RealMatrix::Ones(1, 1) : compound_matrix(g_inverse, t.basis(), t.basis()));
        }
        kaehler_form_ = std::make_unique<MForm<double>>(MForm<double>::zero(tables_[2]));
        const auto& omega = torus_.kaehler_matrix();
        for (int i = 1; i <= n; ++i) {
            for (int j = i + 1; j <= n; ++j) {
                const auto loc = tables_[2]->locate(MultiIndex {i, j});
                kaehler_form_->coeffs()(loc->position) += loc->sign * omega(i - 1, j - 1);
            }
        }
        for (int q = 0; q + 2 <= n; ++q)
            lef_.push_back(wedge_matrix(*kaehler_form_, table(q), table(q + 2)));
    }

    const FlatKaehlerTorus& torus() const noexcept { return torus_; }
    int n() const noexcept { return torus_.n(); }
    int m() const noexcept { return torus_.m(); }
    const IndexTable& table(int q) const
    {
        check_degree(q);
        return *tables_[static_cast<std::size_t>(q)];
    }
    const MForm<double>& kaehler_form() const noexcept { return *kaehler_form_; }

    /// Inner product of degree-q forms in the canonical basis.
    const RealMatrix& gram(int q) const
    {
        check_degree(q);
        return grams_[static_cast<std::size_t>(q)];
    }

    /// L: degree q -> q + 2 (zero map into degree > n).
    RealMatrix lef(int q) const
    {
        check_degree(q);
        if (q + 2 > n()) return RealMatrix::Zero(0, table(q).dimension());
        return lef_[static_cast<std::size_t>(q)];
    }

    /// Metric adjoint of L: degree q -> q - 2.
    RealMatrix lef_adjoint(int q) const
    {
        check_degree(q);
        if (q < 2) return RealMatrix::Zero(0, table(q).dimension());
        return gram(q - 2).ldlt().solve(lef(q - 2).transpose() * gram(q));
    }

    /// L^r from degree q.
    RealMatrix lef_power(int q, int r) const
    {
        RealMatrix out = RealMatrix::Identity(table(q).dimension(), table(q).dimension());
        for (int s = 0; s < r; ++s) out = lef(q + 2 * s) * out;
        return out;
    }

    /// Induced action of J on degree-q forms: the pullback by J, i.e. the
    /// compound of J^t. Equals i^{a-b} on forms of type (a, b).
    RealMatrix weil_operator(int q) const
    {
        check_degree(q);
        if (q == 0) return RealMatrix::Ones(1, 1);
        const RealMatrix jt = torus_.complex_structure().transpose();
        return compound_matrix(jt, table(q).basis(), table(q).basis());
    }

    /// The derivation extension of J^t, with eigenvalue i(a - b) on (a, b).
    RealMatrix type_derivation(int q) const
    {
        check_degree(q);
        if (q == 0) return RealMatrix::Zero(1, 1);
        return derivation_matrix(torus_.complex_structure().transpose(), table(q));
    }

    std::vector<Bidegree> bidegrees(int q) const
    {
        check_degree(q);
        std::vector<Bidegree> out;
        for (int a = std::max(0, q - m()); a <= std::min(q, m()); ++a) out.emplace_back(a, q - a);
        return out;
    }

    /// Spectral projectors of the type derivation by Lagrange interpolation.
    HodgeDecomposition pq_projectors(int q) const
    {
        const auto types = bidegrees(q);
        const ComplexMatrix D = type_derivation(q).cast<Complex>();
        const Index dim = D.rows();
        HodgeDecomposition out {q, {}};
        for (const auto& [a, b] : types) {
            ComplexMatrix P = ComplexMatrix::Identity(dim, dim);
            const Complex own(0.0, a - b);
            for (const auto& [c, d] : types) {
                if (c == a) continue;
                const Complex other(0.0, c - d);
                P = (P * (D - other * ComplexMatrix::Identity(dim, dim)) / (own - other)).eval();
            }
            out.projectors.emplace(Bidegree {a, b}, std::move(P));
        }
        return out;
    }

    ComplexMatrix weil_from_projectors(int q) const
    {
        const auto decomposition = pq_projectors(q);
        const Index dim = table(q).dimension();
        ComplexMatrix C = ComplexMatrix::Zero(dim, dim);
        for (const auto& [type, P] : decomposition.projectors) C += std::pow(Complex(0, 1), type.first - type.second) * P;
        return C;
    }

    /// Columns span the primitive forms of degree p.
    RealMatrix primitive_basis(int p) const
    {
        check_degree(p);
        if (p < 2) return RealMatrix::Identity(table(p).dimension(), table(p).dimension());
        return null_space(lef_adjoint(p), 1e-10);
    }

    /// Lowest Lefschetz level that occurs in degree q.
    int min_level(int q) const { return std::max(0, q - m()); }
    int max_level(int q) const { return q / 2; }

    /// Columns [L^r P_{q-2r}] over the admissible r, with column ranges.
    std::pair<RealMatrix, std::vector<std::pair<int, std::pair<Index, Index>>>> lefschetz_frame(int q) const
    {
        check_degree(q);
        std::vector<RealMatrix> blocks;
        std::vector<std::pair<int, std::pair<Index, Index>>> ranges;
        Index cols = 0;
        for (int r = min_level(q); r <= max_level(q); ++r) {
            const int p = q - 2 * r;
            blocks.push_back(lef_power(p, r) * primitive_basis(p));
            ranges.push_back({r, {cols, blocks.back().cols()}});
            cols += blocks.back().cols();
        }
        RealMatrix frame(table(q).dimension(), cols);
        Index offset = 0;
        for (const auto& block : blocks) {
            frame.middleCols(offset, block.cols()) = block;
            offset += block.cols();
        }
        require(cols == table(q).dimension(), ErrorKind::numerical_breakdown,
            "Lefschetz components do not fill the degree");
        return {frame, ranges};
    }

    std::vector<LefschetzComponent> primitive_decomposition(const RealVector& eta, int q) const
    {
        require(eta.size() == table(q).dimension(), ErrorKind::invalid_arguments,
            "form has the wrong number of coefficients");
        const auto [frame, ranges] = lefschetz_frame(q);
        Eigen::ColPivHouseholderQR<RealMatrix> qr(frame);
        require(qr.rank() == frame.cols(), ErrorKind::numerical_breakdown,
            "Lefschetz frame is singular");
        const RealVector coords = qr.solve(eta);
        std::vector<LefschetzComponent> out;
        for (const auto& [r, range] : ranges) {
            const int p = q - 2 * r;
            const RealMatrix basis = primitive_basis(p);
            out.push_back({r, p, basis * coords.segment(range.first, range.second)});
        }
        return out;
    }

    std::vector<LefschetzComponent> primitive_decomposition(const MForm<double>& eta) const
    {
        require(eta.n() == n(), ErrorKind::invalid_arguments, "form lives on another torus");
        return primitive_decomposition(eta.coeffs(), eta.degree());
    }

    /// sum_r L^r eta_r.
    RealVector recompose(const std::vector<LefschetzComponent>& parts, int q) const
    {
        RealVector out = RealVector::Zero(table(q).dimension());
        for (const auto& part : parts) out += lef_power(part.degree, part.r) * part.coeffs;
        return out;
    }

    /// The middle degree split by the parity of the Lefschetz level:
    /// K has r = -m(m+1)/2 mod 2, K' the other parity.
    LefschetzSplit lefschetz_parity_split() const
    {
        const int q = m();
        const int parity = (((-m() * (m() + 1) / 2) % 2) + 2) % 2;
        const auto [frame, ranges] = lefschetz_frame(q);
        Index k_cols = 0;
        for (const auto& [r, range] : ranges)
            if (r % 2 == parity) k_cols += range.second;
        const Index dim = frame.rows();
        RealMatrix k(dim, k_cols);
        RealMatrix kp(dim, dim - k_cols);
        Index ko = 0;
        Index kpo = 0;
        for (const auto& [r, range] : ranges) {
            if (r % 2 == parity) {
                k.middleCols(ko, range.second) = frame.middleCols(range.first, range.second);
                ko += range.second;
            } else {
                kp.middleCols(kpo, range.second) = frame.middleCols(range.first, range.second);
                kpo += range.second;
            }
        }
        RealMatrix ordered(dim, dim);
        ordered << k, kp;
        RealVector selector = RealVector::Zero(dim);
        selector.head(k_cols).setOnes();
        const RealMatrix inverse = ordered.inverse();
        LefschetzSplit split;
        split.k_basis = std::move(k);
        split.k_prime_basis = std::move(kp);
        split.k_projector = ordered * selector.asDiagonal() * inverse;
        split.k_prime_projector = RealMatrix::Identity(dim, dim) - split.k_projector;
        split.k_parity = parity;
        return split;
    }

    /// Hodge star of the Kaehler metric on middle-degree forms.
    RealMatrix star() const { return hodge_star_matrix(frame_from_metric(torus_.metric()), table(m())); }

private:
    void check_degree(int q) const
    {
        require(q >= 0 && q <= n(), ErrorKind::invalid_arguments, "degree out of range");
    }

    FlatKaehlerTorus torus_;
    std::vector<std::shared_ptr<const IndexTable>> tables_;
    std::vector<RealMatrix> grams_;
    std::vector<RealMatrix> lef_;
    std::unique_ptr<MForm<double>> kaehler_form_;
};

inline HodgeDecomposition pq_projectors(const FlatKaehlerTorus& t, int q)
{
    return KaehlerCalculus(t).pq_projectors(q);
}

inline RealMatrix weil_operator(const FlatKaehlerTorus& t, int q)
{
    return KaehlerCalculus(t).weil_operator(q);
}

struct LefschetzOperators {
    RealMatrix lef;
    RealMatrix lef_adjoint;
};

inline LefschetzOperators lefschetz_ops(const FlatKaehlerTorus& t, int q)
{
    const KaehlerCalculus calculus(t);
    return {calculus.lef(q), calculus.lef_adjoint(q)};
}

inline std::vector<LefschetzComponent> primitive_decomposition(const FlatKaehlerTorus& t, const MForm<double>& eta)
{
    return KaehlerCalculus(t).primitive_decomposition(eta);
}

inline LefschetzSplit lefschetz_parity_split(const FlatKaehlerTorus& t)
{
    return KaehlerCalculus(t).lefschetz_parity_split();
}

struct StarWeilReport {
    double star_residual;
    double c_residual;
};

/// *eta against sum_r (-1)^{(m^2+m)/2 + r} L^r C eta_r, and C eta against
/// sum_r L^r C eta_r, for a middle-degree form eta.
inline StarWeilReport star_weil_identity_check(const KaehlerCalculus& calculus, const RealVector& eta)
{
    const int m = calculus.m();
    const auto parts = calculus.primitive_decomposition(eta, m);
    RealVector star_side = RealVector::Zero(eta.size());
    RealVector c_side = RealVector::Zero(eta.size());
    const int base = (m * m + m) / 2;
    for (const auto& part : parts) {
        const RealVector term = calculus.lef_power(part.degree, part.r) * (calculus.weil_operator(part.degree) * part.coeffs);
        c_side += term;
        star_side += ((base + part.r) % 2 ? -1.0 : 1.0) * term;
    }
    return {(calculus.star() * eta - star_side).norm(), (calculus.weil_operator(m) * eta - c_side).norm()};
}

inline StarWeilReport star_weil_identity_check(const FlatKaehlerTorus& t, const MForm<double>& eta)
{
    require(eta.degree() == t.m() && eta.n() == t.n(), ErrorKind::invalid_arguments,
        "identity check needs a middle-degree form");
    return star_weil_identity_check(KaehlerCalculus(t), eta.coeffs());
}

struct JacobianStructures {
    RealMatrix weil;
    RealMatrix griffiths;
    RealMatrix split_weil;
    /// Real dimensions of the spans where the Griffiths structure is +C / -C.
    Index griffiths_plus_dimension;
    Index griffiths_minus_dimension;
};

inline bool is_weil_j_type(const Bidegree& type)
{
    return (((type.first - type.second) % 4) + 4) % 4 == 1;
}

/// Weil: C. Split Weil: C on K, -C on K', which is the Hodge star.
/// Griffiths: C on the real span of J_m cap conj(F^{k+1}), -C on the real
/// span of J_m cap F^{k+1}, where J_m is the sum of the (a, b) with
/// a - b = 1 mod 4.
inline JacobianStructures three_jacobian_structures(const KaehlerCalculus& calculus)
{
    const int m = calculus.m();
    require(m % 2 == 1, ErrorKind::unsupported, "the Jacobian structures need m odd");
    const int k = (m - 1) / 2;
    const RealMatrix C = calculus.weil_operator(m);
    const auto decomposition = calculus.pq_projectors(m);
    const Index dim = C.rows();

    ComplexMatrix plus = ComplexMatrix::Zero(dim, dim);
    ComplexMatrix minus = ComplexMatrix::Zero(dim, dim);
    for (const auto& [type, P] : decomposition.projectors) {
        const Bidegree conj_type {type.second, type.first};
        const bool j_type = is_weil_j_type(type);
        const Bidegree base = j_type ? type : conj_type;
        if (!j_type && !is_weil_j_type(conj_type)) continue;
        // base lies in J_m; it belongs to conj(F^{k+1}) when b >= k + 1.
        if (base.second >= k + 1) plus += P;
        else if (base.first >= k + 1) minus += P;
    }
    JacobianStructures out;
    out.weil = C;
    out.griffiths = C * (plus - minus).real();
    const auto split = calculus.lefschetz_parity_split();
    out.split_weil = C * (split.k_projector - split.k_prime_projector);
    out.griffiths_plus_dimension = static_cast<Index>(std::lround(plus.trace().real()));
    out.griffiths_minus_dimension = static_cast<Index>(std::lround(minus.trace().real()));
    return out;
}

inline JacobianStructures three_jacobian_structures(const FlatKaehlerTorus& t)
{
    return three_jacobian_structures(KaehlerCalculus(t));
}

/// Period matrix through the complex presentation: the integral symmetric
/// lexicographic basis projected into J'_m = (K cap J_m) + conj(K' cap J_m)
/// along its conjugate; the images w of the basis satisfy w_tilde = w_I Z.
inline ComplexMatrix complex_presentation_period(const KaehlerCalculus& calculus)
{
    const int m = calculus.m();
    require(m % 2 == 1, ErrorKind::unsupported, "complex presentation needs m odd");
    const auto decomposition = calculus.pq_projectors(m);
    const Index dim = calculus.table(m).dimension();
    ComplexMatrix pj = ComplexMatrix::Zero(dim, dim);
    for (const auto& [type, P] : decomposition.projectors)
        if (is_weil_j_type(type)) pj += P;
    const auto split = calculus.lefschetz_parity_split();
    const ComplexMatrix projection = split.k_projector.cast<Complex>() * pj
        + split.k_prime_projector.cast<Complex>() * pj.conjugate();
    const Index N = dim / 2;
    Eigen::ColPivHouseholderQR<ComplexMatrix> qr(projection.leftCols(N));
    require(qr.rank() == N, ErrorKind::numerical_breakdown, "projected script-I basis is degenerate");
    const ComplexMatrix Z = qr.solve(projection.rightCols(N));
    require((projection.leftCols(N) * Z - projection.rightCols(N)).norm()
            <= 1e-8 * std::max(1.0, projection.norm()),
        ErrorKind::numerical_breakdown, "projected basis is inconsistent with a period matrix");
    return Z;
}

inline PeriodMatrix complex_presentation_period(const FlatKaehlerTorus& t)
{
    return PeriodMatrix(complex_presentation_period(KaehlerCalculus(t)));
}

struct PolarizationReport {
    /// || I^t Q - G || with G(u, v) = integral of u ^ *v.
    double structure_residual;
    /// || G - vol * <., .> || against the metric inner product on forms.
    double metric_residual;
    /// || C^t G C - G ||: the Weil operator is an isometry of G.
    double weil_isometry_residual;
};

inline PolarizationReport polarization_real_part_check(const KaehlerCalculus& calculus, const RealMatrix& split_weil)
{
    const int m = calculus.m();
    const auto& table = calculus.table(m);
    const RealMatrix Q = intersection_form(table).cast<double>();
    const RealMatrix G = -Q * calculus.star();
    const double volume = std::sqrt(calculus.torus().metric().determinant());
    const RealMatrix C = calculus.weil_operator(m);
    return {(split_weil.transpose() * Q - G).norm(), (G - volume * calculus.gram(m)).norm(),
        (C.transpose() * G * C - G).norm()};
}

} // namespace flatjac
