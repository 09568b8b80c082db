#pragma once

// Product tori F = M x N with M of dimension 2(2k+1) and N of dimension 4s:
// Kuenneth bookkeeping, the embedding omega -> omega ^ lambda of middle
// forms for a self-dual integral class lambda on N, and the block structure
// of the period matrix of F in a Kuenneth-adapted symplectic basis.
// Coordinates on F are x_1..x_{n_M} followed by y_1..y_{n_N}.

#include "core.hpp"
#include "exterior.hpp"
#include "linalg.hpp"
#include "multiindex.hpp"
#include "siegel.hpp"
#include "torus_period.hpp"

#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace flatjac {

/// Invariant factors of an integer matrix (diagonal of its Smith form,
/// nonzero entries only).
inline std::vector<long long> smith_invariants(const IntMatrix& input)
{
    using Wide = __int128;
    const Index rows = input.rows();
    const Index cols = input.cols();
    Eigen::Matrix<Wide, Eigen::Dynamic, Eigen::Dynamic> a = input.cast<Wide>();
    auto abs_wide = [](Wide v) { return v < 0 ? -v : v; };
    std::vector<long long> factors;
    for (Index t = 0; t < std::min(rows, cols); ++t) {
        // Pivot: smallest nonzero magnitude in the trailing block.
        Index pr = -1;
        Index pc = -1;
        for (Index i = t; i < rows; ++i)
            for (Index j = t; j < cols; ++j)
                if (a(i, j) != 0 && (pr < 0 || abs_wide(a(i, j)) < abs_wide(a(pr, pc)))) {
                    pr = i;
                    pc = j;
                }
        if (pr < 0) break;
        a.row(t).swap(a.row(pr));
        a.col(t).swap(a.col(pc));
        while (true) {
            bool clean = true;
            for (Index i = t + 1; i < rows; ++i) {
                if (a(i, t) == 0) continue;
                const Wide q = a(i, t) / a(t, t);
                a.row(i) -= q * a.row(t);
                if (a(i, t) != 0) {
                    clean = false;
                    if (abs_wide(a(i, t)) < abs_wide(a(t, t))) a.row(t).swap(a.row(i));
                }
            }
            for (Index j = t + 1; j < cols; ++j) {
                if (a(t, j) == 0) continue;
                const Wide q = a(t, j) / a(t, t);
                a.col(j) -= q * a.col(t);
                if (a(t, j) != 0) {
                    clean = false;
                    if (abs_wide(a(t, j)) < abs_wide(a(t, t))) a.col(t).swap(a.col(j));
                }
            }
            if (!clean) continue;
            // Divisibility of the trailing block by the pivot.
            Index bad = -1;
            for (Index i = t + 1; i < rows && bad < 0; ++i)
                for (Index j = t + 1; j < cols; ++j)
                    if (a(i, j) % a(t, t) != 0) {
                        bad = i;
                        break;
                    }
            if (bad < 0) break;
            a.row(t) += a.row(bad);
        }
        factors.push_back(static_cast<long long>(abs_wide(a(t, t))));
    }
    return factors;
}

/// Data of a product torus. lambda holds integer coefficients over the
/// canonical (symmetric lexicographic) basis of the middle degree of N.
class ProductTorusData {
public:
    ProductTorusData(FrameMatrix frame_m, FrameMatrix frame_n, IntVector lambda, double tol = 1e-10)
        : frame_m_(std::move(frame_m))
        , frame_n_(std::move(frame_n))
        , lambda_(std::move(lambda))
    {
        require_odd_middle_degree(frame_m_.n());
        require(frame_n_.n() % 4 == 0, ErrorKind::invalid_arguments,
            "the fibre torus must have dimension 4s");
        table_m_ = make_table(frame_m_.n(), frame_m_.n() / 2);
        table_n_ = make_table(frame_n_.n(), frame_n_.n() / 2);
        table_f_ = make_table(n_f(), n_f() / 2);
        require(lambda_.size() == table_n_->dimension(), ErrorKind::invalid_arguments,
            "lambda has the wrong number of coefficients");
        require(!lambda_.isZero(), ErrorKind::invalid_arguments, "lambda must be nonzero");
        const RealVector l = lambda_.cast<double>();
        const RealMatrix star = hodge_star_matrix(frame_n_, *table_n_);
        require((star * l - l).norm() <= tol * std::max(1.0, l.norm()), ErrorKind::invalid_arguments,
            "lambda is not self-dual (*lambda != lambda)");
    }

    const FrameMatrix& frame_m() const noexcept { return frame_m_; }
    const FrameMatrix& frame_n() const noexcept { return frame_n_; }
    const IntVector& lambda() const noexcept { return lambda_; }
    int n_m() const noexcept { return frame_m_.n(); }
    int n_n() const noexcept { return frame_n_.n(); }
    int n_f() const noexcept { return n_m() + n_n(); }
    const IndexTable& table_m() const noexcept { return *table_m_; }
    const IndexTable& table_n() const noexcept { return *table_n_; }
    const IndexTable& table_f() const noexcept { return *table_f_; }
    std::shared_ptr<const IndexTable> table_m_ptr() const noexcept { return table_m_; }
    std::shared_ptr<const IndexTable> table_f_ptr() const noexcept { return table_f_; }

    /// Block-diagonal product frame on F.
    FrameMatrix product_frame() const { return make_product_frame(frame_m_, frame_n_); }

    static FrameMatrix make_product_frame(const FrameMatrix& a, const FrameMatrix& b)
    {
        RealMatrix L = RealMatrix::Zero(a.n() + b.n(), a.n() + b.n());
        L.topLeftCorner(a.n(), a.n()) = a.matrix();
        L.bottomRightCorner(b.n(), b.n()) = b.matrix();
        return FrameMatrix(std::move(L));
    }

private:
    FrameMatrix frame_m_;
    FrameMatrix frame_n_;
    IntVector lambda_;
    std::shared_ptr<const IndexTable> table_m_;
    std::shared_ptr<const IndexTable> table_n_;
    std::shared_ptr<const IndexTable> table_f_;
};

/// Integer lambda from (multi-index, coefficient) terms on N.
inline IntVector lambda_from_terms(const IndexTable& table_n,
    const std::vector<std::pair<MultiIndex, long long>>& terms)
{
    IntVector out = IntVector::Zero(table_n.dimension());
    for (const auto& [I, c] : terms) {
        const auto loc = table_n.locate(I);
        require(loc.has_value(), ErrorKind::invalid_arguments, "invalid multi-index " + I.to_string());
        out(loc->position) += loc->sign * c;
    }
    return out;
}

struct KunnethElement {
    int t;
    MultiIndex left;
    MultiIndex right;
    /// left followed by right shifted by n_M, in F numbering.
    MultiIndex combined;
};

/// Monomial basis of degree-d forms on M x N grouped by the degree t on M.
inline std::vector<KunnethElement> kunneth_basis(int n_m, int n_n, int d)
{
    require(n_m >= 1 && n_n >= 1 && d >= 0 && d <= n_m + n_n, ErrorKind::invalid_arguments,
        "kunneth_basis: degree out of range");
    std::vector<KunnethElement> out;
    for (int t = std::max(0, d - n_n); t <= std::min(d, n_m); ++t) {
        const auto lefts = t == 0 ? std::vector<MultiIndex> {MultiIndex {}} : lex_multiindices(n_m, t);
        const auto rights = d - t == 0 ? std::vector<MultiIndex> {MultiIndex {}} : lex_multiindices(n_n, d - t);
        for (const auto& a : lefts) {
            for (const auto& b : rights) {
                std::vector<int> seq(a.begin(), a.end());
                for (int y : b) seq.push_back(y + n_m);
                out.push_back({t, a, b, MultiIndex(std::move(seq))});
            }
        }
    }
    return out;
}

inline std::vector<KunnethElement> kunneth_basis(const ProductTorusData& data, int d)
{
    return kunneth_basis(data.n_m(), data.n_n(), d);
}

/// E_lambda: omega -> omega ^ lambda from the middle degree of M to that of
/// F, in the canonical bases. Integer by construction.
inline IntMatrix e_lambda_matrix(const ProductTorusData& data)
{
    const auto& tm = data.table_m();
    const auto& tn = data.table_n();
    const auto& tf = data.table_f();
    IntMatrix E = IntMatrix::Zero(tf.dimension(), tm.dimension());
    std::vector<int> seq;
    for (Index u = 0; u < tm.dimension(); ++u) {
        const auto& w = tm.basis()[static_cast<std::size_t>(u)];
        for (Index v = 0; v < tn.dimension(); ++v) {
            const long long c = data.lambda()(v);
            if (c == 0) continue;
            seq.assign(w.begin(), w.end());
            for (int y : tn.basis()[static_cast<std::size_t>(v)]) seq.push_back(y + data.n_m());
            const auto loc = tf.locate(seq);
            E(loc->position, u) += loc->sign * c;
        }
    }
    return E;
}

inline MForm<double> embed_e_lambda(const ProductTorusData& data, const MForm<double>& omega)
{
    require(omega.n() == data.n_m() && omega.degree() == data.n_m() / 2, ErrorKind::invalid_arguments,
        "e_lambda needs a middle-degree form on M");
    const RealVector image = e_lambda_matrix(data).cast<double>() * omega.coeffs();
    return MForm<double>(data.table_f_ptr(), image);
}

struct EmbeddingReport {
    double star_intertwine_residual;
    double lambda_selfpairing;
    long long pullback_factor;
    bool pullback_exact;
    long long primitive_gcd;
    bool condition_a;
    bool condition_b;
    std::string condition_c;
    std::string injective_certificate;
    std::vector<long long> invariant_factors;
    bool kernel_check_injective;
    bool integrality_exact;
};

/// Holomorphy, polarization pullback, integrality and injectivity of
/// omega -> omega ^ lambda for the product metric.
inline EmbeddingReport check_embedding(const ProductTorusData& data)
{
    EmbeddingReport report {};
    const IntMatrix E = e_lambda_matrix(data);
    const RealMatrix Ed = E.cast<double>();

    const RealMatrix star_m = hodge_star_matrix(data.frame_m(), data.table_m());
    const RealMatrix star_f = hodge_star_matrix(data.product_frame(), data.table_f());
    report.star_intertwine_residual = (star_f * Ed - Ed * star_m).norm();

    const RealVector l = data.lambda().cast<double>();
    const RealMatrix star_n = hodge_star_matrix(data.frame_n(), data.table_n());
    const RealMatrix pairing_n = wedge_pairing_matrix(data.table_n(), data.table_n()).cast<double>();
    report.lambda_selfpairing = l.dot(pairing_n * (star_n * l));

    const IntMatrix pairing_n_int = wedge_pairing_matrix(data.table_n(), data.table_n());
    report.pullback_factor = data.lambda().dot(pairing_n_int * data.lambda());
    const IntMatrix q_m = intersection_form(data.table_m());
    const IntMatrix q_f = intersection_form(data.table_f());
    report.pullback_exact = IntMatrix(E.transpose() * q_f * E) == IntMatrix(report.pullback_factor * q_m);

    long long g = 0;
    for (Index i = 0; i < data.lambda().size(); ++i) g = std::gcd(g, data.lambda()(i));
    report.primitive_gcd = g;
    report.condition_a = report.pullback_factor == 1;
    report.condition_b = g == 1;
    report.condition_c = "not evaluated";
    report.injective_certificate = report.condition_a ? "a" : (report.condition_b ? "b" : "none");

    report.invariant_factors = smith_invariants(E);
    report.kernel_check_injective = static_cast<Index>(report.invariant_factors.size()) == E.cols()
        && std::all_of(report.invariant_factors.begin(), report.invariant_factors.end(),
            [](long long f) { return f == 1; });

    // Second route: wedge of the lifted form with the lifted lambda.
    const auto table_f2 = make_table(data.n_f(), 2 * (data.n_n() / 4));
    MForm<double> lambda_f = MForm<double>::zero(table_f2);
    for (Index v = 0; v < data.table_n().dimension(); ++v) {
        std::vector<int> seq;
        for (int y : data.table_n().basis()[static_cast<std::size_t>(v)]) seq.push_back(y + data.n_m());
        const auto loc = table_f2->locate(seq);
        lambda_f.coeffs()(loc->position) += loc->sign * l(v);
    }
    const IndexTable lifted(data.n_f(), data.n_m() / 2);
    const RealMatrix wedge = wedge_matrix(lambda_f, lifted, data.table_f(), WedgeSide::right);
    RealMatrix lift = RealMatrix::Zero(lifted.dimension(), data.table_m().dimension());
    for (Index u = 0; u < data.table_m().dimension(); ++u) {
        const auto loc = lifted.locate(data.table_m().basis()[static_cast<std::size_t>(u)]);
        lift(loc->position, u) = loc->sign;
    }
    const RealMatrix via_wedge = wedge * lift;
    report.integrality_exact = (via_wedge.array() == via_wedge.array().round()).all()
        && via_wedge == Ed;
    return report;
}

struct KunnethGroupBlock {
    int t;
    Index size;
    double max_abs_real;
};

struct KunnethBlockReport {
    std::vector<KunnethGroupBlock> blocks;
    /// max |Re| over the blocks with t != 2k+1.
    double max_abs_real_off_middle;
    /// || Z_adapted - sigma . Z || for the integral change of basis sigma.
    double modular_consistency_residual;
    ComplexMatrix adapted_period;
};

/// Kuenneth-adapted integral symplectic basis of the middle degree of F as
/// columns in the canonical basis of F, and the Kuenneth group of each r.
inline std::pair<IntMatrix, std::vector<int>> kunneth_symplectic_basis(int n_m, int n_n, const IndexTable& table_f)
{
    const int d = table_f.m();
    const int mid = n_m / 2;
    const auto elements = kunneth_basis(n_m, n_n, d);
    std::vector<const KunnethElement*> rs;
    for (const auto& e : elements)
        if (e.t < mid || (e.t == mid && e.left.contains(1))) rs.push_back(&e);
    const Index N = table_f.half_dimension();
    require(static_cast<Index>(rs.size()) == N, ErrorKind::adapted_basis,
        "Kuenneth r-vectors do not form half a basis");
    IntMatrix basis = IntMatrix::Zero(2 * N, 2 * N);
    std::vector<int> groups;
    for (Index i = 0; i < N; ++i) {
        const auto& r = rs[static_cast<std::size_t>(i)]->combined;
        const auto loc_r = table_f.locate(r);
        basis(loc_r->position, i) = loc_r->sign;
        const MultiIndex s = complement(r, table_f.n());
        const auto loc_s = table_f.locate(s);
        // Normalise so that the integral of r ^ s is +1.
        const int sign = concat_sign(r, s);
        basis(loc_s->position, N + i) = sign * loc_s->sign;
        groups.push_back(rs[static_cast<std::size_t>(i)]->t);
    }
    const IntMatrix Q = intersection_form(table_f);
    require(IntMatrix(basis.transpose() * Q * basis) == Q, ErrorKind::adapted_basis,
        "Kuenneth basis is not symplectic");
    return {basis, groups};
}

inline KunnethBlockReport kunneth_block_check(const FrameMatrix& frame_m, const FrameMatrix& frame_n)
{
    require_odd_middle_degree(frame_m.n());
    const FrameMatrix product = ProductTorusData::make_product_frame(frame_m, frame_n);
    require_odd_middle_degree(product.n());
    const IndexTable table_f = build_middle_table(product.n());
    const auto [basis, groups] = kunneth_symplectic_basis(frame_m.n(), frame_n.n(), table_f);
    const Index N = table_f.half_dimension();

    const RealMatrix star = hodge_star_matrix(product, table_f);
    KunnethBlockReport report;
    report.adapted_period = period_matrix_in_basis(star, basis.cast<double>());

    const int mid = frame_m.n() / 2;
    report.max_abs_real_off_middle = 0.0;
    for (int t = 0; t <= frame_m.n(); ++t) {
        std::vector<Index> members;
        for (Index i = 0; i < N; ++i)
            if (groups[static_cast<std::size_t>(i)] == t) members.push_back(i);
        if (members.empty()) continue;
        double worst = 0.0;
        for (Index a : members)
            for (Index b : members) worst = std::max(worst, std::abs(report.adapted_period(a, b).real()));
        report.blocks.push_back({t, static_cast<Index>(members.size()), worst});
        if (t != mid) report.max_abs_real_off_middle = std::max(report.max_abs_real_off_middle, worst);
    }

    // (r, s) = (b, b') S gives Z' = sigma . Z with sigma = [[S22^t, S12^t], [S21^t, S11^t]].
    const IntMatrix S11 = basis.topLeftCorner(N, N);
    const IntMatrix S12 = basis.topRightCorner(N, N);
    const IntMatrix S21 = basis.bottomLeftCorner(N, N);
    const IntMatrix S22 = basis.bottomRightCorner(N, N);
    const SymplecticInt sigma(S22.transpose(), S12.transpose(), S21.transpose(), S11.transpose());
    const ComplexMatrix Z = period_matrix(product, table_f).matrix();
    report.modular_consistency_residual = (report.adapted_period - modular_action_unchecked(sigma, Z)).norm();
    return report;
}

inline KunnethBlockReport kunneth_block_check(const ProductTorusData& data)
{
    return kunneth_block_check(data.frame_m(), data.frame_n());
}

} // namespace flatjac
