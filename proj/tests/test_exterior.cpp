#include "oracles.hpp"

#include <flatjac/exterior.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace flatjac;

namespace {

RealMatrix near_identity(std::mt19937_64& rng, int n, double spread = 0.3)
{
    std::uniform_real_distribution<double> u(-spread, spread);
    RealMatrix m = RealMatrix::Identity(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) += u(rng);
    if (m.determinant() < 0) m.row(0) *= -1.0;
    return m;
}

IntMatrix random_int(std::mt19937_64& rng, int n, int bound = 3)
{
    std::uniform_int_distribution<long long> u(-bound, bound);
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = u(rng);
    return m;
}

/// Compound by cofactor expansion of every minor, in the given bases.
IntMatrix oracle_compound(const IntMatrix& m, const std::vector<MultiIndex>& basis)
{
    IntMatrix out(static_cast<Index>(basis.size()), static_cast<Index>(basis.size()));
    for (std::size_t p = 0; p < basis.size(); ++p)
        for (std::size_t q = 0; q < basis.size(); ++q)
            out(static_cast<Index>(p), static_cast<Index>(q))
                = oracle::laplace_determinant<long long>(oracle::minor_of<long long>(m, basis[p].entries(), basis[q].entries()));
    return out;
}

/// The star from its defining property a ^ *b = <a, b> vol, without coframes.
RealMatrix oracle_star(const RealMatrix& L, const IndexTable& table)
{
    const RealMatrix g = L.transpose() * L;
    const RealMatrix pairing = wedge_pairing_matrix(table, table).cast<double>();
    const RealMatrix gram = form_gram_matrix(g, table);
    return std::sqrt(g.determinant()) * pairing.inverse() * gram;
}

} // namespace

TEST(Compound, Examples)
{
    for (int n = 1; n <= 6; ++n)
        for (int m = 1; m <= n; ++m) {
            const RealMatrix c = compound_matrix(RealMatrix::Identity(n, n), m, Ordering::lex);
            EXPECT_TRUE(c.isIdentity(0.0));
        }
    RealMatrix omega(2, 2);
    omega << 1.5, -2.0, 0.25, 3.0;
    EXPECT_EQ(compound_matrix(omega, 1, Ordering::lex), omega);
    EXPECT_THROW(compound_matrix(RealMatrix::Identity(4, 4), 1, Ordering::symlex), Error);
    EXPECT_THROW(compound_matrix(RealMatrix::Identity(4, 4), 5, Ordering::lex), Error);
}

TEST(Compound, MatchesCofactorOracleExactly)
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 5; ++trial) {
        const IntMatrix a = random_int(rng, 6);
        for (int m : {2, 3}) {
            const IndexTable t(6, m);
            EXPECT_EQ(compound_matrix(a, t, t.canonical_ordering()), oracle_compound(a, t.basis()));
        }
    }
}

TEST(Compound, CauchyBinetOnIntegerMatrices)
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        for (int n : {4, 6}) {
            const IntMatrix a = random_int(rng, n);
            const IntMatrix b = random_int(rng, n);
            const IndexTable t(n, n / 2);
            const IntMatrix product = a * b;
            const IntMatrix lhs = oracle_compound(product, t.basis());
            const IntMatrix rhs = compound_matrix(a, t, Ordering::symlex) * compound_matrix(b, t, Ordering::symlex);
            EXPECT_EQ(lhs, rhs);
        }
    }
}

TEST(Compound, TransposeAndInverse)
{
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        const RealMatrix a = near_identity(rng, 6);
        const IndexTable t(6, 3);
        const RealMatrix ca = compound_matrix(a, t, Ordering::symlex);
        EXPECT_LE((compound_matrix(RealMatrix(a.transpose()), t, Ordering::symlex) - ca.transpose()).norm(), 1e-12);
        EXPECT_LE((compound_matrix(RealMatrix(a.inverse()), t, Ordering::symlex) - ca.inverse()).norm(), 1e-10);
    }
}

TEST(BlockDecompose, Examples)
{
    const auto id = block_decompose(RealMatrix::Identity(20, 20));
    EXPECT_TRUE(id.A.isIdentity(0.0));
    EXPECT_TRUE(id.D.isIdentity(0.0));
    EXPECT_TRUE(id.B.isZero(0.0));
    EXPECT_TRUE(id.C.isZero(0.0));

    IntMatrix omega(2, 2);
    omega << 3, 5, 0, 7;
    const auto w = block_decompose(compound_matrix(omega, 1, Ordering::symlex));
    EXPECT_EQ(w.A(0, 0), 3);
    EXPECT_EQ(w.C(0, 0), 5);
    EXPECT_EQ(w.B(0, 0), 0);
    EXPECT_EQ(w.D(0, 0), 7);
    EXPECT_THROW(block_decompose(RealMatrix::Identity(3, 3)), Error);
}

// B = 0, A upper triangular and D lower triangular for upper-triangular input.
TEST(BlockDecompose, UpperTriangularInputGivesTriangularBlocks)
{
    std::mt19937_64 rng(17);
    for (int n : {2, 6}) {
        for (int trial = 0; trial < 20; ++trial) {
            IntMatrix omega = random_int(rng, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < i; ++j) omega(i, j) = 0;
            const auto w = block_decompose(compound_matrix(omega, n / 2, Ordering::symlex));
            EXPECT_TRUE(w.B.isZero());
            for (Index i = 0; i < w.A.rows(); ++i)
                for (Index j = 0; j < i; ++j) {
                    EXPECT_EQ(w.A(i, j), 0);
                    EXPECT_EQ(w.D(j, i), 0);
                }
        }
    }
}

TEST(HodgeStar, StandardTorus)
{
    const FrameMatrix frame(RealMatrix::Identity(6, 6));
    const RealMatrix s = hodge_star_matrix(frame);
    RealMatrix expected = RealMatrix::Zero(20, 20);
    expected.topRightCorner(10, 10) = -RealMatrix::Identity(10, 10);
    expected.bottomLeftCorner(10, 10) = RealMatrix::Identity(10, 10);
    EXPECT_EQ(s, expected);

    const RealMatrix s2 = hodge_star_matrix(FrameMatrix(RealMatrix::Identity(2, 2)));
    EXPECT_EQ(s2(1, 0), 1.0); // *dx1 = dx2
}

TEST(HodgeStar, DiagonalFrame)
{
    const double a = 1.7;
    RealMatrix L = RealMatrix::Zero(2, 2);
    L(0, 0) = a;
    L(1, 1) = 1 / a;
    const RealMatrix s = hodge_star_matrix(FrameMatrix(L));
    EXPECT_NEAR(s(1, 0), 1 / (a * a), 1e-14);
    EXPECT_NEAR(s(0, 1), -a * a, 1e-14);
    EXPECT_NEAR(s(0, 0), 0.0, 1e-14);
    EXPECT_NEAR(s(1, 1), 0.0, 1e-14);
}

TEST(HodgeStar, RandomFrameProperties)
{
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int n : {2, 6}) {
        const IndexTable t = build_middle_table(n);
        const RealMatrix pairing = wedge_pairing_matrix(t, t).cast<double>();
        for (int trial = 0; trial < 20; ++trial) {
            const RealMatrix L = near_identity(rng, n);
            const RealMatrix s = hodge_star_matrix(FrameMatrix(L), t);
            const Index d = s.rows();
            EXPECT_LE((s * s + RealMatrix::Identity(d, d)).norm(), 1e-10);
            EXPECT_LE((s - oracle_star(L, t)).norm(), 1e-10);

            // (a, b) -> integral a ^ *b is symmetric positive definite.
            const RealMatrix h = pairing * s;
            EXPECT_LE((h - h.transpose()).norm(), 1e-10);
            EXPECT_GT(Eigen::SelfAdjointEigenSolver<RealMatrix>(0.5 * (h + h.transpose())).eigenvalues().minCoeff(), 0.0);
            // The star preserves the wedge pairing.
            EXPECT_LE((s.transpose() * pairing * s - pairing).norm(), 1e-10);

            const double c = std::exp(u(rng));
            EXPECT_LE((hodge_star_matrix(FrameMatrix(c * L), t) - s).norm(), 1e-12);
        }
    }
}

TEST(HodgeStar, SeparatesConformalClasses)
{
    std::mt19937_64 rng(23);
    const IndexTable t = build_middle_table(6);
    for (int trial = 0; trial < 20; ++trial) {
        const RealMatrix L1 = near_identity(rng, 6);
        const RealMatrix L2 = near_identity(rng, 6);
        const RealMatrix g1 = L1.transpose() * L1 / std::pow(L1.determinant(), 2.0 / 6);
        const RealMatrix g2 = L2.transpose() * L2 / std::pow(L2.determinant(), 2.0 / 6);
        ASSERT_GT((g1 - g2).norm(), 1e-3);
        EXPECT_GT((hodge_star_matrix(FrameMatrix(L1), t) - hodge_star_matrix(FrameMatrix(L2), t)).norm(), 1e-6);
    }
}

TEST(Frame, Validation)
{
    RealMatrix singular(2, 2);
    singular << 1, 2, 2, 4;
    EXPECT_THROW(FrameMatrix {singular}, Error);
    RealMatrix reflected = RealMatrix::Identity(2, 2);
    reflected(0, 0) = -1;
    EXPECT_THROW(FrameMatrix {reflected}, Error);
}

TEST(Wedge, IntegralExamples)
{
    const auto t = make_table(6, 3);
    const auto a = MForm<double>::monomial(t, {1, 2, 3});
    const auto b = MForm<double>::monomial(t, {4, 5, 6});
    EXPECT_EQ(wedge_integral(a, b), 1.0);
    EXPECT_EQ(wedge_integral(MForm<double>::monomial(t, {1, 2, 4}), MForm<double>::monomial(t, {3, 5, 6})), -1.0);
    EXPECT_EQ(wedge_integral(a, MForm<double>::monomial(t, {1, 5, 6})), 0.0);
    const auto one = MForm<double>::monomial(make_table(6, 1), {1});
    EXPECT_THROW(wedge_integral(a, one), Error);
}

TEST(Wedge, IntersectionForm)
{
    IntMatrix q2(2, 2);
    q2 << 0, -1, 1, 0;
    EXPECT_EQ(intersection_form(IndexTable(2, 1)), q2);

    const IntMatrix q6 = intersection_form(IndexTable(6, 3));
    IntMatrix expected = IntMatrix::Zero(20, 20);
    expected.topRightCorner(10, 10) = -IntMatrix::Identity(10, 10);
    expected.bottomLeftCorner(10, 10) = IntMatrix::Identity(10, 10);
    EXPECT_EQ(q6, expected);
    EXPECT_EQ(IntMatrix(q6.transpose()), IntMatrix(-q6));

    try {
        intersection_form(IndexTable(4, 2));
        FAIL() << "even middle degree accepted";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::unsupported);
    }
}

TEST(Wedge, WedgeMatrixAgreesWithIntegral)
{
    // dx1 ^ (dx2 ^ dx3) computed as a matrix, checked against the pairing.
    const auto t1 = make_table(4, 1);
    const auto t2 = make_table(4, 2);
    const auto t3 = make_table(4, 3);
    const auto dx1 = MForm<double>::monomial(t1, {1});
    const RealMatrix w = wedge_matrix(dx1, *t2, *t3);
    const auto loc_src = t2->locate(MultiIndex {2, 3});
    const auto loc_dst = t3->locate(MultiIndex {1, 2, 3});
    EXPECT_EQ(w(loc_dst->position, loc_src->position), 1.0);
    const RealMatrix right = wedge_matrix(dx1, *t2, *t3, WedgeSide::right);
    EXPECT_EQ(right, w); // a 1-form commutes with a 2-form
}

TEST(Derivation, ActsAsLeibnizRule)
{
    std::mt19937_64 rng(29);
    const RealMatrix m = near_identity(rng, 5) - RealMatrix::Identity(5, 5);
    const IndexTable t(5, 2);
    // exp(D) = compound(exp(M)) for the derivation D of M.
    const RealMatrix d = derivation_matrix(m, t);
    RealMatrix series = RealMatrix::Identity(d.rows(), d.cols());
    RealMatrix term = series;
    for (int k = 1; k < 30; ++k) {
        term = term * d / double(k);
        series += term;
    }
    RealMatrix em = RealMatrix::Identity(5, 5);
    RealMatrix mterm = em;
    for (int k = 1; k < 30; ++k) {
        mterm = mterm * m / double(k);
        em += mterm;
    }
    EXPECT_LE((series - compound_matrix(em, t, Ordering::lex)).norm(), 1e-10);
}
