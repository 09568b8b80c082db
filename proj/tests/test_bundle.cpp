#include "oracles.hpp"

#include <flatjac/bundle.hpp>
#include <flatjac/random.hpp>

#include <gtest/gtest.h>

#include <numeric>

using namespace flatjac;

namespace {

FrameMatrix identity_frame(int n) { return FrameMatrix(RealMatrix::Identity(n, n)); }

IntVector standard_lambda(long long scale = 1)
{
    return scale * lambda_from_terms(build_middle_table(4), {{MultiIndex {1, 2}, 1}, {MultiIndex {3, 4}, 1}});
}

// Invariant factors from determinantal divisors: d_k = gcd of all k x k minors.
std::vector<long long> determinantal_factors(const IntMatrix& a)
{
    std::vector<long long> factors;
    long long previous = 1;
    const int r = static_cast<int>(a.rows());
    const int c = static_cast<int>(a.cols());
    for (int k = 1; k <= std::min(r, c); ++k) {
        long long d = 0;
        for (const auto& rows : oracle::subsets(r, k))
            for (const auto& cols : oracle::subsets(c, k))
                d = std::gcd(d, oracle::laplace_determinant<long long>(oracle::minor_of<long long>(a, rows, cols)));
        if (d == 0) break;
        factors.push_back(d / previous);
        previous = d;
    }
    return factors;
}

} // namespace

TEST(SmithInvariants, Examples)
{
    IntMatrix d(2, 2);
    d << 2, 0, 0, 3;
    EXPECT_EQ(smith_invariants(d), (std::vector<long long> {1, 6}));
    IntMatrix e(2, 2);
    e << 2, 4, 6, 8;
    EXPECT_EQ(smith_invariants(e), (std::vector<long long> {2, 4}));
    EXPECT_TRUE(smith_invariants(IntMatrix::Zero(3, 2)).empty());
}

TEST(SmithInvariants, AgreeWithDeterminantalDivisors)
{
    for (int trial = 0; trial < 200; ++trial) {
        auto rng = trial_engine(101, static_cast<std::uint64_t>(trial));
        const Index rows = uniform_int(rng, 1, 4);
        const Index cols = uniform_int(rng, 1, 4);
        IntMatrix a(rows, cols);
        for (Index i = 0; i < rows; ++i)
            for (Index j = 0; j < cols; ++j) a(i, j) = 2 * uniform_int(rng, -3, 3) + (trial % 3 == 0 ? 0 : uniform_int(rng, 0, 1));
        EXPECT_EQ(smith_invariants(a), determinantal_factors(a)) << a;
    }
}

TEST(ProductTorusData, Validation)
{
    EXPECT_NO_THROW(ProductTorusData(identity_frame(2), identity_frame(4), standard_lambda()));
    EXPECT_THROW(ProductTorusData(identity_frame(4), identity_frame(4), standard_lambda()), Error);
    EXPECT_THROW(ProductTorusData(identity_frame(2), identity_frame(6), standard_lambda()), Error);
    EXPECT_THROW(ProductTorusData(identity_frame(2), identity_frame(4), IntVector::Zero(6)), Error);
    // dy12 - dy34 is anti-self-dual.
    const IntVector anti = lambda_from_terms(build_middle_table(4), {{MultiIndex {1, 2}, 1}, {MultiIndex {3, 4}, -1}});
    EXPECT_THROW(ProductTorusData(identity_frame(2), identity_frame(4), anti), Error);
    EXPECT_EQ(standard_lambda(), (IntVector(6) << 1, 0, 0, 1, 0, 0).finished());
}

TEST(Kunneth, GroupSizes)
{
    const auto basis = kunneth_basis(2, 4, 3);
    ASSERT_EQ(basis.size(), 20u);
    std::map<int, int> sizes;
    for (const auto& e : basis) ++sizes[e.t];
    EXPECT_EQ(sizes[0], 4);
    EXPECT_EQ(sizes[1], 12);
    EXPECT_EQ(sizes[2], 4);
    const auto zero = kunneth_basis(2, 4, 0);
    ASSERT_EQ(zero.size(), 1u);
    EXPECT_TRUE(zero[0].combined.empty());
    for (int d = 0; d <= 10; ++d) EXPECT_EQ(static_cast<long long>(kunneth_basis(6, 4, d).size()), binomial(10, d));
}

TEST(EmbedLambda, Examples)
{
    const ProductTorusData data(identity_frame(2), identity_frame(4), standard_lambda());
    const auto dx1 = MForm<double>::monomial(data.table_m_ptr(), MultiIndex {1});
    const auto image = embed_e_lambda(data, dx1);
    auto expected = MForm<double>::monomial(data.table_f_ptr(), MultiIndex {1, 3, 4});
    expected.coeffs() += MForm<double>::monomial(data.table_f_ptr(), MultiIndex {1, 5, 6}).coeffs();
    EXPECT_EQ(image.coeffs(), expected.coeffs());
    EXPECT_TRUE(embed_e_lambda(data, MForm<double>::zero(data.table_m_ptr())).coeffs().isZero());
    EXPECT_THROW(embed_e_lambda(data, MForm<double>::monomial(make_table(2, 2), MultiIndex {1, 2})), Error);
}

TEST(CheckEmbedding, StandardLambda)
{
    const auto r = check_embedding(ProductTorusData(identity_frame(2), identity_frame(4), standard_lambda()));
    EXPECT_LE(r.star_intertwine_residual, 1e-12);
    EXPECT_NEAR(r.lambda_selfpairing, 2.0, 1e-12);
    EXPECT_EQ(r.pullback_factor, 2);
    EXPECT_TRUE(r.pullback_exact);
    EXPECT_EQ(r.primitive_gcd, 1);
    EXPECT_FALSE(r.condition_a);
    EXPECT_TRUE(r.condition_b);
    EXPECT_EQ(r.condition_c, "not evaluated");
    EXPECT_EQ(r.injective_certificate, "b");
    EXPECT_TRUE(r.kernel_check_injective);
    EXPECT_TRUE(r.integrality_exact);
}

TEST(CheckEmbedding, DoubledLambda)
{
    const auto r = check_embedding(ProductTorusData(identity_frame(2), identity_frame(4), standard_lambda(2)));
    EXPECT_EQ(r.pullback_factor, 8);
    EXPECT_TRUE(r.pullback_exact);
    EXPECT_EQ(r.primitive_gcd, 2);
    EXPECT_FALSE(r.condition_a);
    EXPECT_FALSE(r.condition_b);
    EXPECT_EQ(r.injective_certificate, "none");
    EXPECT_FALSE(r.kernel_check_injective);
    EXPECT_EQ(r.invariant_factors, (std::vector<long long> {2, 2}));
    EXPECT_LE(r.star_intertwine_residual, 1e-12);
}

TEST(CheckEmbedding, RandomBaseFrames)
{
    for (int trial = 0; trial < 10; ++trial) {
        auto rng = trial_engine(103, static_cast<std::uint64_t>(trial));
        const auto r = check_embedding(ProductTorusData(random_frame(rng, 2), identity_frame(4), standard_lambda()));
        EXPECT_LE(r.star_intertwine_residual, 1e-9);
        EXPECT_TRUE(r.pullback_exact);
        EXPECT_TRUE(r.integrality_exact);
    }
}

TEST(KunnethBlocks, StandardProduct)
{
    const auto r = kunneth_block_check(identity_frame(2), identity_frame(4));
    EXPECT_EQ(r.max_abs_real_off_middle, 0.0);
    // r-vectors: 3-forms on N (t = 0) and dx1 ^ 2-forms on N (t = 1).
    ASSERT_EQ(r.blocks.size(), 2u);
    EXPECT_EQ(r.blocks[0].t, 0);
    EXPECT_EQ(r.blocks[0].size, 4);
    EXPECT_EQ(r.blocks[1].t, 1);
    EXPECT_EQ(r.blocks[1].size, 6);
    EXPECT_LE(r.modular_consistency_residual, 1e-12);
    EXPECT_LE((r.adapted_period - Complex(0, 1) * ComplexMatrix::Identity(10, 10)).norm(), 1e-12);
}

TEST(KunnethBlocks, NonSquareBaseCurve)
{
    RealMatrix L(2, 2);
    L << 1 / std::sqrt(2.0), 0, 0, std::sqrt(2.0);
    const auto r = kunneth_block_check(FrameMatrix(L), identity_frame(4));
    EXPECT_LE(r.max_abs_real_off_middle, 1e-9);
    EXPECT_LE(r.modular_consistency_residual, 1e-9);
    EXPECT_TRUE(siegel_membership(r.adapted_period).ok);
}

TEST(KunnethBlocks, SixByFour)
{
    auto rng = trial_engine(107, 0);
    const auto r = kunneth_block_check(random_frame(rng, 6), identity_frame(4));
    EXPECT_LE(r.max_abs_real_off_middle, 1e-9);
    EXPECT_LE(r.modular_consistency_residual, 1e-8);
    Index total = 0;
    for (const auto& b : r.blocks) total += b.size;
    EXPECT_EQ(total, 126);
}
