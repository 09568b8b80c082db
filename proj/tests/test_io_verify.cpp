#include <flatjac/io.hpp>
#include <flatjac/random.hpp>
#include <flatjac/verify.hpp>

#include <gtest/gtest.h>

#include <string>

using namespace flatjac;
namespace json_io = flatjac::io;

namespace {

std::string sample(const std::string& name) { return std::string(FLATJAC_SAMPLES_DIR) + "/" + name; }

} // namespace

TEST(Json, MatrixRoundTrip)
{
    auto rng = trial_engine(109, 0);
    const RealMatrix m = random_frame(rng, 4).matrix();
    EXPECT_EQ(json_io::matrix_from_json(json_io::matrix_to_json(m), "m"), m);
    const auto ragged = json_io::parse("[[1, 2], [3]]");
    EXPECT_THROW(json_io::matrix_from_json(ragged, "m"), Error);
    EXPECT_THROW(json_io::matrix_from_json<long long>(json_io::parse("[[1.5]]"), "m"), Error);
    EXPECT_THROW(json_io::parse("{not json"), Error);
}

TEST(Json, FramePeriodAndFormRoundTrips)
{
    auto rng = trial_engine(113, 0);
    const FrameMatrix frame = random_frame(rng, 6);
    EXPECT_EQ(json_io::frame_from_json(json_io::frame_to_json(frame)).matrix(), frame.matrix());

    const ComplexMatrix Z = period_matrix(frame).matrix();
    EXPECT_EQ(json_io::period_from_json(json_io::period_to_json(Z)), Z);

    auto table = make_table(6, 3);
    RealVector coeffs(20);
    for (Index i = 0; i < 20; ++i) coeffs(i) = uniform(rng, -1, 1);
    const MForm<double> form(table, coeffs);
    for (Ordering ordering : {Ordering::lex, Ordering::symlex}) {
        const auto back = json_io::form_from_json(json_io::form_to_json(form, ordering));
        EXPECT_LE((back.coeffs() - coeffs).norm(), 0.0);
    }
    // dx_(3,6,5) = -dx_(3,5,6), the 19th lexicographic element.
    const auto lex = json_io::form_to_json(MForm<double>::monomial(table, MultiIndex {3, 6, 5}), Ordering::lex);
    EXPECT_EQ(lex["coeffs"][18].get<double>(), -1.0);

    const auto sigma = SymplecticInt::conjugation((IntMatrix(2, 2) << 1, 1, 0, 1).finished());
    EXPECT_EQ(json_io::symplectic_from_json(json_io::symplectic_to_json(sigma)).matrix(), sigma.matrix());
}

TEST(Json, IndexTableDump)
{
    const auto j = json_io::index_table_to_json(build_middle_table(6));
    EXPECT_EQ(j["N"].get<int>(), 10);
    EXPECT_EQ(j["ordering"].get<std::string>(), "symlex");
    EXPECT_EQ(j["basis"][10].get<std::vector<int>>(), (std::vector<int> {4, 5, 6}));
}

TEST(Samples, LoadAndEvaluate)
{
    const auto identity = json_io::frame_from_json(json_io::read_file(sample("frame_identity6.json")));
    EXPECT_EQ(period_matrix(identity).matrix(), Complex(0, 1) * ComplexMatrix::Identity(10, 10));

    const auto tau_frame = json_io::frame_from_json(json_io::read_file(sample("frame_tau.json")));
    const Complex tau(0.3, 1.2);
    EXPECT_LE(std::abs(period_matrix(tau_frame).matrix()(0, 0) + 1.0 / tau), 1e-10);

    EXPECT_THROW(json_io::frame_from_json(json_io::read_file(sample("frame_singular.json"))), Error);
    EXPECT_THROW(reduce_conformal(json_io::metric_from_json(json_io::read_file(sample("metric_indefinite.json")))), Error);

    const auto reduction = reduce_conformal(json_io::metric_from_json(json_io::read_file(sample("metric_diag.json"))));
    EXPECT_NEAR(reduction.scale, 1.0, 1e-15);

    const auto torus = json_io::torus_from_json(json_io::read_file(sample("torus_standard6.json")));
    EXPECT_EQ(torus.n(), 6);

    const auto product = json_io::product_from_json(json_io::read_file(sample("product_t2_t4.json")));
    EXPECT_EQ(check_embedding(product).injective_certificate, "b");

    EXPECT_THROW(json_io::read_file(sample("missing.json")), Error);
}

TEST(Verify, AllSuitesPassInDimensionTwo)
{
    const RunConfig config {2, 42, 1e-9, 20};
    const auto records = run_suite("all", config);
    EXPECT_FALSE(records.empty());
    for (const auto& r : records) EXPECT_TRUE(r.pass) << r.suite << '.' << r.check << " trial " << r.trial << " value " << r.value;
    std::set<std::string> suites;
    for (const auto& r : records) suites.insert(r.suite);
    EXPECT_EQ(suites.size(), suite_names().size());
}

TEST(Verify, Deterministic)
{
    const RunConfig config {6, 7, 1e-9, 3};
    const auto a = run_suite("theoremA", config);
    const auto b = run_suite("theoremA", config);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].check, b[i].check);
        EXPECT_EQ(a[i].value, b[i].value);
    }
}

TEST(Verify, RejectsBadRequests)
{
    EXPECT_THROW(run_suite("nonsense", RunConfig {}), Error);
    EXPECT_THROW(run_suite("lemmas", RunConfig {4, 1, 1e-9, 1}), Error);
    EXPECT_THROW(run_suite("lemmas", RunConfig {6, 1, 1e-9, 0}), Error);
}

TEST(Verify, ImpossibleToleranceFails)
{
    const auto records = run_suite("lemmas", RunConfig {6, 42, 1e-300, 2});
    EXPECT_FALSE(all_passed(records));
}
