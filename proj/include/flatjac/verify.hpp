#pragma once

// Property suites driven by the command-line front end. Each check yields a
// record (suite, check, trial, value, pass); value is a residual or a
// count and pass compares it with the check's pinned tolerance.

#include "bundle.hpp"
#include "core.hpp"
#include "exterior.hpp"
#include "kaehler.hpp"
#include "random.hpp"
#include "siegel.hpp"
#include "torus_period.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace flatjac {

struct RunConfig {
    int n = 6;
    std::uint64_t seed = 42;
    double tol = default_tolerance;
    int trials = 100;
};

struct CheckRecord {
    std::string suite;
    std::string check;
    int trial;
    double value;
    bool pass;
};

inline const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names {"lemmas", "theoremA", "kaehler", "bundle", "appendix"};
    return names;
}

class SuiteRecorder {
public:
    explicit SuiteRecorder(std::string suite, std::vector<CheckRecord>& out)
        : suite_(std::move(suite))
        , out_(out)
    {
    }

    void at_most(const std::string& check, int trial, double value, double bound)
    {
        out_.push_back({suite_, check, trial, value, std::isfinite(value) && value <= bound});
    }
    void at_least(const std::string& check, int trial, double value, double bound)
    {
        out_.push_back({suite_, check, trial, value, std::isfinite(value) && value > bound});
    }
    void holds(const std::string& check, int trial, bool condition)
    {
        out_.push_back({suite_, check, trial, condition ? 1.0 : 0.0, condition});
    }
    void equals(const std::string& check, int trial, double value, double expected)
    {
        out_.push_back({suite_, check, trial, value, value == expected});
    }
    /// Runs `body`, recording a failed check instead of propagating errors.
    void guarded(const std::string& check, int trial, const std::function<void()>& body)
    {
        try {
            body();
        } catch (const std::exception&) {
            out_.push_back({suite_, check + ".error", trial, 1.0, false});
        }
    }

private:
    std::string suite_;
    std::vector<CheckRecord>& out_;
};

inline void require_period_dimension(const RunConfig& config)
{
    require(config.n >= 2 && config.n % 4 == 2, ErrorKind::invalid_arguments,
        "this suite needs n = 2m with m odd (2, 6, 10, ...)");
}

/// Compound-matrix block identities for integer upper-triangular matrices.
inline void suite_lemmas(const RunConfig& config, std::vector<CheckRecord>& out)
{
    require_period_dimension(config);
    SuiteRecorder rec("lemmas", out);
    const IndexTable table = build_middle_table(config.n);
    for (int trial = 0; trial < config.trials; ++trial) {
        rec.guarded("block_identities", trial, [&] {
            auto rng = trial_engine(config.seed, static_cast<std::uint64_t>(trial));
            const IntMatrix omega = random_integer_upper_triangular(rng, config.n);
            const auto report = block_identities_check(omega, table);
            rec.holds("b_block_zero", trial, report.b_block_zero);
            rec.holds("a_upper_d_lower", trial, report.a_upper_d_lower);
            rec.equals("atd_residual", trial, report.atd_residual, 0.0);
            rec.at_most("offdiag_formula_residual", trial, report.offdiag_formula_residual, 1e-10);

            // Multiplicativity of compounds and star^2 = -1 on a random frame.
            const RealMatrix a = random_frame(rng, config.n).matrix();
            const RealMatrix b = random_frame(rng, config.n).matrix();
            const RealMatrix lhs = compound_matrix(RealMatrix(a * b), table, Ordering::symlex);
            const RealMatrix rhs = compound_matrix(a, table, Ordering::symlex) * compound_matrix(b, table, Ordering::symlex);
            rec.at_most("cauchy_binet", trial, (lhs - rhs).norm() / std::max(1.0, lhs.norm()), config.tol);
            const RealMatrix star = hodge_star_matrix(FrameMatrix(a), table);
            const Index dim = star.rows();
            rec.at_most("star_squared", trial, (star * star + RealMatrix::Identity(dim, dim)).norm(), config.tol);
        });
    }
}

/// Siegel membership, image structure, scaling, inversion witness, modular
/// action and sampled injectivity.
inline void suite_theorem_a(const RunConfig& config, std::vector<CheckRecord>& out)
{
    require_period_dimension(config);
    SuiteRecorder rec("theoremA", out);
    const int n = config.n;
    const IndexTable table = build_middle_table(n);
    const Index N = table.half_dimension();
    const int e = scaling_exponent(n);
    std::vector<FrameMatrix> scan_frames;

    for (int trial = 0; trial < config.trials; ++trial) {
        rec.guarded("period", trial, [&] {
            auto rng = trial_engine(config.seed, static_cast<std::uint64_t>(trial));
            const FrameMatrix frame = random_frame(rng, n);
            const ComplexMatrix Z = period_matrix_unchecked(frame, table);
            const auto membership = siegel_membership(Z, config.tol);
            rec.holds("siegel_membership", trial, membership.ok);
            if (scan_frames.size() < 20) scan_frames.push_back(frame);

            const RealMatrix T = random_upper_unimodular(rng, n);
            const FrameMatrix tri(T.transpose());
            const auto image = image_structure_check(period_matrix(tri, table).matrix(), T, table, config.tol);
            rec.at_most("x_support", trial, image.x_support_residual, config.tol);
            rec.at_most("y_factorization", trial, image.y_residual, 1e-8);
            rec.holds("e_triangular", trial, image.e_triangular_ok);
            rec.at_most("plucker", trial, image.plucker_residual, 1e-8);

            const FrameMatrix upper(random_upper_unimodular(rng, n));
            const ComplexMatrix base = period_matrix(upper, table).matrix();
            for (double c : {0.5, 2.0, 3.0}) {
                const ComplexMatrix scaled = period_matrix(scaling_family(upper, c), table).matrix();
                const double residual = (scaled - std::pow(c, e) * base).cwiseAbs().maxCoeff()
                    / std::max(1.0, std::pow(c, e) * base.cwiseAbs().maxCoeff());
                rec.at_most("scaling_c" + std::to_string(c).substr(0, 3), trial, residual, 1e-8);
            }

            const RealVector d = random_unit_diagonal(rng, n);
            const auto witness = inversion_witness(RealMatrix(d.asDiagonal()), 1, 4, config.tol);
            rec.at_most("inversion_relation", trial, witness.relation_residual, config.tol);

            const double c = std::exp(uniform(rng, -1.0, 1.0));
            const ComplexMatrix Zc = period_matrix(FrameMatrix(c * frame.matrix()), table).matrix();
            rec.at_most("conformal_invariance", trial, (Zc - Z).norm(), 1e-12 * std::max(1.0, Z.norm()));

            RealMatrix T1;
            RealMatrix T2;
            do {
                T1 = random_lower_unimodular(rng, n);
                T2 = random_lower_unimodular(rng, n);
            } while ((T1 * T1.transpose() - T2 * T2.transpose()).norm() < 0.1);
            const ComplexMatrix Z1 = period_matrix(FrameMatrix(T1.transpose()), table).matrix();
            const ComplexMatrix Z2 = period_matrix(FrameMatrix(T2.transpose()), table).matrix();
            rec.at_least("torelli_separation", trial, (Z1 - Z2).norm(), 1e-6);

            for (Index size : {Index {1}, N}) {
                const auto point = random_siegel_point(rng, size);
                const auto s1 = random_symplectic(rng, size);
                const auto s2 = random_symplectic(rng, size);
                const ComplexMatrix moved = modular_action_unchecked(s1 * s2, point.matrix());
                rec.holds("action_membership_N" + std::to_string(size), trial,
                    siegel_membership(moved, config.tol).ok);
                const ComplexMatrix stepwise
                    = modular_action_unchecked(s1, modular_action_unchecked(s2, point.matrix()));
                rec.at_most("group_law_N" + std::to_string(size), trial,
                    (moved - stepwise).norm() / std::max(1.0, moved.norm()), 1e-8);
            }
        });
    }

    if (n == 6) {
        rec.guarded("witness_fixed", 0, [&] {
            RealMatrix F = RealMatrix::Identity(6, 6) * 2.0;
            F(5, 5) = 1.0 / 32.0;
            const auto witness = inversion_witness(F, 3, 10, config.tol);
            rec.at_most("witness_fixed_relation", 0, witness.relation_residual, config.tol);
            rec.holds("witness_fixed_spectra_differ", 0, witness.invariants_differ);
        });
    }
    rec.guarded("fixed_point_scan", 0, [&] {
        const auto scan = generic_no_fixed_point_scan(scan_frames, standard_generators(N), config.tol);
        rec.at_least("fixed_point_scan_fraction", 0, scan.fraction_without_fixed_point.value_or(0.0), 0.0);
    });
}

/// Identities of flat Kaehler tori on the standard torus (trial 0) and
/// random ones.
inline void suite_kaehler(const RunConfig& config, std::vector<CheckRecord>& out)
{
    require_period_dimension(config);
    SuiteRecorder rec("kaehler", out);
    const int m = config.n / 2;
    for (int trial = 0; trial < config.trials; ++trial) {
        rec.guarded("kaehler", trial, [&] {
            auto rng = trial_engine(config.seed, static_cast<std::uint64_t>(trial));
            const auto torus = trial == 0 ? FlatKaehlerTorus::standard(m) : random_kaehler_torus(rng, m);
            const KaehlerCalculus calc(torus);
            const Index dim = calc.table(m).dimension();
            const RealMatrix I = RealMatrix::Identity(dim, dim);

            const auto hodge = calc.pq_projectors(m);
            ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
            double idempotency = 0.0;
            for (const auto& [type, P] : hodge.projectors) {
                sum += P;
                idempotency = std::max(idempotency, (P * P - P).norm());
                const double rank = P.trace().real();
                rec.at_most("type_dimension_" + std::to_string(type.first) + std::to_string(type.second), trial,
                    std::abs(rank - double(binomial(m, type.first) * binomial(m, type.second))), 1e-8);
            }
            rec.at_most("projector_sum", trial, (sum - I.cast<Complex>()).norm(), 1e-10);
            rec.at_most("projector_idempotent", trial, idempotency, 1e-10);

            const RealMatrix C = calc.weil_operator(m);
            rec.at_most("weil_routes_agree", trial, (calc.weil_from_projectors(m) - C.cast<Complex>()).norm(), config.tol);
            rec.at_most("weil_squared", trial, (C * C + I).norm(), config.tol);
            if (m >= 1 && calc.n() >= m + 2) {
                rec.at_most("weil_commutes_lef", trial,
                    (calc.weil_operator(m + 2) * calc.lef(m) - calc.lef(m) * C).norm(), 1e-10);
            }

            const RealVector eta = RealVector::NullaryExpr(dim, [&] { return uniform(rng, -1.0, 1.0); });
            const auto identity = star_weil_identity_check(calc, eta);
            rec.at_most("star_identity", trial, identity.star_residual, config.tol);
            rec.at_most("weil_identity", trial, identity.c_residual, config.tol);
            const auto parts = calc.primitive_decomposition(eta, m);
            const auto again = calc.primitive_decomposition(calc.recompose(parts, m), m);
            double uniqueness = 0.0;
            for (std::size_t i = 0; i < parts.size(); ++i)
                uniqueness = std::max(uniqueness, (parts[i].coeffs - again[i].coeffs).norm());
            rec.at_most("decomposition_unique", trial, uniqueness, config.tol);

            const auto split = calc.lefschetz_parity_split();
            const RealMatrix star = calc.star();
            rec.at_most("star_is_C_on_K", trial, (star * split.k_basis - C * split.k_basis).norm(), config.tol);
            rec.at_most("star_is_minus_C_on_Kprime", trial,
                (star * split.k_prime_basis + C * split.k_prime_basis).norm(), config.tol);
            const Index expected_k = m == 3 ? 14 : (m == 1 ? 0 : split.k_basis.cols());
            rec.equals("dim_K", trial, double(split.k_basis.cols()), double(expected_k));
            rec.equals("dim_K_total", trial, double(split.k_basis.cols() + split.k_prime_basis.cols()), double(dim));

            const auto structures = three_jacobian_structures(calc);
            rec.at_most("split_weil_equals_star", trial, (structures.split_weil - star).norm(), config.tol);
            rec.at_most("griffiths_squared", trial, (structures.griffiths * structures.griffiths + I).norm(), 1e-10);
            rec.at_most("split_weil_squared", trial, (structures.split_weil * structures.split_weil + I).norm(), 1e-10);

            const ComplexMatrix viaComplex = complex_presentation_period(calc);
            const ComplexMatrix viaReal = period_matrix(frame_from_metric(torus.metric()), calc.table(m)).matrix();
            rec.at_most("complex_presentation_period", trial, (viaComplex - viaReal).norm(), 1e-8);

            const auto polarization = polarization_real_part_check(calc, structures.split_weil);
            rec.at_most("polarization_structure", trial, polarization.structure_residual, config.tol);
            rec.at_most("polarization_metric", trial, polarization.metric_residual, config.tol);
            rec.at_most("polarization_weil_isometry", trial, polarization.weil_isometry_residual, config.tol);
        });
    }
}

/// lambda = dy_12 + dy_34, the Kaehler class of the standard T^4.
inline IntVector standard_kaehler_lambda(const IndexTable& table_n)
{
    return lambda_from_terms(table_n, {{MultiIndex {1, 2}, 1}, {MultiIndex {3, 4}, 1}});
}

/// The embedding omega -> omega ^ lambda on product tori M x T^4.
inline void suite_bundle(const RunConfig& config, std::vector<CheckRecord>& out)
{
    require_period_dimension(config);
    SuiteRecorder rec("bundle", out);
    const FrameMatrix frame_n(RealMatrix::Identity(4, 4));
    const IndexTable table_n = build_middle_table(4);
    const IntVector lambda = standard_kaehler_lambda(table_n);
    const int trials = config.n > 2 ? std::min(config.trials, 10) : config.trials;
    for (int trial = 0; trial < trials; ++trial) {
        rec.guarded("bundle", trial, [&] {
            auto rng = trial_engine(config.seed, static_cast<std::uint64_t>(trial));
            const FrameMatrix frame_m = trial == 0 ? FrameMatrix(RealMatrix::Identity(config.n, config.n))
                                                   : random_frame(rng, config.n);
            const ProductTorusData data(frame_m, frame_n, lambda);
            const auto report = check_embedding(data);
            rec.at_most("star_intertwine", trial, report.star_intertwine_residual, 1e-10);
            rec.equals("pullback_factor", trial, double(report.pullback_factor), 2.0);
            rec.holds("pullback_exact", trial, report.pullback_exact);
            rec.at_most("selfpairing_matches_factor", trial,
                std::abs(report.lambda_selfpairing - double(report.pullback_factor)), config.tol);
            rec.holds("integrality_exact", trial, report.integrality_exact);
            rec.holds("certificate_b", trial, report.injective_certificate == "b");
            rec.holds("kernel_check_injective", trial, report.kernel_check_injective);

            const auto blocks = kunneth_block_check(data);
            rec.at_most("kunneth_real_part_off_middle", trial, blocks.max_abs_real_off_middle, config.tol);
            rec.at_most("kunneth_modular_consistency", trial, blocks.modular_consistency_residual, 1e-8);
        });
    }
    rec.guarded("non_primitive", 0, [&] {
        const ProductTorusData doubled(FrameMatrix(RealMatrix::Identity(config.n, config.n)), frame_n,
            IntVector(2 * lambda));
        const auto report = check_embedding(doubled);
        rec.equals("doubled_pullback_factor", 0, double(report.pullback_factor), 8.0);
        rec.equals("doubled_gcd", 0, double(report.primitive_gcd), 2.0);
        rec.holds("doubled_certificate_none", 0, report.injective_certificate == "none");
        rec.holds("doubled_not_injective", 0, !report.kernel_check_injective);
    });
}

/// Random extension of g0 = diag(I_r, 0): W = graph over the first r
/// coordinates, orthogonal to ker g0, with g = g0 on W.
inline RealMatrix random_extension(Engine& rng, int n, int r)
{
    RealMatrix V = RealMatrix::Identity(n, n);
    for (int i = 0; i < r; ++i)
        for (int j = r; j < n; ++j) V(j, i) = uniform(rng, -0.5, 0.5);
    RealMatrix H = random_frame(rng, n - r).metric();
    RealMatrix gram = RealMatrix::Identity(n, n);
    gram.bottomRightCorner(n - r, n - r) = H;
    const RealMatrix Vinv = V.inverse();
    return Vinv.transpose() * gram * Vinv;
}

/// Degenerate metrics: extension independence and rejection of
/// non-extensions.
inline void suite_appendix(const RunConfig& config, std::vector<CheckRecord>& out)
{
    SuiteRecorder rec("appendix", out);
    rec.guarded("rank1_n2", 0, [&] {
        const SingularFlatMetric g0(RealMatrix(RealVector::Unit(2, 0).asDiagonal()));
        RealMatrix g1 = RealMatrix::Identity(2, 2);
        RealMatrix g2 = g1;
        g2(1, 1) = 4.0;
        rec.at_most("rank1_n2_independence", 0, singular_extension_independence(g0, g1, g2), config.tol);
        RealMatrix bad(2, 2);
        bad << 1, 1, 1, 2;
        bool rejected = false;
        try {
            singular_period(g0, bad);
        } catch (const Error& e) {
            rejected = e.kind() == ErrorKind::not_an_extension;
        }
        rec.holds("rank1_n2_rejects_non_extension", 0, rejected);
    });
    rec.guarded("rank3_n6", 0, [&] {
        RealVector diag = RealVector::Zero(6);
        diag.head(3).setOnes();
        const SingularFlatMetric g0(RealMatrix(diag.asDiagonal()));
        RealVector other(6);
        other << 1, 1, 1, 2, 3, 4;
        rec.at_most("rank3_n6_independence", 0,
            singular_extension_independence(g0, RealMatrix::Identity(6, 6), RealMatrix(other.asDiagonal())), config.tol);
    });
    const int n = std::max(2, config.n % 2 ? config.n + 1 : config.n);
    for (int trial = 0; trial < config.trials; ++trial) {
        rec.guarded("random_extensions", trial, [&] {
            auto rng = trial_engine(config.seed, static_cast<std::uint64_t>(trial));
            const int r = static_cast<int>(uniform_int(rng, 1, n - 1));
            RealVector diag = RealVector::Zero(n);
            diag.head(r).setOnes();
            const SingularFlatMetric g0(RealMatrix(diag.asDiagonal()));
            const RealMatrix g1 = random_extension(rng, n, r);
            const RealMatrix g2 = random_extension(rng, n, r);
            rec.at_most("random_independence", trial, singular_extension_independence(g0, g1, g2), config.tol);
        });
    }
}

inline std::vector<CheckRecord> run_suite(const std::string& name, const RunConfig& config)
{
    require(config.trials >= 1 && config.tol > 0, ErrorKind::invalid_arguments, "need trials >= 1 and tol > 0");
    std::vector<CheckRecord> out;
    if (name == "lemmas") suite_lemmas(config, out);
    else if (name == "theoremA") suite_theorem_a(config, out);
    else if (name == "kaehler") suite_kaehler(config, out);
    else if (name == "bundle") suite_bundle(config, out);
    else if (name == "appendix") suite_appendix(config, out);
    else if (name == "all") {
        for (const auto& suite : suite_names()) {
            auto part = run_suite(suite, config);
            out.insert(out.end(), part.begin(), part.end());
        }
    } else {
        throw Error(ErrorKind::invalid_arguments, "unknown suite '" + name + "'");
    }
    return out;
}

inline bool all_passed(const std::vector<CheckRecord>& records)
{
    return std::all_of(records.begin(), records.end(), [](const CheckRecord& r) { return r.pass; });
}

} // namespace flatjac
