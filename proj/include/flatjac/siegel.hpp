#pragma once

// Siegel upper half space, the integral symplectic group for the form
// J = [[0, -I], [I, 0]] and its action Z -> (aZ + b)(cZ + d)^-1.

#include "core.hpp"
#include "linalg.hpp"
#include "torus_period.hpp"

#include <optional>
#include <vector>

namespace flatjac {

struct MembershipReport {
    bool ok;
    double symmetry_defect;
    double min_imag_eigenvalue;
};

inline MembershipReport siegel_membership(const ComplexMatrix& Z, double tol = default_tolerance)
{
    require(Z.rows() == Z.cols(), ErrorKind::invalid_arguments, "Z must be square");
    const double defect = symmetry_defect(Z);
    const double lambda = min_symmetric_eigenvalue(Z.imag());
    return {defect <= tol && lambda >= tol, defect, lambda};
}

/// The symplectic form shared with the intersection form of the symmetric
/// lexicographic basis.
inline IntMatrix symplectic_form(Index N)
{
    IntMatrix J = IntMatrix::Zero(2 * N, 2 * N);
    J.topRightCorner(N, N) = -IntMatrix::Identity(N, N);
    J.bottomLeftCorner(N, N) = IntMatrix::Identity(N, N);
    return J;
}

inline bool symplectic_check(const IntMatrix& sigma)
{
    require(sigma.rows() == sigma.cols() && sigma.rows() % 2 == 0, ErrorKind::invalid_arguments,
        "symplectic_check needs an even square matrix");
    const IntMatrix J = symplectic_form(sigma.rows() / 2);
    return sigma.transpose() * J * sigma == J;
}

/// Floating-point input is accepted only when every entry is an integer.
inline bool symplectic_check(const RealMatrix& sigma)
{
    require(sigma.rows() == sigma.cols() && sigma.rows() % 2 == 0, ErrorKind::invalid_arguments,
        "symplectic_check needs an even square matrix");
    if (!sigma.allFinite()) return false;
    if ((sigma.array() != sigma.array().round()).any()) return false;
    if (sigma.cwiseAbs().maxCoeff() > 1e15) return false;
    return symplectic_check(IntMatrix(sigma.cast<long long>()));
}

class SymplecticInt {
public:
    explicit SymplecticInt(IntMatrix sigma)
        : sigma_(std::move(sigma))
    {
        require(symplectic_check(sigma_), ErrorKind::invalid_arguments,
            "matrix is not integral symplectic");
    }

    SymplecticInt(const IntMatrix& alpha, const IntMatrix& beta, const IntMatrix& gamma,
        const IntMatrix& delta)
        : SymplecticInt(assemble(alpha, beta, gamma, delta))
    {
    }

    static SymplecticInt identity(Index N) { return SymplecticInt(IntMatrix::Identity(2 * N, 2 * N)); }

    /// Z -> -Z^-1.
    static SymplecticInt inversion(Index N) { return SymplecticInt(symplectic_form(N)); }

    /// Z -> Z + beta, beta symmetric.
    static SymplecticInt translation(const IntMatrix& beta)
    {
        const Index N = beta.rows();
        return SymplecticInt(IntMatrix::Identity(N, N), beta, IntMatrix::Zero(N, N),
            IntMatrix::Identity(N, N));
    }

    /// Z -> U^t Z U for unimodular U.
    static SymplecticInt conjugation(const IntMatrix& U)
    {
        require(U.rows() == U.cols(), ErrorKind::invalid_arguments, "U must be square");
        const long long det = integer_determinant(U);
        require(det == 1 || det == -1, ErrorKind::invalid_arguments, "U must be unimodular");
        // The inverse of a unimodular integer matrix is integral: adjugate / det.
        const IntMatrix inverse = (U.cast<double>().inverse().array().round()).cast<long long>();
        require(U * inverse == IntMatrix::Identity(U.rows(), U.rows()), ErrorKind::numerical_breakdown,
            "integer inverse failed");
        const Index N = U.rows();
        return SymplecticInt(U.transpose(), IntMatrix::Zero(N, N), IntMatrix::Zero(N, N), inverse);
    }

    Index half_size() const noexcept { return sigma_.rows() / 2; }
    const IntMatrix& matrix() const noexcept { return sigma_; }
    IntMatrix alpha() const { return sigma_.topLeftCorner(half_size(), half_size()); }
    IntMatrix beta() const { return sigma_.topRightCorner(half_size(), half_size()); }
    IntMatrix gamma() const { return sigma_.bottomLeftCorner(half_size(), half_size()); }
    IntMatrix delta() const { return sigma_.bottomRightCorner(half_size(), half_size()); }
    bool is_identity() const { return sigma_ == IntMatrix::Identity(sigma_.rows(), sigma_.cols()); }

    friend SymplecticInt operator*(const SymplecticInt& a, const SymplecticInt& b)
    {
        require(a.half_size() == b.half_size(), ErrorKind::invalid_arguments, "size mismatch");
        return SymplecticInt(IntMatrix(a.sigma_ * b.sigma_));
    }

private:
    static IntMatrix assemble(const IntMatrix& alpha, const IntMatrix& beta, const IntMatrix& gamma,
        const IntMatrix& delta)
    {
        const Index N = alpha.rows();
        require(alpha.cols() == N && beta.rows() == N && beta.cols() == N && gamma.rows() == N
                && gamma.cols() == N && delta.rows() == N && delta.cols() == N,
            ErrorKind::invalid_arguments, "symplectic blocks must be N x N");
        IntMatrix sigma(2 * N, 2 * N);
        sigma << alpha, beta, gamma, delta;
        return sigma;
    }

    IntMatrix sigma_;
};

/// (alpha Z + beta)(gamma Z + delta)^-1 without the membership assertion.
inline ComplexMatrix modular_action_unchecked(const SymplecticInt& sigma, const ComplexMatrix& Z)
{
    require(Z.rows() == sigma.half_size() && Z.cols() == sigma.half_size(),
        ErrorKind::invalid_arguments, "modular_action: size mismatch");
    const ComplexMatrix numerator = sigma.alpha().cast<double>().cast<Complex>() * Z
        + sigma.beta().cast<double>().cast<Complex>();
    const ComplexMatrix denominator = sigma.gamma().cast<double>().cast<Complex>() * Z
        + sigma.delta().cast<double>().cast<Complex>();
    Eigen::PartialPivLU<ComplexMatrix> lu(denominator);
    require(std::abs(lu.determinant()) > 1e-300, ErrorKind::numerical_breakdown,
        "gamma Z + delta is singular");
    // X D^-1 = (D^-t X^t)^t.
    ComplexMatrix result = denominator.transpose().partialPivLu().solve(numerator.transpose()).transpose();
    require(result.allFinite(), ErrorKind::numerical_breakdown, "modular action overflowed");
    return result;
}

inline PeriodMatrix modular_action(const SymplecticInt& sigma, const PeriodMatrix& Z)
{
    ComplexMatrix result = modular_action_unchecked(sigma, Z.matrix());
    // Symmetrise away rounding before the membership assertion.
    result = 0.5 * (result + result.transpose()).eval();
    return PeriodMatrix(std::move(result));
}

inline double fixed_point_residual(const SymplecticInt& sigma, const ComplexMatrix& Z)
{
    require(Z.rows() == sigma.half_size() && Z.cols() == sigma.half_size(),
        ErrorKind::invalid_arguments, "fixed_point_residual: size mismatch");
    auto c = [](const IntMatrix& m) -> ComplexMatrix { return m.cast<double>().cast<Complex>(); };
    return (Z * c(sigma.gamma()) * Z + Z * c(sigma.delta()) - c(sigma.alpha()) * Z - c(sigma.beta())).norm();
}

/// Inversion, two translations and two conjugations; fewer for N = 1.
inline std::vector<SymplecticInt> standard_generators(Index N)
{
    require(N >= 1, ErrorKind::invalid_arguments, "need N >= 1");
    std::vector<SymplecticInt> generators;
    generators.push_back(SymplecticInt::inversion(N));
    IntMatrix beta = IntMatrix::Zero(N, N);
    beta(0, 0) = 1;
    generators.push_back(SymplecticInt::translation(beta));
    if (N == 1) {
        beta(0, 0) = -1;
        generators.push_back(SymplecticInt::translation(beta));
        return generators;
    }
    beta.setZero();
    beta(0, 1) = beta(1, 0) = 1;
    generators.push_back(SymplecticInt::translation(beta));
    IntMatrix shear = IntMatrix::Identity(N, N);
    shear(0, 1) = 1;
    generators.push_back(SymplecticInt::conjugation(shear));
    IntMatrix swap = IntMatrix::Identity(N, N);
    swap(0, 0) = swap(1, 1) = 0;
    swap(0, 1) = swap(1, 0) = 1;
    generators.push_back(SymplecticInt::conjugation(swap));
    return generators;
}

struct FixedPointScan {
    std::vector<double> residuals;
    std::size_t pairs = 0;
    std::size_t above_tolerance = 0;
    /// Fraction of (frame, generator) pairs that are not fixed points; empty
    /// when every generator is the identity.
    std::optional<double> fraction_without_fixed_point;
};

inline FixedPointScan generic_no_fixed_point_scan(const std::vector<FrameMatrix>& frames,
    const std::vector<SymplecticInt>& generators, double tol = default_tolerance)
{
    require(!frames.empty() && !generators.empty(), ErrorKind::invalid_arguments,
        "scan needs frames and generators");
    FixedPointScan scan;
    for (const auto& frame : frames) {
        const auto Z = period_matrix(frame);
        for (const auto& sigma : generators) {
            if (sigma.is_identity()) continue;
            const double r = fixed_point_residual(sigma, Z.matrix());
            scan.residuals.push_back(r);
            ++scan.pairs;
            if (r > tol) ++scan.above_tolerance;
        }
    }
    if (scan.pairs) scan.fraction_without_fixed_point = double(scan.above_tolerance) / double(scan.pairs);
    return scan;
}

} // namespace flatjac
