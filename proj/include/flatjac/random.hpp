#pragma once

// Deterministic samplers for the property suites. Every trial draws from its
// own engine seeded by splitmix64(master seed, trial index).

#include "core.hpp"
#include "exterior.hpp"
#include "kaehler.hpp"
#include "linalg.hpp"
#include "siegel.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace flatjac {

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial)
{
    return splitmix64(master ^ splitmix64(trial + 1));
}

using Engine = std::mt19937_64;

inline Engine trial_engine(std::uint64_t master, std::uint64_t trial)
{
    return Engine(trial_seed(master, trial));
}

inline double uniform(Engine& rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline long long uniform_int(Engine& rng, long long lo, long long hi)
{
    return std::uniform_int_distribution<long long>(lo, hi)(rng);
}

/// Positive diagonal with unit product; log-entries uniform in [-spread, spread].
inline RealVector random_unit_diagonal(Engine& rng, int n, double spread = 0.5)
{
    RealVector logs(n);
    for (int i = 0; i < n; ++i) logs(i) = uniform(rng, -spread, spread);
    logs.array() -= logs.mean();
    return logs.array().exp();
}

/// exp(strictly upper triangular) * diagonal det-1: upper triangular, det 1.
inline RealMatrix random_upper_unimodular(Engine& rng, int n, double spread = 0.5)
{
    RealMatrix strict = RealMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) strict(i, j) = uniform(rng, -spread, spread);
    RealMatrix T = nilpotent_exp(strict) * random_unit_diagonal(rng, n, spread).asDiagonal();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) T(i, j) = 0.0;
    return T;
}

inline RealMatrix random_lower_unimodular(Engine& rng, int n, double spread = 0.5)
{
    return random_upper_unimodular(rng, n, spread).transpose();
}

/// Random positively oriented frame: orthogonal times upper-triangular,
/// scaled by a random positive factor.
inline FrameMatrix random_frame(Engine& rng, int n, double spread = 0.5)
{
    RealMatrix gauss(n, n);
    std::normal_distribution<double> normal;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) gauss(i, j) = normal(rng);
    RealMatrix orth = Eigen::HouseholderQR<RealMatrix>(gauss).householderQ();
    if (orth.determinant() < 0) orth.col(0) *= -1.0;
    const double scale = std::exp(uniform(rng, -0.5, 0.5));
    return FrameMatrix(scale * orth * random_upper_unimodular(rng, n, spread));
}

inline IntMatrix random_integer_upper_triangular(Engine& rng, int n, long long bound = 3)
{
    IntMatrix omega = IntMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        long long diag = 0;
        while (diag == 0) diag = uniform_int(rng, -bound, bound);
        omega(i, i) = diag;
        for (int j = i + 1; j < n; ++j) omega(i, j) = uniform_int(rng, -bound, bound);
    }
    return omega;
}

/// J = P J0 P^-1 and g = P^-t P^-1 with P = orthogonal * upper unimodular,
/// det P > 0, so that the Kaehler form keeps the standard orientation.
inline FlatKaehlerTorus random_kaehler_torus(Engine& rng, int m, double spread = 0.4)
{
    const auto standard = FlatKaehlerTorus::standard(m);
    const RealMatrix P = random_frame(rng, 2 * m, spread).matrix();
    const RealMatrix Pinv = P.inverse();
    return FlatKaehlerTorus(P * standard.complex_structure() * Pinv, Pinv.transpose() * Pinv, 1e-10);
}

/// Word of length `length` in the standard generators and their inverses.
inline SymplecticInt random_symplectic(Engine& rng, Index N, int length = 4)
{
    const auto generators = standard_generators(N);
    SymplecticInt word = SymplecticInt::identity(N);
    for (int i = 0; i < length; ++i) {
        const auto& g = generators[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long long>(generators.size()) - 1))];
        if (uniform_int(rng, 0, 1)) {
            word = word * g;
        } else {
            // The inverse of a symplectic sigma is -J sigma^t J.
            const IntMatrix J = symplectic_form(N);
            word = word * SymplecticInt(IntMatrix(-J * g.matrix().transpose() * J));
        }
    }
    return word;
}

/// Point of the Siegel upper half space: X symmetric, Y = A A^t + I/2.
inline PeriodMatrix random_siegel_point(Engine& rng, Index N, double spread = 0.5)
{
    RealMatrix X(N, N);
    RealMatrix A(N, N);
    for (Index i = 0; i < N; ++i)
        for (Index j = 0; j < N; ++j) {
            X(i, j) = uniform(rng, -spread, spread);
            A(i, j) = uniform(rng, -spread, spread);
        }
    ComplexMatrix Z(N, N);
    Z.real() = 0.5 * (X + X.transpose());
    Z.imag() = A * A.transpose() + 0.5 * RealMatrix::Identity(N, N);
    return PeriodMatrix(Z);
}

} // namespace flatjac
