#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace flatjac {

using Index = Eigen::Index;
using Complex = std::complex<double>;

using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using IntMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;
using IntVector = Eigen::Matrix<long long, Eigen::Dynamic, 1>;

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

inline constexpr double default_tolerance = 1e-9;

enum class ErrorKind {
    invalid_arguments,
    degenerate_frame,
    numerical_breakdown,
    not_an_extension,
    unsupported,
    adapted_basis,
};

inline const char* to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::invalid_arguments: return "invalid-arguments";
    case ErrorKind::degenerate_frame: return "degenerate-frame";
    case ErrorKind::numerical_breakdown: return "numerical-breakdown";
    case ErrorKind::not_an_extension: return "not-an-extension";
    case ErrorKind::unsupported: return "unsupported";
    case ErrorKind::adapted_basis: return "adapted-basis";
    }
    return "unknown";
}

/// Every failure raised by the library carries one of the kinds above.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what)
        , kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline void require(bool condition, ErrorKind kind, const std::string& what)
{
    if (!condition) throw Error(kind, what);
}

inline long long binomial(int n, int k)
{
    if (k < 0 || k > n) return 0;
    long long result = 1;
    for (int i = 1; i <= k; ++i) result = result * (n - k + i) / i;
    return result;
}

} // namespace flatjac
