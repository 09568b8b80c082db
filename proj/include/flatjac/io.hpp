#pragma once

// JSON encoding of the library's inputs and outputs. Matrices are row-major
// arrays of arrays.

#include "bundle.hpp"
#include "core.hpp"
#include "exterior.hpp"
#include "kaehler.hpp"
#include "multiindex.hpp"
#include "siegel.hpp"
#include "torus_period.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace flatjac::io {

using json = nlohmann::json;

template <class Scalar>
json matrix_to_json(const Matrix<Scalar>& m)
{
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

template <class Scalar = double>
Matrix<Scalar> matrix_from_json(const json& j, const std::string& name)
{
    require(j.is_array() && !j.empty(), ErrorKind::invalid_arguments, name + " must be a non-empty array of rows");
    const Index rows = static_cast<Index>(j.size());
    require(j[0].is_array(), ErrorKind::invalid_arguments, name + " must be an array of rows");
    const Index cols = static_cast<Index>(j[0].size());
    Matrix<Scalar> m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        const auto& row = j[static_cast<std::size_t>(i)];
        require(row.is_array() && static_cast<Index>(row.size()) == cols, ErrorKind::invalid_arguments,
            name + " has ragged rows");
        for (Index k = 0; k < cols; ++k) {
            const auto& v = row[static_cast<std::size_t>(k)];
            if constexpr (std::is_integral_v<Scalar>) {
                require(v.is_number_integer(), ErrorKind::invalid_arguments, name + " entries must be integers");
            } else {
                require(v.is_number(), ErrorKind::invalid_arguments, name + " entries must be numbers");
            }
            m(i, k) = v.template get<Scalar>();
        }
    }
    return m;
}

inline int int_field(const json& j, const char* key)
{
    require(j.contains(key) && j.at(key).is_number_integer(), ErrorKind::invalid_arguments,
        std::string("missing integer field '") + key + "'");
    return j.at(key).get<int>();
}

inline const json& field(const json& j, const char* key)
{
    require(j.is_object() && j.contains(key), ErrorKind::invalid_arguments,
        std::string("missing field '") + key + "'");
    return j.at(key);
}

inline json parse(const std::string& text)
{
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::invalid_arguments, std::string("malformed JSON: ") + e.what());
    }
}

inline json read_file(const std::string& path)
{
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorKind::invalid_arguments, "cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

/// {n, L}
inline FrameMatrix frame_from_json(const json& j)
{
    const int n = int_field(j, "n");
    RealMatrix L = matrix_from_json(field(j, "L"), "L");
    require(L.rows() == n && L.cols() == n, ErrorKind::invalid_arguments, "L is not n x n");
    return FrameMatrix(std::move(L));
}

inline json frame_to_json(const FrameMatrix& frame)
{
    return {{"n", frame.n()}, {"L", matrix_to_json(frame.matrix())}};
}

/// {N, X, Y}
inline json period_to_json(const ComplexMatrix& Z)
{
    return {{"N", Z.rows()}, {"X", matrix_to_json(RealMatrix(Z.real()))},
        {"Y", matrix_to_json(RealMatrix(Z.imag()))}};
}

inline ComplexMatrix period_from_json(const json& j)
{
    const int N = int_field(j, "N");
    const RealMatrix X = matrix_from_json(field(j, "X"), "X");
    const RealMatrix Y = matrix_from_json(field(j, "Y"), "Y");
    require(X.rows() == N && X.cols() == N && Y.rows() == N && Y.cols() == N,
        ErrorKind::invalid_arguments, "X and Y must be N x N");
    ComplexMatrix Z(N, N);
    Z.real() = X;
    Z.imag() = Y;
    return Z;
}

inline json membership_to_json(const MembershipReport& r)
{
    return {{"ok", r.ok}, {"symmetry_defect", r.symmetry_defect}, {"min_imag_eigenvalue", r.min_imag_eigenvalue}};
}

/// {n, P} or {n, g}
inline RealMatrix metric_from_json(const json& j)
{
    const int n = int_field(j, "n");
    const char* key = j.contains("P") ? "P" : "g";
    RealMatrix P = matrix_from_json(field(j, key), key);
    require(P.rows() == n && P.cols() == n, ErrorKind::invalid_arguments, "metric is not n x n");
    return P;
}

inline json reduction_to_json(const ConformalReduction& r)
{
    return {{"c", r.scale}, {"T", matrix_to_json(r.rep.matrix())}};
}

/// {n, m, ordering, coeffs}
inline json form_to_json(const MForm<double>& form, Ordering ordering)
{
    const auto& table = form.table();
    RealVector coeffs = form.coeffs();
    if (ordering != table.canonical_ordering()) {
        coeffs.setZero();
        for (Index i = 0; i < table.dimension(); ++i) {
            const auto loc = table.locate(table.basis()[static_cast<std::size_t>(i)].entries(), ordering);
            coeffs(loc->position) += loc->sign * form.coeffs()(i);
        }
    }
    return {{"n", form.n()}, {"m", form.degree()}, {"ordering", to_string(ordering)},
        {"coeffs", std::vector<double>(coeffs.data(), coeffs.data() + coeffs.size())}};
}

inline MForm<double> form_from_json(const json& j)
{
    const int n = int_field(j, "n");
    const int m = int_field(j, "m");
    auto table = make_table(n, m);
    const std::string ordering = j.value("ordering", std::string(to_string(table->canonical_ordering())));
    require(ordering == "lex" || ordering == "symlex", ErrorKind::invalid_arguments, "unknown ordering");
    const Ordering ord = ordering == "lex" ? Ordering::lex : Ordering::symlex;
    const auto values = field(j, "coeffs").get<std::vector<double>>();
    require(static_cast<Index>(values.size()) == table->dimension(), ErrorKind::invalid_arguments,
        "coeffs must have C(n, m) entries");
    auto form = MForm<double>::zero(table);
    const auto& source = table->basis(ord);
    for (std::size_t i = 0; i < source.size(); ++i) {
        const auto loc = table->locate(source[i]);
        form.coeffs()(loc->position) += loc->sign * values[i];
    }
    return form;
}

/// {n, J, g}
inline FlatKaehlerTorus torus_from_json(const json& j)
{
    const int n = int_field(j, "n");
    RealMatrix J = matrix_from_json(field(j, "J"), "J");
    RealMatrix g = matrix_from_json(field(j, "g"), "g");
    require(J.rows() == n && g.rows() == n, ErrorKind::invalid_arguments, "J and g must be n x n");
    return FlatKaehlerTorus(std::move(J), std::move(g), 1e-10);
}

/// {M: frame, N: frame, lambda: {coeffs}} with integer coefficients over the
/// symmetric lexicographic basis of N.
inline ProductTorusData product_from_json(const json& j)
{
    auto frame_m = frame_from_json(field(j, "M"));
    auto frame_n = frame_from_json(field(j, "N"));
    const auto& lambda = field(j, "lambda");
    const auto& coeffs = lambda.is_object() ? field(lambda, "coeffs") : lambda;
    require(coeffs.is_array(), ErrorKind::invalid_arguments, "lambda coeffs must be an array");
    IntVector l(static_cast<Index>(coeffs.size()));
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        require(coeffs[i].is_number_integer(), ErrorKind::invalid_arguments, "lambda must be integral");
        l(static_cast<Index>(i)) = coeffs[i].get<long long>();
    }
    return ProductTorusData(std::move(frame_m), std::move(frame_n), std::move(l));
}

/// {alpha, beta, gamma, delta}
inline json symplectic_to_json(const SymplecticInt& s)
{
    return {{"alpha", matrix_to_json(s.alpha())}, {"beta", matrix_to_json(s.beta())},
        {"gamma", matrix_to_json(s.gamma())}, {"delta", matrix_to_json(s.delta())}};
}

inline SymplecticInt symplectic_from_json(const json& j)
{
    return SymplecticInt(matrix_from_json<long long>(field(j, "alpha"), "alpha"),
        matrix_from_json<long long>(field(j, "beta"), "beta"),
        matrix_from_json<long long>(field(j, "gamma"), "gamma"),
        matrix_from_json<long long>(field(j, "delta"), "delta"));
}

inline json index_table_to_json(const IndexTable& table)
{
    json basis = json::array();
    for (const auto& I : table.basis()) basis.push_back(I.entries());
    json out = {{"n", table.n()}, {"m", table.m()}, {"ordering", to_string(table.canonical_ordering())},
        {"basis", basis}};
    if (table.has_symlex()) out["N"] = table.half_dimension();
    return out;
}

} // namespace flatjac::io
