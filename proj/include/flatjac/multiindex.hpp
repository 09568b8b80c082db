#pragma once

// Degree-m multi-indices in {1..n}: lexicographic enumeration, permutation
// signs, the even complement I -> I~ and the symmetric lexicographic basis
// of the middle exterior power. Indices are 1-based everywhere.

#include "core.hpp"

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace flatjac {

class MultiIndex {
public:
    MultiIndex() = default;
    MultiIndex(std::initializer_list<int> entries)
        : entries_(entries)
    {
    }
    explicit MultiIndex(std::vector<int> entries)
        : entries_(std::move(entries))
    {
    }

    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    int operator[](std::size_t i) const { return entries_[i]; }
    auto begin() const noexcept { return entries_.begin(); }
    auto end() const noexcept { return entries_.end(); }
    const std::vector<int>& entries() const noexcept { return entries_; }

    bool contains(int index) const
    {
        return std::find(entries_.begin(), entries_.end(), index) != entries_.end();
    }

    bool is_strictly_increasing() const
    {
        return std::adjacent_find(entries_.begin(), entries_.end(),
                   [](int a, int b) { return a >= b; })
            == entries_.end();
    }

    MultiIndex sorted() const
    {
        auto copy = entries_;
        std::sort(copy.begin(), copy.end());
        return MultiIndex(std::move(copy));
    }

    /// Bit i-1 set for every entry i.
    std::uint64_t mask() const
    {
        std::uint64_t bits = 0;
        for (int e : entries_) bits |= std::uint64_t {1} << (e - 1);
        return bits;
    }

    /// Number of entries shared with `other`.
    int common_count(const MultiIndex& other) const
    {
        return std::popcount(mask() & other.mask());
    }

    std::string to_string() const
    {
        std::string s = "(";
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(entries_[i]);
        }
        return s + ")";
    }

    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
    friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;

private:
    std::vector<int> entries_;
};

/// Parity sign of the permutation sorting `seq`; 0 when an entry repeats.
inline int sequence_sign(std::span<const int> seq)
{
    int inversions = 0;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        for (std::size_t j = i + 1; j < seq.size(); ++j) {
            if (seq[i] == seq[j]) return 0;
            if (seq[i] > seq[j]) ++inversions;
        }
    }
    return inversions % 2 ? -1 : 1;
}

/// Sign of the concatenation (I, J) as a permutation of its sorted entries.
inline int concat_sign(const MultiIndex& I, const MultiIndex& J)
{
    std::vector<int> seq(I.begin(), I.end());
    seq.insert(seq.end(), J.begin(), J.end());
    return sequence_sign(seq);
}

/// Sign of the permutation taking (I, J) to (1, ..., n); 0 on a shared index.
inline int perm_sign(const MultiIndex& I, const MultiIndex& J, int n)
{
    require(static_cast<int>(I.size() + J.size()) == n, ErrorKind::invalid_arguments,
        "perm_sign needs |I| + |J| = n");
    for (int e : I) require(e >= 1 && e <= n, ErrorKind::invalid_arguments, "index out of range");
    for (int e : J) require(e >= 1 && e <= n, ErrorKind::invalid_arguments, "index out of range");
    return concat_sign(I, J);
}

inline std::vector<MultiIndex> lex_multiindices(int n, int m)
{
    require(m >= 1 && m <= n, ErrorKind::invalid_arguments,
        "lex_multiindices needs 1 <= m <= n");
    std::vector<MultiIndex> out;
    out.reserve(static_cast<std::size_t>(binomial(n, m)));
    std::vector<int> current(m);
    for (int i = 0; i < m; ++i) current[i] = i + 1;
    while (true) {
        out.emplace_back(current);
        int pos = m - 1;
        while (pos >= 0 && current[pos] == n - m + pos + 1) --pos;
        if (pos < 0) break;
        ++current[pos];
        for (int i = pos + 1; i < m; ++i) current[i] = current[i - 1] + 1;
    }
    return out;
}

/// Sorted complement of I in {1..n}.
inline MultiIndex complement(const MultiIndex& I, int n)
{
    std::vector<int> rest;
    for (int i = 1; i <= n; ++i)
        if (!I.contains(i)) rest.push_back(i);
    return MultiIndex(std::move(rest));
}

/// The even complement I~ of a multi-index containing 1: the sorted
/// complement, with its last two entries swapped when (I, complement) is odd.
inline MultiIndex tilde(const MultiIndex& I, int n)
{
    require(I.contains(1), ErrorKind::invalid_arguments, "tilde needs 1 in I");
    require(2 * static_cast<int>(I.size()) == n, ErrorKind::invalid_arguments,
        "tilde needs n = 2|I|");
    require(I.is_strictly_increasing(), ErrorKind::invalid_arguments, "I must be sorted");
    auto rest = complement(I, n).entries();
    if (perm_sign(I, MultiIndex(rest), n) < 0) {
        // |complement| >= 2 here: for |I| = 1 (n = 2) the sign is always +1.
        std::swap(rest[rest.size() - 2], rest[rest.size() - 1]);
    }
    return MultiIndex(std::move(rest));
}

enum class Ordering { lex, symlex };

inline const char* to_string(Ordering ordering)
{
    return ordering == Ordering::lex ? "lex" : "symlex";
}

/// Immutable bookkeeping of the degree-m coordinate basis of the exterior
/// algebra on R^n. The canonical basis is the symmetric lexicographic one in
/// the middle degree (n = 2m) and the lexicographic one otherwise.
class IndexTable {
public:
    struct Location {
        Index position;
        int sign;
    };

    IndexTable(int n, int m)
        : n_(n)
        , m_(m)
    {
        require(n >= 1 && n <= 62, ErrorKind::invalid_arguments, "n out of range");
        require(m >= 0 && m <= n, ErrorKind::invalid_arguments, "need 0 <= m <= n");
        if (m == 0) {
            lex_.emplace_back();
        } else {
            lex_ = lex_multiindices(n, m);
        }
        for (std::size_t i = 0; i < lex_.size(); ++i)
            lex_position_.emplace(lex_[i].mask(), static_cast<Index>(i));

        if (2 * m == n) {
            for (const auto& I : lex_)
                if (I.contains(1)) script_i_.push_back(I);
            symlex_ = script_i_;
            for (const auto& I : script_i_) {
                tildes_.push_back(tilde(I, n));
                symlex_.push_back(tildes_.back());
            }
            for (std::size_t i = 0; i < symlex_.size(); ++i) {
                symlex_position_.emplace(symlex_[i].mask(),
                    Location {static_cast<Index>(i), sequence_sign(symlex_[i].entries())});
            }
        }
    }

    int n() const noexcept { return n_; }
    int m() const noexcept { return m_; }
    bool has_symlex() const noexcept { return 2 * m_ == n_; }
    Index dimension() const noexcept { return static_cast<Index>(lex_.size()); }

    /// N = C(n, m) / 2, only for the middle degree.
    Index half_dimension() const
    {
        require_symlex();
        return static_cast<Index>(script_i_.size());
    }

    const std::vector<MultiIndex>& lex() const noexcept { return lex_; }
    const std::vector<MultiIndex>& script_i() const
    {
        require_symlex();
        return script_i_;
    }
    const std::vector<MultiIndex>& tildes() const
    {
        require_symlex();
        return tildes_;
    }
    const std::vector<MultiIndex>& symlex() const
    {
        require_symlex();
        return symlex_;
    }

    const std::vector<MultiIndex>& basis(Ordering ordering) const
    {
        return ordering == Ordering::lex ? lex_ : symlex();
    }
    Ordering canonical_ordering() const noexcept
    {
        return has_symlex() ? Ordering::symlex : Ordering::lex;
    }
    const std::vector<MultiIndex>& basis() const { return basis(canonical_ordering()); }

    /// Position of dx_{seq} in the chosen basis together with the sign s such
    /// that dx_{seq} = s * basis[position]. Empty when seq repeats an index.
    std::optional<Location> locate(std::span<const int> seq, Ordering ordering) const
    {
        if (static_cast<int>(seq.size()) != m_) return std::nullopt;
        std::uint64_t bits = 0;
        for (int e : seq) {
            if (e < 1 || e > n_) return std::nullopt;
            const std::uint64_t bit = std::uint64_t {1} << (e - 1);
            if (bits & bit) return std::nullopt;
            bits |= bit;
        }
        const int s = sequence_sign(seq);
        if (ordering == Ordering::lex) {
            return Location {lex_position_.at(bits), s};
        }
        require_symlex();
        const auto& loc = symlex_position_.at(bits);
        return Location {loc.position, s * loc.sign};
    }
    std::optional<Location> locate(std::span<const int> seq) const
    {
        return locate(seq, canonical_ordering());
    }
    std::optional<Location> locate(const MultiIndex& I) const
    {
        return locate(std::span<const int>(I.entries()));
    }

private:
    void require_symlex() const
    {
        require(has_symlex(), ErrorKind::invalid_arguments,
            "symmetric lexicographic basis needs n = 2m");
    }

    int n_;
    int m_;
    std::vector<MultiIndex> lex_;
    std::vector<MultiIndex> script_i_;
    std::vector<MultiIndex> tildes_;
    std::vector<MultiIndex> symlex_;
    std::unordered_map<std::uint64_t, Index> lex_position_;
    std::unordered_map<std::uint64_t, Location> symlex_position_;
};

inline IndexTable build_index_table(int n, int m) { return IndexTable(n, m); }

/// Table for the symmetric lexicographic basis; rejects n != 2m.
inline IndexTable build_middle_table(int n)
{
    require(n >= 2 && n % 2 == 0, ErrorKind::invalid_arguments,
        "the symmetric lexicographic basis needs even n");
    return IndexTable(n, n / 2);
}

} // namespace flatjac
