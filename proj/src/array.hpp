#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "semiring.hpp"

namespace aadnn {

using Key = std::string;

// Sparse string-keyed 2-D associative array of doubles. Absent entries read as
// the ambient semiring's add-identity; operations never store that value.
// Row-major nested ordered maps give deterministic iteration everywhere.
class Array {
public:
    using Row = std::map<Key, double>;
    using Rows = std::map<Key, Row>;

    Array() = default;

    // Takes ownership of a row map, dropping empty rows and counting entries.
    static Array from_rows(Rows rows);

    bool empty() const { return rows_.empty(); }
    size_t nnz() const { return nnz_; }
    const Rows& rows() const { return rows_; }

    const Row* row(const Key& r) const;
    const double* find(const Key& r, const Key& c) const;
    double at_or(const Key& r, const Key& c, double fallback) const;

    bool operator==(const Array&) const = default;

private:
    Rows rows_;
    size_t nnz_ = 0;
};

using Entry = std::tuple<Key, Key, double>;

// Builds from (row, col, value) triples; duplicate coordinates fold with the
// semiring add in input order. Values equal to the add-identity are elided.
Array build(const std::vector<Entry>& entries, const Semiring& s);

// Literal-1 entries at (row_keys[i], col_keys[i]). Lists must have equal
// length and at least one side must be duplicate-free.
Array identity_like(const std::vector<Key>& row_keys, const std::vector<Key>& col_keys);
Array identity(const std::vector<Key>& keys);

// Literal-1 entries at every (r, c) pair; both lists must be non-empty.
Array ones(const std::vector<Key>& row_keys, const std::vector<Key>& col_keys);

Array ewise_add(const Array& a, const Array& b, const Semiring& s);
Array ewise_mult(const Array& a, const Array& b, const Semiring& s);

// C(k1,k2) = add over k of A(k1,k) mul B(k,k2); accumulation folds in
// ascending inner-key order starting from the add-identity.
Array matmul(const Array& a, const Array& b, const Semiring& s);

Array transpose(const Array& a);

// Kronecker product with plain key concatenation (rowA+sep+rowB and likewise
// for columns). Distinct operand pairs that concatenate to the same output
// coordinate fold with the semiring add.
Array kron(const Array& a, const Array& b, const Semiring& s, const std::string& sep = "");

// Same support, every stored value replaced by literal 1.
Array zero_norm(const Array& a);

std::vector<Key> nonzero_rows(const Array& a);
std::vector<Key> nonzero_cols(const Array& a);

// Restriction to the given key sets; nullopt means keep all.
Array select(const Array& a, const std::optional<std::vector<Key>>& row_keys,
             const std::optional<std::vector<Key>>& col_keys);

} // namespace aadnn
