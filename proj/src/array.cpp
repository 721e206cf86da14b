#include "array.hpp"

#include <algorithm>
#include <set>

#include "error.hpp"

namespace aadnn {

namespace {

void accumulate(Array::Rows& rows, const Key& r, const Key& c, double v, const Semiring& s) {
    auto [it, inserted] = rows[r].try_emplace(c, s.add_identity);
    it->second = inserted ? v : s.add(it->second, v);
}

void prune_background(Array::Rows& rows, const Semiring& s) {
    for (auto& [r, row] : rows)
        for (auto it = row.begin(); it != row.end();)
            it = is_background(s, it->second) ? row.erase(it) : std::next(it);
}

bool all_distinct(const std::vector<Key>& keys) {
    std::set<Key> seen(keys.begin(), keys.end());
    return seen.size() == keys.size();
}

} // namespace

Array Array::from_rows(Rows rows) {
    Array a;
    for (auto it = rows.begin(); it != rows.end();)
        it = it->second.empty() ? rows.erase(it) : std::next(it);
    for (const auto& [r, row] : rows) a.nnz_ += row.size();
    a.rows_ = std::move(rows);
    return a;
}

const Array::Row* Array::row(const Key& r) const {
    auto it = rows_.find(r);
    return it == rows_.end() ? nullptr : &it->second;
}

const double* Array::find(const Key& r, const Key& c) const {
    const Row* row = this->row(r);
    if (!row) return nullptr;
    auto it = row->find(c);
    return it == row->end() ? nullptr : &it->second;
}

double Array::at_or(const Key& r, const Key& c, double fallback) const {
    const double* v = find(r, c);
    return v ? *v : fallback;
}

Array build(const std::vector<Entry>& entries, const Semiring& s) {
    Array::Rows rows;
    for (const auto& [r, c, v] : entries) accumulate(rows, r, c, v, s);
    prune_background(rows, s);
    return Array::from_rows(std::move(rows));
}

Array identity_like(const std::vector<Key>& row_keys, const std::vector<Key>& col_keys) {
    if (row_keys.size() != col_keys.size())
        raise(Errc::length_mismatch, "identity_like: key lists differ in length");
    if (!all_distinct(row_keys) && !all_distinct(col_keys))
        raise(Errc::invalid_argument,
              "identity_like: need distinct row keys or distinct column keys");
    Array::Rows rows;
    for (size_t i = 0; i < row_keys.size(); ++i) rows[row_keys[i]][col_keys[i]] = 1.0;
    return Array::from_rows(std::move(rows));
}

Array identity(const std::vector<Key>& keys) { return identity_like(keys, keys); }

Array ones(const std::vector<Key>& row_keys, const std::vector<Key>& col_keys) {
    if (row_keys.empty() || col_keys.empty())
        raise(Errc::invalid_argument, "ones: key lists must be non-empty");
    Array::Rows rows;
    for (const Key& r : row_keys)
        for (const Key& c : col_keys) rows[r][c] = 1.0;
    return Array::from_rows(std::move(rows));
}

Array ewise_add(const Array& a, const Array& b, const Semiring& s) {
    Array::Rows rows = a.rows();
    for (const auto& [r, brow] : b.rows())
        for (const auto& [c, v] : brow) accumulate(rows, r, c, v, s);
    prune_background(rows, s);
    return Array::from_rows(std::move(rows));
}

Array ewise_mult(const Array& a, const Array& b, const Semiring& s) {
    Array::Rows rows;
    for (const auto& [r, arow] : a.rows()) {
        const Array::Row* brow = b.row(r);
        if (!brow) continue;
        for (const auto& [c, av] : arow) {
            auto it = brow->find(c);
            if (it == brow->end()) continue;
            double v = s.mul(av, it->second);
            if (!is_background(s, v)) rows[r][c] = v;
        }
    }
    return Array::from_rows(std::move(rows));
}

Array matmul(const Array& a, const Array& b, const Semiring& s) {
    Array::Rows rows;
    for (const auto& [r, arow] : a.rows()) {
        Array::Row out;
        for (const auto& [k, av] : arow) {
            const Array::Row* brow = b.row(k);
            if (!brow) continue;
            for (const auto& [c, bv] : *brow) {
                auto [it, inserted] = out.try_emplace(c, s.add_identity);
                it->second = s.add(it->second, s.mul(av, bv));
            }
        }
        for (auto it = out.begin(); it != out.end();)
            it = is_background(s, it->second) ? out.erase(it) : std::next(it);
        if (!out.empty()) rows[r] = std::move(out);
    }
    return Array::from_rows(std::move(rows));
}

Array transpose(const Array& a) {
    Array::Rows rows;
    for (const auto& [r, row] : a.rows())
        for (const auto& [c, v] : row) rows[c][r] = v;
    return Array::from_rows(std::move(rows));
}

Array kron(const Array& a, const Array& b, const Semiring& s, const std::string& sep) {
    Array::Rows rows;
    for (const auto& [ra, arow] : a.rows())
        for (const auto& [ca, av] : arow)
            for (const auto& [rb, brow] : b.rows())
                for (const auto& [cb, bv] : brow)
                    accumulate(rows, ra + sep + rb, ca + sep + cb, s.mul(av, bv), s);
    prune_background(rows, s);
    return Array::from_rows(std::move(rows));
}

Array zero_norm(const Array& a) {
    Array::Rows rows = a.rows();
    for (auto& [r, row] : rows)
        for (auto& [c, v] : row) v = 1.0;
    return Array::from_rows(std::move(rows));
}

std::vector<Key> nonzero_rows(const Array& a) {
    std::vector<Key> keys;
    keys.reserve(a.rows().size());
    for (const auto& [r, row] : a.rows()) keys.push_back(r);
    return keys;
}

std::vector<Key> nonzero_cols(const Array& a) {
    std::set<Key> cols;
    for (const auto& [r, row] : a.rows())
        for (const auto& [c, v] : row) cols.insert(c);
    return {cols.begin(), cols.end()};
}

Array select(const Array& a, const std::optional<std::vector<Key>>& row_keys,
             const std::optional<std::vector<Key>>& col_keys) {
    std::optional<std::set<Key>> rset, cset;
    if (row_keys) rset.emplace(row_keys->begin(), row_keys->end());
    if (col_keys) cset.emplace(col_keys->begin(), col_keys->end());
    Array::Rows rows;
    for (const auto& [r, row] : a.rows()) {
        if (rset && !rset->count(r)) continue;
        for (const auto& [c, v] : row) {
            if (cset && !cset->count(c)) continue;
            rows[r][c] = v;
        }
    }
    return Array::from_rows(std::move(rows));
}

} // namespace aadnn
