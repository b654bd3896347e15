#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "lensconf/chaincore/ring.hpp"
#include "lensconf/error.hpp"

namespace lensconf::chaincore {

template <typename Value>
struct Entry
{
    std::uint32_t index;
    Value value;

    friend bool operator==(Entry const&, Entry const&) = default;
};

/// Sparse column: entries sorted by index, no stored zeros.
template <typename Ring>
using SparseVector = std::vector<Entry<typename Ring::value_type>>;

/// Returns a + c·b.
template <typename Ring>
SparseVector<Ring> add_scaled(Ring const& ring,
                              SparseVector<Ring> const& a,
                              typename Ring::value_type const& c,
                              SparseVector<Ring> const& b)
{
    SparseVector<Ring> out;
    out.reserve(a.size() + b.size());
    auto ia = a.begin(), ib = b.begin();
    while (ia != a.end() || ib != b.end()) {
        if (ib == b.end() || (ia != a.end() && ia->index < ib->index)) {
            out.push_back(*ia++);
        } else if (ia == a.end() || ib->index < ia->index) {
            auto v = ring.mul(c, ib->value);
            if (!ring.is_zero(v))
                out.push_back({ib->index, std::move(v)});
            ++ib;
        } else {
            auto v = ring.add(ia->value, ring.mul(c, ib->value));
            if (!ring.is_zero(v))
                out.push_back({ia->index, std::move(v)});
            ++ia;
            ++ib;
        }
    }
    return out;
}

template <typename Ring>
SparseVector<Ring> scaled(Ring const& ring, typename Ring::value_type const& c, SparseVector<Ring> const& v)
{
    SparseVector<Ring> out;
    if (ring.is_zero(c))
        return out;
    out.reserve(v.size());
    for (auto const& e : v) {
        auto x = ring.mul(c, e.value);
        if (!ring.is_zero(x))
            out.push_back({e.index, std::move(x)});
    }
    return out;
}

template <typename Ring>
typename Ring::value_type coefficient(Ring const& ring, SparseVector<Ring> const& v, std::uint32_t index)
{
    auto it = std::lower_bound(v.begin(), v.end(), index,
                               [](auto const& e, std::uint32_t i) { return e.index < i; });
    if (it != v.end() && it->index == index)
        return it->value;
    return ring.zero();
}

template <typename Ring>
SparseVector<Ring> sparse_from_dense(Ring const& ring, std::span<typename Ring::value_type const> dense)
{
    SparseVector<Ring> out;
    for (std::uint32_t i = 0; i < dense.size(); ++i)
        if (!ring.is_zero(dense[i]))
            out.push_back({i, dense[i]});
    return out;
}

template <typename Ring>
std::vector<typename Ring::value_type> dense_from_sparse(Ring const& ring, SparseVector<Ring> const& v, std::size_t size)
{
    std::vector<typename Ring::value_type> out(size, ring.zero());
    for (auto const& e : v)
        out.at(e.index) = e.value;
    return out;
}

/// Row-major dense matrix, used for small residual problems.
template <typename Value>
struct DenseMatrix
{
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Value> data;

    DenseMatrix() = default;
    DenseMatrix(std::size_t r, std::size_t c, Value const& fill) : rows(r), cols(c), data(r * c, fill) {}

    Value& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    Value const& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    friend bool operator==(DenseMatrix const&, DenseMatrix const&) = default;
};

template <typename Ring>
DenseMatrix<typename Ring::value_type> dense_product(Ring const& ring,
                                                     DenseMatrix<typename Ring::value_type> const& a,
                                                     DenseMatrix<typename Ring::value_type> const& b)
{
    if (a.cols != b.rows)
        throw InputError("dense product: dimension mismatch");
    DenseMatrix<typename Ring::value_type> c(a.rows, b.cols, ring.zero());
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            if (ring.is_zero(a(i, k)))
                continue;
            for (std::size_t j = 0; j < b.cols; ++j)
                if (!ring.is_zero(b(k, j)))
                    c(i, j) = ring.add(c(i, j), ring.mul(a(i, k), b(k, j)));
        }
    return c;
}

/// Column-major sparse matrix over an exact ring. Column j lists the image of
/// basis vector j, which for boundary matrices is the boundary of simplex j.
template <typename Ring>
class SparseMatrix
{
public:
    using ring_type = Ring;
    using value_type = typename Ring::value_type;
    using column_type = SparseVector<Ring>;

    SparseMatrix(Ring ring, std::size_t rows, std::size_t cols)
        : ring_(std::move(ring)), rows_(rows), columns_(cols)
    {
    }

    /// Builds from (row, col, value) triples; zero values are dropped,
    /// duplicate positions rejected.
    static SparseMatrix from_triplets(Ring ring,
                                      std::size_t rows,
                                      std::size_t cols,
                                      std::vector<std::tuple<std::uint32_t, std::uint32_t, value_type>> triplets)
    {
        SparseMatrix m(std::move(ring), rows, cols);
        std::sort(triplets.begin(), triplets.end(), [](auto const& x, auto const& y) {
            return std::tie(std::get<1>(x), std::get<0>(x)) < std::tie(std::get<1>(y), std::get<0>(y));
        });
        for (std::size_t k = 0; k < triplets.size(); ++k) {
            auto const& [r, c, v] = triplets[k];
            if (r >= rows || c >= cols)
                throw InputError("matrix entry (" + std::to_string(r) + ", " + std::to_string(c) + ") out of range");
            if (k > 0 && std::get<0>(triplets[k - 1]) == r && std::get<1>(triplets[k - 1]) == c)
                throw InputError("duplicate matrix entry at (" + std::to_string(r) + ", " + std::to_string(c) + ")");
            if (!m.ring_.is_zero(v))
                m.columns_[c].push_back({r, v});
        }
        return m;
    }

    static SparseMatrix identity(Ring ring, std::size_t n)
    {
        SparseMatrix m(ring, n, n);
        for (std::uint32_t i = 0; i < n; ++i)
            m.columns_[i].push_back({i, ring.one()});
        return m;
    }

    static SparseMatrix from_dense(Ring ring, DenseMatrix<value_type> const& d)
    {
        SparseMatrix m(ring, d.rows, d.cols);
        for (std::size_t j = 0; j < d.cols; ++j)
            for (std::uint32_t i = 0; i < d.rows; ++i)
                if (!ring.is_zero(d(i, j)))
                    m.columns_[j].push_back({i, d(i, j)});
        return m;
    }

    Ring const& ring() const { return ring_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return columns_.size(); }

    column_type const& column(std::size_t j) const { return columns_.at(j); }
    std::vector<column_type> const& columns() const { return columns_; }

    /// Replaces column j; the entries must be sorted, in range and nonzero.
    void set_column(std::size_t j, column_type col)
    {
        for (std::size_t k = 0; k < col.size(); ++k) {
            if (col[k].index >= rows_)
                throw InputError("column entry out of range");
            if (k > 0 && col[k - 1].index >= col[k].index)
                throw InputError("column entries not strictly increasing");
            if (ring_.is_zero(col[k].value))
                throw InputError("explicit zero stored in sparse column");
        }
        columns_.at(j) = std::move(col);
    }

    std::size_t nonzeros() const
    {
        std::size_t n = 0;
        for (auto const& c : columns_)
            n += c.size();
        return n;
    }

    bool is_zero() const
    {
        return std::all_of(columns_.begin(), columns_.end(), [](auto const& c) { return c.empty(); });
    }

    value_type at(std::size_t i, std::size_t j) const
    {
        return coefficient(ring_, columns_.at(j), static_cast<std::uint32_t>(i));
    }

    column_type apply(column_type const& x) const
    {
        column_type out;
        for (auto const& e : x) {
            if (e.index >= cols())
                throw InputError("vector length exceeds matrix columns");
            out = add_scaled(ring_, out, e.value, columns_[e.index]);
        }
        return out;
    }

    SparseMatrix transpose() const
    {
        SparseMatrix t(ring_, cols(), rows_);
        for (std::uint32_t j = 0; j < cols(); ++j)
            for (auto const& e : columns_[j])
                t.columns_[e.index].push_back({j, e.value});
        return t;
    }

    /// this · other
    SparseMatrix multiply(SparseMatrix const& other) const
    {
        if (cols() != other.rows())
            throw InputError("matrix product: dimension mismatch (" + std::to_string(cols()) + " vs " +
                             std::to_string(other.rows()) + ")");
        SparseMatrix out(ring_, rows_, other.cols());
        for (std::size_t j = 0; j < other.cols(); ++j)
            out.columns_[j] = apply(other.columns_[j]);
        return out;
    }

    DenseMatrix<value_type> to_dense() const
    {
        DenseMatrix<value_type> d(rows_, cols(), ring_.zero());
        for (std::size_t j = 0; j < cols(); ++j)
            for (auto const& e : columns_[j])
                d(e.index, j) = e.value;
        return d;
    }

    friend bool operator==(SparseMatrix const& a, SparseMatrix const& b)
    {
        return a.rows_ == b.rows_ && a.columns_ == b.columns_;
    }

private:
    Ring ring_;
    std::size_t rows_;
    std::vector<column_type> columns_;
};

} // namespace lensconf::chaincore
