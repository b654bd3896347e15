#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "lensconf/chaincore/smith.hpp"
#include "lensconf/chaincore/sparse_matrix.hpp"

namespace lensconf::chaincore {

/// Incremental column-echelon basis over a field. Basis vectors have pairwise
/// distinct lowest entries ("lows"). With tracking enabled each basis vector
/// remembers how it was combined from the inserted vectors, which turns the
/// basis into a reusable solver for M·x = b.
template <typename Field>
class EchelonBasis
{
    static_assert(Field::is_field, "EchelonBasis needs a field");

public:
    using value_type = typename Field::value_type;
    using Vector = SparseVector<Field>;

    explicit EchelonBasis(Field field, bool track = false) : field_(std::move(field)), track_(track) {}

    Field const& field() const { return field_; }
    std::size_t rank() const { return basis_.size(); }
    std::vector<Vector> const& vectors() const { return basis_; }

    /// Inserts v (with an origin id used by the combination tracking).
    /// Returns true when v was independent of the current span. A vector
    /// inserted with `tracked = false` contributes nothing to combinations,
    /// so reductions report coordinates modulo its span.
    bool insert(Vector v, std::uint32_t origin = 0, bool tracked = true)
    {
        Vector combo;
        if (track_ && tracked)
            combo.push_back({origin, field_.one()});
        reduce_low_in_place(v, track_ ? &combo : nullptr);
        if (v.empty())
            return false;
        index_.emplace(v.back().index, basis_.size());
        basis_.push_back(std::move(v));
        if (track_)
            combos_.push_back(std::move(combo));
        return true;
    }

    /// Reduces by lows only. The remainder is zero iff v lies in the span.
    /// When tracking, `combination` receives coefficients over the origins
    /// with v - remainder = Σ combination[id]·inserted[id].
    Vector reduce(Vector v, Vector* combination = nullptr) const
    {
        Vector combo;
        reduce_low_in_place(v, combination ? &combo : nullptr);
        if (combination) {
            // reduce_low_in_place accumulates -(coefficients); flip sign
            *combination = scaled(field_, field_.neg(field_.one()), combo);
        }
        return v;
    }

    bool contains(Vector v) const { return reduce(std::move(v)).empty(); }

    /// Canonical representative of v modulo the span: no entry of the result
    /// sits at a pivot (low) index.
    Vector normal_form(Vector v) const
    {
        Vector out;
        while (!v.empty()) {
            auto low = v.back();
            auto it = index_.find(low.index);
            if (it == index_.end()) {
                out.push_back(low);
                v.pop_back();
                continue;
            }
            Vector const& b = basis_[it->second];
            value_type c = field_.neg(field_.mul(low.value, field_.inv(b.back().value)));
            v = add_scaled(field_, v, c, b);
        }
        std::reverse(out.begin(), out.end());
        return out;
    }

private:
    void reduce_low_in_place(Vector& v, Vector* combo) const
    {
        while (!v.empty()) {
            auto it = index_.find(v.back().index);
            if (it == index_.end())
                return;
            Vector const& b = basis_[it->second];
            value_type c = field_.neg(field_.mul(v.back().value, field_.inv(b.back().value)));
            v = add_scaled(field_, v, c, b);
            if (combo && track_)
                *combo = add_scaled(field_, *combo, c, combos_[it->second]);
        }
    }

    Field field_;
    bool track_;
    std::vector<Vector> basis_;
    std::vector<Vector> combos_;
    std::unordered_map<std::uint32_t, std::size_t> index_;
};

/// Rank of a matrix over a field by lowest-entry column reduction.
template <typename Field>
std::size_t field_rank(SparseMatrix<Field> const& m)
{
    EchelonBasis<Field> basis(m.ring());
    for (auto const& c : m.columns())
        basis.insert(c);
    return basis.rank();
}

namespace detail {

template <typename Ring>
void check_rhs(SparseMatrix<Ring> const& m, SparseVector<Ring> const& b)
{
    for (auto const& e : b)
        if (e.index >= m.rows())
            throw InputError("right-hand side index " + std::to_string(e.index) + " exceeds matrix rows " +
                             std::to_string(m.rows()));
}

} // namespace detail

/// Solves M·x = b exactly. Over ℤ the solution must be integral (decided via
/// the Smith form); over a field by elimination. Returns nullopt when no
/// solution exists.
template <typename Ring>
std::optional<SparseVector<Ring>> solve_linear(SparseMatrix<Ring> const& m, SparseVector<Ring> const& b)
{
    detail::check_rhs(m, b);
    Ring const& ring = m.ring();
    if constexpr (Ring::is_field) {
        EchelonBasis<Ring> basis(ring, true);
        for (std::uint32_t j = 0; j < m.cols(); ++j)
            basis.insert(m.column(j), j);
        SparseVector<Ring> combo;
        if (!basis.reduce(b, &combo).empty())
            return std::nullopt;
        return combo;
    } else {
        SmithForm snf = smith_normal_form(m);
        // S·y = U·b, x = V·y
        std::vector<mpz_class> ub(m.rows(), mpz_class(0));
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (auto const& e : b)
                ub[i] += snf.U(i, e.index) * e.value;
        std::vector<mpz_class> y(m.cols(), mpz_class(0));
        for (std::size_t i = 0; i < m.rows(); ++i) {
            mpz_class const d = i < m.cols() ? snf.S(i, i) : mpz_class(0);
            if (sgn(d) == 0) {
                if (sgn(ub[i]) != 0)
                    return std::nullopt;
                continue;
            }
            if (!mpz_divisible_p(ub[i].get_mpz_t(), d.get_mpz_t()))
                return std::nullopt;
            y[i] = ub[i] / d;
        }
        SparseVector<Ring> x;
        for (std::uint32_t j = 0; j < m.cols(); ++j) {
            mpz_class v = 0;
            for (std::size_t k = 0; k < m.cols(); ++k)
                if (sgn(y[k]) != 0)
                    v += snf.V(j, k) * y[k];
            if (sgn(v) != 0)
                x.push_back({j, v});
        }
        return x;
    }
}

template <typename Ring>
std::optional<SparseVector<Ring>> solve_linear(SparseMatrix<Ring> const& m,
                                               std::vector<typename Ring::value_type> const& b)
{
    if (b.size() != m.rows())
        throw InputError("right-hand side has length " + std::to_string(b.size()) + ", matrix has " +
                         std::to_string(m.rows()) + " rows");
    return solve_linear(m, sparse_from_dense<Ring>(m.ring(), b));
}

/// Basis of the kernel of M (a free basis over ℤ).
template <typename Ring>
std::vector<SparseVector<Ring>> kernel_basis(SparseMatrix<Ring> const& m)
{
    Ring const& ring = m.ring();
    std::vector<SparseVector<Ring>> out;
    if constexpr (Ring::is_field) {
        EchelonBasis<Ring> basis(ring, true);
        for (std::uint32_t j = 0; j < m.cols(); ++j) {
            SparseVector<Ring> combo;
            if (basis.reduce(m.column(j), &combo).empty()) {
                // column j = Σ combo·(earlier columns)
                auto k = scaled(ring, ring.neg(ring.one()), combo);
                k = add_scaled(ring, k, ring.one(), SparseVector<Ring>{{j, ring.one()}});
                out.push_back(std::move(k));
            } else {
                basis.insert(m.column(j), j);
            }
        }
    } else {
        SmithForm snf = smith_normal_form(m);
        for (std::size_t k = 0; k < m.cols(); ++k) {
            if (k < m.rows() && sgn(snf.S(k, k)) != 0)
                continue;
            SparseVector<Ring> v;
            for (std::uint32_t j = 0; j < m.cols(); ++j)
                if (sgn(snf.V(j, k)) != 0)
                    v.push_back({j, snf.V(j, k)});
            out.push_back(std::move(v));
        }
    }
    return out;
}

/// Decides whether v lies in the submodule (over ℤ) or subspace (over a field)
/// spanned by the generators; on success returns the coefficients.
template <typename Ring>
std::optional<std::vector<typename Ring::value_type>> submodule_membership(
    Ring const& ring,
    std::vector<std::vector<typename Ring::value_type>> const& generators,
    std::vector<typename Ring::value_type> const& v)
{
    for (auto const& g : generators)
        if (g.size() != v.size())
            throw InputError("submodule membership: generator length " + std::to_string(g.size()) +
                             " differs from vector length " + std::to_string(v.size()));
    SparseMatrix<Ring> m(ring, v.size(), generators.size());
    for (std::size_t j = 0; j < generators.size(); ++j)
        m.set_column(j, sparse_from_dense<Ring>(ring, generators[j]));
    auto x = solve_linear(m, v);
    if (!x)
        return std::nullopt;
    return dense_from_sparse(ring, *x, generators.size());
}

} // namespace lensconf::chaincore
