#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "lensconf/chaincore/linear.hpp"
#include "lensconf/simplicial/cochain.hpp"
#include "lensconf/simplicial/maps.hpp"

namespace lensconf::cupmassey {

using chaincore::SparseMatrix;
using chaincore::SparseVector;
using simplicial::Cochain;

/// Finite differential graded algebra concentrated in degrees 0..top.
/// Elements are homogeneous; their coefficients are indexed by position
/// inside the degree.
template <typename Ring>
class DGA
{
public:
    using Element = Cochain<Ring>;
    using value_type = typename Ring::value_type;
    using Product = std::function<Element(Element const&, Element const&)>;

    /// `differentials[d]` is δ : A^d → A^{d+1} (dims[d+1] × dims[d]).
    DGA(Ring ring,
        std::vector<std::size_t> dims,
        std::vector<SparseMatrix<Ring>> differentials,
        Product product,
        Element unit,
        std::vector<std::vector<std::string>> names = {})
        : ring_(std::move(ring)), dims_(std::move(dims)), diff_(std::move(differentials)), product_(std::move(product)),
          unit_(std::move(unit)), names_(std::move(names))
    {
        if (dims_.empty())
            throw InputError("DGA needs at least degree 0");
        if (diff_.size() + 1 != dims_.size())
            throw InputError("DGA: expected " + std::to_string(dims_.size() - 1) + " differentials");
        for (std::size_t d = 0; d < diff_.size(); ++d)
            if (diff_[d].rows() != dims_[d + 1] || diff_[d].cols() != dims_[d])
                throw InputError("DGA: differential in degree " + std::to_string(d) + " has wrong shape");
        for (std::size_t d = 0; d + 1 < diff_.size(); ++d)
            if (!diff_[d + 1].multiply(diff_[d]).is_zero())
                throw InputError("DGA: d∘d ≠ 0 starting in degree " + std::to_string(d));
        if (unit_.degree != 0)
            throw InputError("DGA: unit must have degree 0");
    }

    Ring const& ring() const { return ring_; }
    int top_degree() const { return static_cast<int>(dims_.size()) - 1; }
    std::size_t dim(int d) const
    {
        return d < 0 || d > top_degree() ? 0 : dims_[static_cast<std::size_t>(d)];
    }
    std::size_t total_dim() const
    {
        std::size_t n = 0;
        for (auto x : dims_)
            n += x;
        return n;
    }

    /// δ out of degree d; empty matrix past the top.
    SparseMatrix<Ring> differential(int d) const
    {
        if (d >= 0 && d < top_degree())
            return diff_[static_cast<std::size_t>(d)];
        return SparseMatrix<Ring>(ring_, dim(d + 1), dim(d));
    }

    Element d(Element const& x) const
    {
        if (x.degree >= top_degree())
            return {x.degree + 1, {}};
        return {x.degree + 1, diff_[static_cast<std::size_t>(x.degree)].apply(x.values)};
    }

    Element mul(Element const& a, Element const& b) const
    {
        if (a.degree + b.degree > top_degree() || a.values.empty() || b.values.empty())
            return {a.degree + b.degree, {}};
        return product_(a, b);
    }

    Element const& unit() const { return unit_; }

    Element basis(int d, std::uint32_t i) const { return {d, {{i, ring_.one()}}}; }

    Element add(Element const& a, Element const& b, value_type const& c = value_type(1)) const
    {
        if (a.degree != b.degree && !a.values.empty() && !b.values.empty())
            throw InputError("adding elements of different degrees");
        int const deg = a.values.empty() ? b.degree : a.degree;
        return {deg, chaincore::add_scaled(ring_, a.values, c, b.values)};
    }

    Element scale(value_type const& c, Element const& a) const { return {a.degree, chaincore::scaled(ring_, c, a.values)}; }

    std::string name(int d, std::size_t i) const
    {
        if (static_cast<std::size_t>(d) < names_.size() && i < names_[static_cast<std::size_t>(d)].size())
            return names_[static_cast<std::size_t>(d)][i];
        return "e" + std::to_string(d) + "_" + std::to_string(i);
    }

    std::string format(Element const& x) const
    {
        if (x.values.empty())
            return "0";
        std::string out;
        for (auto const& e : x.values) {
            std::string c = ring_.to_string(e.value);
            if (!out.empty())
                out += " + ";
            out += (c == "1" ? "" : c + "*") + name(x.degree, e.index);
        }
        return out;
    }

    /// Leibniz on all basis pairs, associativity on all basis triples and
    /// the unit law. Returns a description of the first violation.
    std::optional<std::string> axiom_violation() const
    {
        auto sign = [&](int deg) { return deg % 2 == 0 ? ring_.one() : ring_.neg(ring_.one()); };
        for (int p = 0; p <= top_degree(); ++p)
            for (std::uint32_t i = 0; i < dim(p); ++i) {
                auto x = basis(p, i);
                if (mul(unit_, x) != x || mul(x, unit_) != x)
                    return "unit law fails on " + name(p, i);
                for (int q = 0; p + q <= top_degree(); ++q)
                    for (std::uint32_t j = 0; j < dim(q); ++j) {
                        auto y = basis(q, j);
                        auto lhs = d(mul(x, y));
                        auto rhs = add(mul(d(x), y), mul(x, d(y)), sign(p));
                        if (lhs.values != rhs.values)
                            return "Leibniz rule fails on " + name(p, i) + "·" + name(q, j);
                        for (int r = 0; p + q + r <= top_degree(); ++r)
                            for (std::uint32_t k = 0; k < dim(r); ++k) {
                                auto z = basis(r, k);
                                if (mul(mul(x, y), z).values != mul(x, mul(y, z)).values)
                                    return "associativity fails on " + name(p, i) + "·" + name(q, j) + "·" +
                                           name(r, k);
                            }
                    }
            }
        return std::nullopt;
    }

private:
    Ring ring_;
    std::vector<std::size_t> dims_;
    std::vector<SparseMatrix<Ring>> diff_;
    Product product_;
    Element unit_;
    std::vector<std::vector<std::string>> names_;
};

/// Structure constants of an explicitly given algebra.
template <typename Ring>
struct DGATable
{
    struct BasisElement
    {
        std::string name;
        int degree = 0;
    };
    std::vector<BasisElement> basis;
    /// differential[b] = combination of basis ids
    std::map<std::size_t, std::vector<std::pair<std::size_t, typename Ring::value_type>>> differential;
    /// product[(a, b)] = combination of basis ids
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::pair<std::size_t, typename Ring::value_type>>>
        product;
    std::optional<std::size_t> unit;
};

/// Builds a DGA from structure constants and checks all axioms.
template <typename Ring>
DGA<Ring> dga_from_table(Ring ring, DGATable<Ring> const& table)
{
    using Element = Cochain<Ring>;
    int top = 0;
    for (auto const& b : table.basis) {
        if (b.degree < 0)
            throw InputError("DGA basis element " + b.name + " has negative degree");
        top = std::max(top, b.degree);
    }
    std::vector<std::size_t> dims(static_cast<std::size_t>(top + 1), 0);
    std::vector<std::uint32_t> local(table.basis.size());
    std::vector<std::vector<std::string>> names(dims.size());
    for (std::size_t i = 0; i < table.basis.size(); ++i) {
        auto d = static_cast<std::size_t>(table.basis[i].degree);
        local[i] = static_cast<std::uint32_t>(dims[d]++);
        names[d].push_back(table.basis[i].name);
    }
    auto combo_to_vector = [&](std::vector<std::pair<std::size_t, typename Ring::value_type>> const& combo,
                               int expected_degree, std::string const& what) {
        std::map<std::uint32_t, typename Ring::value_type> acc;
        for (auto const& [id, c] : combo) {
            if (table.basis[id].degree != expected_degree)
                throw InputError(what + ": term " + table.basis[id].name + " has degree " +
                                 std::to_string(table.basis[id].degree) + ", expected " +
                                 std::to_string(expected_degree));
            auto it = acc.find(local[id]);
            if (it == acc.end())
                acc.emplace(local[id], c);
            else
                it->second = ring.add(it->second, c);
        }
        SparseVector<Ring> v;
        for (auto const& [i, c] : acc)
            if (!ring.is_zero(c))
                v.push_back({i, c});
        return v;
    };

    std::vector<SparseMatrix<Ring>> diffs;
    for (int d = 0; d < top; ++d)
        diffs.emplace_back(ring, dims[static_cast<std::size_t>(d) + 1], dims[static_cast<std::size_t>(d)]);
    for (auto const& [id, combo] : table.differential) {
        int const d = table.basis[id].degree;
        auto v = combo_to_vector(combo, d + 1, "differential of " + table.basis[id].name);
        if (d == top) {
            if (!v.empty())
                throw InputError("differential of top-degree element " + table.basis[id].name + " must vanish");
            continue;
        }
        diffs[static_cast<std::size_t>(d)].set_column(local[id], std::move(v));
    }

    // products[(p, i, q, j)] in local coordinates
    auto products = std::make_shared<std::map<std::tuple<int, std::uint32_t, int, std::uint32_t>, SparseVector<Ring>>>();
    for (auto const& [key, combo] : table.product) {
        auto [a, b] = key;
        int const deg = table.basis[a].degree + table.basis[b].degree;
        std::string const what = "product " + table.basis[a].name + "." + table.basis[b].name;
        if (deg > top) {
            if (!combo.empty())
                throw InputError(what + " exceeds the top degree");
            continue;
        }
        (*products)[{table.basis[a].degree, local[a], table.basis[b].degree, local[b]}] =
            combo_to_vector(combo, deg, what);
    }
    Element unit{0, {}};
    if (table.unit) {
        auto u = *table.unit;
        if (table.basis[u].degree != 0)
            throw InputError("unit " + table.basis[u].name + " must have degree 0");
        unit.values.push_back({local[u], ring.one()});
        for (std::size_t i = 0; i < table.basis.size(); ++i) {
            int const d = table.basis[i].degree;
            SparseVector<Ring> self{{local[i], ring.one()}};
            products->try_emplace({0, local[u], d, local[i]}, self);
            products->try_emplace({d, local[i], 0, local[u]}, self);
        }
    }
    auto product = [ring, products](Element const& a, Element const& b) {
        Element out{a.degree + b.degree, {}};
        for (auto const& x : a.values)
            for (auto const& y : b.values) {
                auto it = products->find({a.degree, x.index, b.degree, y.index});
                if (it == products->end())
                    continue;
                out.values = chaincore::add_scaled(ring, out.values, ring.mul(x.value, y.value), it->second);
            }
        return out;
    };
    DGA<Ring> dga(ring, std::move(dims), std::move(diffs), product, unit, std::move(names));
    if (!table.unit)
        throw InputError("DGA has no unit element");
    if (auto v = dga.axiom_violation())
        throw InputError("DGA axiom violated: " + *v);
    return dga;
}

/// Simplicial cochain algebra with the cup product.
template <typename Ring>
DGA<Ring> simplicial_to_dga(simplicial::ComplexPtr k, Ring ring = Ring{})
{
    std::vector<std::size_t> dims;
    for (int d = 0; d <= std::max(0, k->dimension()); ++d)
        dims.push_back(k->count(d));
    auto cc = simplicial::chain_complex(*k, ring);
    std::vector<SparseMatrix<Ring>> diffs;
    for (int d = 1; d <= k->dimension(); ++d)
        diffs.push_back(cc.boundary(d).transpose());
    auto engine = std::make_shared<simplicial::CupEngine>(*k);
    auto product = [k, engine, ring](Cochain<Ring> const& a, Cochain<Ring> const& b) {
        return engine->cup(ring, a, b);
    };
    auto unit = simplicial::unit_cochain(*k, ring);
    return DGA<Ring>(ring, std::move(dims), std::move(diffs), product, std::move(unit));
}

} // namespace lensconf::cupmassey
