#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lensconf/chaincore/homology.hpp"
#include "lensconf/error.hpp"

namespace lensconf::simplicial {

using Vertex = std::uint32_t;
using Simplex = std::vector<Vertex>;

namespace detail {

inline bool lex_less(std::span<Vertex const> a, std::span<Vertex const> b)
{
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Sorts and deduplicates a flat array of equal-length tuples.
inline std::vector<Vertex> sort_unique_tuples(std::vector<Vertex> const& flat, std::size_t width)
{
    std::size_t const n = width == 0 ? 0 : flat.size() / width;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    auto row = [&](std::size_t i) { return std::span<Vertex const>(flat.data() + i * width, width); };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return lex_less(row(a), row(b)); });
    std::vector<Vertex> out;
    out.reserve(flat.size());
    for (std::size_t k = 0; k < n; ++k) {
        auto r = row(order[k]);
        if (k > 0 && std::equal(r.begin(), r.end(), out.end() - static_cast<long>(width)))
            continue;
        out.insert(out.end(), r.begin(), r.end());
    }
    return out;
}

} // namespace detail

/// Finite simplicial complex on a totally ordered vertex set (the numeric
/// order of the vertex ids). Every simplex is stored as a strictly increasing
/// vertex tuple; all faces are materialized, sorted lexicographically per
/// dimension, so a simplex's position in its dimension is its chain index.
class SimplicialComplex
{
public:
    SimplicialComplex() = default;

    /// Builds the downward closure of the given simplices. Each simplex is
    /// sorted; repeated vertices are rejected. `extra_vertices` adds isolated
    /// points.
    static SimplicialComplex from_simplices(std::vector<Simplex> simplices, std::vector<Vertex> extra_vertices = {})
    {
        int top = -1;
        for (auto& s : simplices) {
            if (s.empty())
                throw InputError("empty simplex in complex description");
            std::sort(s.begin(), s.end());
            if (std::adjacent_find(s.begin(), s.end()) != s.end())
                throw InputError("simplex with a repeated vertex");
            top = std::max(top, static_cast<int>(s.size()) - 1);
        }
        if (top < 0 && !extra_vertices.empty())
            top = 0;
        std::vector<std::vector<Vertex>> raw(static_cast<std::size_t>(top + 1));
        for (auto const& s : simplices)
            raw[s.size() - 1].insert(raw[s.size() - 1].end(), s.begin(), s.end());
        for (auto v : extra_vertices)
            raw[0].push_back(v);
        return from_flat(std::move(raw));
    }

    /// `raw[d]` holds (possibly duplicated, unsorted) (d+1)-tuples that are
    /// already internally increasing.
    static SimplicialComplex from_flat(std::vector<std::vector<Vertex>> raw)
    {
        SimplicialComplex k;
        int const top = static_cast<int>(raw.size()) - 1;
        k.simplices_.resize(raw.size());
        for (int d = top; d >= 0; --d) {
            std::size_t const w = static_cast<std::size_t>(d) + 1;
            auto& cur = raw[static_cast<std::size_t>(d)];
            for (std::size_t i = 0; i + w <= cur.size(); i += w)
                for (std::size_t j = i + 1; j < i + w; ++j)
                    if (cur[j - 1] >= cur[j])
                        throw InputError("simplex vertices are not strictly increasing");
            if (d < top) {
                // facets of the (d+1)-simplices
                auto const& up = k.simplices_[static_cast<std::size_t>(d) + 1];
                std::size_t const uw = w + 1;
                cur.reserve(cur.size() + up.size() / uw * uw * w);
                for (std::size_t i = 0; i < up.size(); i += uw)
                    for (std::size_t skip = 0; skip < uw; ++skip)
                        for (std::size_t j = 0; j < uw; ++j)
                            if (j != skip)
                                cur.push_back(up[i + j]);
            }
            k.simplices_[static_cast<std::size_t>(d)] = detail::sort_unique_tuples(cur, w);
            cur.clear();
            cur.shrink_to_fit();
        }
        while (!k.simplices_.empty() && k.simplices_.back().empty())
            k.simplices_.pop_back();
        return k;
    }

    int dimension() const { return static_cast<int>(simplices_.size()) - 1; }
    std::size_t vertex_count() const { return count(0); }

    std::size_t count(int d) const
    {
        if (d < 0 || d > dimension())
            return 0;
        return simplices_[static_cast<std::size_t>(d)].size() / (static_cast<std::size_t>(d) + 1);
    }

    std::span<Vertex const> simplex(int d, std::size_t i) const
    {
        std::size_t const w = static_cast<std::size_t>(d) + 1;
        return {simplices_[static_cast<std::size_t>(d)].data() + i * w, w};
    }

    Simplex simplex_vector(int d, std::size_t i) const
    {
        auto s = simplex(d, i);
        return {s.begin(), s.end()};
    }

    std::span<Vertex const> vertices() const { return simplices_.empty() ? std::span<Vertex const>() : simplices_[0]; }

    /// Rank of v in the vertex order.
    std::optional<std::size_t> vertex_position(Vertex v) const
    {
        auto vs = vertices();
        auto it = std::lower_bound(vs.begin(), vs.end(), v);
        if (it == vs.end() || *it != v)
            return std::nullopt;
        return static_cast<std::size_t>(it - vs.begin());
    }

    std::optional<std::size_t> index_of(std::span<Vertex const> s) const
    {
        int const d = static_cast<int>(s.size()) - 1;
        if (d < 0 || d > dimension())
            return std::nullopt;
        std::size_t lo = 0, hi = count(d);
        while (lo < hi) {
            std::size_t const mid = (lo + hi) / 2;
            if (detail::lex_less(simplex(d, mid), s))
                lo = mid + 1;
            else
                hi = mid;
        }
        if (lo < count(d) && std::ranges::equal(simplex(d, lo), s))
            return lo;
        return std::nullopt;
    }

    bool contains(std::span<Vertex const> s) const { return index_of(s).has_value(); }

    std::vector<std::size_t> f_vector() const
    {
        std::vector<std::size_t> f;
        for (int d = 0; d <= dimension(); ++d)
            f.push_back(count(d));
        return f;
    }

    std::size_t total_simplices() const
    {
        std::size_t n = 0;
        for (int d = 0; d <= dimension(); ++d)
            n += count(d);
        return n;
    }

    long euler_characteristic() const
    {
        long chi = 0;
        for (int d = 0; d <= dimension(); ++d)
            chi += (d % 2 == 0 ? 1 : -1) * static_cast<long>(count(d));
        return chi;
    }

    /// Simplices that are not a proper face of another simplex.
    std::vector<Simplex> maximal_simplices() const
    {
        std::vector<Simplex> out;
        for (int d = dimension(); d >= 0; --d) {
            std::vector<bool> covered(count(d), false);
            if (d < dimension())
                for (std::size_t i = 0; i < count(d + 1); ++i) {
                    auto s = simplex(d + 1, i);
                    Simplex face(s.begin(), s.end());
                    for (std::size_t skip = 0; skip < s.size(); ++skip) {
                        face.assign(s.begin(), s.end());
                        face.erase(face.begin() + static_cast<long>(skip));
                        covered[*index_of(face)] = true;
                    }
                }
            for (std::size_t i = 0; i < count(d); ++i)
                if (!covered[i])
                    out.push_back(simplex_vector(d, i));
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Subcomplex test: every simplex of `sub` is a simplex of this complex.
    bool has_subcomplex(SimplicialComplex const& sub) const
    {
        for (int d = 0; d <= sub.dimension(); ++d)
            for (std::size_t i = 0; i < sub.count(d); ++i)
                if (!contains(sub.simplex(d, i)))
                    return false;
        return true;
    }

    friend bool operator==(SimplicialComplex const&, SimplicialComplex const&) = default;

private:
    std::vector<std::vector<Vertex>> simplices_;
};

/// Simplicial chain complex C_0 … C_dim with the alternating-sign boundary
/// (sign (-1)^i for the face omitting position i).
template <typename Ring>
chaincore::ChainComplex<Ring> chain_complex(SimplicialComplex const& k, Ring ring = Ring{})
{
    using chaincore::SparseMatrix;
    std::vector<std::size_t> ranks;
    std::vector<SparseMatrix<Ring>> boundaries;
    for (int d = 0; d <= std::max(0, k.dimension()); ++d)
        ranks.push_back(k.count(d));
    auto const plus = ring.one();
    auto const minus = ring.neg(ring.one());
    Simplex face;
    for (int d = 1; d <= k.dimension(); ++d) {
        SparseMatrix<Ring> b(ring, k.count(d - 1), k.count(d));
        for (std::size_t j = 0; j < k.count(d); ++j) {
            auto s = k.simplex(d, j);
            chaincore::SparseVector<Ring> col;
            for (std::size_t skip = 0; skip < s.size(); ++skip) {
                face.assign(s.begin(), s.end());
                face.erase(face.begin() + static_cast<long>(skip));
                auto idx = k.index_of(face);
                col.push_back({static_cast<std::uint32_t>(*idx), skip % 2 == 0 ? plus : minus});
            }
            std::sort(col.begin(), col.end(), [](auto const& a, auto const& b) { return a.index < b.index; });
            b.set_column(j, std::move(col));
        }
        boundaries.push_back(std::move(b));
    }
    return chaincore::ChainComplex<Ring>(std::move(ring), 0, std::move(ranks), std::move(boundaries));
}

/// Homology of |K| with coefficients given at runtime.
inline chaincore::HomologySummary simplicial_homology(SimplicialComplex const& k, chaincore::CoefficientRing ring)
{
    return chaincore::dispatch(ring, [&](auto r) { return chaincore::homology(chain_complex(k, r)); });
}

} // namespace lensconf::simplicial
