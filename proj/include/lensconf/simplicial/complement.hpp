#pragma once

#include <unordered_map>

#include "lensconf/simplicial/complex.hpp"

namespace lensconf::simplicial {

struct ComplementResult
{
    SimplicialComplex complex;
    /// Simplices of K with all vertices in removed pieces but lying in none.
    std::size_t offending = 0;
    /// Vertices added by stellar subdivision.
    std::size_t new_vertices = 0;
};

/// Model of |K| minus the union of the removed subcomplexes. Offending
/// simplices are stellarly subdivided (highest dimension first), which makes
/// each removed piece full; the full subcomplex on the surviving vertices is
/// a deformation retract of the complement.
inline ComplementResult complement_model(SimplicialComplex const& k, std::vector<SimplicialComplex> const& removed)
{
    constexpr std::uint32_t none = ~std::uint32_t{0};
    std::unordered_map<Vertex, std::uint32_t> piece_of;
    for (std::uint32_t p = 0; p < removed.size(); ++p) {
        if (!k.has_subcomplex(removed[p]))
            throw InputError("complement_model: removed piece " + std::to_string(p) + " is not a subcomplex");
        for (auto v : removed[p].vertices())
            if (!piece_of.emplace(v, p).second)
                throw InputError("complement_model: removed pieces " + std::to_string(piece_of[v]) + " and " +
                                 std::to_string(p) + " share vertex " + std::to_string(v));
    }
    auto piece = [&](Vertex v) {
        auto it = piece_of.find(v);
        return it == piece_of.end() ? none : it->second;
    };

    ComplementResult res;
    std::vector<Simplex> offending;
    for (int d = k.dimension(); d >= 1; --d)
        for (std::size_t i = 0; i < k.count(d); ++i) {
            auto s = k.simplex(d, i);
            std::uint32_t p0 = piece(s[0]);
            if (p0 == none)
                continue;
            bool all_removed = true, same = true;
            for (auto v : s) {
                auto p = piece(v);
                all_removed = all_removed && p != none;
                same = same && p == p0;
            }
            if (!all_removed)
                continue;
            if (same && removed[p0].contains(s))
                continue;
            offending.emplace_back(s.begin(), s.end());
        }
    res.offending = offending.size();

    std::vector<Simplex> facets = k.maximal_simplices();
    std::vector<bool> alive(facets.size(), true);
    std::unordered_map<Vertex, std::vector<std::size_t>> incidence;
    for (std::size_t f = 0; f < facets.size(); ++f)
        for (auto v : facets[f])
            incidence[v].push_back(f);
    Vertex next = k.vertex_count() == 0 ? 0 : k.vertices().back() + 1;

    for (auto const& sigma : offending) {
        Vertex const b = next++;
        ++res.new_vertices;
        Vertex pick = sigma[0];
        for (auto v : sigma)
            if (incidence[v].size() < incidence[pick].size())
                pick = v;
        std::vector<std::size_t> const candidates = incidence[pick];
        for (auto f : candidates) {
            if (!alive[f] || !std::includes(facets[f].begin(), facets[f].end(), sigma.begin(), sigma.end()))
                continue;
            alive[f] = false;
            for (auto v : sigma) {
                Simplex t;
                for (auto w : facets[f])
                    if (w != v)
                        t.push_back(w);
                t.push_back(b);
                for (auto w : t)
                    incidence[w].push_back(facets.size());
                facets.push_back(std::move(t));
                alive.push_back(true);
            }
        }
    }

    std::vector<Simplex> kept;
    for (std::size_t f = 0; f < facets.size(); ++f) {
        if (!alive[f])
            continue;
        Simplex t;
        for (auto v : facets[f])
            if (piece(v) == none)
                t.push_back(v);
        if (!t.empty())
            kept.push_back(std::move(t));
    }
    res.complex = SimplicialComplex::from_simplices(std::move(kept));
    return res;
}

} // namespace lensconf::simplicial
