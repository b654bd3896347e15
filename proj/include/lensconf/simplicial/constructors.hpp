#pragma once

#include <utility>
#include <vector>

#include "lensconf/simplicial/complex.hpp"

namespace lensconf::simplicial {

inline SimplicialComplex point()
{
    return SimplicialComplex::from_simplices({{0}});
}

/// Full simplex on vertices 0..n.
inline SimplicialComplex simplex(int n)
{
    if (n < 0)
        throw InputError("simplex dimension must be non-negative");
    Simplex s;
    for (int i = 0; i <= n; ++i)
        s.push_back(static_cast<Vertex>(i));
    return SimplicialComplex::from_simplices({s});
}

/// Circle with m vertices 0..m-1 and edges {i, i+1 mod m}.
inline SimplicialComplex polygon(int m)
{
    if (m < 3)
        throw InputError("polygon needs at least 3 vertices, got " + std::to_string(m));
    std::vector<Simplex> edges;
    for (int i = 0; i < m; ++i)
        edges.push_back({static_cast<Vertex>(i), static_cast<Vertex>((i + 1) % m)});
    return SimplicialComplex::from_simplices(std::move(edges));
}

/// Boundary of the (n+1)-simplex, an n-sphere on n+2 vertices.
inline SimplicialComplex boundary_sphere(int n)
{
    if (n < 0)
        throw InputError("sphere dimension must be non-negative");
    std::vector<Simplex> facets;
    for (int skip = 0; skip <= n + 1; ++skip) {
        Simplex s;
        for (int i = 0; i <= n + 1; ++i)
            if (i != skip)
                s.push_back(static_cast<Vertex>(i));
        facets.push_back(std::move(s));
    }
    return SimplicialComplex::from_simplices(std::move(facets));
}

namespace detail {

inline std::vector<Simplex> relabel(SimplicialComplex const& k, std::vector<Vertex> const& by_position)
{
    std::vector<Simplex> out;
    for (auto const& s : k.maximal_simplices()) {
        Simplex t;
        for (auto v : s)
            t.push_back(by_position[*k.vertex_position(v)]);
        out.push_back(std::move(t));
    }
    return out;
}

} // namespace detail

struct PointedComplex
{
    SimplicialComplex complex;
    Vertex basepoint = 0;
};

/// One-point union. The first complex keeps its vertex positions as ids;
/// later complexes are appended with their basepoints identified with the
/// first basepoint.
inline SimplicialComplex wedge(std::vector<PointedComplex> const& pieces)
{
    if (pieces.empty())
        throw InputError("wedge of an empty list");
    std::vector<Simplex> all;
    Vertex next = 0;
    Vertex base = 0;
    for (std::size_t p = 0; p < pieces.size(); ++p) {
        auto const& k = pieces[p].complex;
        auto bp = k.vertex_position(pieces[p].basepoint);
        if (!bp)
            throw InputError("wedge: basepoint " + std::to_string(pieces[p].basepoint) + " is not a vertex");
        std::vector<Vertex> ids(k.vertex_count());
        for (std::size_t i = 0; i < ids.size(); ++i) {
            if (p > 0 && i == *bp)
                ids[i] = base;
            else
                ids[i] = next++;
        }
        if (p == 0)
            base = ids[*bp];
        for (auto& s : detail::relabel(k, ids))
            all.push_back(std::move(s));
    }
    return SimplicialComplex::from_simplices(std::move(all));
}

/// Join K * L. K's vertices take ids 0..|V(K)|-1 in order, L's follow.
inline SimplicialComplex join(SimplicialComplex const& k, SimplicialComplex const& l)
{
    std::size_t const nk = k.vertex_count();
    std::vector<Simplex> all;
    auto const mk = k.maximal_simplices();
    auto const ml = l.maximal_simplices();
    for (auto const& s : mk)
        for (auto const& t : ml) {
            Simplex u;
            for (auto v : s)
                u.push_back(static_cast<Vertex>(*k.vertex_position(v)));
            for (auto v : t)
                u.push_back(static_cast<Vertex>(nk + *l.vertex_position(v)));
            all.push_back(std::move(u));
        }
    if (mk.empty())
        return l;
    if (ml.empty())
        return k;
    return SimplicialComplex::from_simplices(std::move(all));
}

/// Id of the product vertex (a, b) given vertex positions.
inline Vertex product_vertex(std::size_t a, std::size_t b, std::size_t l_vertex_count)
{
    return static_cast<Vertex>(a * l_vertex_count + b);
}

/// Staircase triangulation of |K| × |L|: for each pair of maximal simplices,
/// one top simplex per lattice path (shuffle) through the vertex grid.
inline SimplicialComplex staircase_product(SimplicialComplex const& k, SimplicialComplex const& l)
{
    std::size_t const nl = l.vertex_count();
    auto const mk = k.maximal_simplices();
    auto const ml = l.maximal_simplices();
    int top = -1;
    for (auto const& s : mk)
        for (auto const& t : ml)
            top = std::max(top, static_cast<int>(s.size() + t.size()) - 2);
    std::vector<std::vector<Vertex>> raw(static_cast<std::size_t>(std::max(top, -1) + 1));
    std::vector<std::size_t> pa, pb;
    for (auto const& s : mk) {
        pa.clear();
        for (auto v : s)
            pa.push_back(*k.vertex_position(v));
        for (auto const& t : ml) {
            pb.clear();
            for (auto v : t)
                pb.push_back(*l.vertex_position(v));
            std::size_t const p = pa.size() - 1, q = pb.size() - 1;
            auto& out = raw[p + q];
            // bit i of mask set: step i moves in K
            for (unsigned mask = 0; mask < (1u << (p + q)); ++mask) {
                if (static_cast<std::size_t>(__builtin_popcount(mask)) != p)
                    continue;
                std::size_t i = 0, j = 0;
                out.push_back(product_vertex(pa[0], pb[0], nl));
                for (std::size_t step = 0; step < p + q; ++step) {
                    if (mask & (1u << step))
                        ++i;
                    else
                        ++j;
                    out.push_back(product_vertex(pa[i], pb[j], nl));
                }
            }
        }
    }
    return SimplicialComplex::from_flat(std::move(raw));
}

} // namespace lensconf::simplicial
