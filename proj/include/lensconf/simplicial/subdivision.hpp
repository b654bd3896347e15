#pragma once

#include <tuple>

#include "lensconf/simplicial/maps.hpp"

namespace lensconf::simplicial {

/// Barycentric subdivision together with the barycenter bookkeeping.
///
/// Ordering contract: sd vertices are ordered by the dimension of the simplex
/// they subdivide, then (when an action is given) by orbit index and power
/// within the orbit, otherwise lexicographically. Because every chain of faces
/// has strictly increasing dimensions, any automorphism of K induces a map of
/// sd(K) that is strictly order-preserving on every simplex.
struct Subdivision
{
    ComplexPtr base;
    ComplexPtr complex;
    /// (dimension, index in base) for each sd vertex id.
    std::vector<std::pair<int, std::size_t>> barycenter;
    /// sd vertex id for each base simplex, per dimension.
    std::vector<std::vector<Vertex>> vertex_of;
};

namespace detail {

inline void emit_flags(SimplicialComplex const& k,
                       std::vector<std::vector<Vertex>> const& vertex_of,
                       Simplex& s,
                       std::vector<Vertex>& chain,
                       std::vector<Vertex>& out)
{
    int const d = static_cast<int>(s.size()) - 1;
    chain.push_back(vertex_of[static_cast<std::size_t>(d)][*k.index_of(s)]);
    if (d == 0) {
        // chain runs top-down in dimension, ids increase bottom-up
        out.insert(out.end(), chain.rbegin(), chain.rend());
    } else {
        for (std::size_t skip = 0; skip < s.size(); ++skip) {
            Simplex face = s;
            face.erase(face.begin() + static_cast<long>(skip));
            emit_flags(k, vertex_of, face, chain, out);
        }
    }
    chain.pop_back();
}

} // namespace detail

inline Subdivision barycentric_subdivision(ComplexPtr k, GroupAction const* action = nullptr)
{
    if (action) {
        if (!(*action->complex() == *k))
            throw InputError("barycentric_subdivision: action lives on a different complex");
        if (!action->is_free())
            throw InputError("barycentric_subdivision: action is not free, orbit-consistent ordering impossible");
    }
    Subdivision sd;
    sd.base = k;
    sd.vertex_of.resize(static_cast<std::size_t>(std::max(0, k->dimension() + 1)));
    Vertex next = 0;
    for (int d = 0; d <= k->dimension(); ++d) {
        std::size_t const n = k->count(d);
        auto& ids = sd.vertex_of[static_cast<std::size_t>(d)];
        ids.assign(n, 0);
        if (!action) {
            for (std::size_t i = 0; i < n; ++i) {
                ids[i] = next++;
                sd.barycenter.emplace_back(d, i);
            }
            continue;
        }
        std::vector<bool> seen(n, false);
        for (std::size_t i = 0; i < n; ++i) {
            if (seen[i])
                continue;
            Simplex cur = k->simplex_vector(d, i);
            for (int power = 0; power < action->order(); ++power) {
                std::size_t const idx = *k->index_of(cur);
                seen[idx] = true;
                ids[idx] = next++;
                sd.barycenter.emplace_back(d, idx);
                cur = action->generator().apply(cur);
            }
        }
    }
    std::vector<std::vector<Vertex>> raw(sd.vertex_of.size());
    std::vector<Vertex> chain;
    for (auto s : k->maximal_simplices())
        detail::emit_flags(*k, sd.vertex_of, s, chain, raw[s.size() - 1]);
    sd.complex = share(SimplicialComplex::from_flat(std::move(raw)));
    return sd;
}

/// The map induced on sd(K) by an automorphism f of K.
inline SimplicialMap subdivided_map(Subdivision const& sd, SimplicialMap const& f)
{
    if (!(*f.source() == *sd.base) || !(*f.target() == *sd.base))
        throw InputError("subdivided_map: map is not a self-map of the subdivided complex");
    auto const& k = *sd.base;
    std::vector<Vertex> images;
    images.reserve(sd.barycenter.size());
    for (auto [d, i] : sd.barycenter) {
        auto img = f.apply(k.simplex(d, i));
        if (static_cast<int>(img.size()) != d + 1)
            throw InputError("subdivided_map: map collapses a simplex, not an automorphism");
        images.push_back(sd.vertex_of[static_cast<std::size_t>(d)][*k.index_of(img)]);
    }
    return SimplicialMap(sd.complex, sd.complex, std::move(images));
}

inline GroupAction subdivided_action(Subdivision const& sd, GroupAction const& action)
{
    return GroupAction(subdivided_map(sd, action.generator()), action.order());
}

} // namespace lensconf::simplicial
