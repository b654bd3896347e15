#pragma once

#include "lensconf/simplicial/subdivision.hpp"

namespace lensconf::simplicial {

struct QuotientResult
{
    SimplicialComplex complex;
    /// Number of barycentric subdivisions applied before the quotient was
    /// a valid simplicial complex.
    int subdivisions = 0;
    /// The complex that was actually divided by the action.
    ComplexPtr cover;
    /// Orbit (quotient vertex id) for each cover vertex, in vertex order.
    std::vector<Vertex> orbit_of;
};

namespace detail {

inline std::optional<QuotientResult> try_quotient(GroupAction const& action)
{
    auto const& k = *action.complex();
    std::size_t const m = static_cast<std::size_t>(action.order());
    std::vector<Vertex> orbit(k.vertex_count(), ~Vertex{0});
    Vertex next = 0;
    for (std::size_t i = 0; i < k.vertex_count(); ++i) {
        if (orbit[i] != ~Vertex{0})
            continue;
        Vertex v = k.vertices()[i];
        for (std::size_t p = 0; p < m; ++p) {
            orbit[*k.vertex_position(v)] = next;
            v = action.generator()(v);
        }
        ++next;
    }
    std::vector<std::vector<Vertex>> raw(static_cast<std::size_t>(k.dimension() + 1));
    Simplex img;
    for (int d = 0; d <= k.dimension(); ++d)
        for (std::size_t i = 0; i < k.count(d); ++i) {
            img.clear();
            for (auto v : k.simplex(d, i))
                img.push_back(orbit[*k.vertex_position(v)]);
            std::sort(img.begin(), img.end());
            if (std::adjacent_find(img.begin(), img.end()) != img.end())
                return std::nullopt;
            raw[static_cast<std::size_t>(d)].insert(raw[static_cast<std::size_t>(d)].end(), img.begin(), img.end());
        }
    auto q = SimplicialComplex::from_flat(std::move(raw));
    for (int d = 0; d <= k.dimension(); ++d)
        if (q.count(d) * m != k.count(d))
            return std::nullopt;
    return QuotientResult{std::move(q), 0, action.complex(), std::move(orbit)};
}

} // namespace detail

/// Orbit complex K/G of a free action. Subdivides (at most twice) until the
/// orbit map is a simplicial covering.
inline QuotientResult quotient(GroupAction const& action)
{
    if (!action.is_free())
        throw InputError("quotient: action is not free");
    std::optional<GroupAction> current;
    GroupAction const* a = &action;
    for (int round = 0; round <= 2; ++round) {
        if (auto q = detail::try_quotient(*a)) {
            q->subdivisions = round;
            return std::move(*q);
        }
        if (round == 2)
            break;
        auto sd = barycentric_subdivision(a->complex(), a);
        current.emplace(subdivided_action(sd, *a));
        a = &*current;
    }
    throw InputError("quotient: orbit complex still degenerate after two subdivisions");
}

} // namespace lensconf::simplicial
