#pragma once

#include <numeric>

#include "lensconf/simplicial/subdivision.hpp"

namespace lensconf::simplicial {

/// S³ model with the ℤ_m action (x, y) ↦ (ζx, ζ^q y).
struct LensModel
{
    ComplexPtr complex;
    GroupAction action;
};

enum class LensModelKind
{
    /// join of two 2m-gons, corners before edge midpoints
    circle_join,
    /// sd(join(polygon(m), polygon(m)))
    sd_join,
    /// join(polygon(m), polygon(m)) without subdivision
    raw_join,
};

inline LensModelKind parse_model_kind(std::string const& s)
{
    if (s == "circle-join")
        return LensModelKind::circle_join;
    if (s == "sd-join")
        return LensModelKind::sd_join;
    if (s == "raw-join")
        return LensModelKind::raw_join;
    throw InputError("unknown model '" + s + "' (expected circle-join, sd-join or raw-join)");
}

inline std::string model_kind_name(LensModelKind k)
{
    switch (k) {
    case LensModelKind::circle_join:
        return "circle-join";
    case LensModelKind::sd_join:
        return "sd-join";
    case LensModelKind::raw_join:
        return "raw-join";
    }
    return "?";
}

namespace detail {

inline void check_lens_parameters(int m, int q)
{
    if (m < 2)
        throw InputError("lens model needs m >= 2, got " + std::to_string(m));
    if (std::gcd(((q % m) + m) % m, m) != 1)
        throw InputError("lens model needs gcd(q, m) = 1, got q=" + std::to_string(q) + " m=" + std::to_string(m));
}

inline Vertex shift(Vertex v, Vertex block, int m, int by)
{
    return block + static_cast<Vertex>((((static_cast<int>(v - block) + by) % m) + m) % m);
}

} // namespace detail

inline LensModel rotation_join(int m, int q)
{
    detail::check_lens_parameters(m, q);
    if (m < 3)
        throw InputError("raw join model needs m >= 3");
    auto k = share(join(polygon(m), polygon(m)));
    auto um = static_cast<Vertex>(m);
    auto gen = SimplicialMap::from_function(k, k, [&](Vertex v) {
        return v < um ? detail::shift(v, 0, m, 1) : detail::shift(v, um, m, q);
    });
    return {k, GroupAction(std::move(gen), m)};
}

/// Circle with 2m vertices: corners 0..m-1, midpoints m..2m-1, midpoint m+i
/// between corners i and i+1. Rotation moves corners to corners and midpoints
/// to midpoints, so it preserves the order on every edge.
inline SimplicialComplex corner_circle(int m)
{
    std::vector<Simplex> edges;
    for (int i = 0; i < m; ++i) {
        auto mid = static_cast<Vertex>(m + i);
        edges.push_back({static_cast<Vertex>(i), mid});
        edges.push_back({static_cast<Vertex>((i + 1) % m), mid});
    }
    return SimplicialComplex::from_simplices(std::move(edges));
}

inline LensModel circle_join(int m, int q)
{
    detail::check_lens_parameters(m, q);
    auto k = share(join(corner_circle(m), corner_circle(m)));
    auto um = static_cast<Vertex>(m);
    auto gen = SimplicialMap::from_function(k, k, [&](Vertex v) {
        Vertex const circle = v < 2 * um ? 0 : 2 * um;
        Vertex const local = v - circle;
        int const by = circle == 0 ? 1 : q;
        return circle + (local < um ? detail::shift(local, 0, m, by) : detail::shift(local, um, m, by));
    });
    return {k, GroupAction(std::move(gen), m)};
}

inline LensModel sd_join(int m, int q)
{
    auto raw = rotation_join(m, q);
    auto sd = barycentric_subdivision(raw.complex, &raw.action);
    auto action = subdivided_action(sd, raw.action);
    return {sd.complex, std::move(action)};
}

inline LensModel lens_model(LensModelKind kind, int m, int q)
{
    switch (kind) {
    case LensModelKind::circle_join:
        return circle_join(m, q);
    case LensModelKind::sd_join:
        return sd_join(m, q);
    case LensModelKind::raw_join:
        return rotation_join(m, q);
    }
    throw InputError("unknown lens model kind");
}

/// Number of top simplices of the lens model without building it.
inline std::size_t lens_model_top_count(LensModelKind kind, int m)
{
    auto const um = static_cast<std::size_t>(m);
    switch (kind) {
    case LensModelKind::circle_join:
        return 4 * um * um;
    case LensModelKind::sd_join:
        return 24 * um * um;
    case LensModelKind::raw_join:
        return um * um;
    }
    return 0;
}

/// Named complexes used by tests and the command line.
inline SimplicialComplex named_fixture(std::string const& name)
{
    if (name == "point")
        return point();
    if (name.size() == 2 && name[0] == 's' && name[1] >= '0' && name[1] <= '9')
        return boundary_sphere(name[1] - '0');
    if (name == "torus33")
        return staircase_product(polygon(3), polygon(3));
    if (name == "rp2")
        return SimplicialComplex::from_simplices({{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 1, 5},
                                                  {1, 2, 4}, {2, 3, 5}, {1, 3, 4}, {2, 4, 5}, {1, 3, 5}});
    if (name == "join77")
        return join(polygon(7), polygon(7));
    if (name == "join33")
        return join(polygon(3), polygon(3));
    if (name == "wedge6s2") {
        std::vector<PointedComplex> pieces(6, PointedComplex{boundary_sphere(2), 0});
        return wedge(pieces);
    }
    throw InputError("unknown fixture '" + name + "'");
}

} // namespace lensconf::simplicial
