#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "lensconf/simplicial/constructors.hpp"

namespace lensconf::simplicial {

using ComplexPtr = std::shared_ptr<SimplicialComplex const>;

inline ComplexPtr share(SimplicialComplex k)
{
    return std::make_shared<SimplicialComplex const>(std::move(k));
}

/// Vertex map between complexes sending simplices to simplices.
class SimplicialMap
{
public:
    /// `images[i]` is the image of the i-th source vertex (in vertex order).
    SimplicialMap(ComplexPtr source, ComplexPtr target, std::vector<Vertex> images)
        : source_(std::move(source)), target_(std::move(target)), images_(std::move(images))
    {
        if (images_.size() != source_->vertex_count())
            throw InputError("simplicial map: " + std::to_string(images_.size()) + " images for " +
                             std::to_string(source_->vertex_count()) + " vertices");
        for (auto v : images_)
            if (!target_->vertex_position(v))
                throw InputError("simplicial map: image " + std::to_string(v) + " is not a target vertex");
        for (auto const& s : source_->maximal_simplices())
            if (!target_->contains(apply(s)))
                throw InputError("simplicial map: image of a simplex is not a simplex of the target");
    }

    template <typename F>
    static SimplicialMap from_function(ComplexPtr source, ComplexPtr target, F f)
    {
        std::vector<Vertex> images;
        for (auto v : source->vertices())
            images.push_back(f(v));
        return SimplicialMap(std::move(source), std::move(target), std::move(images));
    }

    static SimplicialMap identity(ComplexPtr k)
    {
        std::vector<Vertex> images(k->vertices().begin(), k->vertices().end());
        return SimplicialMap(k, k, std::move(images));
    }

    ComplexPtr const& source() const { return source_; }
    ComplexPtr const& target() const { return target_; }
    std::vector<Vertex> const& images() const { return images_; }

    Vertex operator()(Vertex v) const
    {
        auto p = source_->vertex_position(v);
        if (!p)
            throw InputError("simplicial map: " + std::to_string(v) + " is not a source vertex");
        return images_[*p];
    }

    /// Image vertex set, sorted and deduplicated.
    Simplex apply(std::span<Vertex const> s) const
    {
        Simplex out;
        for (auto v : s)
            out.push_back((*this)(v));
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    /// g ∘ f for f = *this.
    SimplicialMap then(SimplicialMap const& g) const
    {
        std::vector<Vertex> images;
        for (auto v : images_)
            images.push_back(g(v));
        return SimplicialMap(source_, g.target_, std::move(images));
    }

    bool is_identity() const
    {
        return *source_ == *target_ && std::ranges::equal(images_, source_->vertices());
    }

    /// An edge on which the map is not strictly increasing, if any.
    std::optional<Simplex> order_violation() const
    {
        for (std::size_t i = 0; i < source_->count(1); ++i) {
            auto e = source_->simplex(1, i);
            if ((*this)(e[0]) >= (*this)(e[1]))
                return Simplex(e.begin(), e.end());
        }
        return std::nullopt;
    }

private:
    ComplexPtr source_;
    ComplexPtr target_;
    std::vector<Vertex> images_;
};

/// Cyclic action generated by an automorphism of order m.
class GroupAction
{
public:
    GroupAction(SimplicialMap generator, int order) : generator_(std::move(generator)), order_(order)
    {
        if (order_ < 1)
            throw InputError("group action order must be positive");
        if (!(*generator_.source() == *generator_.target()))
            throw InputError("group action generator must be a self-map");
        auto const& k = *generator_.source();
        // bijective on vertices
        std::vector<Vertex> sorted = generator_.images();
        std::sort(sorted.begin(), sorted.end());
        if (!std::ranges::equal(sorted, k.vertices()))
            throw InputError("group action generator is not bijective on vertices");
        auto p = SimplicialMap::identity(generator_.source());
        for (int i = 0; i < order_; ++i)
            p = p.then(generator_);
        if (!p.is_identity())
            throw InputError("group action generator does not have order dividing " + std::to_string(order_));
        free_ = compute_free();
    }

    ComplexPtr const& complex() const { return generator_.source(); }
    SimplicialMap const& generator() const { return generator_; }
    int order() const { return order_; }
    bool is_free() const { return free_; }

    SimplicialMap power(int k) const
    {
        k = ((k % order_) + order_) % order_;
        auto p = SimplicialMap::identity(complex());
        for (int i = 0; i < k; ++i)
            p = p.then(generator_);
        return p;
    }

private:
    bool compute_free() const
    {
        auto const& k = *complex();
        // every simplex orbit has exactly `order` elements
        for (int d = 0; d <= k.dimension(); ++d)
            for (std::size_t i = 0; i < k.count(d); ++i) {
                auto const start = k.simplex_vector(d, i);
                Simplex cur = start;
                for (int step = 1; step < order_; ++step) {
                    cur = generator_.apply(cur);
                    if (cur == start)
                        return false;
                }
            }
        return true;
    }

    SimplicialMap generator_;
    int order_;
    bool free_ = false;
};

/// Graph {(v, f v)} of f : K → L as a subcomplex of staircase_product(K, L).
/// Requires f strictly increasing on every simplex; otherwise throws with a
/// witness edge.
inline SimplicialComplex graph_subcomplex(SimplicialMap const& f)
{
    if (auto w = f.order_violation())
        throw InputError("graph_subcomplex: map is not order-preserving on edge {" + std::to_string((*w)[0]) + "," +
                         std::to_string((*w)[1]) + "}");
    auto const& k = *f.source();
    auto const& l = *f.target();
    std::vector<Simplex> out;
    for (auto const& s : k.maximal_simplices()) {
        Simplex t;
        for (auto v : s)
            t.push_back(product_vertex(*k.vertex_position(v), *l.vertex_position(f(v)), l.vertex_count()));
        out.push_back(std::move(t));
    }
    return SimplicialComplex::from_simplices(std::move(out));
}

} // namespace lensconf::simplicial
