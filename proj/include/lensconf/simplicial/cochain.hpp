#pragma once

#include <map>
#include <mutex>

#include "lensconf/simplicial/complex.hpp"

namespace lensconf::simplicial {

/// Cochain on the degree-simplices of a complex, indexed by chain index.
template <typename Ring>
struct Cochain
{
    int degree = 0;
    chaincore::SparseVector<Ring> values;

    friend bool operator==(Cochain const&, Cochain const&) = default;
};

template <typename Ring>
Cochain<Ring> unit_cochain(SimplicialComplex const& k, Ring const& ring)
{
    Cochain<Ring> c{0, {}};
    for (std::uint32_t i = 0; i < k.count(0); ++i)
        c.values.push_back({i, ring.one()});
    return c;
}

/// δφ = φ ∘ ∂.
template <typename Ring>
Cochain<Ring> coboundary(SimplicialComplex const& k, Ring const& ring, Cochain<Ring> const& phi)
{
    int const d = phi.degree + 1;
    Cochain<Ring> out{d, {}};
    if (d > k.dimension() || phi.values.empty())
        return out;
    Simplex face;
    for (std::uint32_t j = 0; j < k.count(d); ++j) {
        auto s = k.simplex(d, j);
        auto acc = ring.zero();
        for (std::size_t skip = 0; skip < s.size(); ++skip) {
            face.assign(s.begin(), s.end());
            face.erase(face.begin() + static_cast<long>(skip));
            auto v = chaincore::coefficient(ring, phi.values, static_cast<std::uint32_t>(*k.index_of(face)));
            acc = skip % 2 == 0 ? ring.add(acc, v) : ring.sub(acc, v);
        }
        if (!ring.is_zero(acc))
            out.values.push_back({j, acc});
    }
    return out;
}

/// Front-face/back-face cup products on a fixed complex. Face indices are
/// computed once per degree pair and cached.
class CupEngine
{
public:
    explicit CupEngine(SimplicialComplex const& k) : k_(&k) {}

    SimplicialComplex const& complex() const { return *k_; }

    template <typename Ring>
    Cochain<Ring> cup(Ring const& ring, Cochain<Ring> const& a, Cochain<Ring> const& b) const
    {
        int const p = a.degree, q = b.degree, n = p + q;
        Cochain<Ring> out{n, {}};
        if (n > k_->dimension() || a.values.empty() || b.values.empty())
            return out;
        auto const& t = table(p, q);
        std::vector<std::int64_t> where_a(k_->count(p), -1), where_b(k_->count(q), -1);
        for (std::size_t i = 0; i < a.values.size(); ++i)
            where_a[a.values[i].index] = static_cast<std::int64_t>(i);
        for (std::size_t i = 0; i < b.values.size(); ++i)
            where_b[b.values[i].index] = static_cast<std::int64_t>(i);
        for (std::uint32_t s = 0; s < k_->count(n); ++s) {
            auto ia = where_a[t.front[s]];
            if (ia < 0)
                continue;
            auto ib = where_b[t.back[s]];
            if (ib < 0)
                continue;
            auto v = ring.mul(a.values[static_cast<std::size_t>(ia)].value, b.values[static_cast<std::size_t>(ib)].value);
            if (!ring.is_zero(v))
                out.values.push_back({s, std::move(v)});
        }
        return out;
    }

private:
    struct FaceTable
    {
        std::vector<std::uint32_t> front, back;
    };

    FaceTable const& table(int p, int q) const
    {
        std::lock_guard lock(mutex_);
        auto key = std::make_pair(p, q);
        auto it = tables_.find(key);
        if (it != tables_.end())
            return it->second;
        FaceTable t;
        int const n = p + q;
        t.front.resize(k_->count(n));
        t.back.resize(k_->count(n));
        for (std::size_t s = 0; s < k_->count(n); ++s) {
            auto sx = k_->simplex(n, s);
            t.front[s] = static_cast<std::uint32_t>(*k_->index_of(sx.first(static_cast<std::size_t>(p) + 1)));
            t.back[s] = static_cast<std::uint32_t>(*k_->index_of(sx.subspan(static_cast<std::size_t>(p))));
        }
        return tables_.emplace(key, std::move(t)).first->second;
    }

    SimplicialComplex const* k_;
    mutable std::mutex mutex_;
    mutable std::map<std::pair<int, int>, FaceTable> tables_;
};

template <typename Ring>
Cochain<Ring> cup(SimplicialComplex const& k, Ring const& ring, Cochain<Ring> const& a, Cochain<Ring> const& b)
{
    return CupEngine(k).cup(ring, a, b);
}

} // namespace lensconf::simplicial
