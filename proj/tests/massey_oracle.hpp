#pragma once

// Random small DGAs and a brute-force Massey oracle shared by the unit and
// acceptance suites.

#include <random>
#include <set>

#include "lensconf/cupmassey.hpp"
#include "lensconf/simplicial.hpp"

namespace lensconf::oracle {

using chaincore::PrimeField;
using cupmassey::DGA;
using Element = simplicial::Cochain<PrimeField>;

/// Exterior algebra on `gens` degree-1 generators truncated above degree
/// `top`, with a random differential on the generators extended by Leibniz.
/// Returns nullopt when the random differential fails d∘d = 0.
inline std::optional<DGA<PrimeField>> random_exterior_dga(PrimeField f, int gens, int top, std::mt19937_64& rng)
{
    cupmassey::DGATable<PrimeField> t;
    std::vector<unsigned> masks;
    for (unsigned m = 0; m < (1u << gens); ++m)
        if (__builtin_popcount(m) <= top)
            masks.push_back(m);
    std::sort(masks.begin(), masks.end(), [](unsigned a, unsigned b) {
        return std::make_pair(__builtin_popcount(a), a) < std::make_pair(__builtin_popcount(b), b);
    });
    std::map<unsigned, std::size_t> id;
    for (auto m : masks) {
        id[m] = t.basis.size();
        std::string name = m == 0 ? "1" : "";
        for (int g = 0; g < gens; ++g)
            if (m & (1u << g))
                name += static_cast<char>('a' + g);
        t.basis.push_back({name, __builtin_popcount(m)});
    }
    t.unit = id[0];
    // sign of e_a · e_b in the exterior algebra (0 if they overlap)
    auto wedge_sign = [](unsigned a, unsigned b) -> int {
        if (a & b)
            return 0;
        int swaps = 0;
        for (int i = 0; i < 32; ++i)
            if (b & (1u << i))
                swaps += __builtin_popcount(a >> (i + 1));
        return swaps % 2 ? -1 : 1;
    };
    using Combo = std::map<unsigned, long>;
    for (auto a : masks)
        for (auto b : masks) {
            if (a == 0 || b == 0)
                continue;
            int s = wedge_sign(a, b);
            if (s == 0 || !id.count(a | b))
                continue;
            t.product[{id[a], id[b]}] = {{id[a | b], f.from_int(s)}};
        }
    // random d on generators: combination of degree-2 monomials
    std::vector<Combo> dgen(static_cast<std::size_t>(gens));
    if (top >= 2)
        for (int g = 0; g < gens; ++g)
            for (auto m : masks)
                if (__builtin_popcount(m) == 2 && rng() % 2)
                    dgen[static_cast<std::size_t>(g)][m] = static_cast<long>(rng() % 5) - 2;
    for (auto m : masks) {
        Combo dm;
        // d(g_{i1} … g_{ik}) = Σ_r (−1)^r g_{i1} … d(g_{ir}) … g_{ik}
        int r = 0;
        for (int g = 0; g < gens; ++g) {
            if (!(m & (1u << g)))
                continue;
            unsigned const before = m & ((1u << g) - 1);
            unsigned const after = m & ~((1u << (g + 1)) - 1);
            for (auto const& [mono, c] : dgen[static_cast<std::size_t>(g)]) {
                int s1 = wedge_sign(before, mono);
                if (s1 == 0)
                    continue;
                int s2 = wedge_sign(before | mono, after);
                if (s2 == 0)
                    continue;
                unsigned const res = before | mono | after;
                if (!id.count(res))
                    continue;
                dm[res] += (r % 2 ? -1 : 1) * s1 * s2 * c;
            }
            ++r;
        }
        std::vector<std::pair<std::size_t, std::uint32_t>> combo;
        for (auto const& [mono, c] : dm)
            if (f.from_int(c) != 0)
                combo.emplace_back(id[mono], f.from_int(c));
        if (!combo.empty())
            t.differential[id[m]] = combo;
    }
    try {
        return cupmassey::dga_from_table(f, t);
    } catch (InputError const&) {
        return std::nullopt;
    }
}

/// Cochain algebra of a random subcomplex of the 3-simplex with at most
/// 12 simplices.
inline DGA<PrimeField> random_simplicial_dga(PrimeField f, std::mt19937_64& rng)
{
    while (true) {
        std::vector<simplicial::Simplex> gens;
        for (int k = 0; k < 3; ++k) {
            simplicial::Simplex s;
            for (simplicial::Vertex v = 0; v < 4; ++v)
                if (rng() % 2)
                    s.push_back(v);
            if (s.size() >= 2 && s.size() <= 3)
                gens.push_back(s);
        }
        if (gens.empty())
            continue;
        auto k = simplicial::SimplicialComplex::from_simplices(gens);
        if (k.total_simplices() > 12)
            continue;
        return cupmassey::simplicial_to_dga(simplicial::share(std::move(k)), f);
    }
}

/// Every vector of the given degree, as elements.
inline std::vector<Element> all_elements(DGA<PrimeField> const& a, int d)
{
    std::vector<Element> out;
    std::size_t const n = a.dim(d);
    std::uint32_t const p = a.ring().descriptor().p;
    std::vector<std::uint32_t> digits(n, 0);
    while (true) {
        Element e{d, {}};
        for (std::uint32_t i = 0; i < n; ++i)
            if (digits[i])
                e.values.push_back({i, digits[i]});
        out.push_back(std::move(e));
        std::size_t i = 0;
        while (i < n && ++digits[i] == p)
            digits[i++] = 0;
        if (i == n)
            break;
    }
    return out;
}

enum class OracleVerdict
{
    undefined,
    trivial,
    nontrivial,
};

/// ⟨x,y,z⟩ is trivial iff some choice of lifts Z, X makes the
/// representative a coboundary. Enumerates every lift.
inline OracleVerdict brute_force_massey(DGA<PrimeField> const& a, Element const& x, Element const& y, Element const& z)
{
    auto const& f = a.ring();
    int const n = x.degree + y.degree + z.degree - 1;
    auto lifts = [&](Element const& target, int deg) {
        std::vector<Element> out;
        if (deg < 0) {
            if (target.values.empty())
                out.push_back(Element{deg, {}});
            return out;
        }
        for (auto const& u : all_elements(a, deg))
            if (a.d(u).values == target.values)
                out.push_back(u);
        return out;
    };
    auto Zs = lifts(a.mul(x, y), x.degree + y.degree - 1);
    auto Xs = lifts(a.mul(y, z), y.degree + z.degree - 1);
    if (Zs.empty() || Xs.empty())
        return OracleVerdict::undefined;
    std::set<std::vector<std::uint32_t>> boundaries;
    auto dense = [&](Element const& e) { return chaincore::dense_from_sparse(f, e.values, a.dim(n)); };
    if (n - 1 >= 0)
        for (auto const& w : all_elements(a, n - 1))
            boundaries.insert(dense(a.d(w)));
    else
        boundaries.insert(std::vector<std::uint32_t>(a.dim(n), 0));
    auto const minus_sign = x.degree % 2 == 0 ? f.neg(f.one()) : f.one();
    for (auto const& Z : Zs)
        for (auto const& X : Xs) {
            auto rep = a.add(a.mul(Z, z), a.mul(x, X), minus_sign);
            if (boundaries.count(dense(rep)))
                return OracleVerdict::trivial;
        }
    return OracleVerdict::nontrivial;
}

inline Element random_cocycle(DGA<PrimeField> const& a, int d, std::mt19937_64& rng)
{
    std::vector<Element> cocycles;
    for (auto const& e : all_elements(a, d))
        if (a.d(e).values.empty())
            cocycles.push_back(e);
    return cocycles[rng() % cocycles.size()];
}

struct OracleTally
{
    int dgas = 0;
    int agree = 0;
    int disagree = 0;
    int trivial = 0;
    int nontrivial = 0;
    int undefined = 0;
};

/// Runs the engine against the oracle on `count` random DGAs.
inline OracleTally run_oracle_comparison(int count, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    OracleTally tally;
    while (tally.dgas < count) {
        PrimeField f(rng() % 2 ? 2 : 3);
        std::optional<DGA<PrimeField>> a;
        switch (rng() % 3) {
        case 0:
            a = random_exterior_dga(f, 4, 2, rng);
            break;
        case 1:
            a = random_exterior_dga(f, 3, 3, rng);
            break;
        default:
            a = random_simplicial_dga(f, rng);
            break;
        }
        if (!a || a->total_dim() > 12)
            continue;
        ++tally.dgas;
        cupmassey::MasseyEngine<PrimeField> engine(*a);
        for (int trial = 0; trial < 4; ++trial) {
            std::array<int, 3> deg{};
            for (auto& d : deg)
                d = static_cast<int>(rng() % std::min(2, a->top_degree() + 1)) + (a->top_degree() >= 1 ? 1 : 0);
            if (rng() % 5 == 0)
                deg[rng() % 3] = 0;
            auto x = random_cocycle(*a, deg[0], rng);
            auto y = random_cocycle(*a, deg[1], rng);
            auto z = random_cocycle(*a, deg[2], rng);
            auto expected = brute_force_massey(*a, x, y, z);
            OracleVerdict got;
            try {
                auto out = engine.triple(x, y, z);
                got = out.verdict == cupmassey::Verdict::trivial ? OracleVerdict::trivial : OracleVerdict::nontrivial;
            } catch (cupmassey::MasseyUndefined const&) {
                got = OracleVerdict::undefined;
            }
            (got == expected ? tally.agree : tally.disagree)++;
            if (expected == OracleVerdict::trivial)
                ++tally.trivial;
            else if (expected == OracleVerdict::nontrivial)
                ++tally.nontrivial;
            else
                ++tally.undefined;
        }
    }
    return tally;
}

} // namespace lensconf::oracle
