#pragma once

#include <array>
#include <optional>
#include <random>

#include "lensconf/cupmassey/dga.hpp"

namespace lensconf::cupmassey {

enum class Verdict
{
    trivial,
    nontrivial,
};

inline std::string verdict_name(Verdict v)
{
    return v == Verdict::trivial ? "TRIVIAL" : "NONTRIVIAL";
}

/// Raised when a Massey product is not defined because x∪y or y∪z is not
/// zero in cohomology.
class MasseyUndefined : public InputError
{
public:
    MasseyUndefined(std::string const& what, std::string product) : InputError(what), product_(std::move(product)) {}
    std::string const& product() const { return product_; }

private:
    std::string product_;
};

template <typename Ring>
struct CohomologyClass
{
    int degree = 0;
    /// coordinates in the engine's H-basis (fields only)
    std::vector<typename Ring::value_type> coords;
    Cochain<Ring> representative;
};

template <typename Ring>
struct MasseyOutcome
{
    using Element = Cochain<Ring>;
    using value_type = typename Ring::value_type;

    Element x, y, z;
    /// δZ = x∪y and δX = y∪z
    Element Z, X;
    /// Z∪z − (−1)^{deg x} x∪X
    Element representative;
    std::vector<Element> indeterminacy;
    Verdict verdict = Verdict::trivial;

    // Over a field: coordinates in the H-basis of the target degree.
    std::vector<value_type> representative_coords;
    std::vector<std::vector<value_type>> indeterminacy_coords;
    /// TRIVIAL: representative ≡ Σ combination[i]·indeterminacy[i] modulo
    /// coboundaries.
    std::vector<value_type> combination;
    /// NONTRIVIAL over a field: a functional on H that kills every
    /// indeterminacy generator and takes the value 1 on the representative.
    std::vector<value_type> functional;
};

enum class LiftChoice
{
    canonical,
    random,
};

/// Cohomology and Massey products of a DGA. Per-degree data (H-bases,
/// coordinate maps and lift solvers) is built lazily and cached.
template <typename Ring>
class MasseyEngine
{
public:
    using Element = Cochain<Ring>;
    using value_type = typename Ring::value_type;
    struct NoBasis
    {
    };
    using Basis = std::conditional_t<Ring::is_field, chaincore::EchelonBasis<Ring>, NoBasis>;

    explicit MasseyEngine(DGA<Ring> const& a) : a_(&a), degrees_(static_cast<std::size_t>(a.top_degree()) + 1) {}

    DGA<Ring> const& dga() const { return *a_; }
    Ring const& ring() const { return a_->ring(); }

    /// Over a field: representatives of an H-basis. Over ℤ: generators of
    /// the cocycle module.
    std::vector<Element> const& cohomology_basis(int d)
    {
        static std::vector<Element> const none;
        if (d < 0 || d > a_->top_degree())
            return none;
        return data(d).reps;
    }

    std::size_t betti(int d) { return cohomology_basis(d).size(); }

    bool is_cocycle(Element const& c) const { return a_->d(c).values.empty(); }

    /// Coordinates of a cocycle in the H-basis (fields only).
    std::optional<std::vector<value_type>> coordinates(Element const& c)
    {
        static_assert(Ring::is_field, "coordinates need a field");
        if (c.degree < 0 || c.degree > a_->top_degree())
            return std::vector<value_type>{};
        if (!is_cocycle(c))
            return std::nullopt;
        auto& dd = data(c.degree);
        SparseVector<Ring> combo;
        auto rem = dd.coords->reduce(c.values, &combo);
        if (!rem.empty())
            throw VerificationError("cocycle not in the span of coboundaries and H-basis");
        return chaincore::dense_from_sparse(ring(), combo, dd.reps.size());
    }

    bool is_coboundary(Element const& c)
    {
        if (c.values.empty())
            return true;
        if (c.degree <= 0 || c.degree > a_->top_degree())
            return false;
        return lift(c).has_value();
    }

    Element class_representative(int d, std::vector<value_type> const& coords)
    {
        auto const& reps = cohomology_basis(d);
        if (coords.size() != reps.size())
            throw InputError("class has " + std::to_string(coords.size()) + " coordinates, H^" + std::to_string(d) +
                             " basis has " + std::to_string(reps.size()));
        Element out{d, {}};
        for (std::size_t i = 0; i < reps.size(); ++i)
            out = a_->add(out, reps[i], coords[i]);
        return out;
    }

    /// Some u with δu = target, if one exists.
    std::optional<Element> lift(Element const& target)
    {
        int const n = target.degree;
        if (target.values.empty())
            return Element{n - 1, {}};
        if (n <= 0 || n > a_->top_degree())
            return std::nullopt;
        if constexpr (Ring::is_field) {
            auto& dd = data(n - 1);
            SparseVector<Ring> combo;
            if (!dd.solver->reduce(target.values, &combo).empty())
                return std::nullopt;
            return Element{n - 1, std::move(combo)};
        } else {
            auto x = chaincore::solve_linear(a_->differential(n - 1), target.values);
            if (!x)
                return std::nullopt;
            return Element{n - 1, std::move(*x)};
        }
    }

    /// A uniformly chosen point of the affine space of lifts (small random
    /// coefficients over ℚ).
    template <typename Rng>
    std::optional<Element> random_lift(Element const& target, Rng& rng)
    {
        static_assert(Ring::is_field, "random lifts need a field");
        auto u = lift(target);
        if (!u)
            return u;
        int const d = target.degree - 1;
        // add a random cocycle: δ(random w) + random H combination
        if (d >= 1) {
            Element w{d - 1, {}};
            for (std::uint32_t i = 0; i < a_->dim(d - 1); ++i)
                if (auto c = random_scalar(rng); !ring().is_zero(c))
                    w.values.push_back({i, c});
            *u = a_->add(*u, a_->d(w));
        }
        for (auto const& h : cohomology_basis(d))
            *u = a_->add(*u, h, random_scalar(rng));
        return u;
    }

    /// ⟨x, y, z⟩ for cocycles x, y, z.
    template <typename Rng = std::mt19937_64>
    MasseyOutcome<Ring> triple(Element const& x,
                               Element const& y,
                               Element const& z,
                               LiftChoice choice = LiftChoice::canonical,
                               Rng* rng = nullptr)
    {
        for (auto const* c : {&x, &y, &z})
            if (!is_cocycle(*c))
                throw InputError("Massey product input is not a cocycle");
        MasseyOutcome<Ring> out;
        out.x = x;
        out.y = y;
        out.z = z;
        auto const& A = *a_;
        auto do_lift = [&](Element const& t) -> std::optional<Element> {
            if constexpr (Ring::is_field) {
                if (choice == LiftChoice::random && rng)
                    return random_lift(t, *rng);
            }
            return lift(t);
        };
        auto xy = A.mul(x, y);
        auto Z = do_lift(xy);
        if (!Z)
            throw MasseyUndefined("x∪y is not zero in cohomology", describe_class(xy));
        auto yz = A.mul(y, z);
        auto X = do_lift(yz);
        if (!X)
            throw MasseyUndefined("y∪z is not zero in cohomology", describe_class(yz));
        out.Z = *Z;
        out.X = *X;
        value_type const sign = x.degree % 2 == 0 ? ring().one() : ring().neg(ring().one());
        out.representative = A.add(A.mul(*Z, z), A.mul(x, *X), ring().neg(sign));
        int const n = x.degree + y.degree + z.degree - 1;
        out.representative.degree = n;
        for (auto const& h : cohomology_basis(y.degree + z.degree - 1))
            out.indeterminacy.push_back(A.mul(x, h));
        for (auto const& h : cohomology_basis(x.degree + y.degree - 1))
            out.indeterminacy.push_back(A.mul(h, z));
        for (auto& g : out.indeterminacy)
            g.degree = n;
        decide(out, n);
        return out;
    }

    std::string describe_class(Element const& c)
    {
        if constexpr (Ring::is_field) {
            auto co = coordinates(c);
            if (!co)
                return "(not a cocycle)";
            std::string s = "H^" + std::to_string(c.degree) + "(";
            for (std::size_t i = 0; i < co->size(); ++i)
                s += (i ? "," : "") + ring().to_string((*co)[i]);
            return s + ")";
        } else {
            return a_->format(c);
        }
    }

private:
    struct DegreeData
    {
        bool built = false;
        std::vector<Element> reps;
        /// coboundaries inserted untracked, then H-basis tracked
        std::unique_ptr<Basis> coords;
        /// columns of δ out of this degree, tracked by column index
        std::unique_ptr<Basis> solver;
    };

    template <typename Rng>
    value_type random_scalar(Rng& rng) const
    {
        return ring().from_int(static_cast<long>(rng() % 7) - 3);
    }

    DegreeData& data(int d)
    {
        auto& dd = degrees_[static_cast<std::size_t>(d)];
        if (dd.built)
            return dd;
        dd.built = true;
        auto const delta = a_->differential(d);
        if constexpr (Ring::is_field) {
            // column reduction of δ^d: lift solver and cocycles at once
            dd.solver = std::make_unique<Basis>(ring(), true);
            std::vector<SparseVector<Ring>> cocycles;
            for (std::uint32_t j = 0; j < delta.cols(); ++j) {
                SparseVector<Ring> combo;
                if (dd.solver->reduce(delta.column(j), &combo).empty()) {
                    auto k = chaincore::scaled(ring(), ring().neg(ring().one()), combo);
                    k = chaincore::add_scaled(ring(), k, ring().one(), SparseVector<Ring>{{j, ring().one()}});
                    cocycles.push_back(std::move(k));
                } else {
                    dd.solver->insert(delta.column(j), j);
                }
            }
            dd.coords = std::make_unique<Basis>(ring(), true);
            if (d > 0) {
                auto const in = a_->differential(d - 1);
                for (auto const& col : in.columns())
                    dd.coords->insert(col, 0, false);
            }
            for (auto& c : cocycles) {
                auto const id = static_cast<std::uint32_t>(dd.reps.size());
                if (dd.coords->insert(c, id))
                    dd.reps.push_back(Element{d, std::move(c)});
            }
        } else {
            for (auto& k : chaincore::kernel_basis(delta))
                dd.reps.push_back(Element{d, std::move(k)});
        }
        return dd;
    }

    void decide(MasseyOutcome<Ring>& out, int n)
    {
        auto const& r = ring();
        if constexpr (Ring::is_field) {
            out.representative_coords = *coordinates(out.representative);
            std::size_t const h = out.representative_coords.size();
            chaincore::EchelonBasis<Ring> span(r, true);
            for (std::size_t i = 0; i < out.indeterminacy.size(); ++i) {
                out.indeterminacy_coords.push_back(*coordinates(out.indeterminacy[i]));
                span.insert(chaincore::sparse_from_dense<Ring>(r, out.indeterminacy_coords.back()),
                            static_cast<std::uint32_t>(i));
            }
            SparseVector<Ring> combo;
            auto rv = chaincore::sparse_from_dense<Ring>(r, out.representative_coords);
            if (span.reduce(rv, &combo).empty()) {
                out.verdict = Verdict::trivial;
                out.combination = chaincore::dense_from_sparse(r, combo, out.indeterminacy.size());
                return;
            }
            out.verdict = Verdict::nontrivial;
            // rows: generators then representative; solve rows·φ = (0,…,0,1)
            std::size_t const g = out.indeterminacy.size();
            SparseMatrix<Ring> m(r, g + 1, h);
            for (std::uint32_t j = 0; j < h; ++j) {
                SparseVector<Ring> col;
                for (std::uint32_t i = 0; i < g; ++i)
                    if (!r.is_zero(out.indeterminacy_coords[i][j]))
                        col.push_back({i, out.indeterminacy_coords[i][j]});
                if (!r.is_zero(out.representative_coords[j]))
                    col.push_back({static_cast<std::uint32_t>(g), out.representative_coords[j]});
                m.set_column(j, std::move(col));
            }
            SparseVector<Ring> rhs{{static_cast<std::uint32_t>(g), r.one()}};
            auto phi = chaincore::solve_linear(m, rhs);
            if (!phi)
                throw VerificationError("no separating functional for a non-member");
            out.functional = chaincore::dense_from_sparse(r, *phi, h);
        } else {
            // representative ∈ span(indeterminacy) + im δ over ℤ
            std::size_t const g = out.indeterminacy.size();
            auto const delta = n >= 1 ? a_->differential(n - 1) : SparseMatrix<Ring>(r, a_->dim(n), 0);
            SparseMatrix<Ring> m(r, a_->dim(n), g + delta.cols());
            for (std::size_t i = 0; i < g; ++i)
                m.set_column(i, out.indeterminacy[i].values);
            for (std::size_t j = 0; j < delta.cols(); ++j)
                m.set_column(g + j, delta.column(j));
            auto sol = chaincore::solve_linear(m, out.representative.values);
            if (!sol) {
                out.verdict = Verdict::nontrivial;
                return;
            }
            out.verdict = Verdict::trivial;
            for (std::size_t i = 0; i < g; ++i)
                out.combination.push_back(chaincore::coefficient(r, *sol, static_cast<std::uint32_t>(i)));
        }
    }

    DGA<Ring> const* a_;
    std::vector<DegreeData> degrees_;
};

/// H-basis dimensions and the cup product table in H-coordinates.
template <typename Ring>
struct CohomologyRing
{
    std::vector<std::size_t> dims;
    /// products[(p, i, q, j)] = coordinates of h^p_i ∪ h^q_j
    std::map<std::tuple<int, std::size_t, int, std::size_t>, std::vector<typename Ring::value_type>> products;

    std::string describe(Ring const& ring) const
    {
        std::string s;
        for (std::size_t d = 0; d < dims.size(); ++d)
            s += (d ? " " : "") + std::string("H") + std::to_string(d) + "=" + std::to_string(dims[d]);
        for (auto const& [key, c] : products) {
            bool zero = true;
            for (auto const& v : c)
                zero = zero && ring.is_zero(v);
            if (zero)
                continue;
            auto [p, i, q, j] = key;
            s += "\n  h" + std::to_string(p) + "_" + std::to_string(i) + " * h" + std::to_string(q) + "_" +
                 std::to_string(j) + " = (";
            for (std::size_t k = 0; k < c.size(); ++k)
                s += (k ? "," : "") + ring.to_string(c[k]);
            s += ")";
        }
        return s;
    }
};

template <typename Ring>
CohomologyRing<Ring> cohomology_ring(MasseyEngine<Ring>& engine)
{
    static_assert(Ring::is_field, "cohomology_ring needs a field");
    auto const& A = engine.dga();
    CohomologyRing<Ring> out;
    for (int d = 0; d <= A.top_degree(); ++d)
        out.dims.push_back(engine.betti(d));
    for (int p = 0; p <= A.top_degree(); ++p)
        for (int q = 0; p + q <= A.top_degree(); ++q)
            for (std::size_t i = 0; i < out.dims[static_cast<std::size_t>(p)]; ++i)
                for (std::size_t j = 0; j < out.dims[static_cast<std::size_t>(q)]; ++j) {
                    auto prod = A.mul(engine.cohomology_basis(p)[i], engine.cohomology_basis(q)[j]);
                    prod.degree = p + q;
                    out.products[{p, i, q, j}] = *engine.coordinates(prod);
                }
    return out;
}

struct SweepEntry
{
    std::array<std::size_t, 3> index{};
    bool admissible = false;
    Verdict verdict = Verdict::trivial;
    std::string detail;
};

struct SweepReport
{
    std::array<int, 3> degrees{};
    std::size_t total = 0;
    std::size_t admissible = 0;
    std::size_t trivial = 0;
    std::size_t nontrivial = 0;
    bool complete = true;
    std::vector<SweepEntry> entries;

    bool all_trivial() const { return complete && nontrivial == 0; }
};

/// All triples of classes drawn from the degree-wise bases (plus any extra
/// classes per slot), up to `max_triples`.
template <typename Ring>
SweepReport massey_sweep(MasseyEngine<Ring>& engine,
                         std::array<int, 3> degrees,
                         std::size_t max_triples = 100000,
                         std::array<std::vector<Cochain<Ring>>, 3> extra = {})
{
    SweepReport rep;
    rep.degrees = degrees;
    std::array<std::vector<Cochain<Ring>>, 3> classes;
    for (std::size_t s = 0; s < 3; ++s) {
        classes[s] = engine.cohomology_basis(degrees[s]);
        for (auto const& e : extra[s])
            classes[s].push_back(e);
    }
    for (std::size_t i = 0; i < classes[0].size(); ++i)
        for (std::size_t j = 0; j < classes[1].size(); ++j)
            for (std::size_t k = 0; k < classes[2].size(); ++k) {
                if (rep.total >= max_triples) {
                    rep.complete = false;
                    return rep;
                }
                ++rep.total;
                SweepEntry e;
                e.index = {i, j, k};
                try {
                    auto out = engine.triple(classes[0][i], classes[1][j], classes[2][k]);
                    e.admissible = true;
                    e.verdict = out.verdict;
                    ++rep.admissible;
                    if (out.verdict == Verdict::trivial) {
                        ++rep.trivial;
                    } else {
                        ++rep.nontrivial;
                        e.detail = "representative " + engine.describe_class(out.representative);
                    }
                } catch (MasseyUndefined const& u) {
                    e.detail = std::string(u.what()) + ": " + u.product();
                }
                rep.entries.push_back(std::move(e));
            }
    return rep;
}

} // namespace lensconf::cupmassey
