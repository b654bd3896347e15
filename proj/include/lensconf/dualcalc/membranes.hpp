#pragma once

#include <numeric>

#include "lensconf/dualcalc/patch.hpp"
#include "lensconf/parallel.hpp"

namespace lensconf::dualcalc {

namespace detail {

inline void check_action(long m, long q)
{
    if (m < 2)
        throw InputError("modulus must be at least 2");
    if (std::gcd(q, m) != 1)
        throw InputError("twist " + std::to_string(q) + " is not coprime to " + std::to_string(m));
}

inline long mod(long a, long m) { return ((a % m) + m) % m; }

inline ParamPatch two_sphere_patch(std::string name, long m)
{
    ParamPatch p;
    p.name = std::move(name);
    p.modulus = m;
    p.variables = {{"x1", VariableKind::complex, Magnitude::free}, {"x2", VariableKind::complex, Magnitude::free}};
    p.spheres = {{"x1", "x2"}};
    return p;
}

} // namespace detail

/// Δ_k = {(x, (ζ^k x1, ζ^{qk} x2))}.
inline ParamPatch diagonal(long k, long m, long q)
{
    detail::check_action(m, q);
    ParamPatch p = detail::two_sphere_patch("D" + std::to_string(k), m);
    p.slots = {SlotTerm::of("x1"), SlotTerm::of("x2"), SlotTerm::of("x1", Affine(k)), SlotTerm::of("x2", Affine(q * k))};
    return p;
}

struct Membrane
{
    long k = 0;
    ParamPatch patch;
};

/// A_k: trace of the isotopy ((x1,x2),t) ↦ ((x1,x2),(ζ^{k−1+t}x1, ζ^{q(k−1+t)}x2)).
/// The t = 0 and t = 1 faces are checked to lie in Δ_{k−1} and Δ_k.
inline Membrane membrane(long k, long m, long q, std::string const& param = "t")
{
    detail::check_action(m, q);
    if (k < 0 || k >= m)
        throw InputError("membrane index " + std::to_string(k) + " outside [0," + std::to_string(m) + ")");
    ParamPatch p = detail::two_sphere_patch("A" + std::to_string(k), m);
    p.params = {{param, 0, 1}};
    Affine const e = Affine(k - 1) + Affine::variable(param);
    p.slots = {SlotTerm::of("x1"), SlotTerm::of("x2"), SlotTerm::of("x1", e), SlotTerm::of("x2", e * mpq_class(q))};
    p.validate();
    for (auto const& f : faces(p)) {
        long const want = detail::mod(f.name == param + "=0" ? k - 1 : k, m);
        if (!inside_diagonal(f.patch, want, q))
            throw VerificationError(p.name + ": face " + f.name + " is not inside D" + std::to_string(want));
    }
    return {k, std::move(p)};
}

/// ((r,x),(ζ^{at}r, ζ^{bt}x)) over the half-disc r ≥ 0, r² + |x|² = 1.
inline ParamPatch radial_chain(long a, long b, long m, std::string name = {})
{
    ParamPatch p;
    p.name = name.empty() ? "X(" + std::to_string(a) + "," + std::to_string(b) + ")" : std::move(name);
    p.modulus = m;
    p.params = {{"t", 0, 1}};
    p.variables = {{"r", VariableKind::radial, Magnitude::free}, {"x", VariableKind::complex, Magnitude::free}};
    p.spheres = {{"r", "x"}};
    p.slots = {SlotTerm::of("r"), SlotTerm::of("x"), SlotTerm::of("r", Affine::variable("t", a)),
               SlotTerm::of("x", Affine::variable("t", b))};
    p.validate();
    return p;
}

/// The chain X14 = ((r,x),(ζ^{4t}r, ζ^t x)) bounding A1 ∩ A4 for (7,2).
inline ParamPatch bounding_chain_X14() { return radial_chain(4, 1, 7, "X14"); }

/// The 3-sphere {(1, y)} in the first factor slice.
inline ParamPatch slice(long m)
{
    ParamPatch p;
    p.name = "S";
    p.modulus = m;
    p.variables = {{"y1", VariableKind::complex, Magnitude::free}, {"y2", VariableKind::complex, Magnitude::free}};
    p.spheres = {{"y1", "y2"}};
    p.slots = {SlotTerm::one(), SlotTerm::zero(), SlotTerm::of("y1"), SlotTerm::of("y2")};
    return p;
}

struct PatternCell
{
    long k = 0, j = 0;
    bool meets = false; // outside the diagonals
    int dimension = -1;
    std::vector<std::string> branches;
};

struct PatternTable
{
    long m = 0, q = 0;
    std::vector<PatternCell> cells; // row-major, diagonal cells left empty

    PatternCell const& cell(long k, long j) const
    {
        return cells[static_cast<std::size_t>(detail::mod(k, m) * m + detail::mod(j, m))];
    }

    bool symmetric() const
    {
        for (long k = 0; k < m; ++k)
            for (long j = 0; j < m; ++j)
                if (cell(k, j).meets != cell(j, k).meets || cell(k, j).dimension != cell(j, k).dimension)
                    return false;
        return true;
    }

    bool shift_invariant() const
    {
        for (long k = 0; k < m; ++k)
            for (long j = 0; j < m; ++j)
                if (cell(k, j).meets != cell(k + 1, j + 1).meets ||
                    cell(k, j).dimension != cell(k + 1, j + 1).dimension)
                    return false;
        return true;
    }

    /// Residues j − k (mod m) with A_k ∩ A_j meeting outside the diagonals.
    std::vector<long> offsets() const
    {
        std::set<long> out;
        for (auto const& c : cells)
            if (c.meets)
                out.insert(detail::mod(c.j - c.k, m));
        return {out.begin(), out.end()};
    }

    std::string render() const
    {
        std::string out = "     ";
        for (long j = 0; j < m; ++j)
            out += " A" + std::to_string(j);
        out += "\n";
        for (long k = 0; k < m; ++k) {
            std::string row = "A" + std::to_string(k);
            row.resize(5, ' ');
            for (long j = 0; j < m; ++j) {
                auto const& c = cell(k, j);
                std::string v = k == j ? "=" : c.meets ? std::to_string(c.dimension) : ".";
                row += "  " + v;
                if (j >= 10)
                    row += " ";
            }
            out += row + "\n";
        }
        return out;
    }
};

/// A_k ∩ A_j for every ordered pair k ≠ j, keeping only branches that leave
/// the diagonals (A_k and A_{k+1} share Δ_k by construction).
inline PatternTable intersection_pattern(long m, long q, unsigned workers = default_workers())
{
    detail::check_action(m, q);
    std::vector<Membrane> a;
    for (long k = 0; k < m; ++k)
        a.push_back(membrane(k, m, q));
    PatternTable t;
    t.m = m;
    t.q = q;
    t.cells.resize(static_cast<std::size_t>(m * m));
    parallel_for(
        t.cells.size(),
        [&](std::size_t idx) {
            long const k = static_cast<long>(idx) / m, j = static_cast<long>(idx) % m;
            PatternCell& c = t.cells[idx];
            c.k = k;
            c.j = j;
            if (k == j)
                return;
            auto const in = intersect(a[k].patch, a[j].patch);
            auto const sys = in.patch.system();
            for (auto const& b : essential_branches(in.patch, q)) {
                c.meets = true;
                c.dimension = std::max(c.dimension, b.dimension());
                c.branches.push_back(b.describe(sys));
            }
        },
        workers);
    return t;
}

struct FaceVerdict
{
    enum class Kind { empty, diagonal, matches, unclassified };
    std::string face;
    Kind kind = Kind::unclassified;
    long diagonal = -1;
    std::string match;

    std::string to_string() const
    {
        switch (kind) {
        case Kind::empty: return face + ": empty";
        case Kind::diagonal: return face + ": inside D" + std::to_string(diagonal);
        case Kind::matches: return face + ": equals " + match;
        case Kind::unclassified: return face + ": unclassified";
        }
        return face;
    }
};

/// Classification without the error on unclassified faces.
inline std::vector<FaceVerdict> classify_faces(ParamPatch const& p,
                                               long q,
                                               std::vector<std::pair<std::string, ParamPatch>> const& expected)
{
    std::vector<FaceVerdict> out;
    for (auto const& f : faces(p)) {
        FaceVerdict v;
        v.face = f.name;
        if (f.patch.empty()) {
            v.kind = FaceVerdict::Kind::empty;
        } else if (auto l = diagonal_containing(f.patch, q)) {
            v.kind = FaceVerdict::Kind::diagonal;
            v.diagonal = *l;
        } else {
            for (auto const& [name, patch] : expected)
                if (same_set(f.patch, patch)) {
                    v.kind = FaceVerdict::Kind::matches;
                    v.match = name;
                    break;
                }
        }
        out.push_back(std::move(v));
    }
    return out;
}

/// Each face of the patch: inside a diagonal, equal to one of the named
/// expected sets, or an error.
inline std::vector<FaceVerdict> classify_boundary(ParamPatch const& p,
                                                  long q,
                                                  std::vector<std::pair<std::string, ParamPatch>> const& expected = {})
{
    auto out = classify_faces(p, q, expected);
    for (auto const& v : out)
        if (v.kind == FaceVerdict::Kind::unclassified)
            throw VerificationError(p.name + ": face " + v.face + " lies in no diagonal and matches no expected set");
    return out;
}

/// A_k ∩ A_j restricted to its branches outside the diagonals.
inline ParamPatch membrane_intersection(long k, long j, long m, long q)
{
    return intersect(membrane(k, m, q).patch, membrane(j, m, q, "s").patch).patch;
}

struct ChainSearch
{
    enum class Status { found, exhausted, not_needed };
    long k = 0, j = 0;
    Status status = Status::exhausted;
    std::vector<std::pair<long, long>> chains; // exponents (a, b)
    long candidates = 0;

    std::string status_name() const
    {
        switch (status) {
        case Status::found: return "FOUND";
        case Status::exhausted: return "SEARCH-EXHAUSTED";
        case Status::not_needed: return "NOT-NEEDED";
        }
        return "?";
    }
};

/// Chains ((r,x),(ζ^{at}r, ζ^{bt}x)) with |a|, |b| ≤ bound whose r = 0 face
/// is A_k ∩ A_j and whose other faces lie in diagonals. Finding none says
/// nothing beyond this family.
inline ChainSearch search_bounding_chain(long m, long q, long k, long j, long bound = -1)
{
    detail::check_action(m, q);
    if (bound < 0)
        bound = m;
    ChainSearch out;
    out.k = k;
    out.j = j;
    ParamPatch const target = membrane_intersection(k, j, m, q);
    if (essential_branches(target, q).empty()) {
        out.status = ChainSearch::Status::not_needed;
        return out;
    }
    // b by increasing |b|; a through the nonnegative exponents first
    std::vector<long> bs{0}, as;
    for (long i = 1; i <= bound; ++i) {
        bs.push_back(i);
        bs.push_back(-i);
    }
    for (long i = -bound; i <= bound; ++i)
        as.push_back(i);
    std::stable_partition(as.begin(), as.end(), [](long a) { return a >= 0; });
    for (long b : bs)
        for (long a : as) {
            ++out.candidates;
            // faces in order t=0, t=1, r=0; stop at the first that fails
            bool ok = true;
            for (auto const& f : faces(radial_chain(a, b, m))) {
                if (f.name == "r=0")
                    ok = !diagonal_containing(f.patch, q) && same_set(f.patch, target);
                else
                    ok = f.patch.empty() || diagonal_containing(f.patch, q).has_value();
                if (!ok)
                    break;
            }
            if (ok)
                out.chains.emplace_back(a, b);
        }
    out.status = out.chains.empty() ? ChainSearch::Status::exhausted : ChainSearch::Status::found;
    return out;
}

} // namespace lensconf::dualcalc
