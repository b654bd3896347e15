#pragma once

#include <chrono>

#include "lensconf/chaincore/linear.hpp"
#include "lensconf/dualcalc/membranes.hpp"
#include "lensconf/dualcalc/transversality.hpp"

namespace lensconf::dualcalc {

/// Integer coefficient vector over a_0 … a_{m−1}.
using ClassVector = std::vector<mpz_class>;

/// H⁵ presented as the free module on a_k∪ι modulo Σ_k a_k∪ι.
struct H5Presentation
{
    long m = 7;

    explicit H5Presentation(long modulus) : m(modulus)
    {
        if (m < 2)
            throw InputError("presentation needs m >= 2");
    }

    ClassVector zero() const { return ClassVector(static_cast<std::size_t>(m), 0); }

    ClassVector basis(long k) const
    {
        auto v = zero();
        v.at(static_cast<std::size_t>(detail::mod(k, m))) = 1;
        return v;
    }

    ClassVector relation() const { return ClassVector(static_cast<std::size_t>(m), 1); }

    /// Rank of the quotient.
    long rank() const { return m - 1; }

    /// Whether v lies in span(generators) + (relation).
    std::optional<ClassVector> solve(ClassVector const& v, std::vector<ClassVector> const& generators) const
    {
        auto gens = generators;
        gens.push_back(relation());
        return chaincore::submodule_membership(chaincore::Integers{}, gens, v);
    }

    bool member(ClassVector const& v, std::vector<ClassVector> const& generators) const
    {
        return solve(v, generators).has_value();
    }

    std::string describe(ClassVector const& v, std::string const& suffix = "∪ι") const
    {
        static char const* const sub[] = {"₀", "₁", "₂", "₃", "₄", "₅", "₆", "₇", "₈", "₉"};
        std::string out;
        for (std::size_t k = 0; k < v.size(); ++k) {
            if (sgn(v[k]) == 0)
                continue;
            std::string idx;
            for (char c : std::to_string(k))
                idx += sub[c - '0'];
            mpz_class const mag = abs(v[k]);
            std::string const term = (mag == 1 ? "" : mag.get_str()) + "a" + idx + suffix;
            if (out.empty())
                out = sgn(v[k]) < 0 ? "-" + term : term;
            else
                out += (sgn(v[k]) < 0 ? " - " : " + ") + term;
        }
        return out.empty() ? "0" : out;
    }
};

/// Parses "a2+a6", "a4", "-a1 + 2a3" into a class vector.
inline ClassVector parse_class(std::string const& text, long m)
{
    Affine a;
    try {
        a = cyclosolve::parse_affine(text);
    } catch (InputError const& e) {
        throw InputError("class '" + text + "': " + e.what());
    }
    if (sgn(a.constant()) != 0)
        throw InputError("class '" + text + "' has a constant term");
    ClassVector v(static_cast<std::size_t>(m), 0);
    for (auto const& [n, c] : a.coefficients()) {
        if (n.size() < 2 || n[0] != 'a' || n.find_first_not_of("0123456789", 1) != std::string::npos)
            throw InputError("class '" + text + "': '" + n + "' is not of the form a<k>");
        long const k = std::stol(n.substr(1));
        if (k >= m)
            throw InputError("class '" + text + "': index " + std::to_string(k) + " out of range");
        if (c.get_den() != 1)
            throw InputError("class '" + text + "': coefficients must be integers");
        v[static_cast<std::size_t>(k)] = c.get_num();
    }
    return v;
}

/// ζ → ζ^u moves a_k to a_{uk}.
inline ClassVector relabel(ClassVector const& v, long u)
{
    long const m = static_cast<long>(v.size());
    if (std::gcd(u, m) != 1)
        throw InputError("relabelling exponent must be coprime to the modulus");
    ClassVector out(v.size(), 0);
    for (long k = 0; k < m; ++k)
        out[static_cast<std::size_t>(detail::mod(u * k, m))] = v[static_cast<std::size_t>(k)];
    return out;
}

enum class MasseyVerdict { trivial, nontrivial };

inline std::string massey_verdict_name(MasseyVerdict v) { return v == MasseyVerdict::trivial ? "TRIVIAL" : "NONTRIVIAL"; }

/// The product is trivial iff its representative lies in the indeterminacy.
/// Membership of v and −v coincide, so the sign of the representative is
/// irrelevant.
inline MasseyVerdict decide(H5Presentation const& h, ClassVector const& representative, std::vector<ClassVector> const& indeterminacy)
{
    return h.member(representative, indeterminacy) ? MasseyVerdict::trivial : MasseyVerdict::nontrivial;
}

struct LemmaVerdict
{
    std::string name;
    std::string claim;
    bool holds = false;
    std::string detail;
};

struct CertificateRecord
{
    std::string name;
    RankCertificate certificate;
    double seconds = 0;
};

struct MasseyOutcome
{
    MasseyVerdict verdict = MasseyVerdict::trivial;
    ClassVector representative;
    std::string representative_text;
    std::vector<ClassVector> indeterminacy;
    std::vector<std::string> indeterminacy_text;
    std::string chain; // bounding chain of x ∪ y
    std::vector<LemmaVerdict> lemmas;
    std::vector<CertificateRecord> certificates;
};

struct MasseyOptions
{
    RankOptions rank;
    /// appended to the indeterminacy generators (adversarial runs)
    std::vector<ClassVector> extra_indeterminacy;
    unsigned workers = default_workers();
};

namespace detail {

inline long single_index(ClassVector const& v, char const* what)
{
    long idx = -1;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (sgn(v[k]) == 0)
            continue;
        if (idx >= 0 || abs(v[k]) != 1)
            throw InputError(std::string(what) + " must be a single class a_k");
        idx = static_cast<long>(k);
    }
    if (idx < 0)
        throw InputError(std::string(what) + " is zero");
    return idx;
}

inline CertificateRecord certify(std::string name, Intersection const& in, SolutionBranch const& b, RankOptions const& opt)
{
    auto const start = std::chrono::steady_clock::now();
    CertificateRecord rec{std::move(name), transversality(in, b, opt), 0};
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (rec.certificate.verdict == cyclosolve::RankVerdict::inconclusive)
        throw VerificationError("transversality of " + rec.name + " is INCONCLUSIVE: " + rec.certificate.message);
    if (rec.certificate.verdict != cyclosolve::RankVerdict::certified)
        throw VerificationError("transversality of " + rec.name + " fails: " + rec.certificate.message);
    return rec;
}

} // namespace detail

/// ⟨x, y, z⟩ through dual cycles, for x = a_i and y = a_j single membranes.
/// A_i ∩ A_j must be bounded by a radial chain X from the two-exponent
/// family, A_j must miss every A_k with z_k ≠ 0 off the diagonals (so the
/// second bounding chain is 0), and each X ∩ A_k must be empty or equal to
/// the slice A_k ∩ S. Then X·z is the representative Σ z_k a_k∪ι and the
/// indeterminacy is generated by x∪ι and z∪ι.
inline MasseyOutcome massey_via_intersection(long m,
                                             long q,
                                             ClassVector const& x,
                                             ClassVector const& y,
                                             ClassVector const& z,
                                             MasseyOptions const& opt = {})
{
    detail::check_action(m, q);
    for (auto const* v : {&x, &y, &z})
        if (static_cast<long>(v->size()) != m)
            throw InputError("class vector length differs from the modulus");
    long const i = detail::single_index(x, "first class");
    long const j = detail::single_index(y, "second class");
    H5Presentation const h(m);
    MasseyOutcome out;
    auto name = [](long k) { return "A" + std::to_string(k); };

    PatternTable const table = intersection_pattern(m, q, opt.workers);
    out.lemmas.push_back({"pattern-symmetry", "the intersection table is symmetric and shift invariant",
                          table.symmetric() && table.shift_invariant(), table.render()});

    // first bounding chain: X with ∂X = A_i ∩ A_j modulo diagonals
    ParamPatch chain;
    bool have_chain = false;
    if (table.cell(i, j).meets) {
        auto const search = search_bounding_chain(m, q, std::min(i, j), std::max(i, j));
        if (search.status != ChainSearch::Status::found)
            throw InputError("no bounding chain for " + name(i) + "∩" + name(j) + " in the radial family (" +
                             search.status_name() + ")");
        auto const [a, b] = search.chains.front();
        chain = radial_chain(a, b, m, "X" + std::to_string(std::min(i, j)) + std::to_string(std::max(i, j)));
        have_chain = true;
        out.chain = chain.name + " = " + chain.to_string();

        auto const in = intersect(membrane(std::min(i, j), m, q).patch, membrane(std::max(i, j), m, q, "s").patch);
        auto const ess = essential_branches(in.patch, q);
        out.lemmas.push_back({"cylinder", name(i) + "∩" + name(j) + " is a 2-dimensional family off the diagonals",
                              ess.size() == 1 && ess.front().dimension() == 2,
                              ess.empty() ? "empty" : ess.front().describe(in.patch.system())});
        for (auto const& br : ess)
            out.certificates.push_back(detail::certify(in.patch.name, in, br, opt.rank));

        std::string faces_text;
        auto const verdicts = classify_boundary(chain, q, {{in.patch.name, in.patch}});
        for (auto const& v : verdicts)
            faces_text += (faces_text.empty() ? "" : "; ") + v.to_string();
        out.lemmas.push_back({"bounding-chain", "the boundary of " + chain.name + " is " + in.patch.name +
                                                    " plus pieces of diagonals",
                              true, faces_text});
    } else {
        out.chain = "0";
    }

    // second bounding chain must vanish
    for (long k = 0; k < m; ++k) {
        if (sgn(z[static_cast<std::size_t>(k)]) == 0)
            continue;
        if (k == j || table.cell(j, k).meets)
            throw InputError(name(j) + "∩" + name(k) + " needs a bounding chain; only vanishing second chains are supported");
    }
    out.lemmas.push_back({"second-chain", name(j) + " meets the third class only inside the diagonals", true, ""});

    // representative X · z
    ClassVector rep = h.zero();
    if (have_chain) {
        ParamPatch const s = slice(m);
        for (long k = 0; k < m; ++k) {
            auto const c = z[static_cast<std::size_t>(k)];
            if (sgn(c) == 0)
                continue;
            ParamPatch const ak = membrane(k, m, q, "s").patch;
            auto const in = intersect(chain, ak);
            auto const ess = essential_branches(in.patch, q);
            if (ess.empty()) {
                out.lemmas.push_back({"empty-" + chain.name + "-" + name(k), chain.name + "∩" + name(k) + " is empty",
                                      in.patch.empty(), in.patch.empty() ? "no solutions" : "only diagonal points"});
                continue;
            }
            ParamPatch const expected = intersect(ak, s).patch;
            bool const equal = same_set(in.patch, expected);
            std::string detail;
            for (auto const& br : ess)
                detail += (detail.empty() ? "" : "; ") + br.describe(in.patch.system());
            out.lemmas.push_back({"slice-" + chain.name + "-" + name(k),
                                  chain.name + "∩" + name(k) + " equals " + name(k) + "∩S", equal, detail});
            if (!equal)
                throw InputError(chain.name + "∩" + name(k) + " is not a slice intersection; its dual class is not computed");
            for (auto const& br : ess)
                out.certificates.push_back(detail::certify(in.patch.name, in, br, opt.rank));
            rep[static_cast<std::size_t>(k)] += c;
        }
    }
    out.representative = rep;
    out.representative_text = h.describe(rep);
    out.indeterminacy = {x, z};
    for (auto const& g : opt.extra_indeterminacy)
        out.indeterminacy.push_back(g);
    for (auto const& g : out.indeterminacy)
        out.indeterminacy_text.push_back(h.describe(g));
    out.verdict = decide(h, rep, out.indeterminacy);
    std::string span;
    for (auto const& t : out.indeterminacy_text)
        span += (span.empty() ? "" : ", ") + t;
    out.lemmas.push_back({"membership",
                          "±" + out.representative_text + " outside span{" + span + "} modulo the relation",
                          out.verdict == MasseyVerdict::nontrivial, massey_verdict_name(out.verdict)});
    return out;
}

} // namespace lensconf::dualcalc
