#pragma once

#include <array>
#include <optional>

#include "lensconf/cyclosolve.hpp"

namespace lensconf::dualcalc {

using cyclosolve::Affine;
using cyclosolve::CongruenceSystem;
using cyclosolve::Constraint;
using cyclosolve::Magnitude;
using cyclosolve::ParameterBox;
using cyclosolve::PhaseEquation;
using cyclosolve::Polyhedron;
using cyclosolve::SolutionBranch;
using cyclosolve::SolutionSet;
using cyclosolve::VariableKind;

/// One complex coordinate of a point of S³×S³: 0, ζ^θ, or v·ζ^θ.
struct SlotTerm
{
    enum class Kind { zero, one, var };
    Kind kind = Kind::zero;
    std::string var;
    Affine phase;

    static SlotTerm zero() { return {}; }
    static SlotTerm one(Affine phase = {}) { return {Kind::one, "", std::move(phase)}; }
    static SlotTerm of(std::string v, Affine phase = {}) { return {Kind::var, std::move(v), std::move(phase)}; }

    bool is_zero() const { return kind == Kind::zero; }

    friend bool operator==(SlotTerm const& a, SlotTerm const& b)
    {
        return a.kind == b.kind && a.var == b.var && (a.kind == Kind::zero || a.phase == b.phase);
    }

    std::string to_string() const
    {
        std::string const z = phase == Affine() ? "" : "zeta(" + phase.to_string() + ")";
        switch (kind) {
        case Kind::zero: return "0";
        case Kind::one: return z.empty() ? "1" : z;
        case Kind::var: return z.empty() ? var : z + var;
        }
        return "?";
    }
};

struct PatchVariable
{
    std::string name;
    VariableKind kind = VariableKind::complex;
    Magnitude magnitude = Magnitude::free;
};

/// Parametrized family of points ((s0,s1),(s2,s3)) in S³×S³.
struct ParamPatch
{
    std::string name;
    long modulus = 7;
    std::vector<ParameterBox> params;
    std::vector<Constraint> constraints;
    std::vector<PatchVariable> variables;
    std::vector<std::vector<std::string>> spheres;
    std::vector<PhaseEquation> equations;
    std::array<SlotTerm, 4> slots;
    bool contradictory = false; // known to be empty

    PatchVariable const* variable(std::string const& v) const
    {
        for (auto const& x : variables)
            if (x.name == v)
                return &x;
        return nullptr;
    }

    std::vector<std::string> param_names() const
    {
        std::vector<std::string> out;
        for (auto const& p : params)
            out.push_back(p.name);
        return out;
    }

    CongruenceSystem system() const
    {
        CongruenceSystem s;
        s.modulus = modulus;
        s.params = params;
        for (auto const& v : variables)
            s.variables.push_back({v.name, v.kind, v.magnitude});
        s.spheres = spheres;
        s.equations = equations;
        s.constraints = constraints;
        return s;
    }

    SolutionSet solve() const
    {
        if (contradictory)
            return {};
        return cyclosolve::solve_congruences(system());
    }

    bool empty() const { return solve().empty(); }
    int dimension() const { return solve().dimension(); }

    /// Both points must lie on S³ for every parameter value: each point is
    /// (ζ^θ, 0), (0, ζ^θ), or carries exactly the variables of one sphere group.
    void validate() const
    {
        for (int p = 0; p < 2; ++p) {
            SlotTerm const& a = slots[2 * p];
            SlotTerm const& b = slots[2 * p + 1];
            std::string const where = name + " point " + std::to_string(p + 1);
            if (a.kind == SlotTerm::Kind::one || b.kind == SlotTerm::Kind::one) {
                if (!(a.is_zero() || b.is_zero()))
                    throw InputError(where + ": a unit coordinate forces the other to vanish");
                continue;
            }
            std::vector<std::string> vars;
            for (auto const* t : {&a, &b})
                if (t->kind == SlotTerm::Kind::var)
                    vars.push_back(t->var);
            if (vars.empty())
                throw InputError(where + ": both coordinates vanish");
            std::sort(vars.begin(), vars.end());
            bool found = false;
            for (auto g : spheres) {
                std::sort(g.begin(), g.end());
                found = found || g == vars;
            }
            if (!found)
                throw InputError(where + ": coordinates are not tied by a sphere constraint");
        }
        for (auto const& t : slots)
            if (t.kind == SlotTerm::Kind::var && !variable(t.var))
                throw InputError(name + ": unknown variable '" + t.var + "'");
        system().validate();
    }

    std::string to_string() const
    {
        return "((" + slots[0].to_string() + ", " + slots[1].to_string() + "), (" + slots[2].to_string() + ", " +
               slots[3].to_string() + "))";
    }
};

namespace detail {

/// Substitution engine shared by intersection, restriction and faces.
class Unifier
{
public:
    std::vector<std::array<SlotTerm, 4>> sides;
    std::vector<PatchVariable> vars;
    std::vector<std::vector<std::string>> groups;
    std::vector<PhaseEquation> equations;
    std::map<std::string, SlotTerm> subst; // original variable -> current term
    bool contradictory = false;

    void load(ParamPatch const& p)
    {
        sides.push_back(p.slots);
        for (auto const& v : p.variables) {
            vars.push_back(v);
            subst[v.name] = SlotTerm::of(v.name);
        }
        for (auto const& g : p.spheres)
            groups.push_back(g);
        for (auto const& e : p.equations)
            equations.push_back(e);
        contradictory = contradictory || p.contradictory;
    }

    PatchVariable* find(std::string const& v)
    {
        for (auto& x : vars)
            if (x.name == v)
                return &x;
        return nullptr;
    }

    void zero_forced()
    {
        std::vector<std::string> zeros;
        for (auto const& v : vars)
            if (v.magnitude == Magnitude::zero)
                zeros.push_back(v.name);
        for (auto const& v : zeros)
            substitute(v, SlotTerm::zero());
    }

    /// v := term everywhere, then restore the sphere bookkeeping.
    void substitute(std::string const& v, SlotTerm const& term)
    {
        apply(v, term);
        normalize();
    }

private:
    static constexpr char const* unit_marker = "#1";

    void apply(std::string const& v, SlotTerm const& term)
    {
        if (contradictory)
            return;
        PatchVariable* old = find(v);
        if (!old)
            throw VerificationError("substitution of unknown variable '" + v + "'");
        Magnitude const mag = old->magnitude;
        if (term.is_zero() && mag == Magnitude::nonzero) {
            contradictory = true;
            return;
        }
        if (term.kind == SlotTerm::Kind::var) {
            PatchVariable* target = find(term.var);
            if (!target)
                throw VerificationError("substitution into unknown variable '" + term.var + "'");
            if (mag == Magnitude::nonzero)
                target->magnitude = Magnitude::nonzero;
        }
        auto compose = [&](SlotTerm const& s) {
            if (s.kind != SlotTerm::Kind::var || s.var != v)
                return s;
            switch (term.kind) {
            case SlotTerm::Kind::zero: return SlotTerm::zero();
            case SlotTerm::Kind::one: return SlotTerm::one(term.phase + s.phase);
            case SlotTerm::Kind::var: return SlotTerm::of(term.var, term.phase + s.phase);
            }
            return s;
        };
        for (auto& side : sides)
            for (auto& s : side)
                s = compose(s);
        for (auto& [_, t] : subst)
            t = compose(t);
        std::vector<PhaseEquation> kept;
        for (auto e : equations) {
            if (e.var == v) {
                if (term.is_zero())
                    continue;
                e.var = term.kind == SlotTerm::Kind::var ? term.var : "";
            }
            kept.push_back(std::move(e));
        }
        equations = std::move(kept);
        for (auto& g : groups) {
            std::vector<std::string> next;
            for (auto const& x : g) {
                if (x != v)
                    next.push_back(x);
                else if (term.kind == SlotTerm::Kind::one)
                    next.push_back(unit_marker);
                else if (term.kind == SlotTerm::Kind::var)
                    next.push_back(term.var);
            }
            g = std::move(next);
        }
        vars.erase(std::find_if(vars.begin(), vars.end(), [&](auto const& x) { return x.name == v; }));
    }

    void normalize()
    {
        while (!contradictory) {
            bool acted = false;
            for (std::size_t i = 0; i < groups.size() && !acted; ++i) {
                auto const& g = groups[i];
                if (g.empty()) {
                    contradictory = true;
                    return;
                }
                auto const units = std::count(g.begin(), g.end(), std::string(unit_marker));
                if (units > 1) {
                    contradictory = true;
                    return;
                }
                if (units == 1) {
                    std::vector<std::string> others;
                    for (auto const& x : g)
                        if (x != unit_marker)
                            others.push_back(x);
                    groups.erase(groups.begin() + static_cast<long>(i));
                    for (auto const& x : others)
                        if (find(x))
                            apply(x, SlotTerm::zero());
                    acted = true;
                }
            }
            if (!acted)
                break;
        }
    }

public:
    /// Merges identical sphere groups; groups that still overlap once
    /// unification is done are outside what the patches can express.
    void finish()
    {
        if (contradictory)
            return;
        std::vector<std::vector<std::string>> unique;
        for (auto g : groups) {
            std::sort(g.begin(), g.end());
            if (std::adjacent_find(g.begin(), g.end()) != g.end())
                throw InputError("sphere constraint with a repeated variable is not supported");
            bool dup = false;
            for (auto const& u : unique) {
                if (u == g) {
                    dup = true;
                    break;
                }
                std::vector<std::string> common;
                std::set_intersection(u.begin(), u.end(), g.begin(), g.end(), std::back_inserter(common));
                if (!common.empty())
                    throw InputError("overlapping sphere constraints are not supported");
            }
            if (!dup)
                unique.push_back(g);
        }
        groups = std::move(unique);
    }
};

inline std::string fresh_name(std::string name, std::set<std::string> const& taken)
{
    while (taken.count(name))
        name += "'";
    return name;
}

} // namespace detail

/// Copy of Q with every parameter and variable name that clashes with `taken`
/// primed.
inline ParamPatch rename_apart(ParamPatch const& q, std::set<std::string> const& taken)
{
    std::map<std::string, std::string> params, vars;
    std::set<std::string> used = taken;
    for (auto const& p : q.params)
        used.insert(p.name);
    for (auto const& v : q.variables)
        used.insert(v.name);
    for (auto const& p : q.params)
        if (taken.count(p.name))
            used.insert(params[p.name] = detail::fresh_name(p.name, used));
    for (auto const& v : q.variables)
        if (taken.count(v.name))
            used.insert(vars[v.name] = detail::fresh_name(v.name, used));
    auto var = [&](std::string const& v) {
        auto it = vars.find(v);
        return it == vars.end() ? v : it->second;
    };
    ParamPatch out = q;
    for (auto& p : out.params)
        if (params.count(p.name))
            p.name = params[p.name];
    for (auto& c : out.constraints)
        c.form = c.form.rename(params);
    for (auto& v : out.variables)
        v.name = var(v.name);
    for (auto& g : out.spheres)
        for (auto& v : g)
            v = var(v);
    for (auto& e : out.equations) {
        e.lhs = e.lhs.rename(params);
        e.rhs = e.rhs.rename(params);
        if (!e.var.empty())
            e.var = var(e.var);
    }
    for (auto& s : out.slots) {
        s.phase = s.phase.rename(params);
        if (s.kind == SlotTerm::Kind::var)
            s.var = var(s.var);
    }
    return out;
}

/// P ∩ Q as a single patch. `substitution` records, for every variable of
/// `first` and `second`, its value in the variables of `patch`.
struct Intersection
{
    ParamPatch first;
    ParamPatch second; // renamed apart from first
    ParamPatch patch;
    std::map<std::string, SlotTerm> substitution;
};

inline Intersection intersect(ParamPatch const& p, ParamPatch const& q)
{
    if (p.modulus != q.modulus)
        throw InputError("patches " + p.name + " and " + q.name + " use different moduli");
    std::set<std::string> taken;
    for (auto const& x : p.params)
        taken.insert(x.name);
    for (auto const& x : p.variables)
        taken.insert(x.name);
    Intersection out;
    out.first = p;
    out.second = rename_apart(q, taken);

    detail::Unifier u;
    u.load(out.first);
    u.load(out.second);
    u.zero_forced();

    using K = SlotTerm::Kind;
    auto kind_of = [&](std::string const& v) { return u.find(v)->kind; };
    // resolve one slot at a time; every substitution restarts the scan
    bool progress = true;
    while (progress && !u.contradictory) {
        progress = false;
        for (std::size_t i = 0; i < 4 && !progress && !u.contradictory; ++i) {
            SlotTerm const a = u.sides[0][i];
            SlotTerm const b = u.sides[1][i];
            if (a.kind == K::zero && b.kind == K::zero)
                continue;
            if ((a.kind == K::zero && b.kind == K::one) || (a.kind == K::one && b.kind == K::zero)) {
                u.contradictory = true;
                break;
            }
            if (a.kind == K::zero || b.kind == K::zero) {
                u.substitute(a.kind == K::var ? a.var : b.var, SlotTerm::zero());
                progress = true;
            } else if (a.kind == K::one && b.kind == K::one) {
                continue;
            } else if (a.kind == K::one || b.kind == K::one) {
                SlotTerm const& v = a.kind == K::var ? a : b;
                SlotTerm const& c = a.kind == K::var ? b : a;
                if (kind_of(v.var) == VariableKind::complex)
                    u.substitute(v.var, SlotTerm::one(c.phase - v.phase));
                else
                    u.substitute(v.var, SlotTerm::one()); // r·ζ^a = ζ^b forces r = 1
                progress = true;
            } else if (a.var != b.var) {
                if (kind_of(b.var) == VariableKind::complex)
                    u.substitute(b.var, SlotTerm::of(a.var, a.phase - b.phase));
                else if (kind_of(a.var) == VariableKind::complex)
                    u.substitute(a.var, SlotTerm::of(b.var, b.phase - a.phase));
                else
                    u.substitute(b.var, SlotTerm::of(a.var));
                progress = true;
            }
        }
    }

    u.finish();
    ParamPatch& r = out.patch;
    r.name = p.name + "∩" + q.name;
    r.modulus = p.modulus;
    r.params = out.first.params;
    r.params.insert(r.params.end(), out.second.params.begin(), out.second.params.end());
    r.constraints = out.first.constraints;
    r.constraints.insert(r.constraints.end(), out.second.constraints.begin(), out.second.constraints.end());
    r.contradictory = u.contradictory;
    if (!u.contradictory) {
        for (std::size_t i = 0; i < 4; ++i) {
            SlotTerm const& a = u.sides[0][i];
            SlotTerm const& b = u.sides[1][i];
            if (a.kind == K::zero && b.kind == K::zero)
                continue;
            if (a.kind != b.kind || a.var != b.var)
                throw VerificationError("unification left slot " + std::to_string(i) + " unresolved");
            if (!(a.phase == b.phase))
                u.equations.push_back({a.phase, b.phase, a.var});
        }
    }
    r.variables = u.vars;
    r.spheres = u.groups;
    r.equations = u.equations;
    r.slots = u.sides[0];
    out.substitution = u.subst;
    return out;
}

/// The branch as a patch of its own: vanishing variables set to 0, unit
/// radial variables to 1, the parameters confined to the branch region.
inline ParamPatch restrict_to(ParamPatch const& p, SolutionBranch const& b)
{
    detail::Unifier u;
    u.load(p);
    u.equations.clear(); // the region carries every active equation as an equality
    for (auto const& [v, mag] : b.pattern) {
        if (mag == Magnitude::zero)
            u.substitute(v, SlotTerm::zero());
        else if (auto* x = u.find(v))
            x->magnitude = Magnitude::nonzero;
    }
    for (auto const& v : b.unit)
        if (auto* x = u.find(v); x && x->kind == VariableKind::radial)
            u.substitute(v, SlotTerm::one());
    u.finish();
    ParamPatch out = p;
    out.constraints = b.region.constraints();
    out.variables = u.vars;
    out.spheres = u.groups;
    out.equations.clear();
    out.slots = u.sides[0];
    out.contradictory = u.contradictory;
    return out;
}

struct Face
{
    std::string name;
    ParamPatch patch;
};

/// Box facets of every parameter, then the r = 0 face of every radial variable.
inline std::vector<Face> faces(ParamPatch const& p)
{
    std::vector<Face> out;
    for (auto const& b : p.params) {
        if (b.lo == b.hi)
            continue;
        for (auto const& v : {b.lo, b.hi}) {
            Face f{b.name + "=" + v.get_str(), p};
            f.patch.constraints.push_back({Affine::variable(b.name) - Affine(v), cyclosolve::Relation::eq});
            f.patch.name = p.name + "|" + f.name;
            out.push_back(std::move(f));
        }
    }
    for (auto const& v : p.variables) {
        if (v.kind != VariableKind::radial)
            continue;
        detail::Unifier u;
        u.load(p);
        u.substitute(v.name, SlotTerm::zero());
        u.finish();
        Face f{v.name + "=0", p};
        f.patch.name = p.name + "|" + f.name;
        f.patch.variables = u.vars;
        f.patch.spheres = u.groups;
        f.patch.equations = u.equations;
        f.patch.slots = u.sides[0];
        f.patch.contradictory = u.contradictory;
        out.push_back(std::move(f));
    }
    return out;
}

namespace detail {

/// target = ζ^shift·source identically on the branch.
inline bool slot_follows(SlotTerm const& source,
                         SlotTerm const& target,
                         mpq_class const& shift,
                         long modulus,
                         cyclosolve::AffineHull const& hull)
{
    if (source.is_zero() || target.is_zero())
        return source.is_zero() && target.is_zero();
    if (source.kind != target.kind || source.var != target.var)
        return false;
    Affine const d = hull.reduce(target.phase - source.phase - Affine(shift));
    if (!d.is_constant())
        return false;
    mpq_class const turns = d.constant() / modulus;
    return turns.get_den() == 1;
}

} // namespace detail

/// Whether every point of the patch lies on Δ_l = {(x, (ζ^l x1, ζ^{ql} x2))}.
inline bool inside_diagonal(ParamPatch const& p, long l, long q)
{
    for (auto const& b : p.solve().branches) {
        ParamPatch const r = restrict_to(p, b);
        if (!detail::slot_follows(r.slots[0], r.slots[2], l, p.modulus, b.hull) ||
            !detail::slot_follows(r.slots[1], r.slots[3], mpq_class(q * l), p.modulus, b.hull))
            return false;
    }
    return true;
}

/// Smallest l in [0, m) with the patch inside Δ_l.
inline std::optional<long> diagonal_containing(ParamPatch const& p, long q)
{
    for (long l = 0; l < p.modulus; ++l)
        if (inside_diagonal(p, l, q))
            return l;
    return std::nullopt;
}

/// Branches of the patch not contained in any diagonal.
inline std::vector<SolutionBranch> essential_branches(ParamPatch const& p, long q)
{
    std::vector<SolutionBranch> out;
    for (auto const& b : p.solve().branches)
        if (!diagonal_containing(restrict_to(p, b), q))
            out.push_back(b);
    return out;
}

/// u ⊆ w. Sufficient test: every branch of u is covered, with the same
/// vanishing pattern, by the parameter shadow of a single branch of u ∩ w.
/// A false answer therefore means "not shown", not a proof of non-containment.
inline bool contained_in(ParamPatch const& u, ParamPatch const& w)
{
    auto const own = u.solve();
    if (own.empty())
        return true;
    Intersection const in = intersect(u, w);
    auto const joint = in.patch.solve();
    auto const keep = u.param_names();
    std::vector<Polyhedron> shadows;
    for (auto const& jb : joint.branches)
        shadows.push_back(jb.region.project(keep));
    for (auto const& ub : own.branches) {
        bool covered = false;
        for (std::size_t i = 0; i < joint.branches.size() && !covered; ++i) {
            auto const& jb = joint.branches[i];
            bool same = true;
            for (auto const& v : u.variables) {
                auto it = ub.pattern.find(v.name);
                if (it == ub.pattern.end())
                    continue;
                SlotTerm const& t = in.substitution.at(v.name);
                switch (t.kind) {
                case SlotTerm::Kind::zero: same = same && it->second == Magnitude::zero; break;
                case SlotTerm::Kind::one:
                    same = same && v.kind == VariableKind::radial &&
                           std::find(ub.unit.begin(), ub.unit.end(), v.name) != ub.unit.end();
                    break;
                case SlotTerm::Kind::var: same = same && jb.pattern.at(t.var) == it->second; break;
                }
            }
            covered = same && shadows[i].contains(ub.region);
        }
        if (!covered)
            return false;
    }
    return true;
}

inline bool same_set(ParamPatch const& a, ParamPatch const& b) { return contained_in(a, b) && contained_in(b, a); }

} // namespace lensconf::dualcalc
