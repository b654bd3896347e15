#pragma once

#include <functional>
#include <istream>
#include <ostream>
#include <sstream>

#include "lensconf/cyclosolve/polyhedron.hpp"

namespace lensconf::cyclosolve {

enum class Magnitude
{
    zero,
    nonzero,
    free,
};

inline std::string magnitude_name(Magnitude m)
{
    switch (m) {
    case Magnitude::zero: return "ZERO";
    case Magnitude::nonzero: return "NONZERO";
    case Magnitude::free: return "FREE";
    }
    return "?";
}

inline Magnitude parse_magnitude(std::string const& s)
{
    if (s == "ZERO")
        return Magnitude::zero;
    if (s == "NONZERO")
        return Magnitude::nonzero;
    if (s == "FREE")
        return Magnitude::free;
    throw InputError("unknown magnitude '" + s + "' (expected ZERO, NONZERO or FREE)");
}

enum class VariableKind
{
    complex, // x ∈ ℂ
    radial,  // r ∈ ℝ, r ≥ 0
};

struct MagnitudeVariable
{
    std::string name;
    VariableKind kind = VariableKind::complex;
    Magnitude magnitude = Magnitude::free;
};

/// ζ^lhs·var = ζ^rhs·var; an empty var stands for the constant 1.
struct PhaseEquation
{
    Affine lhs;
    Affine rhs;
    std::string var;

    std::string to_string() const
    {
        std::string const tail = var.empty() ? "" : "*" + var;
        return "zeta(" + lhs.to_string() + ")" + tail + " == zeta(" + rhs.to_string() + ")" + tail;
    }
};

struct ParameterBox
{
    std::string name;
    mpq_class lo = 0;
    mpq_class hi = 1;
};

struct CongruenceSystem
{
    long modulus = 7;
    std::vector<ParameterBox> params;
    std::vector<MagnitudeVariable> variables;
    /// each group satisfies Σ|v|² = 1
    std::vector<std::vector<std::string>> spheres;
    std::vector<PhaseEquation> equations;
    /// extra affine constraints on the parameters
    std::vector<Constraint> constraints;

    MagnitudeVariable const* variable(std::string const& name) const
    {
        for (auto const& v : variables)
            if (v.name == name)
                return &v;
        return nullptr;
    }

    bool has_param(std::string const& name) const
    {
        return std::any_of(params.begin(), params.end(), [&](auto const& p) { return p.name == name; });
    }

    void validate() const
    {
        if (modulus < 2)
            throw InputError("modulus must be at least 2");
        std::set<std::string> names;
        for (auto const& p : params) {
            if (!names.insert(p.name).second)
                throw InputError("name '" + p.name + "' declared twice");
            if (p.lo > p.hi)
                throw InputError("empty box for parameter '" + p.name + "'");
        }
        for (auto const& v : variables)
            if (!names.insert(v.name).second)
                throw InputError("name '" + v.name + "' declared twice");
        auto check_form = [&](Affine const& f, std::string const& where) {
            for (auto const& [n, _] : f.coefficients())
                if (!has_param(n))
                    throw InputError(where + ": '" + n + "' is not a declared parameter");
        };
        for (auto const& e : equations) {
            check_form(e.lhs, "equation " + e.to_string());
            check_form(e.rhs, "equation " + e.to_string());
            if (!e.var.empty() && !variable(e.var))
                throw InputError("equation " + e.to_string() + ": unknown variable '" + e.var + "'");
        }
        for (auto const& c : constraints)
            check_form(c.form, "constraint " + c.to_string());
        for (auto const& g : spheres) {
            if (g.empty())
                throw InputError("empty sphere group");
            std::set<std::string> seen;
            for (auto const& v : g) {
                if (!variable(v))
                    throw InputError("sphere group names unknown variable '" + v + "'");
                if (!seen.insert(v).second)
                    throw InputError("sphere group repeats '" + v + "'");
            }
        }
    }

    Polyhedron box() const
    {
        std::vector<std::string> names;
        for (auto const& p : params)
            names.push_back(p.name);
        Polyhedron poly(names);
        for (auto const& p : params)
            poly.add_box(p.name, p.lo, p.hi);
        for (auto const& c : constraints)
            poly.add(c);
        return poly;
    }
};

/// Integers k such that θ₁ − θ₂ = k·m has a solution in the region.
inline std::vector<long> residue_range(Affine const& theta1, Affine const& theta2, long modulus, Polyhedron const& region)
{
    std::vector<long> out;
    auto r = region.range(theta1 - theta2);
    if (!r)
        return out;
    if (!r->lo.value || !r->hi.value)
        throw InputError("residue range over an unbounded region");
    mpq_class const lo = *r->lo.value / modulus, hi = *r->hi.value / modulus;
    mpz_class k_lo, k_hi;
    mpz_cdiv_q(k_lo.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
    mpz_fdiv_q(k_hi.get_mpz_t(), hi.get_num_mpz_t(), hi.get_den_mpz_t());
    if (r->lo.strict && mpq_class(k_lo) == lo)
        ++k_lo;
    if (r->hi.strict && mpq_class(k_hi) == hi)
        --k_hi;
    for (mpz_class k = k_lo; k <= k_hi; ++k)
        out.push_back(k.get_si());
    return out;
}

inline std::vector<long> residue_range(PhaseExponent const& theta1,
                                       PhaseExponent const& theta2,
                                       std::vector<ParameterBox> const& box)
{
    if (theta1.modulus != theta2.modulus)
        throw InputError("phase exponents have different moduli");
    CongruenceSystem s;
    s.modulus = theta1.modulus;
    s.params = box;
    return residue_range(theta1.exponent, theta2.exponent, theta1.modulus, s.box());
}

struct SolutionBranch
{
    std::map<std::string, Magnitude> pattern; // zero or nonzero per variable
    std::vector<std::string> unit;            // variables forced to magnitude 1
    std::vector<std::pair<std::size_t, long>> offsets; // (equation, k)
    Polyhedron region;
    AffineHull hull;
    std::vector<std::string> free_parameters;
    int parameter_dimension = 0;
    int magnitude_dimension = 0;

    int dimension() const { return parameter_dimension + magnitude_dimension; }

    bool is_zero(std::string const& var) const
    {
        auto it = pattern.find(var);
        return it != pattern.end() && it->second == Magnitude::zero;
    }

    std::string describe(CongruenceSystem const& s) const
    {
        std::string out;
        for (auto const& v : s.variables) {
            bool const one = std::find(unit.begin(), unit.end(), v.name) != unit.end();
            std::string val = is_zero(v.name) ? "0" : one ? (v.kind == VariableKind::radial ? "1" : "unit") : "nonzero";
            out += (out.empty() ? "" : ", ") + v.name + " = " + val;
        }
        for (auto const& [p, e] : hull.pivots)
            out += (out.empty() ? "" : ", ") + p + " = " + e.to_string();
        for (auto const& f : free_parameters) {
            auto r = region.range(Affine::variable(f));
            out += (out.empty() ? "" : ", ") + f + " in " + (r->lo.strict ? "(" : "[") +
                   (r->lo.value ? r->lo.value->get_str() : "-inf") + "," +
                   (r->hi.value ? r->hi.value->get_str() : "inf") + (r->hi.strict ? ")" : "]");
        }
        return out + "; dim " + std::to_string(dimension());
    }
};

struct SolutionSet
{
    std::vector<SolutionBranch> branches;

    bool empty() const { return branches.empty(); }

    int dimension() const
    {
        int d = -1;
        for (auto const& b : branches)
            d = std::max(d, b.dimension());
        return d;
    }

    /// Whether some branch with this vanishing pattern contains the point.
    bool covers(std::map<std::string, mpq_class> const& at, std::map<std::string, Magnitude> const& pattern) const
    {
        for (auto const& b : branches)
            if (b.pattern == pattern && b.region.contains_point(at))
                return true;
        return false;
    }
};

/// Magnitude bookkeeping of one vanishing pattern: nullopt if a sphere
/// constraint cannot be met.
struct PatternShape
{
    std::vector<std::string> unit;
    int dimension = 0;
};

inline std::optional<PatternShape> pattern_shape(CongruenceSystem const& s,
                                                 std::map<std::string, Magnitude> const& pattern)
{
    PatternShape shape;
    std::set<std::string> grouped;
    auto real_dim = [&](std::string const& v) { return s.variable(v)->kind == VariableKind::complex ? 2 : 1; };
    for (auto const& g : s.spheres) {
        int dim = -1;
        std::vector<std::string> alive;
        for (auto const& v : g) {
            grouped.insert(v);
            if (pattern.at(v) == Magnitude::nonzero) {
                alive.push_back(v);
                dim += real_dim(v);
            }
        }
        if (alive.empty())
            return std::nullopt;
        if (alive.size() == 1)
            shape.unit.push_back(alive.front());
        shape.dimension += dim;
    }
    for (auto const& v : s.variables)
        if (!grouped.count(v.name) && pattern.at(v.name) == Magnitude::nonzero)
            shape.dimension += real_dim(v.name);
    return shape;
}

/// Complete solution set: every vanishing pattern of the FREE variables,
/// every feasible residue offset, each solved exactly over ℚ inside the box.
inline SolutionSet solve_congruences(CongruenceSystem const& s)
{
    s.validate();
    SolutionSet out;
    std::vector<std::string> free_vars;
    for (auto const& v : s.variables)
        if (v.magnitude == Magnitude::free)
            free_vars.push_back(v.name);
    if (free_vars.size() > 20)
        throw InputError("too many FREE magnitude variables to branch over");
    Polyhedron const base = s.box();
    if (!base.feasible())
        return out;

    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << free_vars.size()); ++mask) {
        std::map<std::string, Magnitude> pattern;
        for (auto const& v : s.variables)
            pattern[v.name] = v.magnitude;
        for (std::size_t i = 0; i < free_vars.size(); ++i)
            pattern[free_vars[i]] = (mask >> i) & 1 ? Magnitude::nonzero : Magnitude::zero;
        auto shape = pattern_shape(s, pattern);
        if (!shape)
            continue;
        std::vector<std::size_t> active;
        for (std::size_t i = 0; i < s.equations.size(); ++i)
            if (s.equations[i].var.empty() || pattern[s.equations[i].var] == Magnitude::nonzero)
                active.push_back(i);

        std::vector<std::pair<std::size_t, long>> offsets;
        std::function<void(std::size_t, Polyhedron const&)> descend = [&](std::size_t a, Polyhedron const& region) {
            if (a == active.size()) {
                SolutionBranch b;
                b.pattern = pattern;
                b.unit = shape->unit;
                b.offsets = offsets;
                b.region = region;
                b.hull = region.hull();
                for (auto const& p : s.params)
                    if (std::none_of(b.hull.pivots.begin(), b.hull.pivots.end(),
                                     [&](auto const& pv) { return pv.first == p.name; }))
                        b.free_parameters.push_back(p.name);
                b.parameter_dimension = static_cast<int>(b.free_parameters.size());
                b.magnitude_dimension = shape->dimension;
                out.branches.push_back(std::move(b));
                return;
            }
            auto const& eq = s.equations[active[a]];
            for (long k : residue_range(eq.lhs, eq.rhs, s.modulus, region)) {
                Polyhedron next = region;
                next.add_eq(eq.lhs - eq.rhs, Affine(k * s.modulus));
                if (!next.feasible())
                    continue;
                offsets.emplace_back(active[a], k);
                descend(a + 1, next);
                offsets.pop_back();
            }
        };
        descend(0, base);
    }
    return out;
}

/// System text format, one statement per line:
///
///   modulus 7
///   t in [0,1]                         parameter box
///   r in {NONZERO}                     magnitude of a variable
///   radial r                           r is real and nonnegative
///   sphere r x                         r² + |x|² = 1
///   zeta(4t)*r == zeta(1+s)*r
///   where 4t - 1 - s == 0              extra constraint (==, <=, <)
inline CongruenceSystem read_system(std::istream& in)
{
    CongruenceSystem s;
    bool have_modulus = false;
    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](std::string const& msg) {
        return InputError("system file line " + std::to_string(lineno) + ": " + msg);
    };
    auto trim = [](std::string t) {
        auto a = t.find_first_not_of(" \t\r");
        if (a == std::string::npos)
            return std::string();
        auto b = t.find_last_not_of(" \t\r");
        return t.substr(a, b - a + 1);
    };
    auto ensure_var = [&](std::string const& name) -> MagnitudeVariable& {
        for (auto& v : s.variables)
            if (v.name == name)
                return v;
        s.variables.push_back({name, VariableKind::complex, Magnitude::free});
        return s.variables.back();
    };
    auto parse_side = [&](std::string side) -> std::pair<Affine, std::string> {
        side = trim(side);
        if (side.rfind("zeta(", 0) != 0) {
            if (side.empty() || side.find_first_of("()*") != std::string::npos)
                throw fail("expected zeta(<expr>)*<var>, got '" + side + "'");
            return {Affine(), side};
        }
        int depth = 0;
        std::size_t close = std::string::npos;
        for (std::size_t i = 4; i < side.size(); ++i) {
            if (side[i] == '(')
                ++depth;
            else if (side[i] == ')' && --depth == 0) {
                close = i;
                break;
            }
        }
        if (close == std::string::npos)
            throw fail("unbalanced parentheses in '" + side + "'");
        Affine e;
        try {
            e = parse_affine(side.substr(5, close - 5));
        } catch (InputError const& err) {
            throw fail(err.what());
        }
        std::string rest = trim(side.substr(close + 1));
        if (rest.empty())
            return {e, ""};
        if (rest[0] != '*')
            throw fail("expected '*' after zeta(...)");
        rest = trim(rest.substr(1));
        if (rest.empty() || rest.find_first_of("()* ") != std::string::npos)
            throw fail("bad variable name '" + rest + "'");
        return {e, rest};
    };

    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty())
            continue;
        std::istringstream ls(line);
        std::string head;
        ls >> head;
        if (head == "modulus") {
            long m = 0;
            std::string extra;
            if (!(ls >> m) || (ls >> extra))
                throw fail("expected 'modulus <m>'");
            if (m < 2)
                throw fail("modulus must be at least 2");
            s.modulus = m;
            have_modulus = true;
        } else if (head == "radial") {
            std::string v;
            while (ls >> v)
                ensure_var(v).kind = VariableKind::radial;
        } else if (head == "sphere") {
            std::vector<std::string> g;
            std::string v;
            while (ls >> v) {
                ensure_var(v);
                g.push_back(v);
            }
            if (g.empty())
                throw fail("sphere needs at least one variable");
            s.spheres.push_back(g);
        } else if (head == "where") {
            std::string rest = trim(line.substr(5));
            Relation rel = Relation::eq;
            std::size_t at = std::string::npos, len = 2;
            if ((at = rest.find("==")) != std::string::npos)
                rel = Relation::eq;
            else if ((at = rest.find("<=")) != std::string::npos)
                rel = Relation::le;
            else if ((at = rest.find('<')) != std::string::npos) {
                rel = Relation::lt;
                len = 1;
            } else
                throw fail("expected ==, <= or < in constraint");
            try {
                s.constraints.push_back({parse_affine(rest.substr(0, at)) - parse_affine(rest.substr(at + len)), rel});
            } catch (InputError const& err) {
                throw fail(err.what());
            }
        } else if (line.find("==") != std::string::npos) {
            auto at = line.find("==");
            auto [l, lv] = parse_side(line.substr(0, at));
            auto [r, rv] = parse_side(line.substr(at + 2));
            if (lv != rv)
                throw fail("both sides must carry the same variable ('" + lv + "' vs '" + rv + "')");
            if (!lv.empty())
                ensure_var(lv);
            s.equations.push_back({l, r, lv});
        } else {
            std::string kw;
            if (!(ls >> kw) || kw != "in")
                throw fail("unrecognised statement '" + line + "'");
            std::string rest = trim(line.substr(line.find(" in ") + 4));
            if (!rest.empty() && rest.front() == '[') {
                auto comma = rest.find(',');
                if (rest.back() != ']' || comma == std::string::npos)
                    throw fail("expected '[a,b]'");
                Affine lo, hi;
                try {
                    lo = parse_affine(rest.substr(1, comma - 1));
                    hi = parse_affine(rest.substr(comma + 1, rest.size() - comma - 2));
                } catch (InputError const& err) {
                    throw fail(err.what());
                }
                if (!lo.is_constant() || !hi.is_constant())
                    throw fail("box bounds must be constants");
                if (lo.constant() > hi.constant())
                    throw fail("empty box [" + lo.to_string() + "," + hi.to_string() + "]");
                if (s.has_param(head))
                    throw fail("parameter '" + head + "' declared twice");
                s.params.push_back({head, lo.constant(), hi.constant()});
            } else {
                if (!rest.empty() && rest.front() == '{') {
                    if (rest.back() != '}')
                        throw fail("expected '{ZERO|NONZERO|FREE}'");
                    rest = trim(rest.substr(1, rest.size() - 2));
                }
                try {
                    ensure_var(head).magnitude = parse_magnitude(rest);
                } catch (InputError const& err) {
                    throw fail(err.what());
                }
            }
        }
    }
    if (!have_modulus)
        throw InputError("system file: missing 'modulus' line");
    s.validate();
    return s;
}

inline void write_system(std::ostream& out, CongruenceSystem const& s)
{
    out << "modulus " << s.modulus << "\n";
    for (auto const& p : s.params)
        out << p.name << " in [" << p.lo.get_str() << "," << p.hi.get_str() << "]\n";
    for (auto const& v : s.variables) {
        if (v.kind == VariableKind::radial)
            out << "radial " << v.name << "\n";
        out << v.name << " in {" << magnitude_name(v.magnitude) << "}\n";
    }
    for (auto const& g : s.spheres) {
        out << "sphere";
        for (auto const& v : g)
            out << " " << v;
        out << "\n";
    }
    for (auto const& c : s.constraints) {
        Affine lhs = c.form - Affine(c.form.constant());
        out << "where " << lhs.to_string() << (c.rel == Relation::eq ? " == " : c.rel == Relation::le ? " <= " : " < ")
            << Affine(-c.form.constant()).to_string() << "\n";
    }
    for (auto const& e : s.equations)
        out << e.to_string() << "\n";
}

} // namespace lensconf::cyclosolve
