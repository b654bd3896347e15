#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <vector>

#include "lensconf/cyclosolve/affine.hpp"

namespace lensconf::cyclosolve {

enum class Relation
{
    le, // form ≤ 0
    lt, // form < 0
    eq, // form = 0
};

struct Constraint
{
    Affine form;
    Relation rel = Relation::le;

    std::string to_string() const
    {
        // print as lhs rel rhs with the constant moved right
        Affine lhs = form - Affine(form.constant());
        std::string const op = rel == Relation::le ? " <= " : rel == Relation::lt ? " < " : " = ";
        return lhs.to_string() + op + Affine(-form.constant()).to_string();
    }
};

/// Closed or half-open end of an interval; nullopt value means unbounded.
struct Bound
{
    std::optional<mpq_class> value;
    bool strict = false;
};

struct Range
{
    Bound lo, hi;
};

/// Solution (pivot = expression in the remaining parameters) of the
/// equalities describing an affine hull.
struct AffineHull
{
    std::vector<std::pair<std::string, Affine>> pivots;

    Affine reduce(Affine const& f) const
    {
        Affine out = f;
        for (auto const& [v, e] : pivots)
            out = out.substitute(v, e);
        return out;
    }
};

/// Convex polyhedron over named rational parameters given by affine
/// constraints, decided exactly by Fourier–Motzkin elimination.
class Polyhedron
{
public:
    Polyhedron() = default;
    explicit Polyhedron(std::vector<std::string> vars) : vars_(std::move(vars)) {}

    std::vector<std::string> const& variables() const { return vars_; }
    std::vector<Constraint> const& constraints() const { return rows_; }

    void add_variable(std::string const& v)
    {
        if (std::find(vars_.begin(), vars_.end(), v) == vars_.end())
            vars_.push_back(v);
    }

    void add(Constraint c)
    {
        for (auto const& [n, _] : c.form.coefficients())
            add_variable(n);
        rows_.push_back(std::move(c));
    }
    void add_le(Affine const& a, Affine const& b) { add({a - b, Relation::le}); }
    void add_lt(Affine const& a, Affine const& b) { add({a - b, Relation::lt}); }
    void add_eq(Affine const& a, Affine const& b) { add({a - b, Relation::eq}); }
    void add_box(std::string const& v, mpq_class const& lo, mpq_class const& hi)
    {
        add_variable(v);
        add_le(Affine(lo), Affine::variable(v));
        add_le(Affine::variable(v), Affine(hi));
    }

    bool feasible() const { return feasible_rows(rows_); }

    /// Equalities holding on every point: the explicit ones plus every
    /// inequality that cannot be made strict.
    std::vector<Affine> hull_equalities() const
    {
        std::vector<Affine> out;
        if (!feasible())
            return out;
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (rows_[i].rel == Relation::eq) {
                out.push_back(rows_[i].form);
                continue;
            }
            if (rows_[i].rel == Relation::lt)
                continue;
            auto probe = rows_;
            probe[i].rel = Relation::lt;
            if (!feasible_rows(probe))
                out.push_back(rows_[i].form);
        }
        return out;
    }

    AffineHull hull() const
    {
        AffineHull h;
        std::vector<Affine> pending = hull_equalities();
        for (auto eq : pending) {
            eq = h.reduce(eq);
            if (eq.is_constant())
                continue;
            // pivot on the first declared variable present
            std::string pivot;
            for (auto const& v : vars_)
                if (sgn(eq.coefficient(v)) != 0) {
                    pivot = v;
                    break;
                }
            if (pivot.empty())
                pivot = eq.coefficients().begin()->first;
            mpq_class const c = eq.coefficient(pivot);
            Affine rest = eq;
            rest.set(pivot, 0);
            Affine value = rest * mpq_class(-1 / c);
            for (auto& [v, e] : h.pivots)
                e = e.substitute(pivot, value);
            h.pivots.emplace_back(pivot, value);
        }
        return h;
    }

    /// −1 when empty.
    int dimension() const
    {
        if (!feasible())
            return -1;
        return static_cast<int>(vars_.size()) - static_cast<int>(hull().pivots.size());
    }

    /// Shadow on the kept variables.
    Polyhedron project(std::vector<std::string> const& keep) const
    {
        std::vector<Constraint> rows = rows_;
        for (auto const& v : vars_)
            if (std::find(keep.begin(), keep.end(), v) == keep.end())
                rows = eliminate(std::move(rows), v);
        Polyhedron out(keep);
        for (auto& r : rows)
            if (!r.form.is_constant())
                out.add(std::move(r));
            else if (!constant_holds(r))
                out.add({Affine(1), Relation::le});
        return out;
    }

    Polyhedron intersect(Polyhedron const& other) const
    {
        Polyhedron out = *this;
        for (auto const& v : other.vars_)
            out.add_variable(v);
        for (auto const& c : other.rows_)
            out.add(c);
        return out;
    }

    /// other ⊆ this.
    bool contains(Polyhedron const& other) const
    {
        if (!other.feasible())
            return true;
        for (auto const& c : rows_) {
            auto violates = [&](Constraint probe) {
                auto rows = other.rows_;
                rows.push_back(std::move(probe));
                return feasible_rows(rows);
            };
            if (c.rel != Relation::lt && violates({-c.form, Relation::lt}))
                return false;
            if (c.rel == Relation::lt && violates({-c.form, Relation::le}))
                return false;
            if (c.rel == Relation::eq && violates({c.form, Relation::lt}))
                return false;
        }
        return true;
    }

    bool contains_point(std::map<std::string, mpq_class> const& at) const
    {
        for (auto const& c : rows_) {
            mpq_class const v = c.form.evaluate(at);
            if ((c.rel == Relation::le && v > 0) || (c.rel == Relation::lt && v >= 0) ||
                (c.rel == Relation::eq && v != 0))
                return false;
        }
        return true;
    }

    /// Exact extent of an affine form over the polyhedron (nullopt if empty).
    std::optional<Range> range(Affine const& f) const
    {
        if (!feasible())
            return std::nullopt;
        std::string const y = "__range";
        Polyhedron p = *this;
        p.add_eq(Affine::variable(y), f);
        Polyhedron shadow = p.project({y});
        Range r;
        for (auto const& c : shadow.rows_) {
            mpq_class const a = c.form.coefficient(y);
            mpq_class const v = -c.form.constant() / a;
            bool const strict = c.rel == Relation::lt;
            auto tighten_hi = [&](Bound& b) {
                if (!b.value || v < *b.value || (v == *b.value && strict))
                    b = {v, strict};
            };
            auto tighten_lo = [&](Bound& b) {
                if (!b.value || v > *b.value || (v == *b.value && strict))
                    b = {v, strict};
            };
            if (c.rel == Relation::eq) {
                tighten_hi(r.hi);
                tighten_lo(r.lo);
            } else if (a > 0) {
                tighten_hi(r.hi);
            } else {
                tighten_lo(r.lo);
            }
        }
        return r;
    }

    std::string to_string() const
    {
        std::string out;
        for (auto const& c : rows_)
            out += (out.empty() ? "" : ", ") + c.to_string();
        return out.empty() ? "(no constraints)" : out;
    }

private:
    static bool constant_holds(Constraint const& c)
    {
        int const s = sgn(c.form.constant());
        switch (c.rel) {
        case Relation::le: return s <= 0;
        case Relation::lt: return s < 0;
        case Relation::eq: return s == 0;
        }
        return false;
    }

    static std::string key(Constraint const& c)
    {
        // scale so the first coefficient (or the constant) has magnitude 1
        mpq_class scale = 0;
        if (!c.form.coefficients().empty())
            scale = abs(c.form.coefficients().begin()->second);
        else
            scale = abs(c.form.constant());
        Affine f = sgn(scale) == 0 ? c.form : c.form * mpq_class(1 / scale);
        std::string k = c.rel == Relation::le ? "le:" : c.rel == Relation::lt ? "lt:" : "eq:";
        k += f.constant().get_str();
        for (auto const& [n, v] : f.coefficients())
            k += "|" + n + "=" + v.get_str();
        return k;
    }

    static std::vector<Constraint> dedupe(std::vector<Constraint> rows)
    {
        std::set<std::string> seen;
        std::vector<Constraint> out;
        for (auto& r : rows) {
            if (r.form.is_constant() && constant_holds(r))
                continue;
            if (seen.insert(key(r)).second)
                out.push_back(std::move(r));
        }
        return out;
    }

    static std::vector<Constraint> eliminate(std::vector<Constraint> rows, std::string const& v)
    {
        // an equality in v is used as a substitution
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].rel != Relation::eq || sgn(rows[i].form.coefficient(v)) == 0)
                continue;
            mpq_class const c = rows[i].form.coefficient(v);
            Affine rest = rows[i].form;
            rest.set(v, 0);
            Affine const value = rest * mpq_class(-1 / c);
            std::vector<Constraint> out;
            for (std::size_t j = 0; j < rows.size(); ++j)
                if (j != i)
                    out.push_back({rows[j].form.substitute(v, value), rows[j].rel});
            return dedupe(std::move(out));
        }
        std::vector<Constraint> out, upper, lower;
        for (auto& r : rows) {
            mpq_class const c = r.form.coefficient(v);
            if (sgn(c) == 0)
                out.push_back(std::move(r));
            else if (c > 0)
                upper.push_back(std::move(r));
            else
                lower.push_back(std::move(r));
        }
        for (auto const& u : upper)
            for (auto const& l : lower) {
                // u: cu·v + ψu rel 0 with cu > 0; l: cl·v + ψl rel 0 with cl < 0
                mpq_class const cu = u.form.coefficient(v);
                mpq_class const cl = l.form.coefficient(v);
                Affine combo = u.form * mpq_class(-cl) + l.form * cu;
                combo.set(v, 0);
                bool const strict = u.rel == Relation::lt || l.rel == Relation::lt;
                out.push_back({combo, strict ? Relation::lt : Relation::le});
            }
        return dedupe(std::move(out));
    }

    static bool feasible_rows(std::vector<Constraint> rows)
    {
        rows = dedupe(std::move(rows));
        while (true) {
            for (auto const& r : rows)
                if (r.form.is_constant() && !constant_holds(r))
                    return false;
            std::string next;
            for (auto const& r : rows)
                if (!r.form.is_constant()) {
                    next = r.form.coefficients().begin()->first;
                    break;
                }
            if (next.empty())
                return true;
            rows = eliminate(std::move(rows), next);
        }
    }

    std::vector<std::string> vars_;
    std::vector<Constraint> rows_;
};

} // namespace lensconf::cyclosolve
