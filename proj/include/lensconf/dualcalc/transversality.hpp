#pragma once

#include "lensconf/dualcalc/patch.hpp"

namespace lensconf::dualcalc {

using cyclosolve::ComplexTrig;
using cyclosolve::RankCertificate;
using cyclosolve::RankOptions;
using cyclosolve::TangentFrame;

namespace detail {

/// Value of a variable at the branch points: nullopt for 0, else the phase ψ
/// of ζ^ψ (radial unit variables have ψ = 0).
using PointValue = std::optional<Affine>;

inline std::string phase_param(std::string const& v) { return "phi_" + v; }

} // namespace detail

/// Tangent vectors of both members of an intersection along one of its
/// branches. Each sphere group must have a single nonzero member of modulus
/// one there; the phase of a unit complex variable becomes a frame parameter
/// phi_<var> in [0, m]. Vectors are pushed forward from the sphere tangent
/// spaces and the parameter directions; parameter derivatives drop the
/// common factor 2π/m, which does not change the span.
inline TangentFrame tangent_frame(Intersection const& in, SolutionBranch const& b)
{
    ParamPatch const& joint = in.patch;
    long const m = joint.modulus;
    TangentFrame f;
    f.modulus = m;

    for (auto const& p : b.free_parameters) {
        auto r = b.region.range(Affine::variable(p));
        if (!r || !r->lo.value || !r->hi.value)
            throw InputError("tangent frame: parameter '" + p + "' is unbounded on the branch");
        f.params.push_back({p, *r->lo.value, *r->hi.value});
    }
    {
        Polyhedron box(b.free_parameters);
        for (auto const& p : f.params)
            box.add_box(p.name, p.lo, p.hi);
        if (!b.region.project(b.free_parameters).contains(box))
            throw InputError("tangent frame: branch region is not a box in its free parameters");
    }

    std::map<std::string, detail::PointValue> value;
    for (auto const& v : joint.variables) {
        if (b.is_zero(v.name)) {
            value[v.name] = std::nullopt;
            continue;
        }
        if (std::find(b.unit.begin(), b.unit.end(), v.name) == b.unit.end())
            throw InputError("tangent frame: variable '" + v.name + "' is not of modulus one on the branch");
        if (v.kind == VariableKind::radial) {
            value[v.name] = Affine();
        } else {
            value[v.name] = Affine::variable(detail::phase_param(v.name));
            f.params.push_back({detail::phase_param(v.name), 0, m});
        }
    }
    auto reduce = [&](Affine const& a) { return b.hull.reduce(a); };
    auto original_value = [&](std::string const& v) -> detail::PointValue {
        SlotTerm const& t = in.substitution.at(v);
        switch (t.kind) {
        case SlotTerm::Kind::zero: return std::nullopt;
        case SlotTerm::Kind::one: return reduce(t.phase);
        case SlotTerm::Kind::var: {
            auto const& w = value.at(t.var);
            if (!w)
                return std::nullopt;
            return *w + reduce(t.phase);
        }
        }
        return std::nullopt;
    };

    for (ParamPatch const* side : {&in.first, &in.second}) {
        // sphere directions: δv = ζ^ψ or i·ζ^ψ
        struct Direction
        {
            std::string var;
            Affine phase;
            bool times_i;
        };
        std::vector<Direction> dirs;
        std::set<std::string> grouped;
        for (auto const& g : side->spheres) {
            std::vector<std::string> alive;
            for (auto const& v : g) {
                grouped.insert(v);
                if (original_value(v))
                    alive.push_back(v);
            }
            if (alive.size() != 1)
                throw InputError("tangent frame: " + side->name + " is not at a coordinate point of its sphere");
            for (auto const& v : g) {
                bool const radial = side->variable(v)->kind == VariableKind::radial;
                if (v == alive.front()) {
                    if (!radial)
                        dirs.push_back({v, *original_value(v), true});
                } else {
                    dirs.push_back({v, Affine(), false});
                    if (!radial)
                        dirs.push_back({v, Affine(), true});
                }
            }
        }
        for (auto const& v : side->variables)
            if (!grouped.count(v.name))
                throw InputError("tangent frame: variable '" + v.name + "' of " + side->name + " is in no sphere group");

        for (auto const& d : dirs) {
            std::array<ComplexTrig, 4> vec{ComplexTrig(m), ComplexTrig(m), ComplexTrig(m), ComplexTrig(m)};
            for (std::size_t i = 0; i < 4; ++i) {
                SlotTerm const& s = side->slots[i];
                if (s.kind != SlotTerm::Kind::var || s.var != d.var)
                    continue;
                Affine const th = d.phase + reduce(s.phase);
                vec[i] = d.times_i ? ComplexTrig::i_phase(m, th) : ComplexTrig::phase(m, th);
            }
            f.push(vec, side->name + ":" + (d.times_i ? "i" : "") + "d" + d.var);
        }
        for (auto const& p : side->params) {
            std::array<ComplexTrig, 4> vec{ComplexTrig(m), ComplexTrig(m), ComplexTrig(m), ComplexTrig(m)};
            bool moved = false;
            for (std::size_t i = 0; i < 4; ++i) {
                SlotTerm const& s = side->slots[i];
                mpq_class const c = s.phase.coefficient(p.name);
                if (sgn(c) == 0 || s.is_zero())
                    continue;
                detail::PointValue const at = s.kind == SlotTerm::Kind::one ? Affine() : original_value(s.var);
                if (!at)
                    continue;
                vec[i] = ComplexTrig::i_phase(m, *at + reduce(s.phase), c);
                moved = true;
            }
            if (moved)
                f.push(vec, side->name + ":d/d" + p.name);
        }
    }
    return f;
}

/// Certified rank 6 (the dimension of S³×S³) of the joint tangent frame.
inline RankCertificate transversality(Intersection const& in, SolutionBranch const& b, RankOptions const& opt = {})
{
    return cyclosolve::tangent_rank(tangent_frame(in, b), 6, opt);
}

} // namespace lensconf::dualcalc
