#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lensconf/confspaces/formulas.hpp"
#include "lensconf/cupmassey.hpp"
#include "lensconf/simplicial.hpp"

namespace lensconf::confspaces {

enum class Section { model, homology, sweep, lemmas, verdict };

inline std::string section_name(Section s)
{
    switch (s) {
    case Section::model: return "MODEL";
    case Section::homology: return "HOMOLOGY";
    case Section::sweep: return "SWEEP";
    case Section::lemmas: return "LEMMAS";
    case Section::verdict: return "VERDICT";
    }
    return "?";
}

inline constexpr Section all_sections[] = {Section::model, Section::homology, Section::sweep, Section::lemmas,
                                           Section::verdict};

struct Claim
{
    Section section = Section::model;
    std::string key;
    std::string value;
    /// how the value was obtained (computation, formula, certificate name)
    std::string evidence;
};

struct PipelineReport
{
    std::string pipeline;
    std::uint64_t seed = 0;
    std::size_t budget = 0;
    std::vector<Claim> claims;
    std::vector<std::pair<std::string, double>> timings; // seconds, in stage order
    std::vector<std::string> budget_flags;
    bool passed = false;

    void add(Section s, std::string key, std::string value, std::string evidence)
    {
        if (evidence.empty())
            throw VerificationError("claim '" + key + "' has no evidence");
        claims.push_back({s, std::move(key), std::move(value), std::move(evidence)});
    }

    std::vector<Claim> section(Section s) const
    {
        std::vector<Claim> out;
        for (auto const& c : claims)
            if (c.section == s)
                out.push_back(c);
        return out;
    }

    Claim const* find(std::string const& key) const
    {
        for (auto const& c : claims)
            if (c.key == key)
                return &c;
        return nullptr;
    }

    std::string value(std::string const& key) const
    {
        auto const* c = find(key);
        if (!c)
            throw InputError("report has no claim '" + key + "'");
        return c->value;
    }
};

namespace detail {

class Stopwatch
{
public:
    explicit Stopwatch(PipelineReport& r) : report_(r) {}

    void lap(std::string name)
    {
        auto const now = std::chrono::steady_clock::now();
        report_.timings.emplace_back(std::move(name), std::chrono::duration<double>(now - last_).count());
        last_ = now;
    }

private:
    PipelineReport& report_;
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

template <typename T>
std::string join_numbers(std::vector<T> const& v)
{
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i)
        out += (i ? "," : "") + std::to_string(v[i]);
    return out + ")";
}

inline std::vector<std::size_t> betti_from_polynomial(Polynomial const& p, int top)
{
    std::vector<std::size_t> out;
    for (int d = 0; d <= top; ++d)
        out.push_back(p.coefficient(static_cast<std::size_t>(d)).get_ui());
    return out;
}

} // namespace detail

/// Top simplices of the (∨_{m−1} S²) × S³ model.
inline std::size_t split_model_top_count(long m) { return 200 * static_cast<std::size_t>(m - 1); }

/// (∨_{m−1} ∂Δ³) × ∂Δ⁴ with the staircase triangulation.
inline simplicial::SimplicialComplex split_model(long m)
{
    if (m < 2)
        throw InputError("split model needs m >= 2");
    std::vector<simplicial::PointedComplex> pieces(static_cast<std::size_t>(m - 1), {simplicial::boundary_sphere(2), 0});
    return simplicial::staircase_product(simplicial::wedge(pieces), simplicial::boundary_sphere(3));
}

/// Degree (2,2,2) Massey sweep over ℚ on the split model; passes when every
/// admissible triple is trivial.
inline PipelineReport split_model_sweep(long m, std::size_t budget = 200000, std::size_t max_triples = 100000)
{
    if (m < 2)
        throw InputError("split model needs m >= 2");
    PipelineReport rep;
    rep.pipeline = "split-sweep";
    rep.budget = budget;
    std::size_t const projected = split_model_top_count(m);
    if (projected > budget) {
        throw BudgetError("split model for m=" + std::to_string(m) + " needs " + std::to_string(projected) +
                              " top simplices, budget is " + std::to_string(budget),
                          static_cast<double>(projected));
    }
    detail::Stopwatch clock(rep);
    auto const k = simplicial::share(split_model(m));
    clock.lap("model");
    rep.add(Section::model, "model", "wedge of " + std::to_string(m - 1) + " S2 times S3", "staircase product");
    rep.add(Section::model, "f-vector", detail::join_numbers(k->f_vector()), "constructed complex");
    rep.add(Section::model, "top-simplices", std::to_string(k->count(k->dimension())), "constructed complex");

    auto const dga = cupmassey::simplicial_to_dga(k, chaincore::Rationals{});
    cupmassey::MasseyEngine<chaincore::Rationals> engine(dga);
    std::vector<std::size_t> betti;
    for (int d = 0; d <= dga.top_degree(); ++d)
        betti.push_back(engine.betti(d));
    clock.lap("cohomology");
    auto const expected = detail::betti_from_polynomial(poincare_polynomial(m, 2), dga.top_degree());
    rep.add(Section::homology, "betti-Q", detail::join_numbers(betti), "cochain cohomology over Q");
    rep.add(Section::homology, "betti-expected", detail::join_numbers(expected), "poincare_polynomial(m,2)");

    auto const sweep = cupmassey::massey_sweep(engine, {2, 2, 2}, max_triples);
    clock.lap("sweep");
    rep.add(Section::sweep, "triples", std::to_string(sweep.total), "massey_sweep degrees (2,2,2)");
    rep.add(Section::sweep, "admissible", std::to_string(sweep.admissible), "massey_sweep degrees (2,2,2)");
    rep.add(Section::sweep, "trivial", std::to_string(sweep.trivial), "massey_sweep degrees (2,2,2)");
    rep.add(Section::sweep, "nontrivial", std::to_string(sweep.nontrivial), "massey_sweep degrees (2,2,2)");
    rep.add(Section::sweep, "complete", sweep.complete ? "yes" : "no", "massey_sweep triple cap");
    if (!sweep.complete)
        rep.budget_flags.push_back("sweep stopped at " + std::to_string(max_triples) + " triples");

    bool const betti_ok = betti == expected;
    rep.add(Section::lemmas, "betti-match", betti_ok ? "yes" : "no", "betti-Q vs betti-expected");
    rep.passed = betti_ok && sweep.all_trivial();
    rep.add(Section::verdict, "massey-products", sweep.all_trivial() ? "ALL-TRIVIAL" : "NOT-ALL-TRIVIAL",
            "sweep section");
    return rep;
}

struct ComplementOptions
{
    /// maximum projected number of top simplices of S³ × S³
    std::size_t budget = 200000;
    simplicial::LensModelKind kind = simplicial::LensModelKind::circle_join;
    chaincore::CoefficientRing ring = chaincore::CoefficientRing::prime_field(5);
    bool long_running_override = false;
};

/// Top simplices of the staircase product of the model with itself.
inline double complement_projection(simplicial::LensModelKind kind, long m)
{
    double const t = static_cast<double>(simplicial::lens_model_top_count(kind, static_cast<int>(m)));
    return t * t * 20; // C(6,3) staircases per pair of tetrahedra
}

/// Model of S³ × S³ minus the m graphs of the ℤ_m action, its homology, and
/// the comparison with poincare_polynomial(m, 2).
inline PipelineReport complement_pipeline(long m, long q, ComplementOptions const& opt = {})
{
    if (m < 2)
        throw InputError("complement needs m >= 2");
    simplicial::detail::check_lens_parameters(static_cast<int>(m), static_cast<int>(q));
    PipelineReport rep;
    rep.pipeline = "complement";
    rep.budget = opt.budget;
    double const projected = complement_projection(opt.kind, m);
    if (projected > static_cast<double>(opt.budget)) {
        std::string const text = "complement for (" + std::to_string(m) + "," + std::to_string(q) + ") with " +
                                 simplicial::model_kind_name(opt.kind) + " projects " +
                                 std::to_string(static_cast<std::uint64_t>(projected)) +
                                 " six-simplices before subdivision, budget is " + std::to_string(opt.budget);
        if (!opt.long_running_override)
            throw BudgetError(text, projected);
        rep.budget_flags.push_back("override: " + text);
    }
    detail::Stopwatch clock(rep);
    auto const model = simplicial::lens_model(opt.kind, static_cast<int>(m), static_cast<int>(q));
    if (!model.action.is_free())
        throw InputError("the action for (" + std::to_string(m) + "," + std::to_string(q) + ") is not free");
    auto const product = simplicial::staircase_product(*model.complex, *model.complex);
    std::vector<simplicial::SimplicialComplex> graphs;
    for (long k = 0; k < m; ++k)
        graphs.push_back(simplicial::graph_subcomplex(model.action.power(static_cast<int>(k))));
    auto const comp = simplicial::complement_model(product, graphs);
    clock.lap("model");
    rep.add(Section::model, "lens-model", simplicial::model_kind_name(opt.kind), "constructor");
    rep.add(Section::model, "lens-f-vector", detail::join_numbers(model.complex->f_vector()), "constructed complex");
    rep.add(Section::model, "action-free", "yes", "GroupAction::is_free");
    rep.add(Section::model, "product-top-simplices", std::to_string(product.count(6)), "staircase product");
    rep.add(Section::model, "offending-simplices", std::to_string(comp.offending), "complement_model");
    rep.add(Section::model, "subdivision-vertices", std::to_string(comp.new_vertices), "complement_model");
    rep.add(Section::model, "complement-f-vector", detail::join_numbers(comp.complex.f_vector()), "complement_model");

    auto const h = simplicial::simplicial_homology(comp.complex, opt.ring);
    clock.lap("homology");
    auto betti = h.betti();
    betti.resize(6, 0);
    auto const expected = detail::betti_from_polynomial(poincare_polynomial(m, 2), 5);
    rep.add(Section::homology, "homology", h.describe(), "boundary-matrix reduction");
    rep.add(Section::homology, "betti", detail::join_numbers(betti), "homology");
    rep.add(Section::homology, "betti-expected", detail::join_numbers(expected), "poincare_polynomial(m,2)");
    rep.add(Section::homology, "euler", std::to_string(h.euler_characteristic()), "homology");

    bool const ok = betti == expected && h.degrees.size() <= 6;
    rep.add(Section::lemmas, "betti-match", ok ? "yes" : "no", "betti vs betti-expected");
    rep.add(Section::verdict, "complement-homology", ok ? "MATCHES" : "MISMATCH", "homology section");
    rep.passed = ok;
    return rep;
}

} // namespace lensconf::confspaces
