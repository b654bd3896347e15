#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "lensconf/confspaces.hpp"
#include "lensconf/cupmassey.hpp"
#include "lensconf/cupmassey/dga_io.hpp"
#include "lensconf/cyclosolve.hpp"
#include "lensconf/dualcalc.hpp"
#include "lensconf/simplicial.hpp"
#include "lensconf/simplicial/complex_io.hpp"
#include "report.hpp"

using namespace lensconf;
using namespace lensconf::cli;

namespace {

struct Options
{
    long m = 7, q = 2, n = 2;
    std::string ring;
    std::size_t budget = 200000;
    std::uint64_t seed = 20240517;
    std::string out;
    std::string cache_dir;
    bool no_cache = false;
    bool long_running_override = false;

    std::string kind = "circle-join";
    std::string fixture;
    std::string complex_file;
    bool quotient = false;
    std::string dga_file;
    std::vector<int> degrees{2, 2, 2};
    std::string system_file;
    std::size_t samples = 10000;
    bool wrong_map = false;
    bool sabotage = false;
};

struct Outcome
{
    Outcome() = default;
    explicit Outcome(PipelineReport r) : report(std::move(r)) {}

    PipelineReport report;
    int exit_code = exit_ok;
    std::string message;
    /// extra files written next to the report (name, contents)
    std::vector<std::pair<std::string, std::string>> artifacts;
};

struct Command
{
    json invocation;
    std::string inputs; // contents of input files, part of the cache key
    std::function<Outcome()> run;
    bool cacheable = true;
};

PipelineReport new_report(std::string name, Options const& o)
{
    PipelineReport r;
    r.pipeline = std::move(name);
    r.seed = o.seed;
    r.budget = o.budget;
    return r;
}

template <typename T>
std::string join(std::vector<T> const& v, std::string const& sep = ",")
{
    std::ostringstream s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s << (i ? sep : "") << v[i];
    return s.str();
}

std::string tuple_text(std::vector<std::size_t> const& v) { return "(" + join(v) + ")"; }

chaincore::CoefficientRing ring_or(Options const& o, std::string const& fallback)
{
    return chaincore::CoefficientRing::parse(o.ring.empty() ? fallback : o.ring);
}

void merge(PipelineReport& into, PipelineReport const& from, std::string const& prefix)
{
    for (auto const& c : from.claims)
        into.claims.push_back({c.section, prefix + c.key, c.value, c.evidence});
    for (auto const& [k, s] : from.timings)
        into.timings.emplace_back(prefix + k, s);
    for (auto const& f : from.budget_flags)
        into.budget_flags.push_back(prefix + f);
}

std::string fixed(double v, int digits = 6)
{
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
}

// ---- verify-paper ---------------------------------------------------------

struct Checks
{
    PipelineReport& r;
    std::string first_failure;

    void operator()(std::string const& name, bool ok, std::string const& got, std::string const& evidence)
    {
        r.add(Section::verdict, name, ok ? "MATCH" : "MISMATCH: " + got, evidence);
        if (!ok && first_failure.empty())
            first_failure = name;
    }
};

void record_massey(PipelineReport& r, dualcalc::MasseyOutcome const& out)
{
    for (auto const& l : out.lemmas)
        r.add(Section::lemmas, "lemma." + l.name, (l.holds ? "holds: " : "FAILS: ") + l.claim,
              l.detail.empty() ? "exact congruence solver"
              : l.detail.find('\n') != std::string::npos ? "pattern.table"
                                                          : l.detail);
    for (auto const& c : out.certificates)
        r.add(Section::lemmas, "certificate." + c.name,
              cyclosolve::rank_verdict_name(c.certificate.verdict) + " rank " +
                  std::to_string(c.certificate.expected) + " margin " + fixed(c.certificate.margin) + " boxes " +
                  std::to_string(c.certificate.boxes_examined),
              "interval determinant cover");
    r.add(Section::verdict, "massey.verdict", dualcalc::massey_verdict_name(out.verdict), "lemma.membership");
    r.add(Section::verdict, "massey.representative", out.representative_text, "chain " + out.chain);
    r.add(Section::verdict, "massey.indeterminacy", "{" + join(out.indeterminacy_text, ", ") + "}",
          "x∪H² + H²∪z");
}

Outcome verify_paper(Options const& o)
{
    Outcome res{new_report("verify-paper", o)};
    PipelineReport& r = res.report;
    Checks check{r, {}};
    bool const theorem = o.m == 7 && o.q == 2;
    dualcalc::detail::check_action(o.m, o.q);
    r.add(Section::model, "lens", "L(" + std::to_string(o.m) + "," + std::to_string(o.q) + ")",
          theorem ? "theorem instance" : "comparison instance");

    // stages are independent; results are assembled in a fixed order
    PipelineReport split;
    std::optional<dualcalc::MasseyOutcome> massey;
    std::vector<std::string> compare_lines;
    std::size_t compare_trivial = 0, compare_nontrivial = 0, compare_unsupported = 0;
    double dual_seconds = 0;
    parallel_for(2, [&](std::size_t stage) {
        if (stage == 0) {
            split = confspaces::split_model_sweep(o.m, o.budget);
            return;
        }
        auto const start = std::chrono::steady_clock::now();
        dualcalc::H5Presentation const h(o.m);
        if (theorem) {
            dualcalc::MasseyOptions mo;
            if (o.sabotage)
                mo.extra_indeterminacy.push_back(h.basis(2));
            massey = dualcalc::massey_via_intersection(7, 2, h.basis(4), h.basis(1), dualcalc::parse_class("a2+a6", 7), mo);
        } else {
            for (long i = 0; i < o.m; ++i)
                for (long j = 0; j < o.m; ++j)
                    for (long k = 0; k < o.m; ++k) {
                        if (i == j || j == k)
                            continue;
                        std::string const name = "<a" + std::to_string(i) + ",a" + std::to_string(j) + ",a" +
                                                 std::to_string(k) + ">";
                        try {
                            auto const out = dualcalc::massey_via_intersection(o.m, o.q, h.basis(i), h.basis(j),
                                                                               h.basis(k));
                            if (out.verdict == dualcalc::MasseyVerdict::trivial) {
                                ++compare_trivial;
                            } else {
                                ++compare_nontrivial;
                                compare_lines.push_back(name + " NONTRIVIAL " + out.representative_text);
                            }
                        } catch (InputError const& e) {
                            ++compare_unsupported;
                            compare_lines.push_back(name + " unsupported: " + e.what());
                        }
                    }
        }
        dual_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    });
    merge(r, split, "split.");
    r.timings.emplace_back("dual", dual_seconds);
    check("check.split-sweep", split.passed, split.value("massey-products"), "split.massey-products");

    if (theorem) {
        auto const table = dualcalc::intersection_pattern(7, 2);
        r.add(Section::lemmas, "pattern.table", table.render(), "exact intersection of all membrane pairs");
        r.add(Section::lemmas, "pattern.offsets", "{" + join(table.offsets()) + "}", "pattern.table");
        check("check.pattern", table.offsets() == std::vector<long>{3, 4} && table.symmetric() && table.shift_invariant(),
              "{" + join(table.offsets()) + "}", "pattern.offsets");

        record_massey(r, *massey);
        bool lemmas_ok = true;
        std::string failed;
        for (auto const& l : massey->lemmas)
            if (!l.holds && l.name != "membership") {
                lemmas_ok = false;
                failed += (failed.empty() ? "" : ",") + l.name;
            }
        check("check.lemmas", lemmas_ok, failed, "LEMMAS section");
        bool certs_ok = massey->certificates.size() >= 2;
        for (auto const& c : massey->certificates)
            certs_ok = certs_ok && c.certificate.verdict == cyclosolve::RankVerdict::certified && c.certificate.margin > 0;
        check("check.certificates", certs_ok, std::to_string(massey->certificates.size()) + " certificates",
              "certificate.*");
        check("check.massey-verdict", massey->verdict == dualcalc::MasseyVerdict::nontrivial,
              dualcalc::massey_verdict_name(massey->verdict), "massey.verdict");
        dualcalc::H5Presentation const h(7);
        auto neg = h.basis(2);
        for (auto& c : neg)
            c = -c;
        check("check.representative", massey->representative == h.basis(2) || massey->representative == neg,
              massey->representative_text, "massey.representative");
        std::vector<std::string> const want_ind{"a₄∪ι", "a₂∪ι + a₆∪ι"};
        check("check.indeterminacy", massey->indeterminacy_text == want_ind,
              join(massey->indeterminacy_text, ", "), "massey.indeterminacy");
    } else {
        r.add(Section::sweep, "dual.trivial", std::to_string(compare_trivial), "massey_via_intersection");
        r.add(Section::sweep, "dual.nontrivial", std::to_string(compare_nontrivial), "massey_via_intersection");
        r.add(Section::sweep, "dual.unsupported", std::to_string(compare_unsupported), "massey_via_intersection");
        if (!compare_lines.empty())
            r.add(Section::sweep, "dual.details", join(compare_lines, "\n"), "massey_via_intersection");
        check("check.dual-side", compare_nontrivial == 0 && compare_trivial > 0,
              std::to_string(compare_nontrivial) + " nontrivial", "dual.*");
    }

    // formulas
    auto const p = confspaces::poincare_polynomial(o.m, 2);
    r.add(Section::homology, "formula.poincare", p.to_string(), "poincare_polynomial(m,2)");
    r.add(Section::homology, "formula.h2-rank", confspaces::h2_rank(o.m, 2).get_str(), "h2_rank(m,2)");
    auto const ord = confspaces::fundamental_group_summary(o.m, 2, true);
    auto const unord = confspaces::fundamental_group_summary(o.m, 2, false);
    r.add(Section::homology, "formula.pi1-ordered", ord.family + " order " + ord.order.get_str(), "bookkeeping");
    r.add(Section::homology, "formula.pi1-unordered", unord.family + " order " + unord.order.get_str(), "bookkeeping");
    if (theorem) {
        check("check.poincare", p.to_string() == "1 + 6q^2 + q^3 + 6q^5", p.to_string(), "formula.poincare");
        check("check.h2-rank", confspaces::h2_rank(7, 2) == 6, confspaces::h2_rank(7, 2).get_str(), "formula.h2-rank");
        check("check.pi1", ord.order == 49 && unord.order == 98, ord.order.get_str() + "/" + unord.order.get_str(),
              "formula.pi1-*");
    }

    r.passed = check.first_failure.empty();
    if (!r.passed) {
        res.exit_code = exit_mismatch;
        res.message = "first failing verdict: " + check.first_failure;
    }
    return res;
}

// ---- compute commands ------------------------------------------------------

struct LoadedComplex
{
    simplicial::SimplicialComplex complex;
    std::string source;
    std::optional<simplicial::GroupAction> action;
};

LoadedComplex load_complex(Options const& o)
{
    if (!o.fixture.empty())
        return {simplicial::named_fixture(o.fixture), "fixture " + o.fixture, std::nullopt};
    if (!o.complex_file.empty()) {
        std::ifstream in(o.complex_file);
        if (!in)
            throw InputError("cannot open '" + o.complex_file + "'");
        try {
            return {simplicial::read_complex(in), "file " + o.complex_file, std::nullopt};
        } catch (InputError const& e) {
            throw InputError(o.complex_file + ": " + e.what());
        }
    }
    auto const kind = simplicial::parse_model_kind(o.kind);
    std::size_t const top = simplicial::lens_model_top_count(kind, static_cast<int>(o.m));
    if (top > o.budget)
        throw BudgetError(o.kind + " model for m=" + std::to_string(o.m) + " has " + std::to_string(top) +
                              " top simplices, budget is " + std::to_string(o.budget),
                          static_cast<double>(top));
    auto model = simplicial::lens_model(kind, static_cast<int>(o.m), static_cast<int>(o.q));
    return {*model.complex, o.kind + " model of S3 for (" + std::to_string(o.m) + "," + std::to_string(o.q) + ")",
            model.action};
}

void describe_complex(PipelineReport& r, simplicial::SimplicialComplex const& k, std::string const& source,
                      std::string const& prefix = "")
{
    r.add(Section::model, prefix + "source", source, "input");
    r.add(Section::model, prefix + "dimension", std::to_string(k.dimension()), "constructed complex");
    r.add(Section::model, prefix + "f-vector", tuple_text(k.f_vector()), "constructed complex");
    r.add(Section::model, prefix + "euler", std::to_string(k.euler_characteristic()), "alternating f-vector sum");
}

Outcome model_command(Options const& o)
{
    Outcome res{new_report("model", o)};
    auto const t0 = std::chrono::steady_clock::now();
    auto const loaded = load_complex(o);
    res.report.timings.emplace_back("model", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    describe_complex(res.report, loaded.complex, loaded.source);
    if (loaded.action) {
        res.report.add(Section::model, "action-free", loaded.action->is_free() ? "yes" : "no", "GroupAction::is_free");
        if (o.quotient) {
            auto const q = simplicial::quotient(*loaded.action);
            describe_complex(res.report, q.complex, "quotient by the action", "quotient.");
            res.report.add(Section::model, "quotient.subdivisions", std::to_string(q.subdivisions), "quotient");
        }
    }
    std::ostringstream text;
    simplicial::write_complex(text, loaded.complex);
    res.artifacts.emplace_back("model.complex", text.str());
    res.report.add(Section::verdict, "model", "BUILT", "MODEL section");
    res.report.passed = true;
    return res;
}

Outcome homology_command(Options const& o)
{
    Outcome res{new_report("homology", o)};
    auto ring = ring_or(o, "Z");
    auto loaded = load_complex(o);
    simplicial::SimplicialComplex k = loaded.complex;
    std::string source = loaded.source;
    if (o.quotient) {
        if (!loaded.action)
            throw InputError("--quotient needs a lens model (--m/--q), not a fixture or file");
        k = simplicial::quotient(*loaded.action).complex;
        source += ", quotient by the action";
    }
    if (k.total_simplices() > o.budget)
        throw BudgetError("complex has " + std::to_string(k.total_simplices()) + " simplices, budget is " +
                              std::to_string(o.budget),
                          static_cast<double>(k.total_simplices()));
    describe_complex(res.report, k, source);
    auto const t0 = std::chrono::steady_clock::now();
    auto const h = simplicial::simplicial_homology(k, ring);
    res.report.timings.emplace_back("homology", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    res.report.add(Section::homology, "ring", ring.name(), "--ring");
    res.report.add(Section::homology, "homology", h.describe(), "Smith normal form / field elimination");
    res.report.add(Section::homology, "betti", tuple_text(h.betti()), "homology");
    res.report.add(Section::homology, "euler", std::to_string(h.euler_characteristic()), "homology");
    res.report.add(Section::verdict, "euler-consistent",
                   h.euler_characteristic() == k.euler_characteristic() ? "yes" : "no", "f-vector vs betti");
    res.report.passed = h.euler_characteristic() == k.euler_characteristic();
    if (!res.report.passed) {
        res.exit_code = exit_mismatch;
        res.message = "Euler characteristic mismatch";
    }
    return res;
}

template <typename Ring>
void massey_for_ring(Options const& o, std::string const& text, Ring ring, PipelineReport& r)
{
    std::istringstream in(text);
    cupmassey::DGA<Ring> dga = [&] {
        try {
            return cupmassey::read_dga(in, ring);
        } catch (InputError const& e) {
            throw InputError(o.dga_file + ": " + e.what());
        }
    }();
    cupmassey::MasseyEngine<Ring> engine(dga);
    std::vector<std::size_t> betti;
    for (int d = 0; d <= dga.top_degree(); ++d)
        betti.push_back(engine.betti(d));
    r.add(Section::model, "dga", std::filesystem::path(o.dga_file).filename().string(), "input");
    r.add(Section::model, "dimensions", std::to_string(dga.total_dim()) + " basis elements", "dga");
    r.add(Section::homology, "betti", tuple_text(betti), "cohomology of the DGA");
    std::array<int, 3> const deg{o.degrees[0], o.degrees[1], o.degrees[2]};
    auto const t0 = std::chrono::steady_clock::now();
    auto const sweep = cupmassey::massey_sweep(engine, deg, o.budget);
    r.timings.emplace_back("sweep", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    std::string const ev = "massey_sweep degrees (" + join(o.degrees) + ")";
    r.add(Section::sweep, "triples", std::to_string(sweep.total), ev);
    r.add(Section::sweep, "admissible", std::to_string(sweep.admissible), ev);
    r.add(Section::sweep, "trivial", std::to_string(sweep.trivial), ev);
    r.add(Section::sweep, "nontrivial", std::to_string(sweep.nontrivial), ev);
    if (!sweep.complete)
        r.budget_flags.push_back("sweep stopped after " + std::to_string(o.budget) + " triples");
    std::vector<std::string> lines;
    for (auto const& e : sweep.entries) {
        if (!e.admissible || e.verdict != cupmassey::Verdict::nontrivial)
            continue;
        auto const out = engine.triple(engine.cohomology_basis(deg[0])[e.index[0]],
                                       engine.cohomology_basis(deg[1])[e.index[1]],
                                       engine.cohomology_basis(deg[2])[e.index[2]]);
        lines.push_back("<" + dga.format(out.x) + ", " + dga.format(out.y) + ", " + dga.format(out.z) +
                        ">: representative [" + dga.format(out.representative) + "], indeterminacy " +
                        std::to_string(out.indeterminacy.size()) + " generators");
    }
    if (!lines.empty())
        r.add(Section::sweep, "nontrivial-triples", join(lines, "\n"), "canonical lifts");
    r.add(Section::verdict, "massey-products", sweep.nontrivial ? "NONTRIVIAL" : "ALL-TRIVIAL", "sweep section");
    r.passed = true;
}

Outcome massey_command(Options const& o, std::string const& text)
{
    Outcome res{new_report("massey", o)};
    auto const ring = ring_or(o, "Q");
    if (!ring.is_field())
        throw InputError("massey needs a field (Q or Fp:<p>)");
    if (o.degrees.size() != 3)
        throw InputError("--degrees needs three values");
    res.report.add(Section::model, "ring", ring.name(), "--ring");
    chaincore::dispatch(ring, [&](auto r) {
        if constexpr (decltype(r)::is_field)
            massey_for_ring(o, text, r, res.report);
    });
    return res;
}

Outcome pattern_command(Options const& o)
{
    Outcome res{new_report("pattern", o)};
    auto const t0 = std::chrono::steady_clock::now();
    auto const t = dualcalc::intersection_pattern(o.m, o.q);
    res.report.timings.emplace_back("pattern", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    res.report.add(Section::model, "membranes", std::to_string(o.m), "A_0 … A_{m-1}");
    res.report.add(Section::lemmas, "table", t.render(), "exact intersection of all membrane pairs");
    res.report.add(Section::lemmas, "offsets", "{" + join(t.offsets()) + "}", "table");
    int dim = -1;
    for (auto const& c : t.cells)
        dim = std::max(dim, c.dimension);
    res.report.add(Section::lemmas, "max-dimension", std::to_string(dim), "table");
    res.report.add(Section::lemmas, "symmetric", t.symmetric() ? "yes" : "no", "table");
    res.report.add(Section::lemmas, "shift-invariant", t.shift_invariant() ? "yes" : "no", "table");
    std::vector<std::string> rows;
    for (auto const& c : t.cells)
        for (auto const& b : c.branches)
            rows.push_back("A" + std::to_string(c.k) + "∩A" + std::to_string(c.j) + ": " + b);
    if (!rows.empty())
        res.report.add(Section::lemmas, "branches", join(rows, "\n"), "congruence solver");
    res.report.add(Section::verdict, "pattern", t.offsets().empty() ? "EMPTY" : "NONEMPTY", "offsets");
    res.report.passed = t.symmetric() && t.shift_invariant();
    if (!res.report.passed) {
        res.exit_code = exit_mismatch;
        res.message = "pattern table is not symmetric and shift invariant";
    }
    return res;
}

Outcome formulas_command(Options const& o)
{
    Outcome res{new_report("formulas", o)};
    auto& r = res.report;
    auto const p = confspaces::poincare_polynomial(o.m, o.n);
    r.add(Section::homology, "poincare", p.to_string(), "(1+q^3) prod (1+(mk-1)q^2)");
    r.add(Section::homology, "poincare(-1)", p.evaluate(-1).get_str(), "poincare");
    r.add(Section::homology, "h2-rank", confspaces::h2_rank(o.m, o.n).get_str(), "sum of (mk-1)");
    bool ok = sgn(p.evaluate(-1)) == 0 && p.coefficient(2) == confspaces::h2_rank(o.m, o.n);
    if (o.m == 7) {
        auto const closed = confspaces::h2_rank_closed_form_7(o.n);
        r.add(Section::homology, "h2-rank-closed-form", closed.get_str(), "(n-1)(7n-2)/2");
        ok = ok && closed == confspaces::h2_rank(o.m, o.n);
    }
    for (bool ordered : {true, false}) {
        auto const g = confspaces::fundamental_group_summary(o.m, o.n, ordered);
        r.add(Section::homology, ordered ? "pi1-ordered" : "pi1-unordered", g.family + " order " + g.order.get_str(),
              "bookkeeping");
    }
    r.add(Section::verdict, "formulas-consistent", ok ? "yes" : "no", "h2 vs poincare coefficient");
    r.passed = ok;
    if (!ok) {
        res.exit_code = exit_mismatch;
        res.message = "formula cross-check failed";
    }
    return res;
}

Outcome complement_command(Options const& o)
{
    confspaces::ComplementOptions co;
    co.budget = o.budget;
    co.kind = simplicial::parse_model_kind(o.kind);
    co.ring = ring_or(o, "Fp:5");
    co.long_running_override = o.long_running_override;
    Outcome res{confspaces::complement_pipeline(o.m, o.q, co)};
    res.report.seed = o.seed;
    if (!res.report.passed) {
        res.exit_code = exit_mismatch;
        res.message = "complement betti numbers differ from the Poincaré polynomial";
    }
    return res;
}

Outcome split_sweep_command(Options const& o)
{
    Outcome res{confspaces::split_model_sweep(o.m, o.budget)};
    res.report.seed = o.seed;
    if (!res.report.passed) {
        res.exit_code = exit_mismatch;
        res.message = "split model has a nontrivial Massey product";
    }
    return res;
}

Outcome quaternion_command(Options const& o)
{
    Outcome res{new_report("quaternion-test", o)};
    auto const t0 = std::chrono::steady_clock::now();
    auto const wrong = [](confspaces::QuaternionAlgebra const& h, confspaces::Quaternion const& x,
                          confspaces::Quaternion const& y) { return h.mul(x, y); };
    auto const rep = o.wrong_map ? confspaces::quaternion_split_test(o.m, o.samples, o.seed, wrong)
                                 : confspaces::quaternion_split_test(o.m, o.samples, o.seed);
    res.report.timings.emplace_back("samples", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    auto& r = res.report;
    r.add(Section::model, "field", "Q(zeta_" + std::to_string(std::lcm(4L, o.m)) + ")", "exact cyclotomic arithmetic");
    r.add(Section::model, "map", o.wrong_map ? "(x,y) -> (xy, y)" : "(x,y) -> (xy^-1, y)", "--wrong-map");
    r.add(Section::sweep, "samples", std::to_string(rep.samples), "--samples");
    r.add(Section::sweep, "orbit-samples", std::to_string(rep.orbit_samples), "x = zeta^k y by construction");
    r.add(Section::sweep, "checks", std::to_string(rep.checks), "samples x m");
    r.add(Section::sweep, "failures", std::to_string(rep.failure_count), "x = zeta^k y vs F(x,y) = zeta^k");
    std::vector<std::string> lines;
    for (auto const& f : rep.failures)
        lines.push_back("sample " + std::to_string(f.sample) + " k=" + std::to_string(f.k) +
                        " orbit=" + (f.orbit ? "yes" : "no") + " image=" + (f.image ? "yes" : "no"));
    if (!lines.empty())
        r.add(Section::sweep, "first-failures", join(lines, "\n"), "replay with --seed");
    r.add(Section::verdict, "equivalence", rep.passed() ? "HOLDS" : "FAILS", "sweep section");
    r.passed = rep.passed();
    if (!r.passed) {
        res.exit_code = exit_mismatch;
        res.message = std::to_string(rep.failure_count) + " failing checks";
    }
    return res;
}

Outcome solve_command(Options const& o, std::string const& text)
{
    Outcome res{new_report("solve", o)};
    std::istringstream in(text);
    cyclosolve::CongruenceSystem s;
    try {
        s = cyclosolve::read_system(in);
    } catch (InputError const& e) {
        throw InputError(o.system_file + ": " + e.what());
    }
    auto const t0 = std::chrono::steady_clock::now();
    auto const sol = cyclosolve::solve_congruences(s);
    res.report.timings.emplace_back("solve", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    auto& r = res.report;
    r.add(Section::model, "system", std::filesystem::path(o.system_file).filename().string(), "input");
    r.add(Section::model, "modulus", std::to_string(s.modulus), "system");
    r.add(Section::model, "equations", std::to_string(s.equations.size()), "system");
    std::vector<std::string> lines;
    for (auto const& b : sol.branches)
        lines.push_back(b.describe(s));
    r.add(Section::lemmas, "branches", std::to_string(sol.branches.size()), "exact congruence solver");
    if (!lines.empty())
        r.add(Section::lemmas, "solutions", join(lines, "\n"), "exact congruence solver");
    r.add(Section::verdict, "solution-set", sol.empty() ? "EMPTY" : "dim " + std::to_string(sol.dimension()),
          "branches");
    r.passed = true;
    return res;
}

// ---- driver ----------------------------------------------------------------

json base_invocation(Options const& o) { return {{"budget", o.budget}, {"seed", o.seed}}; }

Command make_command(std::string const& name, Options const& o)
{
    json inv = base_invocation(o);
    if (name == "verify-paper") {
        inv["m"] = o.m;
        inv["q"] = o.q;
        inv["sabotage"] = o.sabotage;
        return {inv, "", [o] { return verify_paper(o); }, false};
    }
    if (name == "model" || name == "homology") {
        if (!o.fixture.empty())
            inv["fixture"] = o.fixture;
        else if (!o.complex_file.empty())
            inv["complex"] = o.complex_file;
        else {
            inv["m"] = o.m;
            inv["q"] = o.q;
            inv["kind"] = o.kind;
        }
        inv["quotient"] = o.quotient;
        std::string inputs = o.complex_file.empty() ? "" : read_file(o.complex_file);
        if (name == "model")
            return {inv, inputs, [o] { return model_command(o); }};
        inv["ring"] = ring_or(o, "Z").name();
        return {inv, inputs, [o] { return homology_command(o); }};
    }
    if (name == "massey") {
        if (o.dga_file.empty())
            throw InputError("massey needs --dga <file>");
        std::string text = read_file(o.dga_file);
        inv["dga"] = std::filesystem::path(o.dga_file).filename().string();
        inv["degrees"] = o.degrees;
        inv["ring"] = ring_or(o, "Q").name();
        return {inv, text, [o, text] { return massey_command(o, text); }};
    }
    if (name == "pattern") {
        inv["m"] = o.m;
        inv["q"] = o.q;
        return {inv, "", [o] { return pattern_command(o); }};
    }
    if (name == "formulas") {
        inv["m"] = o.m;
        inv["n"] = o.n;
        return {inv, "", [o] { return formulas_command(o); }};
    }
    if (name == "complement") {
        inv["m"] = o.m;
        inv["q"] = o.q;
        inv["kind"] = o.kind;
        inv["ring"] = ring_or(o, "Fp:5").name();
        inv["long_running_override"] = o.long_running_override;
        return {inv, "", [o] { return complement_command(o); }};
    }
    if (name == "split-sweep") {
        inv["m"] = o.m;
        return {inv, "", [o] { return split_sweep_command(o); }};
    }
    if (name == "quaternion-test") {
        inv["m"] = o.m;
        inv["samples"] = o.samples;
        inv["wrong_map"] = o.wrong_map;
        return {inv, "", [o] { return quaternion_command(o); }};
    }
    if (name == "solve") {
        if (o.system_file.empty())
            throw InputError("solve needs --system <file>");
        std::string text = read_file(o.system_file);
        inv["system"] = std::filesystem::path(o.system_file).filename().string();
        return {inv, text, [o, text] { return solve_command(o, text); }};
    }
    throw InputError("unknown command '" + name + "'");
}

void emit(std::string const& name, Options const& o, json report, std::vector<std::pair<std::string, std::string>> const& artifacts)
{
    std::string const summary = render_summary(report);
    std::cout << summary;
    if (o.out.empty())
        return;
    std::filesystem::path const dir(o.out);
    std::filesystem::create_directories(dir);
    std::ofstream(dir / (name + ".json")) << report.dump(2) << "\n";
    std::ofstream(dir / (name + ".txt")) << summary;
    for (auto const& [file, contents] : artifacts)
        std::ofstream(dir / file) << contents;
}

int run(std::string const& name, Options const& o)
{
    auto const start = std::chrono::steady_clock::now();
    Command cmd = make_command(name, o);
    Cache const cache(o.cache_dir, cmd.cacheable && !o.no_cache);
    std::string const key = Cache::key(name, cmd.invocation, cmd.inputs);
    if (auto hit = cache.load(key)) {
        PipelineReport none;
        (*hit)["run"] = run_block(none, "hit " + key, 0);
        emit(name, o, *hit, {});
        return (*hit)["outcome"]["exit_code"].get<int>();
    }
    Outcome res;
    try {
        res = cmd.run();
    } catch (BudgetError const& e) {
        res.report = new_report(name, o);
        res.report.add(Section::model, "projected-size", fixed(e.projected(), 0), "size projection");
        res.report.budget_flags.push_back(e.what());
        res.report.add(Section::verdict, "budget", "REFUSED", "projected-size exceeds --budget");
        res.exit_code = exit_budget;
        res.message = "budget refusal (use --budget or --long-running-override)";
        json report = report_json(name, cmd.invocation, res.report, res.exit_code, res.message);
        report["run"] = run_block(res.report, "off", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
        emit(name, o, report, {});
        return exit_budget;
    }
    res.report.seed = o.seed;
    res.report.budget = o.budget;
    json report = report_json(name, cmd.invocation, res.report, res.exit_code, res.message);
    cache.store(key, report);
    report["run"] = run_block(res.report, cache.enabled() ? "miss " + key : "off",
                              std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    emit(name, o, report, res.artifacts);
    if (res.exit_code != exit_ok)
        std::cerr << "lensconf " << name << ": " << res.message << "\n";
    return res.exit_code;
}

std::string default_cache_dir()
{
    if (char const* x = std::getenv("XDG_CACHE_HOME"); x && *x)
        return std::string(x) + "/lensconf";
    if (char const* h = std::getenv("HOME"); h && *h)
        return std::string(h) + "/.cache/lensconf";
    return ".lensconf-cache";
}

} // namespace

int main(int argc, char** argv)
{
    Options o;
    o.cache_dir = default_cache_dir();
    CLI::App app{"Lens-space configuration spaces: models, homology, Massey products"};
    app.require_subcommand(1);

    auto common = [&](CLI::App* c) {
        c->add_option("--ring", o.ring, "coefficients: Z, Q or Fp:<p>");
        c->add_option("--budget", o.budget, "maximum projected top simplices (or sweep triples)")->check(CLI::PositiveNumber);
        c->add_option("--seed", o.seed, "seed recorded in the report and used by randomized checks");
        c->add_option("--out", o.out, "directory for the JSON report, summary and artifacts");
        c->add_option("--cache-dir", o.cache_dir, "report cache directory");
        c->add_flag("--no-cache", o.no_cache, "recompute and do not store");
        c->add_flag("--long-running-override", o.long_running_override, "run even when the projection exceeds the budget");
    };
    auto lens = [&](CLI::App* c) {
        c->add_option("--m,--modulus", o.m, "order of the cyclic group");
        c->add_option("--q,--twist", o.q, "twist, coprime to m");
    };
    auto complex_source = [&](CLI::App* c) {
        lens(c);
        c->add_option("--kind", o.kind, "lens model: circle-join, sd-join or raw-join");
        c->add_option("--fixture", o.fixture, "named complex (torus33, rp2, join77, wedge6s2, s0..s9, ...)");
        c->add_option("--complex", o.complex_file, "complex file");
        c->add_flag("--quotient", o.quotient, "divide the lens model by its action");
    };

    auto* verify = app.add_subcommand("verify-paper", "reproduce the nontrivial triple product and its lemmas");
    lens(verify);
    verify->add_flag("--sabotage", o.sabotage, "add a2 to the indeterminacy generators (must fail)");
    auto* model = app.add_subcommand("model", "build a simplicial model");
    complex_source(model);
    auto* homology = app.add_subcommand("homology", "simplicial homology");
    complex_source(homology);
    auto* massey = app.add_subcommand("massey", "Massey product sweep on a DGA file");
    massey->add_option("--dga", o.dga_file, "DGA file")->required();
    massey->add_option("--degrees", o.degrees, "three degrees")->expected(3);
    auto* pattern = app.add_subcommand("pattern", "membrane intersection table");
    lens(pattern);
    auto* formulas = app.add_subcommand("formulas", "Poincaré polynomial, H2 rank, fundamental group");
    formulas->add_option("--m,--modulus", o.m, "order of the cyclic group");
    formulas->add_option("--n", o.n, "number of points");
    auto* complement = app.add_subcommand("complement", "homology of S3 x S3 minus the graphs of the action");
    lens(complement);
    complement->add_option("--kind", o.kind, "lens model: circle-join, sd-join or raw-join");
    auto* split = app.add_subcommand("split-sweep", "Massey sweep on (wedge of S2) x S3");
    split->add_option("--m,--modulus", o.m, "order of the cyclic group");
    auto* quat = app.add_subcommand("quaternion-test", "exact check of the quaternionic splitting map");
    quat->add_option("--m,--modulus", o.m, "order of the cyclic group");
    quat->add_option("--samples", o.samples, "number of sample pairs");
    quat->add_flag("--wrong-map", o.wrong_map, "use (x,y) -> (xy,y) instead (must fail)");
    auto* solve = app.add_subcommand("solve", "solve a congruence system file");
    solve->add_option("--system", o.system_file, "system file")->required();
    for (auto* c : {verify, model, homology, massey, pattern, formulas, complement, split, quat, solve})
        common(c);

    try {
        app.parse(argc, argv);
    } catch (CLI::ParseError const& e) {
        int const code = app.exit(e);
        return code == 0 ? exit_ok : exit_input;
    }

    std::string const name = app.get_subcommands().front()->get_name();
    try {
        return run(name, o);
    } catch (InputError const& e) {
        std::cerr << "lensconf " << name << ": input error: " << e.what() << "\n";
        return exit_input;
    } catch (BudgetError const& e) {
        std::cerr << "lensconf " << name << ": " << e.what() << "\n";
        return exit_budget;
    } catch (VerificationError const& e) {
        std::cerr << "lensconf " << name << ": verification failed: " << e.what() << "\n";
        return exit_mismatch;
    } catch (std::exception const& e) {
        std::cerr << "lensconf " << name << ": " << e.what() << "\n";
        return exit_mismatch;
    }
}
