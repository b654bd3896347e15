// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "lensconf/chaincore/smith.hpp"
#include "lensconf/confspaces.hpp"
#include "lensconf/cupmassey.hpp"
#include "lensconf/cupmassey/dga_io.hpp"
#include "lensconf/dualcalc.hpp"
#include "lensconf/simplicial.hpp"
#include "massey_oracle.hpp"

using namespace lensconf;

namespace {

struct Result
{
    bool ok = true;
    std::string detail;

    void require(bool cond, std::string const& what)
    {
        if (!cond) {
            ok = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

using Clock = std::chrono::steady_clock;

std::vector<std::size_t> betti(simplicial::SimplicialComplex const& k, chaincore::CoefficientRing r)
{
    return simplicial::simplicial_homology(k, r).betti();
}

std::vector<std::size_t> convolve(std::vector<std::size_t> const& a, std::vector<std::size_t> const& b)
{
    std::vector<std::size_t> c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            c[i + j] += a[i] * b[j];
    return c;
}

template <typename Ring>
simplicial::Cochain<Ring> named(cupmassey::DGA<Ring> const& a, int d, std::string const& name)
{
    for (std::uint32_t i = 0; i < a.dim(d); ++i)
        if (a.name(d, i) == name)
            return a.basis(d, i);
    throw std::runtime_error("no element " + name);
}

template <typename Ring>
cupmassey::DGA<Ring> heisenberg(Ring ring = Ring{})
{
    std::ifstream in(LENSCONF_DATA_DIR "/heisenberg.dga");
    return cupmassey::read_dga(in, ring);
}

mpz_class bareiss_det(chaincore::DenseMatrix<mpz_class> a)
{
    std::size_t const n = a.rows;
    if (n == 0)
        return 1;
    mpz_class prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (sgn(a(k, k)) == 0) {
            std::size_t s = k + 1;
            while (s < n && sgn(a(s, k)) == 0)
                ++s;
            if (s == n)
                return 0;
            for (std::size_t j = 0; j < n; ++j)
                std::swap(a(k, j), a(s, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

// ---- criteria ---------------------------------------------------------------

Result theorem_reproduction()
{
    Result r;
    std::string const cmd = std::string(LENSCONF_CLI) + " verify-paper --no-cache > verify.out 2>&1";
    int const status = std::system(cmd.c_str());
    r.require(status == 0, "verify-paper exit status " + std::to_string(status));
    std::ifstream in("verify.out");
    std::stringstream text;
    text << in.rdbuf();
    r.require(text.str().find("massey.representative: a₂∪ι") != std::string::npos, "report lacks representative a₂∪ι");

    dualcalc::H5Presentation const h(7);
    auto const out = dualcalc::massey_via_intersection(7, 2, h.basis(4), h.basis(1), dualcalc::parse_class("a2+a6", 7));
    auto neg = h.basis(2);
    for (auto& c : neg)
        c = -c;
    r.require(out.verdict == dualcalc::MasseyVerdict::nontrivial, "verdict " + dualcalc::massey_verdict_name(out.verdict));
    r.require(out.representative == h.basis(2) || out.representative == neg, "representative " + out.representative_text);
    r.require(out.indeterminacy == std::vector<dualcalc::ClassVector>{h.basis(4), dualcalc::parse_class("a2+a6", 7)},
              "indeterminacy differs");
    r.detail = r.ok ? "NONTRIVIAL, representative " + out.representative_text + ", indeterminacy {" +
                          out.indeterminacy_text[0] + ", " + out.indeterminacy_text[1] + "}"
                    : r.detail;
    return r;
}

Result lemma_suite()
{
    using namespace dualcalc;
    Result r;
    auto const t = intersection_pattern(7, 2);
    for (long k = 0; k < 7; ++k)
        for (long j = 0; j < 7; ++j) {
            long const off = ((j - k) % 7 + 7) % 7;
            if (k != j && t.cell(k, j).meets != (off == 3 || off == 4))
                r.require(false, "pattern cell A" + std::to_string(k) + "∩A" + std::to_string(j));
        }

    auto const cyl = intersect(membrane(1, 7, 2).patch, membrane(4, 7, 2, "s").patch);
    auto const ess = essential_branches(cyl.patch, 2);
    r.require(ess.size() == 1, "A1∩A4 branch count");
    if (ess.size() == 1) {
        r.require(ess[0].parameter_dimension == 1, "A1∩A4 is not a 1-parameter branch");
        r.require(ess[0].is_zero("x1"), "A1∩A4 first coordinates not zero");
    }

    r.require(intersect(bounding_chain_X14(), membrane(6, 7, 2, "s").patch).patch.empty(), "X14∩A6 nonempty");

    auto const a2 = membrane(2, 7, 2, "s").patch;
    auto const x2 = intersect(bounding_chain_X14(), a2);
    auto const sols = x2.patch.solve();
    r.require(sols.branches.size() == 1, "X14∩A2 branch count");
    if (sols.branches.size() == 1) {
        r.require(sols.branches[0].describe(x2.patch.system()) == "r = 1, x = 0, t = (1 + s)/4, s in [0,1]; dim 1",
                  "X14∩A2 branch " + sols.branches[0].describe(x2.patch.system()));
        r.require(restrict_to(x2.patch, sols.branches[0]).to_string() == "((1, 0), (zeta(4t), 0))", "X14∩A2 piece");
    }
    auto const slice_part = intersect(a2, slice(7)).patch;
    r.require(slice_part.to_string() == "((1, 0), (zeta(1 + s), 0))", "A2∩S " + slice_part.to_string());
    r.require(same_set(x2.patch, slice_part), "X14∩A2 ≠ {((1,0),(ζ^{1+s},0))}");

    auto const faces = classify_boundary(bounding_chain_X14(), 2, {{"A1∩A4", cyl.patch}});
    std::string ft;
    for (auto const& f : faces)
        ft += (ft.empty() ? "" : "; ") + f.to_string();
    r.require(ft == "t=0: inside D0; t=1: inside D4; r=0: equals A1∩A4", "faces " + ft);
    if (r.ok)
        r.detail = "offsets {3,4}; " + ft;
    return r;
}

Result transversality()
{
    using namespace dualcalc;
    Result r;
    auto const cyl = intersect(membrane(1, 7, 2).patch, membrane(4, 7, 2, "s").patch);
    auto const x2 = intersect(bounding_chain_X14(), membrane(2, 7, 2, "s").patch);
    std::vector<std::pair<std::string, std::pair<Intersection const*, SolutionBranch>>> checks{
        {"A1∩A4", {&cyl, essential_branches(cyl.patch, 2).at(0)}},
        {"X14∩A2", {&x2, essential_branches(x2.patch, 2).at(0)}},
    };
    for (auto const& [name, c] : checks) {
        auto const cert = dualcalc::transversality(*c.first, c.second);
        bool const ok = cert.verdict == cyclosolve::RankVerdict::certified && cert.margin > 0 &&
                        cyclosolve::verify_certificate(tangent_frame(*c.first, c.second), cert);
        r.require(ok, name + " " + cyclosolve::rank_verdict_name(cert.verdict) + " " + cert.message);
        std::ostringstream m;
        m << name << " margin " << cert.margin << " over " << cert.leaves.size() << " boxes";
        if (ok)
            r.detail += (r.detail.empty() ? "" : "; ") + m.str();
    }
    return r;
}

Result vanishing_side()
{
    Result r;
    auto const rep = confspaces::split_model_sweep(7);
    r.require(rep.passed, "sweep not all trivial");
    r.require(rep.value("betti-Q") == "(1,0,6,1,0,6)", "betti " + rep.value("betti-Q"));
    r.require(rep.value("triples") == "216" && rep.value("admissible") == "216", "sweep incomplete");
    r.detail = rep.value("trivial") + "/" + rep.value("triples") + " triples TRIVIAL over Q on " +
               rep.value("top-simplices") + " top simplices";
    return r;
}

Result massey_oracle()
{
    Result r;
    auto const tally = oracle::run_oracle_comparison(220, 20260601);
    r.require(tally.dgas >= 200 && tally.disagree == 0, std::to_string(tally.disagree) + " disagreements");
    r.require(tally.trivial > 0 && tally.nontrivial > 0, "oracle saw only one verdict kind");

    auto a = heisenberg<chaincore::Rationals>();
    cupmassey::MasseyEngine<chaincore::Rationals> e(a);
    auto const A = named(a, 1, "a"), B = named(a, 1, "b");
    auto const out = e.triple(A, A, B);
    r.require(out.verdict == cupmassey::Verdict::nontrivial, "Heisenberg triple trivial");
    r.require(out.representative == named(a, 2, "ac"), "Heisenberg representative " + a.format(out.representative));
    for (auto const& c : out.indeterminacy_coords)
        for (auto const& v : c)
            r.require(v == 0, "Heisenberg indeterminacy nonzero");
    if (r.ok)
        r.detail = std::to_string(tally.dgas) + " DGAs, " + std::to_string(tally.agree) +
                   " triples agree; Heisenberg [" + a.format(out.representative) + "] with zero indeterminacy";
    return r;
}

Result homology_correctness()
{
    using namespace simplicial;
    Result r;
    auto const Z = chaincore::CoefficientRing::integers();
    auto desc = [&](SimplicialComplex const& k) { return simplicial_homology(k, Z).describe(); };
    std::vector<std::string> const spheres{"H0=Z^2", "H0=Z H1=Z", "H0=Z H1=0 H2=Z", "H0=Z H1=0 H2=0 H3=Z",
                                           "H0=Z H1=0 H2=0 H3=0 H4=Z"};
    for (int n = 0; n <= 4; ++n)
        r.require(desc(boundary_sphere(n)) == spheres[static_cast<std::size_t>(n)], "S" + std::to_string(n));
    r.require(desc(named_fixture("torus33")) == "H0=Z H1=Z^2 H2=Z", "torus");
    r.require(desc(named_fixture("rp2")) == "H0=Z H1=Z/2 H2=0", "RP2 " + desc(named_fixture("rp2")));
    auto const j = named_fixture("join77");
    r.require(j.f_vector() == std::vector<std::size_t>{14, 63, 98, 49}, "join counts");
    r.require(j.euler_characteristic() == 0 && desc(j) == "H0=Z H1=0 H2=0 H3=Z", "join homology");
    for (int q : {1, 2}) {
        auto const lens = quotient(lens_model(LensModelKind::sd_join, 7, q).action);
        r.require(desc(lens.complex) == "H0=Z H1=Z/7 H2=0 H3=Z", "L(7," + std::to_string(q) + ") " + desc(lens.complex));
    }
    if (r.ok)
        r.detail = "S0..S4, torus, RP2 (Z/2), join 14/63/98/49, L(7,1) and L(7,2) with H1=Z/7";
    return r;
}

Result complement_small()
{
    Result r;
    for (long m : {2L, 3L}) {
        auto const rep = confspaces::complement_pipeline(m, 1);
        std::string const want = m == 2 ? "(1,0,1,1,0,1)" : "(1,0,2,1,0,2)";
        r.require(rep.passed && rep.value("betti") == want, "m=" + std::to_string(m) + " betti " + rep.value("betti"));
        r.detail += (r.detail.empty() ? "" : "; ") + std::string("m=") + std::to_string(m) + " " + rep.value("betti");
    }
    try {
        confspaces::complement_pipeline(7, 2);
        r.require(false, "(7,2) not refused");
    } catch (BudgetError const& e) {
        r.detail += "; (7,2) refused, projection " + std::to_string(static_cast<long>(e.projected()));
    }
    return r;
}

Result formulas()
{
    Result r;
    for (long n = 1; n <= 100; ++n)
        r.require(confspaces::h2_rank(7, n) == mpz_class(n - 1) * (7 * n - 2) / 2, "h2_rank(7," + std::to_string(n) + ")");
    r.require(confspaces::poincare_polynomial(7, 2).to_string() == "1 + 6q^2 + q^3 + 6q^5", "poincare(7,2)");
    r.require(confspaces::fundamental_group_summary(7, 2, true).order == 49, "ordered order");
    r.require(confspaces::fundamental_group_summary(7, 2, false).order == 98, "unordered order");
    if (r.ok)
        r.detail = "h2 closed forms agree for n<=100; P = 1 + 6q^2 + q^3 + 6q^5; orders 49, 98";
    return r;
}

Result property_suites()
{
    using namespace simplicial;
    Result r;
    auto const F5 = chaincore::CoefficientRing::prime_field(5);

    // ∂∂ = 0, multiplied out explicitly
    std::vector<SimplicialComplex> generated;
    for (auto name : {"s0", "s1", "s2", "s3", "s4", "torus33", "rp2", "join77", "wedge6s2"})
        generated.push_back(named_fixture(name));
    generated.push_back(staircase_product(polygon(4), boundary_sphere(2)));
    generated.push_back(*circle_join(3, 1).complex);
    generated.push_back(*sd_join(3, 2).complex);
    generated.push_back(quotient(sd_join(5, 2).action).complex);
    std::mt19937 rng(4242);
    for (int t = 0; t < 30; ++t) {
        std::vector<Simplex> gens;
        for (int g = 0; g < 6; ++g) {
            Simplex s;
            for (Vertex v = 0; v < 7; ++v)
                if (rng() % 2)
                    s.push_back(v);
            if (!s.empty())
                gens.push_back(s);
        }
        if (!gens.empty())
            generated.push_back(SimplicialComplex::from_simplices(gens));
    }
    std::size_t dd_checked = 0;
    for (auto const& k : generated) {
        auto const c = chain_complex(k, chaincore::Integers{});
        for (int d = c.min_degree() + 2; d <= c.max_degree(); ++d, ++dd_checked)
            r.require(c.boundary(d - 1).multiply(c.boundary(d)).is_zero(), "∂∂ ≠ 0");
    }

    // Smith normal form: U·M·V = S, unimodular U and V, d_i | d_{i+1}
    chaincore::Integers const z;
    for (unsigned seed = 1; seed <= 60; ++seed) {
        std::mt19937 g(seed);
        std::size_t const rows = 1 + g() % 6, cols = 1 + g() % 6;
        chaincore::DenseMatrix<mpz_class> m(rows, cols, mpz_class(0));
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j)
                if (g() % 10 < 7)
                    m(i, j) = static_cast<long>(g() % 13) - 6;
        auto const snf = chaincore::smith_normal_form(chaincore::SparseMatrix<chaincore::Integers>::from_dense(z, m));
        r.require(chaincore::dense_product(z, chaincore::dense_product(z, snf.U, m), snf.V) == snf.S,
                  "SNF recomposition seed " + std::to_string(seed));
        r.require(abs(bareiss_det(snf.U)) == 1 && abs(bareiss_det(snf.V)) == 1, "SNF unimodularity");
        auto const d = snf.diagonal();
        for (std::size_t i = 0; i + 1 < d.size(); ++i)
            r.require(sgn(d[i]) == 0 ? sgn(d[i + 1]) == 0 : mpz_divisible_p(d[i + 1].get_mpz_t(), d[i].get_mpz_t()) != 0,
                      "SNF divisibility");
    }

    // Künneth over F5
    std::vector<SimplicialComplex> factors{polygon(3), boundary_sphere(2), named_fixture("rp2"), boundary_sphere(0),
                                           named_fixture("torus33")};
    std::size_t products = 0;
    for (std::size_t a = 0; a < factors.size(); ++a)
        for (std::size_t b = a; b < factors.size(); ++b) {
            if (factors[a].count(0) * factors[b].count(0) > 100)
                continue;
            auto const p = staircase_product(factors[a], factors[b]);
            ++products;
            r.require(betti(p, F5) == convolve(betti(factors[a], F5), betti(factors[b], F5)), "Künneth");
        }

    // Massey verdicts under 100 random lift re-solves
    auto h = heisenberg<chaincore::Rationals>();
    cupmassey::MasseyEngine<chaincore::Rationals> e(h);
    auto const A = named(h, 1, "a"), B = named(h, 1, "b");
    auto const tor = share(named_fixture("torus33"));
    auto const td = cupmassey::simplicial_to_dga(tor, chaincore::Rationals{});
    cupmassey::MasseyEngine<chaincore::Rationals> et(td);
    auto const& t1 = et.cohomology_basis(1);
    auto const base1 = e.triple(A, A, B), base2 = e.triple(A, B, A), base3 = et.triple(t1[0], t1[0], t1[0]);
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        std::mt19937_64 g(seed);
        auto const o1 = e.triple(A, A, B, cupmassey::LiftChoice::random, &g);
        auto const o2 = e.triple(A, B, A, cupmassey::LiftChoice::random, &g);
        auto const o3 = et.triple(t1[0], t1[0], t1[0], cupmassey::LiftChoice::random, &g);
        r.require(o1.verdict == base1.verdict && o2.verdict == base2.verdict && o3.verdict == base3.verdict,
                  "lift re-solve seed " + std::to_string(seed));
    }

    auto const q = confspaces::quaternion_split_test(7, 10000, 20240517);
    r.require(q.passed(), std::to_string(q.failure_count) + " quaternion failures (seed 20240517)");
    if (r.ok)
        r.detail = std::to_string(dd_checked) + " ∂∂ products, 60 SNFs, " + std::to_string(products) +
                   " Künneth products, 100 lift seeds, " + std::to_string(q.samples) + " quaternion samples (seed " +
                   std::to_string(q.seed) + ")";
    return r;
}

} // namespace

int main()
{
    struct Criterion
    {
        int id;
        char const* name;
        double limit; // seconds
        std::function<Result()> run;
    };
    std::array<Criterion, 9> const criteria{{
        {1, "theorem reproduction", 10, theorem_reproduction},
        {2, "membrane lemma suite", 5, lemma_suite},
        {3, "transversality certificates", 30, transversality},
        {4, "vanishing side sweep", 600, vanishing_side},
        {5, "Massey engine oracle equivalence", 600, massey_oracle},
        {6, "homology correctness", 600, homology_correctness},
        {7, "small-m complement pipeline", 1800, complement_small},
        {8, "closed formulas", 600, formulas},
        {9, "property suites", 600, property_suites},
    }};
    int failed = 0;
    for (auto const& c : criteria) {
        auto const start = Clock::now();
        Result res;
        try {
            res = c.run();
        } catch (std::exception const& e) {
            res.ok = false;
            res.detail = std::string("exception: ") + e.what();
        }
        double const secs = std::chrono::duration<double>(Clock::now() - start).count();
        if (secs > c.limit) {
            res.ok = false;
            res.detail += " (over the " + std::to_string(static_cast<int>(c.limit)) + " s limit)";
        }
        failed += !res.ok;
        std::printf("CRITERION %d %s  %s  (%.2f s)  %s\n", c.id, res.ok ? "PASS" : "FAIL", c.name, secs,
                    res.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%s: %d of %zu criteria failed\n", failed ? "FAIL" : "PASS", failed, criteria.size());
    return failed ? 1 : 0;
}
