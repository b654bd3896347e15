#include <gtest/gtest.h>

#include "lensconf/confspaces.hpp"

using namespace lensconf;
using namespace lensconf::confspaces;

namespace {

std::vector<mpz_class> ints(std::initializer_list<long> v)
{
    std::vector<mpz_class> out;
    for (long x : v)
        out.emplace_back(x);
    return out;
}

/// Π (1 + c_k x²) · (1 + x³) evaluated factor by factor.
mpz_class product_at(long m, long n, mpz_class const& x)
{
    mpz_class v = 1 + x * x * x;
    for (long k = 1; k < n; ++k)
        v *= 1 + mpz_class(m * k - 1) * x * x;
    return v;
}

} // namespace

TEST(Formulas, PoincareSmallCases)
{
    EXPECT_EQ(poincare_polynomial(7, 1).coefficients, ints({1, 0, 0, 1}));
    EXPECT_EQ(poincare_polynomial(7, 2).coefficients, ints({1, 0, 6, 1, 0, 6}));
    EXPECT_EQ(poincare_polynomial(7, 2).to_string(), "1 + 6q^2 + q^3 + 6q^5");
    EXPECT_EQ(poincare_polynomial(7, 3).coefficient(2), 19);
    EXPECT_EQ(poincare_polynomial(2, 2).coefficients, ints({1, 0, 1, 1, 0, 1}));
}

TEST(Formulas, PoincareAgreesWithFactorwiseEvaluation)
{
    for (long m = 2; m <= 9; ++m)
        for (long n = 1; n <= 6; ++n) {
            auto const p = poincare_polynomial(m, n);
            EXPECT_EQ(p.degree(), 3 + 2 * (n - 1));
            for (long x = -3; x <= 3; ++x)
                EXPECT_EQ(p.evaluate(x), product_at(m, n, x)) << m << " " << n << " " << x;
        }
}

TEST(Formulas, PoincareVanishesAtMinusOne)
{
    for (long m = 2; m <= 12; ++m)
        for (long n = 1; n <= 8; ++n)
            EXPECT_EQ(poincare_polynomial(m, n).evaluate(-1), 0);
}

TEST(Formulas, H2RankClosedForms)
{
    EXPECT_EQ(h2_rank(7, 2), 6);
    EXPECT_EQ(h2_rank(7, 10), 306);
    EXPECT_EQ(h2_rank(5, 1), 0);
    for (long n = 1; n <= 100; ++n) {
        EXPECT_EQ(h2_rank(7, n), h2_rank_closed_form_7(n)) << n;
        EXPECT_EQ(h2_rank(7, n), poincare_polynomial(7, n).coefficient(2)) << n;
    }
    for (long m = 2; m <= 11; ++m)
        for (long n = 1; n <= 20; ++n)
            EXPECT_EQ(h2_rank(m, n), mpz_class(m) * n * (n - 1) / 2 - (n - 1));
}

TEST(Formulas, FundamentalGroupOrders)
{
    auto o = fundamental_group_summary(7, 2, true);
    EXPECT_EQ(o.family, "Z7xZ7");
    EXPECT_EQ(o.order, 49);
    EXPECT_EQ(fundamental_group_summary(7, 2, false).order, 98);
    EXPECT_EQ(fundamental_group_summary(5, 1, true).family, "Z5");
    for (long m = 2; m <= 8; ++m)
        for (long n = 1; n <= 8; ++n) {
            mpz_class ordered = 1, unordered = 1;
            for (long i = 1; i <= n; ++i) {
                ordered *= m;
                unordered *= m * i;
            }
            EXPECT_EQ(fundamental_group_summary(m, n, true).order, ordered);
            EXPECT_EQ(fundamental_group_summary(m, n, false).order, unordered);
        }
}

TEST(Formulas, RejectsBadParameters)
{
    EXPECT_THROW(poincare_polynomial(1, 2), InputError);
    EXPECT_THROW(h2_rank(7, 0), InputError);
    EXPECT_THROW(fundamental_group_summary(0, 1, true), InputError);
}

TEST(Cyclotomic, KnownPolynomials)
{
    EXPECT_EQ(CyclotomicField::cyclotomic_polynomial(1), ints({-1, 1}));
    EXPECT_EQ(CyclotomicField::cyclotomic_polynomial(4), ints({1, 0, 1}));
    EXPECT_EQ(CyclotomicField::cyclotomic_polynomial(12), ints({1, 0, -1, 0, 1}));
    EXPECT_EQ(CyclotomicField::cyclotomic_polynomial(7), ints({1, 1, 1, 1, 1, 1, 1}));
    EXPECT_EQ(CyclotomicField(28).degree(), 12u);
}

TEST(Cyclotomic, FieldIdentities)
{
    for (long n : {4L, 12L, 28L}) {
        CyclotomicField f(n);
        auto const z = f.zeta(1);
        auto p = f.one();
        for (long e = 0; e < n; ++e) {
            EXPECT_EQ(p, f.zeta(e));
            EXPECT_EQ(f.mul(f.zeta(e), f.conj(f.zeta(e))), f.one());
            p = f.mul(p, z);
        }
        EXPECT_EQ(p, f.one());
        // 1 + ζ + … + ζ^{n−1} = 0 for n > 1
        auto s = f.zero();
        for (long e = 0; e < n; ++e)
            s = f.add(s, f.zeta(e));
        EXPECT_EQ(s, f.zero());
        auto const a = f.add(f.zeta(3), f.mul(f.from_rational(mpq_class(2, 3)), f.zeta(n - 1)));
        EXPECT_EQ(f.conj(f.conj(a)), a);
    }
}

TEST(Quaternion, AlgebraIdentities)
{
    QuaternionAlgebra h(7);
    auto const x = h.sphere_point(mpq_class(1, 2), mpq_class(-3), mpq_class(2, 5));
    auto const y = h.sphere_point(mpq_class(4), mpq_class(1, 7), mpq_class(-1, 3));
    auto const& f = h.field();
    EXPECT_EQ(h.norm2(x), f.one());
    EXPECT_EQ(h.mul(x, h.unit_inverse(x)), (Quaternion{f.one(), f.zero()}));
    EXPECT_EQ(h.mul(h.unit_inverse(x), x), (Quaternion{f.one(), f.zero()}));
    // i j = k, j i = −k
    auto const i = h.from_real(0, 1, 0, 0), j = h.from_real(0, 0, 1, 0), k = h.from_real(0, 0, 0, 1);
    EXPECT_EQ(h.mul(i, j), k);
    EXPECT_EQ(h.mul(j, i), h.from_real(0, 0, 0, -1));
    EXPECT_EQ(h.mul(j, j), h.from_real(-1, 0, 0, 0));
    EXPECT_FALSE(h.mul(x, y) == h.mul(y, x));
    EXPECT_EQ(h.norm2(h.mul(x, y)), f.one());
}

TEST(Quaternion, SplitEquivalenceSevenTenThousand)
{
    auto const rep = quaternion_split_test(7, 10000, 20240517);
    EXPECT_TRUE(rep.passed());
    EXPECT_EQ(rep.checks, 70000u);
    EXPECT_EQ(rep.orbit_samples, 5000u);
    EXPECT_EQ(rep.seed, 20240517u);
}

TEST(Quaternion, SplitEquivalenceSmallModuli)
{
    for (long m : {2L, 3L, 4L, 6L})
        EXPECT_TRUE(quaternion_split_test(m, 500, 7 + static_cast<std::uint64_t>(m)).passed()) << m;
}

TEST(Quaternion, WrongMapFails)
{
    auto const wrong = [](QuaternionAlgebra const& h, Quaternion const& x, Quaternion const& y) { return h.mul(x, y); };
    auto const rep = quaternion_split_test(7, 200, 99, wrong);
    EXPECT_FALSE(rep.passed());
    ASSERT_FALSE(rep.failures.empty());
    EXPECT_TRUE(rep.failures.front().orbit);
}

TEST(Quaternion, ReplayIsDeterministic)
{
    auto const wrong = [](QuaternionAlgebra const& h, Quaternion const& x, Quaternion const& y) { return h.mul(x, y); };
    auto const a = quaternion_split_test(5, 100, 1234, wrong);
    auto const b = quaternion_split_test(5, 100, 1234, wrong);
    ASSERT_EQ(a.failure_count, b.failure_count);
    for (std::size_t i = 0; i < a.failures.size(); ++i) {
        EXPECT_EQ(a.failures[i].sample, b.failures[i].sample);
        EXPECT_EQ(a.failures[i].k, b.failures[i].k);
    }
}

TEST(SplitSweep, SevenIsAllTrivial)
{
    auto const rep = split_model_sweep(7);
    EXPECT_TRUE(rep.passed);
    EXPECT_EQ(rep.value("betti-Q"), "(1,0,6,1,0,6)");
    EXPECT_EQ(rep.value("triples"), "216");
    EXPECT_EQ(rep.value("nontrivial"), "0");
    EXPECT_EQ(rep.value("massey-products"), "ALL-TRIVIAL");
    EXPECT_EQ(rep.value("top-simplices"), std::to_string(split_model_top_count(7)));
    for (auto const& c : rep.claims)
        EXPECT_FALSE(c.evidence.empty());
}

TEST(SplitSweep, SmallModuli)
{
    for (long m : {2L, 3L}) {
        auto const rep = split_model_sweep(m);
        EXPECT_TRUE(rep.passed) << m;
        EXPECT_EQ(rep.value("triples"), std::to_string((m - 1) * (m - 1) * (m - 1)));
    }
}

TEST(SplitSweep, BudgetRefusal)
{
    try {
        split_model_sweep(7, 1000);
        FAIL() << "expected a budget refusal";
    } catch (BudgetError const& e) {
        EXPECT_EQ(e.projected(), 1200);
    }
}

TEST(Complement, MTwo)
{
    auto const rep = complement_pipeline(2, 1);
    EXPECT_TRUE(rep.passed);
    EXPECT_EQ(rep.value("betti"), "(1,0,1,1,0,1)");
    EXPECT_EQ(rep.value("euler"), "0");
    EXPECT_EQ(rep.value("product-top-simplices"), "5120");
}

TEST(Complement, MThreeIndependentOfTwist)
{
    auto const a = complement_pipeline(3, 1);
    auto const b = complement_pipeline(3, 2);
    EXPECT_TRUE(a.passed);
    EXPECT_TRUE(b.passed);
    EXPECT_EQ(a.value("betti"), "(1,0,2,1,0,2)");
    EXPECT_EQ(a.value("betti"), b.value("betti"));
}

TEST(Complement, BudgetRefusalWithProjection)
{
    try {
        complement_pipeline(7, 2);
        FAIL() << "expected a budget refusal";
    } catch (BudgetError const& e) {
        EXPECT_EQ(e.projected(), 196.0 * 196.0 * 20);
        EXPECT_NE(std::string(e.what()).find("768320"), std::string::npos);
    }
    ComplementOptions sd;
    sd.kind = simplicial::LensModelKind::sd_join;
    try {
        complement_pipeline(7, 2, sd);
        FAIL() << "expected a budget refusal";
    } catch (BudgetError const& e) {
        EXPECT_EQ(e.projected(), 27659520.0);
    }
}

TEST(Complement, RejectsBadInput)
{
    EXPECT_THROW(complement_pipeline(6, 2), InputError);
    EXPECT_THROW(complement_pipeline(1, 1), InputError);
    // the unsubdivided join is not a free simplicial action
    ComplementOptions raw;
    raw.kind = simplicial::LensModelKind::raw_join;
    EXPECT_THROW(complement_pipeline(3, 1, raw), InputError);
}
