#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "lensconf/chaincore/homology.hpp"
#include "lensconf/chaincore/linear.hpp"
#include "lensconf/chaincore/matrix_io.hpp"
#include "lensconf/chaincore/smith.hpp"

using namespace lensconf;
using namespace lensconf::chaincore;

namespace {

SparseMatrix<Integers> int_matrix(std::vector<std::vector<long>> const& rows)
{
    std::size_t const r = rows.size(), c = rows.empty() ? 0 : rows[0].size();
    DenseMatrix<mpz_class> d(r, c, mpz_class(0));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            d(i, j) = rows[i][j];
    return SparseMatrix<Integers>::from_dense(Integers{}, d);
}

// Fraction-free determinant (test-side, independent of the Smith code).
mpz_class bareiss_det(DenseMatrix<mpz_class> a)
{
    std::size_t const n = a.rows;
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
    return n == 0 ? mpz_class(1) : mpz_class(sign * a(n - 1, n - 1));
}

// Determinantal divisors: D_k = gcd of all k×k minors; invariant factors are
// D_k / D_{k-1}. Brute-force oracle for small matrices.
std::vector<mpz_class> invariant_factors_oracle(DenseMatrix<mpz_class> const& m)
{
    std::size_t const n = std::min(m.rows, m.cols);
    std::vector<mpz_class> factors;
    mpz_class prev = 1;
    for (std::size_t k = 1; k <= n; ++k) {
        mpz_class g = 0;
        std::vector<bool> rsel(m.rows, false), csel(m.cols, false);
        std::fill(rsel.begin(), rsel.begin() + static_cast<long>(k), true);
        do {
            std::fill(csel.begin(), csel.end(), false);
            std::fill(csel.begin(), csel.begin() + static_cast<long>(k), true);
            do {
                DenseMatrix<mpz_class> sub(k, k, mpz_class(0));
                std::size_t si = 0;
                for (std::size_t i = 0; i < m.rows; ++i) {
                    if (!rsel[i])
                        continue;
                    std::size_t sj = 0;
                    for (std::size_t j = 0; j < m.cols; ++j)
                        if (csel[j])
                            sub(si, sj++) = m(i, j);
                    ++si;
                }
                mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), mpz_class(bareiss_det(sub)).get_mpz_t());
            } while (std::prev_permutation(csel.begin(), csel.end()));
        } while (std::prev_permutation(rsel.begin(), rsel.end()));
        if (sgn(g) == 0)
            break;
        factors.push_back(g / prev);
        prev = g;
    }
    return factors;
}

DenseMatrix<mpz_class> random_int_dense(std::mt19937& rng, std::size_t r, std::size_t c, int spread, double density)
{
    std::uniform_int_distribution<int> val(-spread, spread);
    std::bernoulli_distribution keep(density);
    DenseMatrix<mpz_class> d(r, c, mpz_class(0));
    for (auto& x : d.data)
        if (keep(rng))
            x = val(rng);
    return d;
}

} // namespace

TEST(SmithNormalForm, IdentityIsFixed)
{
    auto snf = smith_normal_form(int_matrix({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
    EXPECT_EQ(snf.diagonal(), (std::vector<mpz_class>{1, 1, 1}));
}

TEST(SmithNormalForm, ZeroMatrix)
{
    auto snf = smith_normal_form(int_matrix({{0, 0, 0}, {0, 0, 0}}));
    EXPECT_EQ(snf.rank(), 0u);
    EXPECT_TRUE(snf.S == DenseMatrix<mpz_class>(2, 3, mpz_class(0)));
}

TEST(SmithNormalForm, SmallExampleAgreesWithMinorOracle)
{
    auto m = int_matrix({{2, 4}, {6, 8}});
    EXPECT_EQ(invariant_factors_oracle(m.to_dense()), (std::vector<mpz_class>{2, 4}));
    EXPECT_EQ(smith_normal_form(m).diagonal(), (std::vector<mpz_class>{2, 4}));
    EXPECT_EQ(smith_diagonal(m), (std::vector<mpz_class>{2, 4}));
}

TEST(SmithNormalForm, RandomRecompositionAndDivisibility)
{
    Integers const z;
    for (unsigned seed = 1; seed <= 60; ++seed) {
        std::mt19937 rng(seed);
        std::size_t const r = 1 + rng() % 5, c = 1 + rng() % 5;
        auto dense = random_int_dense(rng, r, c, 6, 0.7);
        auto m = SparseMatrix<Integers>::from_dense(z, dense);
        auto snf = smith_normal_form(m);

        EXPECT_TRUE(dense_product(z, dense_product(z, snf.U, dense), snf.V) == snf.S) << "seed " << seed;
        EXPECT_EQ(abs(bareiss_det(snf.U)), 1) << "seed " << seed;
        EXPECT_EQ(abs(bareiss_det(snf.V)), 1) << "seed " << seed;
        for (std::size_t i = 0; i < snf.S.rows; ++i)
            for (std::size_t j = 0; j < snf.S.cols; ++j)
                if (i != j)
                    EXPECT_EQ(snf.S(i, j), 0);
        auto diag = snf.diagonal();
        for (std::size_t i = 0; i + 1 < diag.size(); ++i) {
            EXPECT_GE(diag[i], 0);
            if (sgn(diag[i]) == 0)
                EXPECT_EQ(diag[i + 1], 0);
            else
                EXPECT_TRUE(mpz_divisible_p(diag[i + 1].get_mpz_t(), diag[i].get_mpz_t()));
        }
        std::vector<mpz_class> nonzero;
        for (auto const& d : diag)
            if (sgn(d) != 0)
                nonzero.push_back(d);
        EXPECT_EQ(nonzero, invariant_factors_oracle(dense)) << "seed " << seed;
        EXPECT_EQ(smith_diagonal(m), nonzero) << "seed " << seed;
    }
}

TEST(SmithNormalForm, SparseDiagonalHandlesNonUnitResidue)
{
    // Boundary of a lens-like 2-cell attached with degree 7 around a circle.
    auto m = int_matrix({{7, 0, 1}, {0, 0, 0}, {0, 2, 0}});
    EXPECT_EQ(smith_diagonal(m), invariant_factors_oracle(m.to_dense()));
}

TEST(SolveLinear, IdentityReturnsRhs)
{
    Rationals const q;
    auto id = SparseMatrix<Rationals>::identity(q, 4);
    std::vector<mpq_class> b{1, mpq_class(-2, 3), 0, 5};
    auto x = solve_linear(id, b);
    ASSERT_TRUE(x);
    EXPECT_EQ(dense_from_sparse(q, *x, 4), b);
}

TEST(SolveLinear, DivisibilityDependsOnRing)
{
    auto mz = int_matrix({{2}});
    EXPECT_FALSE(solve_linear(mz, std::vector<mpz_class>{3}));

    Rationals const q;
    auto mq = SparseMatrix<Rationals>::from_triplets(q, 1, 1, {{0, 0, mpq_class(2)}});
    auto x = solve_linear(mq, std::vector<mpq_class>{3});
    ASSERT_TRUE(x);
    EXPECT_EQ(dense_from_sparse(q, *x, 1)[0], mpq_class(3, 2));
}

TEST(SolveLinear, PlantedSolutionOverF5)
{
    PrimeField const f(5);
    for (unsigned seed : {3u, 17u, 99u}) {
        std::mt19937 rng(seed);
        std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> trip;
        for (std::uint32_t i = 0; i < 20; ++i)
            for (std::uint32_t j = 0; j < 30; ++j)
                if (rng() % 3 == 0)
                    trip.emplace_back(i, j, f.from_int(static_cast<long>(rng() % 5)));
        auto m = SparseMatrix<PrimeField>::from_triplets(f, 20, 30, trip);
        SparseVector<PrimeField> planted;
        for (std::uint32_t j = 0; j < 30; ++j)
            if (auto v = f.from_int(static_cast<long>(rng() % 5)))
                planted.push_back({j, v});
        auto b = m.apply(planted);
        auto x = solve_linear(m, b);
        ASSERT_TRUE(x) << "seed " << seed;
        EXPECT_EQ(m.apply(*x), b);
    }
}

TEST(SolveLinear, IntegerSolutionVerifies)
{
    auto m = int_matrix({{2, 3, 0}, {0, 4, 6}});
    std::vector<mpz_class> b{5, 10};
    auto x = solve_linear(m, b);
    ASSERT_TRUE(x);
    EXPECT_EQ(m.apply(*x), sparse_from_dense<Integers>(Integers{}, b));
}

TEST(SolveLinear, DimensionMismatchThrows)
{
    auto m = int_matrix({{1, 0}, {0, 1}});
    EXPECT_THROW(solve_linear(m, std::vector<mpz_class>{1, 2, 3}), InputError);
}

TEST(SubmoduleMembership, Basics)
{
    Integers const z;
    auto yes = submodule_membership(z, {{1, 0}}, {2, 0});
    ASSERT_TRUE(yes);
    EXPECT_EQ((*yes)[0], 2);
    EXPECT_FALSE(submodule_membership(z, {{2, 0}}, {1, 0}));
    EXPECT_TRUE(submodule_membership(Rationals{}, {{2, 0}}, {1, 0}));
    EXPECT_THROW(submodule_membership(z, {{1}}, {1, 0}), InputError);
}

TEST(SubmoduleMembership, PresentedQuotientOfZ7)
{
    // e₂ against span{e₄, e₂+e₆} in ℤ⁷ / (Σ e_k): the relation joins the generators.
    Integers const z;
    auto e = [](int k) {
        std::vector<mpz_class> v(7, mpz_class(0));
        v[static_cast<std::size_t>(k)] = 1;
        return v;
    };
    std::vector<mpz_class> e26 = e(2), all(7, mpz_class(1));
    e26[6] = 1;
    EXPECT_FALSE(submodule_membership(z, {e(4), e26, all}, e(2)));
    EXPECT_FALSE(submodule_membership(Rationals{}, {{0, 0, 0, 0, 1, 0, 0}, {0, 0, 1, 0, 0, 0, 1}, {1, 1, 1, 1, 1, 1, 1}},
                                      {0, 0, 1, 0, 0, 0, 0}));
    // sanity: e₄ itself is a member
    EXPECT_TRUE(submodule_membership(z, {e(4), e26, all}, e(4)));
}

TEST(Homology, TriangleBoundaryIsCircle)
{
    Integers const z;
    // vertices 0,1,2; edges 01,02,12
    auto d1 = SparseMatrix<Integers>::from_triplets(
        z, 3, 3, {{0, 0, -1}, {1, 0, 1}, {0, 1, -1}, {2, 1, 1}, {1, 2, -1}, {2, 2, 1}});
    ChainComplex<Integers> c(z, 0, {3, 3}, {d1});
    auto h = homology(c);
    EXPECT_EQ(h.betti(), (std::vector<std::size_t>{1, 1}));
    EXPECT_EQ(h.describe(), "H0=Z H1=Z");
}

TEST(Homology, TorsionFromDegreeTwoAttachment)
{
    Integers const z;
    // one 0-cell, one 1-cell, one 2-cell attached by degree 7
    auto d1 = SparseMatrix<Integers>(z, 1, 1);
    auto d2 = SparseMatrix<Integers>::from_triplets(z, 1, 1, {{0, 0, 7}});
    auto h = homology(ChainComplex<Integers>(z, 0, {1, 1, 1}, {d1, d2}));
    EXPECT_EQ(h.describe(), "H0=Z H1=Z/7 H2=0");
    auto h7 = homology(ChainComplex<PrimeField>(PrimeField(7), 0, {1, 1, 1},
                                                {SparseMatrix<PrimeField>(PrimeField(7), 1, 1),
                                                 SparseMatrix<PrimeField>(PrimeField(7), 1, 1)}));
    EXPECT_EQ(h7.betti(), (std::vector<std::size_t>{1, 1, 1}));
}

TEST(Homology, RejectsNonComplex)
{
    Integers const z;
    auto d1 = SparseMatrix<Integers>::from_triplets(z, 1, 1, {{0, 0, 1}});
    auto d2 = SparseMatrix<Integers>::from_triplets(z, 1, 1, {{0, 0, 1}});
    EXPECT_THROW(ChainComplex<Integers>(z, 0, {1, 1, 1}, {d1, d2}), InputError);
}

TEST(MatrixFile, RoundTripIsBitExact)
{
    std::string const text = "3 2 Q\n0 0 1/2\n2 0 -3\n1 1 7\n";
    std::istringstream in(text);
    auto m = read_matrix(in);
    std::ostringstream out;
    write_matrix(out, m);
    EXPECT_EQ(out.str(), text);
}

TEST(MatrixFile, PrimeFieldValuesReduced)
{
    std::istringstream in("2 2 Fp:5\n0 0 7\n1 1 -1\n");
    auto m = std::get<SparseMatrix<PrimeField>>(read_matrix(in));
    EXPECT_EQ(m.at(0, 0), 2u);
    EXPECT_EQ(m.at(1, 1), 4u);
}

TEST(MatrixFile, ErrorsCarryLineNumbers)
{
    std::istringstream bad("2 2 Z\n0 0 1\n0 x 1\n");
    try {
        read_matrix(bad);
        FAIL();
    } catch (InputError const& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }
    std::istringstream dup("2 2 Z\n0 0 1\n0 0 2\n");
    EXPECT_THROW(read_matrix(dup), InputError);
    std::istringstream ring("2 2 Fp:6\n");
    EXPECT_THROW(read_matrix(ring), InputError);
}
