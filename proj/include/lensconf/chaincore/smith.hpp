#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "lensconf/chaincore/sparse_matrix.hpp"

namespace lensconf::chaincore {

/// U·M·V = S with U, V unimodular and S diagonal with d₁ | d₂ | … ≥ 0.
struct SmithForm
{
    DenseMatrix<mpz_class> S;
    DenseMatrix<mpz_class> U;
    DenseMatrix<mpz_class> V;

    std::vector<mpz_class> diagonal() const
    {
        std::vector<mpz_class> d;
        for (std::size_t i = 0; i < std::min(S.rows, S.cols); ++i)
            d.push_back(S(i, i));
        return d;
    }

    std::size_t rank() const
    {
        std::size_t r = 0;
        for (auto const& d : diagonal())
            r += sgn(d) != 0;
        return r;
    }
};

namespace detail {

inline DenseMatrix<mpz_class> identity_dense(std::size_t n)
{
    DenseMatrix<mpz_class> m(n, n, mpz_class(0));
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

// Dense Smith reduction. Row operations are mirrored into U, column
// operations into V (when tracked).
template <bool Track>
struct DenseSmith
{
    DenseMatrix<mpz_class> S;
    DenseMatrix<mpz_class> U;
    DenseMatrix<mpz_class> V;

    explicit DenseSmith(DenseMatrix<mpz_class> m) : S(std::move(m))
    {
        if constexpr (Track) {
            U = identity_dense(S.rows);
            V = identity_dense(S.cols);
        }
    }

    void swap_rows(std::size_t a, std::size_t b)
    {
        if (a == b)
            return;
        for (std::size_t j = 0; j < S.cols; ++j)
            std::swap(S(a, j), S(b, j));
        if constexpr (Track)
            for (std::size_t j = 0; j < U.cols; ++j)
                std::swap(U(a, j), U(b, j));
    }

    void swap_cols(std::size_t a, std::size_t b)
    {
        if (a == b)
            return;
        for (std::size_t i = 0; i < S.rows; ++i)
            std::swap(S(i, a), S(i, b));
        if constexpr (Track)
            for (std::size_t i = 0; i < V.rows; ++i)
                std::swap(V(i, a), V(i, b));
    }

    // row_target += q · row_source
    void add_row(std::size_t target, std::size_t source, mpz_class const& q)
    {
        for (std::size_t j = 0; j < S.cols; ++j)
            if (sgn(S(source, j)) != 0)
                S(target, j) += q * S(source, j);
        if constexpr (Track)
            for (std::size_t j = 0; j < U.cols; ++j)
                if (sgn(U(source, j)) != 0)
                    U(target, j) += q * U(source, j);
    }

    // col_target += q · col_source
    void add_col(std::size_t target, std::size_t source, mpz_class const& q)
    {
        for (std::size_t i = 0; i < S.rows; ++i)
            if (sgn(S(i, source)) != 0)
                S(i, target) += q * S(i, source);
        if constexpr (Track)
            for (std::size_t i = 0; i < V.rows; ++i)
                if (sgn(V(i, source)) != 0)
                    V(i, target) += q * V(i, source);
    }

    void negate_row(std::size_t r)
    {
        for (std::size_t j = 0; j < S.cols; ++j)
            S(r, j) = -S(r, j);
        if constexpr (Track)
            for (std::size_t j = 0; j < U.cols; ++j)
                U(r, j) = -U(r, j);
    }

    std::optional<std::pair<std::size_t, std::size_t>> smallest_from(std::size_t t) const
    {
        std::optional<std::pair<std::size_t, std::size_t>> best;
        mpz_class best_abs;
        for (std::size_t i = t; i < S.rows; ++i)
            for (std::size_t j = t; j < S.cols; ++j) {
                if (sgn(S(i, j)) == 0)
                    continue;
                mpz_class a = abs(S(i, j));
                if (!best || a < best_abs) {
                    best = {i, j};
                    best_abs = a;
                    if (best_abs == 1)
                        return best;
                }
            }
        return best;
    }

    void run()
    {
        std::size_t const n = std::min(S.rows, S.cols);
        for (std::size_t t = 0; t < n; ++t) {
            auto pos = smallest_from(t);
            if (!pos)
                break;
            swap_rows(t, pos->first);
            swap_cols(t, pos->second);
            for (;;) {
                bool clean = true;
                for (std::size_t i = t + 1; i < S.rows; ++i) {
                    if (sgn(S(i, t)) == 0)
                        continue;
                    mpz_class q = S(i, t) / S(t, t);
                    add_row(i, t, -q);
                    if (sgn(S(i, t)) != 0)
                        clean = false;
                }
                for (std::size_t j = t + 1; j < S.cols; ++j) {
                    if (sgn(S(t, j)) == 0)
                        continue;
                    mpz_class q = S(t, j) / S(t, t);
                    add_col(j, t, -q);
                    if (sgn(S(t, j)) != 0)
                        clean = false;
                }
                if (!clean) {
                    // a remainder smaller than the pivot survived; move it in
                    std::size_t bi = t, bj = t;
                    mpz_class best = abs(S(t, t));
                    for (std::size_t i = t + 1; i < S.rows; ++i)
                        if (sgn(S(i, t)) != 0 && abs(S(i, t)) < best) {
                            best = abs(S(i, t));
                            bi = i;
                            bj = t;
                        }
                    for (std::size_t j = t + 1; j < S.cols; ++j)
                        if (sgn(S(t, j)) != 0 && abs(S(t, j)) < best) {
                            best = abs(S(t, j));
                            bi = t;
                            bj = j;
                        }
                    swap_rows(t, bi);
                    swap_cols(t, bj);
                    continue;
                }
                // divisibility of the remaining block by the pivot
                std::optional<std::size_t> bad_row;
                for (std::size_t i = t + 1; i < S.rows && !bad_row; ++i)
                    for (std::size_t j = t + 1; j < S.cols; ++j)
                        if (sgn(S(i, j)) != 0 && !mpz_divisible_p(S(i, j).get_mpz_t(), S(t, t).get_mpz_t())) {
                            bad_row = i;
                            break;
                        }
                if (!bad_row)
                    break;
                add_row(t, *bad_row, 1);
            }
            if (sgn(S(t, t)) < 0)
                negate_row(t);
        }
    }
};

} // namespace detail

/// Smith normal form with transformation matrices; dense, intended for
/// small and medium matrices.
inline SmithForm smith_normal_form(SparseMatrix<Integers> const& m)
{
    detail::DenseSmith<true> run(m.to_dense());
    run.run();
    return {std::move(run.S), std::move(run.U), std::move(run.V)};
}

/// Nonzero invariant factors of an integer matrix, in divisibility order.
///
/// Unit pivots are eliminated sparsely first (columns reduced by their lowest
/// entry, as in boundary-matrix reduction); whatever resists unit pivoting is
/// handed to the dense Smith reduction.
inline std::vector<mpz_class> smith_diagonal(SparseMatrix<Integers> const& m)
{
    Integers const ring;
    using Col = SparseVector<Integers>;
    std::vector<std::int64_t> pivot_at(m.rows(), -1);
    std::vector<Col> pivots;
    std::vector<Col> residual;

    auto reduce_low = [&](Col v) {
        while (!v.empty()) {
            auto const& low = v.back();
            auto p = pivot_at[low.index];
            if (p < 0)
                break;
            Col const& piv = pivots[static_cast<std::size_t>(p)];
            mpz_class c = -low.value * piv.back().value; // pivot is ±1
            v = add_scaled(ring, v, c, piv);
        }
        return v;
    };

    auto try_pivot = [&](Col v) {
        v = reduce_low(std::move(v));
        if (v.empty())
            return true;
        if (ring.is_unit(v.back().value)) {
            pivot_at[v.back().index] = static_cast<std::int64_t>(pivots.size());
            pivots.push_back(std::move(v));
            return true;
        }
        residual.push_back(std::move(v));
        return false;
    };

    for (auto const& col : m.columns())
        try_pivot(col);

    // Full reduction of residual columns at pivot rows; repeat while new unit
    // pivots appear.
    for (bool changed = true; changed && !residual.empty();) {
        changed = false;
        std::vector<Col> pending;
        pending.swap(residual);
        for (auto& v : pending) {
            Col out;
            while (!v.empty()) {
                auto low = v.back();
                auto p = pivot_at[low.index];
                if (p >= 0) {
                    Col const& piv = pivots[static_cast<std::size_t>(p)];
                    v = add_scaled(ring, v, mpz_class(-low.value * piv.back().value), piv);
                } else {
                    out.push_back(low);
                    v.pop_back();
                }
            }
            std::reverse(out.begin(), out.end());
            if (out.empty())
                continue;
            if (ring.is_unit(out.back().value)) {
                pivot_at[out.back().index] = static_cast<std::int64_t>(pivots.size());
                pivots.push_back(std::move(out));
                changed = true;
            } else {
                residual.push_back(std::move(out));
            }
        }
        if (changed) {
            // residuals may now hit the new pivot rows
            continue;
        }
    }

    std::vector<mpz_class> diag(pivots.size(), mpz_class(1));
    if (residual.empty())
        return diag;

    std::vector<std::uint32_t> rows;
    for (auto const& c : residual)
        for (auto const& e : c)
            rows.push_back(e.index);
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    DenseMatrix<mpz_class> dense(rows.size(), residual.size(), mpz_class(0));
    for (std::size_t j = 0; j < residual.size(); ++j)
        for (auto const& e : residual[j]) {
            auto i = std::lower_bound(rows.begin(), rows.end(), e.index) - rows.begin();
            dense(static_cast<std::size_t>(i), j) = e.value;
        }
    detail::DenseSmith<false> run(std::move(dense));
    run.run();
    for (std::size_t i = 0; i < std::min(run.S.rows, run.S.cols); ++i)
        if (sgn(run.S(i, i)) != 0)
            diag.push_back(run.S(i, i));
    return diag;
}

} // namespace lensconf::chaincore
