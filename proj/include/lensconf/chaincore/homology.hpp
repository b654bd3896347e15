#pragma once

#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "lensconf/chaincore/linear.hpp"
#include "lensconf/chaincore/smith.hpp"

namespace lensconf::chaincore {

/// Graded chain complex C_{min} … C_{max} with ∂_d : C_d → C_{d-1}.
template <typename Ring>
class ChainComplex
{
public:
    /// `ranks[i]` is the rank of C_{min_degree + i}; `boundaries[i]` is
    /// ∂_{min_degree + i + 1}.
    ChainComplex(Ring ring, int min_degree, std::vector<std::size_t> ranks, std::vector<SparseMatrix<Ring>> boundaries)
        : ring_(std::move(ring)), min_degree_(min_degree), ranks_(std::move(ranks)), boundaries_(std::move(boundaries))
    {
        if (ranks_.empty())
            throw InputError("chain complex needs at least one degree");
        if (boundaries_.size() + 1 != ranks_.size())
            throw InputError("chain complex: expected " + std::to_string(ranks_.size() - 1) + " boundary matrices");
        for (std::size_t i = 0; i < boundaries_.size(); ++i) {
            auto const& b = boundaries_[i];
            if (b.rows() != ranks_[i] || b.cols() != ranks_[i + 1])
                throw InputError("boundary ∂_" + std::to_string(min_degree_ + static_cast<int>(i) + 1) +
                                 " has shape " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()) +
                                 ", expected " + std::to_string(ranks_[i]) + "x" + std::to_string(ranks_[i + 1]));
        }
        for (std::size_t i = 0; i + 1 < boundaries_.size(); ++i)
            if (!boundaries_[i].multiply(boundaries_[i + 1]).is_zero())
                throw InputError("∂∂ ≠ 0 in degree " + std::to_string(min_degree_ + static_cast<int>(i) + 2));
    }

    Ring const& ring() const { return ring_; }
    int min_degree() const { return min_degree_; }
    int max_degree() const { return min_degree_ + static_cast<int>(ranks_.size()) - 1; }
    std::size_t rank(int d) const
    {
        if (d < min_degree() || d > max_degree())
            return 0;
        return ranks_[static_cast<std::size_t>(d - min_degree_)];
    }
    /// ∂_d for min < d ≤ max.
    SparseMatrix<Ring> const& boundary(int d) const
    {
        if (d <= min_degree() || d > max_degree())
            throw InputError("no boundary matrix in degree " + std::to_string(d));
        return boundaries_[static_cast<std::size_t>(d - min_degree_ - 1)];
    }

private:
    Ring ring_;
    int min_degree_;
    std::vector<std::size_t> ranks_;
    std::vector<SparseMatrix<Ring>> boundaries_;
};

struct DegreeHomology
{
    int degree = 0;
    std::size_t betti = 0;
    /// Elementary divisors > 1 (ℤ coefficients only).
    std::vector<mpz_class> torsion;
};

struct HomologySummary
{
    CoefficientRing ring;
    std::vector<DegreeHomology> degrees;

    std::vector<std::size_t> betti() const
    {
        std::vector<std::size_t> b;
        for (auto const& d : degrees)
            b.push_back(d.betti);
        return b;
    }

    long euler_characteristic() const
    {
        long chi = 0;
        for (auto const& d : degrees)
            chi += (d.degree % 2 == 0 ? 1 : -1) * static_cast<long>(d.betti);
        return chi;
    }

    /// e.g. "H0=Z H1=Z/7 H2=0 H3=Z"
    std::string describe() const
    {
        std::string out;
        for (auto const& d : degrees) {
            if (!out.empty())
                out += ' ';
            out += "H" + std::to_string(d.degree) + "=";
            std::string group;
            std::string const base = ring.kind == CoefficientRing::Kind::integers      ? "Z"
                                     : ring.kind == CoefficientRing::Kind::rationals ? "Q"
                                                                                     : "F" + std::to_string(ring.p);
            if (d.betti == 1)
                group = base;
            else if (d.betti > 1)
                group = base + "^" + std::to_string(d.betti);
            for (auto const& t : d.torsion)
                group += (group.empty() ? "" : "+") + std::string("Z/") + t.get_str();
            out += group.empty() ? "0" : group;
        }
        return out;
    }
};

namespace detail {

struct RankResult
{
    std::size_t rank = 0;
    std::vector<mpz_class> torsion;
    std::vector<std::uint32_t> lows; // pivot rows (field reduction only)
};

template <typename Field>
RankResult field_rank_with_clearing(SparseMatrix<Field> const& m, std::unordered_set<std::uint32_t> const& skip)
{
    Field const& f = m.ring();
    RankResult r;
    std::vector<std::int64_t> pivot_at(m.rows(), -1);
    std::vector<SparseVector<Field>> reduced;
    for (std::uint32_t j = 0; j < m.cols(); ++j) {
        if (skip.count(j))
            continue;
        SparseVector<Field> v = m.column(j);
        while (!v.empty()) {
            auto p = pivot_at[v.back().index];
            if (p < 0)
                break;
            auto const& b = reduced[static_cast<std::size_t>(p)];
            auto c = f.neg(f.mul(v.back().value, f.inv(b.back().value)));
            v = add_scaled(f, v, c, b);
        }
        if (v.empty())
            continue;
        pivot_at[v.back().index] = static_cast<std::int64_t>(reduced.size());
        r.lows.push_back(v.back().index);
        reduced.push_back(std::move(v));
    }
    r.rank = reduced.size();
    return r;
}

} // namespace detail

/// Betti numbers (and torsion over ℤ) of a chain complex.
template <typename Ring>
HomologySummary homology(ChainComplex<Ring> const& c)
{
    HomologySummary h{c.ring().descriptor(), {}};
    int const lo = c.min_degree(), hi = c.max_degree();
    // rank_of[d] = rank of ∂_d, torsion_of[d] = divisors of ∂_d
    std::vector<detail::RankResult> ranks(static_cast<std::size_t>(hi - lo + 2));
    auto slot = [&](int d) -> detail::RankResult& { return ranks[static_cast<std::size_t>(d - lo)]; };
    std::unordered_set<std::uint32_t> cleared;
    for (int d = hi; d > lo; --d) {
        auto const& b = c.boundary(d);
        if constexpr (Ring::is_field) {
            auto res = detail::field_rank_with_clearing(b, cleared);
            cleared = std::unordered_set<std::uint32_t>(res.lows.begin(), res.lows.end());
            slot(d) = std::move(res);
        } else {
            detail::RankResult res;
            for (auto const& dv : smith_diagonal(b)) {
                ++res.rank;
                if (dv > 1)
                    res.torsion.push_back(dv);
            }
            slot(d) = std::move(res);
        }
    }
    for (int d = lo; d <= hi; ++d) {
        std::size_t const out_rank = d > lo ? slot(d).rank : 0;
        std::size_t const in_rank = d < hi ? slot(d + 1).rank : 0;
        DegreeHomology dh;
        dh.degree = d;
        dh.betti = c.rank(d) - out_rank - in_rank;
        if (d < hi)
            dh.torsion = slot(d + 1).torsion;
        h.degrees.push_back(std::move(dh));
    }
    return h;
}

} // namespace lensconf::chaincore
