#pragma once

#include <array>
#include <functional>
#include <numeric>

#include "lensconf/chaincore/linear.hpp"
#include "lensconf/cyclosolve/congruence.hpp"
#include "lensconf/cyclosolve/interval.hpp"

namespace lensconf::cyclosolve {

/// 1, cos(2πθ/m) or sin(2πθ/m) with θ affine in the frame parameters.
struct TrigMonomial
{
    enum class Kind { one, cos, sin };
    Kind kind = Kind::one;
    Affine theta;

    std::string key() const
    {
        switch (kind) {
        case Kind::one: return "1";
        case Kind::cos: return "cos(" + theta.to_string() + ")";
        case Kind::sin: return "sin(" + theta.to_string() + ")";
        }
        return "?";
    }
};

/// Rational combination of trig monomials in normal form: constants of θ
/// reduced mod m, the leading parameter coefficient positive, and quarter
/// turns evaluated exactly.
class TrigPoly
{
public:
    TrigPoly() = default;
    explicit TrigPoly(long modulus) : modulus_(modulus) {}

    long modulus() const { return modulus_; }
    bool empty() const { return terms_.empty(); }
    std::map<std::string, std::pair<TrigMonomial, mpq_class>> const& terms() const { return terms_; }

    void add(TrigMonomial::Kind kind, Affine theta, mpq_class coef)
    {
        if (sgn(coef) == 0)
            return;
        if (kind == TrigMonomial::Kind::one) {
            insert({kind, Affine()}, coef);
            return;
        }
        theta = reduce_constant(theta);
        if (!theta.is_constant() && sgn(theta.coefficients().begin()->second) < 0) {
            theta = reduce_constant(-theta);
            if (kind == TrigMonomial::Kind::sin)
                coef = -coef;
        }
        if (theta.is_constant()) {
            mpq_class const c = theta.constant();
            mpq_class const quarters = c * 4 / modulus_;
            if (quarters.get_den() == 1) {
                long const q = quarters.get_num().get_si() % 4;
                static constexpr int cos_q[4] = {1, 0, -1, 0};
                static constexpr int sin_q[4] = {0, 1, 0, -1};
                int const v = kind == TrigMonomial::Kind::cos ? cos_q[q] : sin_q[q];
                if (v != 0)
                    insert({TrigMonomial::Kind::one, Affine()}, coef * v);
                return;
            }
            // cos(2π(m−c)/m) = cos(2πc/m), sin flips
            if (c * 2 > modulus_) {
                theta = Affine(mpq_class(modulus_ - c));
                if (kind == TrigMonomial::Kind::sin)
                    coef = -coef;
            }
        }
        insert({kind, theta}, coef);
    }

    void add(TrigPoly const& o, mpq_class const& scale = 1)
    {
        for (auto const& [_, t] : o.terms_)
            add(t.first.kind, t.first.theta, t.second * scale);
    }

    Interval enclose(std::map<std::string, Interval> const& box) const
    {
        Interval sum(0.0);
        Interval const w = two_pi_over(modulus_);
        for (auto const& [_, t] : terms_) {
            Interval v = Interval::of(t.second);
            if (t.first.kind != TrigMonomial::Kind::one) {
                Interval th = Interval::of(t.first.theta.constant());
                for (auto const& [n, c] : t.first.theta.coefficients())
                    th = th + Interval::of(c) * box.at(n);
                Interval const angle = th * w;
                v = v * (t.first.kind == TrigMonomial::Kind::cos ? cos(angle) : sin(angle));
            }
            sum = sum + v;
        }
        return sum;
    }

    double evaluate(std::map<std::string, double> const& at) const
    {
        double sum = 0;
        double const w = 2 * M_PI / static_cast<double>(modulus_);
        for (auto const& [_, t] : terms_) {
            double v = t.second.get_d();
            if (t.first.kind != TrigMonomial::Kind::one) {
                double th = t.first.theta.constant().get_d();
                for (auto const& [n, c] : t.first.theta.coefficients())
                    th += c.get_d() * at.at(n);
                v *= t.first.kind == TrigMonomial::Kind::cos ? std::cos(w * th) : std::sin(w * th);
            }
            sum += v;
        }
        return sum;
    }

    std::string to_string() const
    {
        if (terms_.empty())
            return "0";
        std::string out;
        for (auto const& [k, t] : terms_) {
            std::string c = t.second.get_str();
            if (!out.empty())
                out += " + ";
            out += k == "1" ? c : (c == "1" ? k : c + "*" + k);
        }
        return out;
    }

private:
    Affine reduce_constant(Affine theta) const
    {
        mpq_class c = theta.constant();
        mpq_class const turns = c / modulus_;
        mpz_class fl;
        mpz_fdiv_q(fl.get_mpz_t(), turns.get_num_mpz_t(), turns.get_den_mpz_t());
        return theta - Affine(mpq_class(fl * modulus_));
    }

    void insert(TrigMonomial m, mpq_class coef)
    {
        auto key = m.key();
        auto it = terms_.find(key);
        if (it == terms_.end()) {
            terms_.emplace(key, std::make_pair(std::move(m), std::move(coef)));
            return;
        }
        it->second.second += coef;
        if (sgn(it->second.second) == 0)
            terms_.erase(it);
    }

    long modulus_ = 2;
    std::map<std::string, std::pair<TrigMonomial, mpq_class>> terms_;
};

/// c·i^e·ζ^θ split into real and imaginary parts.
struct ComplexTrig
{
    TrigPoly re, im;

    explicit ComplexTrig(long m) : re(m), im(m) {}

    /// c·ζ^θ
    static ComplexTrig phase(long m, Affine const& theta, mpq_class const& c = 1)
    {
        ComplexTrig z(m);
        z.re.add(TrigMonomial::Kind::cos, theta, c);
        z.im.add(TrigMonomial::Kind::sin, theta, c);
        return z;
    }

    /// c·i·ζ^θ = c·ζ^{θ + m/4}
    static ComplexTrig i_phase(long m, Affine const& theta, mpq_class const& c = 1)
    {
        return phase(m, theta + Affine(mpq_class(m, 4)), c);
    }

    static ComplexTrig constant(long m, mpq_class const& re_part, mpq_class const& im_part = 0)
    {
        ComplexTrig z(m);
        z.re.add(TrigMonomial::Kind::one, Affine(), re_part);
        z.im.add(TrigMonomial::Kind::one, Affine(), im_part);
        return z;
    }
};

/// Real tangent vectors in ℂ⁴ = ℝ⁸ (coordinates Re, Im of each slot) over a
/// parameter box.
struct TangentFrame
{
    long modulus = 7;
    std::vector<ParameterBox> params;
    std::vector<std::array<TrigPoly, 8>> vectors;
    std::vector<std::string> labels;

    static constexpr std::size_t ambient = 8;

    void push(std::array<ComplexTrig, 4> const& v, std::string label = {})
    {
        std::array<TrigPoly, 8> real;
        for (std::size_t i = 0; i < 4; ++i) {
            real[2 * i] = v[i].re;
            real[2 * i + 1] = v[i].im;
        }
        vectors.push_back(std::move(real));
        labels.push_back(std::move(label));
    }
};

enum class RankVerdict
{
    certified,
    fail,
    inconclusive,
};

inline std::string rank_verdict_name(RankVerdict v)
{
    switch (v) {
    case RankVerdict::certified: return "CERTIFIED";
    case RankVerdict::fail: return "FAIL";
    case RankVerdict::inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

/// One leaf of the bisection: a box on which the chosen minor's
/// determinant enclosure excludes zero.
struct CertifiedBox
{
    std::vector<std::pair<mpq_class, mpq_class>> box;
    std::array<std::size_t, 8> rows{};
    std::array<std::size_t, 8> cols{};
    Interval determinant;
};

struct RankCertificate
{
    RankVerdict verdict = RankVerdict::inconclusive;
    std::size_t expected = 0;
    std::size_t rank_upper_bound = 0; // from exact rational dependence
    std::vector<std::vector<mpq_class>> dependences;
    std::vector<CertifiedBox> leaves;  // depth-first order
    std::size_t boxes_examined = 0;
    double margin = 0; // min distance of a certified determinant from zero
    std::string message;
};

struct RankOptions
{
    std::size_t budget = std::size_t(1) << 14;
    std::size_t minors_per_box = 6;
};

namespace detail {

inline Interval interval_determinant(std::vector<std::vector<Interval>> const& m)
{
    std::size_t const n = m.size();
    // Laplace expansion along rows, skipping exact zeros
    std::function<Interval(std::size_t, unsigned)> rec = [&](std::size_t row, unsigned used) -> Interval {
        if (row == n)
            return Interval(1.0);
        Interval sum(0.0);
        int sign = 1;
        for (std::size_t c = 0; c < n; ++c) {
            if (used & (1u << c))
                continue;
            if (!m[row][c].is_zero()) {
                Interval const sub = rec(row + 1, used | (1u << c));
                Interval term = m[row][c] * sub;
                sum = sum + (sign > 0 ? term : -term);
            }
            sign = -sign;
        }
        return sum;
    };
    return rec(0, 0);
}

inline double double_determinant(std::vector<std::vector<double>> m)
{
    std::size_t const n = m.size();
    double det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(m[r][c]) > std::abs(m[p][c]))
                p = r;
        if (m[p][c] == 0)
            return 0;
        if (p != c) {
            std::swap(m[p], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            double const f = m[r][c] / m[c][c];
            for (std::size_t k = c; k < n; ++k)
                m[r][k] -= f * m[c][k];
        }
    }
    return det;
}

inline void subsets(std::size_t n, std::size_t k, std::vector<std::vector<std::size_t>>& out)
{
    std::vector<std::size_t> cur;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (cur.size() == k) {
            out.push_back(cur);
            return;
        }
        for (std::size_t i = start; i < n; ++i) {
            cur.push_back(i);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
}

using Box = std::vector<std::pair<mpq_class, mpq_class>>;

inline std::map<std::string, Interval> box_intervals(TangentFrame const& f, Box const& box)
{
    std::map<std::string, Interval> out;
    for (std::size_t i = 0; i < f.params.size(); ++i) {
        Interval const lo = Interval::of(box[i].first), hi = Interval::of(box[i].second);
        out[f.params[i].name] = {lo.lo, hi.hi};
    }
    return out;
}

inline Interval minor_enclosure(TangentFrame const& f,
                                std::map<std::string, Interval> const& at,
                                std::vector<std::size_t> const& rows,
                                std::vector<std::size_t> const& cols)
{
    std::vector<std::vector<Interval>> m(rows.size(), std::vector<Interval>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j)
            m[i][j] = f.vectors[cols[j]][rows[i]].enclose(at);
    return interval_determinant(m);
}

/// Splits the side that is widest relative to the original box.
inline std::size_t split_axis(TangentFrame const& f, Box const& box)
{
    std::size_t best = 0;
    mpq_class best_rel = -1;
    for (std::size_t i = 0; i < box.size(); ++i) {
        mpq_class const full = f.params[i].hi - f.params[i].lo;
        if (sgn(full) == 0)
            continue;
        mpq_class const rel = (box[i].second - box[i].first) / full;
        if (rel > best_rel) {
            best_rel = rel;
            best = i;
        }
    }
    return best;
}

} // namespace detail

/// Certifies rank ≥ expected everywhere on the parameter box by interval
/// determinants with adaptive bisection, or refutes it by an exact rational
/// dependence among the vectors.
inline RankCertificate tangent_rank(TangentFrame const& frame, std::size_t expected, RankOptions const& opt = {})
{
    RankCertificate cert;
    cert.expected = expected;
    std::size_t const n = frame.vectors.size();
    if (expected > TangentFrame::ambient) {
        cert.verdict = RankVerdict::fail;
        cert.message = "expected rank exceeds the ambient dimension 8";
        return cert;
    }

    // exact dependences: rows are (coordinate, monomial) coefficient rows
    std::map<std::pair<std::size_t, std::string>, std::size_t> row_of;
    for (auto const& v : frame.vectors)
        for (std::size_t c = 0; c < 8; ++c)
            for (auto const& [k, _] : v[c].terms())
                row_of.try_emplace({c, k}, row_of.size());
    chaincore::Rationals q;
    chaincore::SparseMatrix<chaincore::Rationals> coeff(q, row_of.size(), n);
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<mpq_class> col(row_of.size(), mpq_class(0));
        for (std::size_t c = 0; c < 8; ++c)
            for (auto const& [k, t] : frame.vectors[j][c].terms())
                col[row_of.at({c, k})] = t.second;
        coeff.set_column(j, chaincore::sparse_from_dense<chaincore::Rationals>(q, col));
    }
    auto kernel = chaincore::kernel_basis(coeff);
    cert.rank_upper_bound = std::min<std::size_t>(n - kernel.size(), TangentFrame::ambient);
    for (auto const& k : kernel)
        cert.dependences.push_back(chaincore::dense_from_sparse(q, k, n));
    if (cert.rank_upper_bound < expected) {
        cert.verdict = RankVerdict::fail;
        cert.message = "exact rational dependence bounds the rank by " + std::to_string(cert.rank_upper_bound);
        return cert;
    }
    if (expected == 0) {
        cert.verdict = RankVerdict::certified;
        cert.margin = 1;
        return cert;
    }

    std::vector<std::vector<std::size_t>> row_sets, col_sets;
    detail::subsets(TangentFrame::ambient, expected, row_sets);
    detail::subsets(n, expected, col_sets);

    bool exhausted = false;
    double margin = std::numeric_limits<double>::infinity();
    std::function<bool(detail::Box const&)> certify = [&](detail::Box const& box) -> bool {
        if (cert.boxes_examined >= opt.budget) {
            exhausted = true;
            return false;
        }
        ++cert.boxes_examined;
        // rank candidate minors by |det| at the box centre
        std::map<std::string, double> centre;
        for (std::size_t i = 0; i < frame.params.size(); ++i)
            centre[frame.params[i].name] = mpq_class((box[i].first + box[i].second) / 2).get_d();
        std::vector<std::array<double, 8>> vals(n);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t c = 0; c < 8; ++c)
                vals[j][c] = frame.vectors[j][c].evaluate(centre);
        std::vector<std::pair<double, std::pair<std::size_t, std::size_t>>> ranked;
        for (std::size_t r = 0; r < row_sets.size(); ++r)
            for (std::size_t c = 0; c < col_sets.size(); ++c) {
                std::vector<std::vector<double>> m(expected, std::vector<double>(expected));
                for (std::size_t i = 0; i < expected; ++i)
                    for (std::size_t j = 0; j < expected; ++j)
                        m[i][j] = vals[col_sets[c][j]][row_sets[r][i]];
                double const d = std::abs(detail::double_determinant(m));
                if (d > 0)
                    ranked.push_back({d, {r, c}});
            }
        std::sort(ranked.begin(), ranked.end(), [](auto const& a, auto const& b) { return a.first > b.first; });
        auto const at = detail::box_intervals(frame, box);
        for (std::size_t t = 0; t < std::min(opt.minors_per_box, ranked.size()); ++t) {
            auto const& rows = row_sets[ranked[t].second.first];
            auto const& cols = col_sets[ranked[t].second.second];
            Interval const det = detail::minor_enclosure(frame, at, rows, cols);
            if (!det.contains_zero()) {
                CertifiedBox leaf;
                leaf.box = box;
                std::copy(rows.begin(), rows.end(), leaf.rows.begin());
                std::copy(cols.begin(), cols.end(), leaf.cols.begin());
                leaf.determinant = det;
                cert.leaves.push_back(std::move(leaf));
                margin = std::min(margin, det.margin());
                return true;
            }
        }
        if (frame.params.empty())
            return false;
        std::size_t const axis = detail::split_axis(frame, box);
        if (box[axis].first == box[axis].second)
            return false;
        mpq_class const mid = (box[axis].first + box[axis].second) / 2;
        detail::Box left = box, right = box;
        left[axis].second = mid;
        right[axis].first = mid;
        return certify(left) && certify(right);
    };

    detail::Box full;
    for (auto const& p : frame.params)
        full.emplace_back(p.lo, p.hi);
    if (certify(full)) {
        cert.verdict = RankVerdict::certified;
        cert.margin = margin;
        cert.message = "rank >= " + std::to_string(expected) + " on " + std::to_string(cert.leaves.size()) + " boxes";
    } else {
        cert.verdict = RankVerdict::inconclusive;
        cert.leaves.clear();
        cert.message = exhausted ? "subdivision budget of " + std::to_string(opt.budget) + " boxes exhausted"
                                 : "no minor bounded away from zero on an indivisible box";
    }
    return cert;
}

/// Independent replay of a CERTIFIED verdict: the leaves must tile the
/// parameter box by the same bisection, and each recorded minor must have a
/// determinant enclosure excluding zero.
inline bool verify_certificate(TangentFrame const& frame, RankCertificate const& cert)
{
    if (cert.verdict != RankVerdict::certified)
        return false;
    if (cert.expected > TangentFrame::ambient)
        return false;
    if (cert.expected == 0)
        return true;
    std::size_t next = 0, nodes = 0;
    std::function<bool(detail::Box const&)> replay = [&](detail::Box const& box) -> bool {
        // a bisection tree with L leaves has 2L − 1 nodes
        if (++nodes > 2 * cert.leaves.size())
            return false;
        if (next < cert.leaves.size() && cert.leaves[next].box == box) {
            auto const& leaf = cert.leaves[next++];
            std::vector<std::size_t> rows(leaf.rows.begin(), leaf.rows.begin() + cert.expected);
            std::vector<std::size_t> cols(leaf.cols.begin(), leaf.cols.begin() + cert.expected);
            if (std::set<std::size_t>(rows.begin(), rows.end()).size() != rows.size() ||
                std::set<std::size_t>(cols.begin(), cols.end()).size() != cols.size())
                return false;
            for (auto c : cols)
                if (c >= frame.vectors.size())
                    return false;
            for (auto r : rows)
                if (r >= TangentFrame::ambient)
                    return false;
            return !detail::minor_enclosure(frame, detail::box_intervals(frame, box), rows, cols).contains_zero();
        }
        if (frame.params.empty())
            return false;
        std::size_t const axis = detail::split_axis(frame, box);
        if (box[axis].first == box[axis].second)
            return false;
        mpq_class const mid = (box[axis].first + box[axis].second) / 2;
        detail::Box left = box, right = box;
        left[axis].second = mid;
        right[axis].first = mid;
        return replay(left) && replay(right);
    };
    detail::Box full;
    for (auto const& p : frame.params)
        full.emplace_back(p.lo, p.hi);
    return replay(full) && next == cert.leaves.size();
}

} // namespace lensconf::cyclosolve
