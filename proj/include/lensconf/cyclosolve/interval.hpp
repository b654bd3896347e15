#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace lensconf::cyclosolve {

/// Closed interval of doubles. Every operation widens its result by one ulp
/// on each side, which dominates the rounding error of a single IEEE
/// operation, so results are rigorous enclosures.
struct Interval
{
    double lo = 0;
    double hi = 0;

    Interval() = default;
    Interval(double l, double h) : lo(l), hi(h) {}
    explicit Interval(double x) : lo(x), hi(x) {}

    static double down(double x) { return std::nextafter(x, -std::numeric_limits<double>::infinity()); }
    static double up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }

    /// Enclosure of an exact rational.
    static Interval of(mpq_class const& q)
    {
        double const d = q.get_d();
        if (mpq_class(d) == q)
            return Interval(d);
        return {down(d), up(d)};
    }

    bool contains_zero() const { return lo <= 0 && hi >= 0; }
    double width() const { return hi - lo; }
    double mid() const { return lo + (hi - lo) / 2; }
    bool is_zero() const { return lo == 0 && hi == 0; }
    /// Distance of the interval from zero (0 if it contains zero).
    double margin() const { return contains_zero() ? 0.0 : std::min(std::abs(lo), std::abs(hi)); }

    friend Interval operator+(Interval a, Interval b)
    {
        if (a.is_zero())
            return b;
        if (b.is_zero())
            return a;
        return {down(a.lo + b.lo), up(a.hi + b.hi)};
    }
    friend Interval operator-(Interval a) { return {-a.hi, -a.lo}; }
    friend Interval operator-(Interval a, Interval b) { return a + (-b); }
    friend Interval operator*(Interval a, Interval b)
    {
        if (a.is_zero() || b.is_zero())
            return Interval(0.0);
        double const p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
        return {down(*std::min_element(p, p + 4)), up(*std::max_element(p, p + 4))};
    }

    std::string to_string() const
    {
        char buf[96];
        std::snprintf(buf, sizeof buf, "[%.17g, %.17g]", lo, hi);
        return buf;
    }
};

/// Enclosure of 2π/m.
inline Interval two_pi_over(long m)
{
    double const v = 2 * M_PI / static_cast<double>(m);
    // M_PI is within one ulp of π; the division adds half an ulp
    return {Interval::down(Interval::down(Interval::down(v))), Interval::up(Interval::up(Interval::up(v)))};
}

namespace detail {

/// Enclosure of cos over [a, b] (shift = 0) or of sin (shift = π/2, using
/// sin x = cos(x − π/2)).
inline Interval cos_like(Interval x, bool is_sin)
{
    constexpr double two_pi = 2 * M_PI;
    if (!(x.width() < two_pi - 1e-9))
        return {-1, 1};
    auto f = [&](double v) { return is_sin ? std::sin(v) : std::cos(v); };
    double const fa = f(x.lo), fb = f(x.hi);
    double lo = std::min(fa, fb), hi = std::max(fa, fb);
    // widen for the library error (well below 2 ulps in glibc)
    for (int i = 0; i < 2; ++i) {
        lo = Interval::down(lo);
        hi = Interval::up(hi);
    }
    // extrema: cos peaks at 2kπ, sin at π/2 + 2kπ; troughs one π later
    double const peak = is_sin ? M_PI / 2 : 0.0;
    double const slack = 1e-12;
    auto hits = [&](double offset) {
        double const k = std::ceil((x.lo - slack - offset) / two_pi);
        return offset + k * two_pi <= x.hi + slack;
    };
    if (hits(peak))
        hi = 1;
    if (hits(peak + M_PI))
        lo = -1;
    return {std::max(lo, -1.0), std::min(hi, 1.0)};
}

} // namespace detail

inline Interval cos(Interval x) { return detail::cos_like(x, false); }
inline Interval sin(Interval x) { return detail::cos_like(x, true); }

} // namespace lensconf::cyclosolve
