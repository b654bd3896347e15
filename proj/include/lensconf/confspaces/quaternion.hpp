#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "lensconf/error.hpp"

namespace lensconf::confspaces {

/// ℚ(ζ_N) in the power basis 1, ζ, …, ζ^{φ(N)−1}.
class CyclotomicField
{
public:
    using Element = std::vector<mpq_class>;

    explicit CyclotomicField(long n) : n_(n)
    {
        if (n < 1)
            throw InputError("cyclotomic order must be positive");
        modulus_ = cyclotomic_polynomial(n);
        degree_ = modulus_.size() - 1;
        powers_.reserve(static_cast<std::size_t>(n));
        for (long e = 0; e < n; ++e) {
            std::vector<mpq_class> mono(static_cast<std::size_t>(e) + 1, 0);
            mono.back() = 1;
            powers_.push_back(reduce(std::move(mono)));
        }
    }

    long order() const { return n_; }
    std::size_t degree() const { return degree_; }

    Element zero() const { return Element(degree_, 0); }
    Element one() const { return zeta(0); }

    /// ζ_N^e
    Element const& zeta(long e) const { return powers_[static_cast<std::size_t>(((e % n_) + n_) % n_)]; }

    Element from_rational(mpq_class const& c) const
    {
        auto v = zero();
        v[0] = c;
        return v;
    }

    Element add(Element const& a, Element const& b) const
    {
        Element c(degree_);
        for (std::size_t i = 0; i < degree_; ++i)
            c[i] = a[i] + b[i];
        return c;
    }

    Element sub(Element const& a, Element const& b) const
    {
        Element c(degree_);
        for (std::size_t i = 0; i < degree_; ++i)
            c[i] = a[i] - b[i];
        return c;
    }

    Element neg(Element const& a) const
    {
        Element c(degree_);
        for (std::size_t i = 0; i < degree_; ++i)
            c[i] = -a[i];
        return c;
    }

    Element mul(Element const& a, Element const& b) const
    {
        std::vector<mpq_class> c(2 * degree_ - 1, 0);
        for (std::size_t i = 0; i < degree_; ++i) {
            if (sgn(a[i]) == 0)
                continue;
            for (std::size_t j = 0; j < degree_; ++j)
                if (sgn(b[j]) != 0)
                    c[i + j] += a[i] * b[j];
        }
        return reduce(std::move(c));
    }

    /// Complex conjugation ζ ↦ ζ^{−1}.
    Element conj(Element const& a) const
    {
        auto c = zero();
        for (std::size_t i = 0; i < degree_; ++i) {
            if (sgn(a[i]) == 0)
                continue;
            auto const& z = zeta(-static_cast<long>(i));
            for (std::size_t j = 0; j < degree_; ++j)
                c[j] += a[i] * z[j];
        }
        return c;
    }

    /// Φ_n as integer coefficients, lowest degree first.
    static std::vector<mpz_class> cyclotomic_polynomial(long n)
    {
        std::vector<mpz_class> p(static_cast<std::size_t>(n) + 1, 0);
        p[0] = -1;
        p.back() = 1;
        for (long d = 1; d < n; ++d)
            if (n % d == 0)
                p = divide_monic(p, cyclotomic_polynomial(d));
        return p;
    }

private:
    long n_;
    std::size_t degree_ = 0;
    std::vector<mpz_class> modulus_;
    std::vector<Element> powers_;

    static std::vector<mpz_class> divide_monic(std::vector<mpz_class> a, std::vector<mpz_class> const& b)
    {
        std::size_t const db = b.size() - 1;
        std::vector<mpz_class> q(a.size() - db, 0);
        for (std::size_t i = a.size(); i-- > db;) {
            mpz_class const c = a[i];
            q[i - db] = c;
            for (std::size_t j = 0; j <= db; ++j)
                a[i - db + j] -= c * b[j];
        }
        for (std::size_t i = 0; i < db; ++i)
            if (sgn(a[i]) != 0)
                throw VerificationError("cyclotomic division left a remainder");
        return q;
    }

    Element reduce(std::vector<mpq_class> c) const
    {
        for (std::size_t i = c.size(); i-- > degree_;) {
            if (sgn(c[i]) == 0)
                continue;
            mpq_class const t = c[i];
            for (std::size_t j = 0; j <= degree_; ++j)
                c[i - degree_ + j] -= t * modulus_[j];
        }
        c.resize(degree_, 0);
        return c;
    }
};

/// x1 + x2·j with x1, x2 ∈ ℚ(ζ_N) ⊂ ℂ.
struct Quaternion
{
    CyclotomicField::Element z1, z2;

    friend bool operator==(Quaternion const& a, Quaternion const& b) { return a.z1 == b.z1 && a.z2 == b.z2; }
};

class QuaternionAlgebra
{
public:
    explicit QuaternionAlgebra(long m) : field_(std::lcm(4L, m)), m_(m) {}

    CyclotomicField const& field() const { return field_; }

    /// (a1 + a2 j)(b1 + b2 j) = (a1 b1 − a2 b̄2) + (a1 b2 + a2 b̄1) j
    Quaternion mul(Quaternion const& a, Quaternion const& b) const
    {
        auto const& f = field_;
        return {f.sub(f.mul(a.z1, b.z1), f.mul(a.z2, f.conj(b.z2))),
                f.add(f.mul(a.z1, b.z2), f.mul(a.z2, f.conj(b.z1)))};
    }

    Quaternion conj(Quaternion const& a) const { return {field_.conj(a.z1), field_.neg(a.z2)}; }

    /// |a|² as an element of the field (rational for rational points).
    CyclotomicField::Element norm2(Quaternion const& a) const { return mul(a, conj(a)).z1; }

    /// Inverse of a unit quaternion.
    Quaternion unit_inverse(Quaternion const& a) const { return conj(a); }

    /// The complex scalar ζ_m^k as a quaternion.
    Quaternion root(long k) const { return {field_.zeta(k * (field_.order() / m_)), field_.zero()}; }

    /// ζ_m^k acting on the left, (x1, x2) ↦ (ζ^k x1, ζ^k x2).
    Quaternion act(long k, Quaternion const& a) const { return mul(root(k), a); }

    /// a + b i + c j + d k with rational coordinates.
    Quaternion from_real(mpq_class const& a, mpq_class const& b, mpq_class const& c, mpq_class const& d) const
    {
        auto const& f = field_;
        auto const i = f.zeta(f.order() / 4);
        auto cx = [&](mpq_class const& re, mpq_class const& im) {
            return f.add(f.from_rational(re), f.mul(f.from_rational(im), i));
        };
        return {cx(a, b), cx(c, d)};
    }

    /// Inverse stereographic projection of u ∈ ℚ³ onto the unit 3-sphere.
    Quaternion sphere_point(mpq_class const& u1, mpq_class const& u2, mpq_class const& u3) const
    {
        mpq_class const s = u1 * u1 + u2 * u2 + u3 * u3;
        mpq_class const d = s + 1;
        return from_real(2 * u1 / d, 2 * u2 / d, 2 * u3 / d, (s - 1) / d);
    }

private:
    CyclotomicField field_;
    long m_;
};

/// The splitting map F(S³) → (S³ minus ℤ_m-orbit points) × S³ on the first
/// factor; the correct one is (x, y) ↦ x y⁻¹.
using SplitMap = std::function<Quaternion(QuaternionAlgebra const&, Quaternion const&, Quaternion const&)>;

inline Quaternion split_map(QuaternionAlgebra const& h, Quaternion const& x, Quaternion const& y)
{
    return h.mul(x, h.unit_inverse(y));
}

struct QuaternionFailure
{
    std::size_t sample = 0;
    long k = 0;
    bool orbit = false; // x = ζ^k y
    bool image = false; // first coordinate of the map equals ζ^k
};

struct QuaternionReport
{
    long m = 0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    std::size_t orbit_samples = 0; // samples constructed with x = ζ^k y
    std::size_t checks = 0;
    std::vector<QuaternionFailure> failures; // first few only
    std::size_t failure_count = 0;

    bool passed() const { return failure_count == 0; }
};

/// Samples rational pairs (x, y) on S³ × S³, half of them on a common orbit,
/// and checks x = ζ^k y ⇔ F(x, y) = ζ^k for every k.
inline QuaternionReport quaternion_split_test(long m,
                                              std::size_t samples,
                                              std::uint64_t seed,
                                              SplitMap const& map = split_map)
{
    if (m < 2)
        throw InputError("quaternion test needs m >= 2");
    QuaternionAlgebra const h(m);
    QuaternionReport rep;
    rep.m = m;
    rep.samples = samples;
    rep.seed = seed;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> num(-12, 12), den(1, 9), power(0, m - 1);
    auto coordinate = [&] {
        mpq_class c(mpz_class(num(rng)), mpz_class(den(rng)));
        c.canonicalize();
        return c;
    };
    auto point = [&] {
        mpq_class const a = coordinate(), b = coordinate(), c = coordinate();
        return h.sphere_point(a, b, c);
    };
    std::vector<Quaternion> roots;
    for (long k = 0; k < m; ++k)
        roots.push_back(h.root(k));

    for (std::size_t s = 0; s < samples; ++s) {
        Quaternion const y = point();
        Quaternion x;
        if (s % 2 == 0) {
            x = h.act(power(rng), y);
            ++rep.orbit_samples;
        } else {
            x = point();
        }
        Quaternion const f = map(h, x, y);
        for (long k = 0; k < m; ++k) {
            ++rep.checks;
            bool const orbit = x == h.act(k, y);
            bool const image = f == roots[static_cast<std::size_t>(k)];
            if (orbit != image) {
                ++rep.failure_count;
                if (rep.failures.size() < 10)
                    rep.failures.push_back({s, k, orbit, image});
            }
        }
    }
    return rep;
}

} // namespace lensconf::confspaces
