#pragma once

#include <gmpxx.h>

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>

#include "lensconf/error.hpp"

namespace lensconf::chaincore {

inline bool is_prime(std::uint64_t n)
{
    if (n < 2)
        return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

/// Runtime description of a coefficient ring: ℤ, ℚ or 𝔽_p.
struct CoefficientRing
{
    enum class Kind { integers, rationals, prime_field };

    Kind kind = Kind::integers;
    std::uint32_t p = 0;

    static CoefficientRing integers() { return {Kind::integers, 0}; }
    static CoefficientRing rationals() { return {Kind::rationals, 0}; }
    static CoefficientRing prime_field(std::uint32_t p)
    {
        if (!is_prime(p))
            throw InputError("coefficient field characteristic " + std::to_string(p) + " is not prime");
        return {Kind::prime_field, p};
    }

    bool is_field() const { return kind != Kind::integers; }

    /// Accepts `Z`, `Q`, `Fp:<p>` and the short form `F<p>`.
    static CoefficientRing parse(std::string_view text)
    {
        if (text == "Z")
            return integers();
        if (text == "Q")
            return rationals();
        std::string_view digits;
        if (text.starts_with("Fp:"))
            digits = text.substr(3);
        else if (text.starts_with("F") && text.size() > 1)
            digits = text.substr(1);
        else
            throw InputError("unknown ring '" + std::string(text) + "' (expected Z, Q or Fp:<p>)");
        std::uint32_t p = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), p);
        if (ec != std::errc() || ptr != digits.data() + digits.size())
            throw InputError("bad prime in ring '" + std::string(text) + "'");
        return prime_field(p);
    }

    std::string name() const
    {
        switch (kind) {
        case Kind::integers: return "Z";
        case Kind::rationals: return "Q";
        case Kind::prime_field: return "Fp:" + std::to_string(p);
        }
        return "?";
    }

    friend bool operator==(CoefficientRing const&, CoefficientRing const&) = default;
};

struct Integers
{
    using value_type = mpz_class;
    static constexpr bool is_field = false;

    value_type zero() const { return 0; }
    value_type one() const { return 1; }
    value_type from_int(long v) const { return v; }
    value_type from_mpz(mpz_class const& v) const { return v; }
    bool is_zero(value_type const& v) const { return sgn(v) == 0; }
    bool is_unit(value_type const& v) const { return v == 1 || v == -1; }
    value_type add(value_type const& a, value_type const& b) const { return a + b; }
    value_type sub(value_type const& a, value_type const& b) const { return a - b; }
    value_type mul(value_type const& a, value_type const& b) const { return a * b; }
    value_type neg(value_type const& a) const { return -a; }
    /// Inverse of a unit (±1).
    value_type inv(value_type const& a) const { return a; }

    std::string to_string(value_type const& v) const { return v.get_str(); }
    value_type parse(std::string_view s) const
    {
        mpz_class v;
        if (s.empty() || v.set_str(std::string(s), 10) != 0)
            throw InputError("not an integer: '" + std::string(s) + "'");
        return v;
    }

    CoefficientRing descriptor() const { return CoefficientRing::integers(); }
};

struct Rationals
{
    using value_type = mpq_class;
    static constexpr bool is_field = true;

    value_type zero() const { return 0; }
    value_type one() const { return 1; }
    value_type from_int(long v) const { return v; }
    value_type from_mpz(mpz_class const& v) const { return mpq_class(v); }
    bool is_zero(value_type const& v) const { return sgn(v) == 0; }
    bool is_unit(value_type const& v) const { return sgn(v) != 0; }
    value_type add(value_type const& a, value_type const& b) const { return a + b; }
    value_type sub(value_type const& a, value_type const& b) const { return a - b; }
    value_type mul(value_type const& a, value_type const& b) const { return a * b; }
    value_type neg(value_type const& a) const { return -a; }
    value_type inv(value_type const& a) const { return 1 / a; }

    std::string to_string(value_type const& v) const { return v.get_str(); }
    value_type parse(std::string_view s) const
    {
        mpq_class v;
        if (s.empty() || v.set_str(std::string(s), 10) != 0)
            throw InputError("not a rational: '" + std::string(s) + "'");
        if (v.get_den() == 0)
            throw InputError("zero denominator: '" + std::string(s) + "'");
        v.canonicalize();
        return v;
    }

    CoefficientRing descriptor() const { return CoefficientRing::rationals(); }
};

class PrimeField
{
public:
    using value_type = std::uint32_t;
    static constexpr bool is_field = true;

    explicit PrimeField(std::uint32_t p) : p_(p)
    {
        if (!is_prime(p))
            throw InputError("coefficient field characteristic " + std::to_string(p) + " is not prime");
    }

    std::uint32_t characteristic() const { return p_; }

    value_type zero() const { return 0; }
    value_type one() const { return 1; }
    value_type from_int(long v) const
    {
        long r = v % static_cast<long>(p_);
        return static_cast<value_type>(r < 0 ? r + p_ : r);
    }
    value_type from_mpz(mpz_class const& v) const
    {
        mpz_class r = v % p_;
        if (r < 0)
            r += p_;
        return static_cast<value_type>(r.get_ui());
    }
    bool is_zero(value_type v) const { return v == 0; }
    bool is_unit(value_type v) const { return v != 0; }
    value_type add(value_type a, value_type b) const
    {
        std::uint32_t s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + p_ - b; }
    value_type mul(value_type a, value_type b) const
    {
        return static_cast<value_type>(static_cast<std::uint64_t>(a) * b % p_);
    }
    value_type neg(value_type a) const { return a == 0 ? 0 : p_ - a; }
    value_type inv(value_type a) const
    {
        // Fermat: a^(p-2)
        std::uint64_t result = 1, base = a, e = p_ - 2;
        while (e) {
            if (e & 1)
                result = result * base % p_;
            base = base * base % p_;
            e >>= 1;
        }
        return static_cast<value_type>(result);
    }

    std::string to_string(value_type v) const { return std::to_string(v); }
    value_type parse(std::string_view s) const { return from_mpz(Integers{}.parse(s)); }

    CoefficientRing descriptor() const { return CoefficientRing::prime_field(p_); }

private:
    std::uint32_t p_;
};

/// Image of an exact rational in the ring. Throws when the denominator is not
/// invertible there.
inline mpz_class ring_from_rational(Integers const&, mpq_class const& q)
{
    if (q.get_den() != 1)
        throw InputError("coefficient " + q.get_str() + " is not an integer");
    return q.get_num();
}

inline mpq_class ring_from_rational(Rationals const&, mpq_class const& q)
{
    return q;
}

inline std::uint32_t ring_from_rational(PrimeField const& f, mpq_class const& q)
{
    auto den = f.from_mpz(q.get_den());
    if (den == 0)
        throw InputError("coefficient " + q.get_str() + " has a denominator divisible by " +
                         std::to_string(f.descriptor().p));
    return f.mul(f.from_mpz(q.get_num()), f.inv(den));
}

/// Calls `f` with the ring object matching the runtime descriptor.
template <typename F>
decltype(auto) dispatch(CoefficientRing const& ring, F&& f)
{
    switch (ring.kind) {
    case CoefficientRing::Kind::integers: return f(Integers{});
    case CoefficientRing::Kind::rationals: return f(Rationals{});
    case CoefficientRing::Kind::prime_field: break;
    }
    return f(PrimeField(ring.p));
}

} // namespace lensconf::chaincore
