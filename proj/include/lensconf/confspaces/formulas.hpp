#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "lensconf/error.hpp"

namespace lensconf::confspaces {

/// Integer polynomial, coefficients by increasing degree, no trailing zeros.
struct Polynomial
{
    std::vector<mpz_class> coefficients;

    Polynomial() = default;
    Polynomial(std::vector<mpz_class> c) : coefficients(std::move(c)) { trim(); }

    mpz_class coefficient(std::size_t d) const { return d < coefficients.size() ? coefficients[d] : mpz_class(0); }
    int degree() const { return static_cast<int>(coefficients.size()) - 1; }

    mpz_class evaluate(mpz_class const& x) const
    {
        mpz_class v = 0;
        for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it)
            v = v * x + *it;
        return v;
    }

    friend Polynomial operator*(Polynomial const& a, Polynomial const& b)
    {
        if (a.coefficients.empty() || b.coefficients.empty())
            return {};
        std::vector<mpz_class> c(a.coefficients.size() + b.coefficients.size() - 1, 0);
        for (std::size_t i = 0; i < a.coefficients.size(); ++i)
            for (std::size_t j = 0; j < b.coefficients.size(); ++j)
                c[i + j] += a.coefficients[i] * b.coefficients[j];
        return Polynomial(std::move(c));
    }

    friend bool operator==(Polynomial const& a, Polynomial const& b) { return a.coefficients == b.coefficients; }

    /// e.g. "1 + 6q^2 + q^3 + 6q^5"
    std::string to_string(std::string const& var = "q") const
    {
        std::string out;
        for (std::size_t d = 0; d < coefficients.size(); ++d) {
            mpz_class const& c = coefficients[d];
            if (sgn(c) == 0)
                continue;
            mpz_class const mag = abs(c);
            std::string term = d == 0 ? mag.get_str() : (mag == 1 ? "" : mag.get_str()) + var;
            if (d > 1)
                term += "^" + std::to_string(d);
            if (out.empty())
                out = sgn(c) < 0 ? "-" + term : term;
            else
                out += (sgn(c) < 0 ? " - " : " + ") + term;
        }
        return out.empty() ? "0" : out;
    }

private:
    void trim()
    {
        while (!coefficients.empty() && sgn(coefficients.back()) == 0)
            coefficients.pop_back();
    }
};

namespace detail {

inline void check_spec(long m, long n)
{
    if (m < 2)
        throw InputError("configuration formulas need m >= 2");
    if (n < 1)
        throw InputError("configuration formulas need n >= 1");
}

} // namespace detail

/// Poincaré polynomial (1 + q³)·Π_{k=1}^{n−1} (1 + (mk − 1)q²) of the
/// universal cover of the n-point configuration space of L(m, ·).
inline Polynomial poincare_polynomial(long m, long n)
{
    detail::check_spec(m, n);
    Polynomial p({1, 0, 0, 1});
    for (long k = 1; k < n; ++k)
        p = p * Polynomial({1, 0, mpz_class(m * k - 1)});
    return p;
}

/// Σ_{k=1}^{n−1} (mk − 1).
inline mpz_class h2_rank(long m, long n)
{
    detail::check_spec(m, n);
    mpz_class r = 0;
    for (long k = 1; k < n; ++k)
        r += mpz_class(m) * k - 1;
    return r;
}

/// (n − 1)(7n − 2)/2, the m = 7 case in closed form.
inline mpz_class h2_rank_closed_form_7(long n)
{
    detail::check_spec(7, n);
    mpz_class const v = mpz_class(n - 1) * (7 * mpz_class(n) - 2);
    return v / 2;
}

struct GroupSummary
{
    std::string family;
    mpz_class order;
};

/// π₁ of the ordered space is ℤ_m^n; of the unordered one, Σ_n ≀ ℤ_m.
inline GroupSummary fundamental_group_summary(long m, long n, bool ordered)
{
    detail::check_spec(m, n);
    std::string const zm = "Z" + std::to_string(m);
    mpz_class power;
    mpz_ui_pow_ui(power.get_mpz_t(), static_cast<unsigned long>(m), static_cast<unsigned long>(n));
    if (ordered) {
        std::string family = zm;
        for (long i = 1; i < n; ++i)
            family += "x" + zm;
        return {family, power};
    }
    mpz_class fact;
    mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(n));
    return {"S" + std::to_string(n) + " wr " + zm, fact * power};
}

} // namespace lensconf::confspaces
