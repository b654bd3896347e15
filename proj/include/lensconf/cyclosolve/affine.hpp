#pragma once

#include <gmpxx.h>

#include <cctype>
#include <map>
#include <string>
#include <string_view>

#include "lensconf/error.hpp"

namespace lensconf::cyclosolve {

/// constant + Σ coefficient·parameter over ℚ. Zero coefficients are never
/// stored, so structural equality is equality of forms.
class Affine
{
public:
    Affine() = default;
    Affine(long c) : constant_(c) {}
    Affine(mpq_class c) : constant_(std::move(c)) { constant_.canonicalize(); }

    static Affine variable(std::string const& name, mpq_class coef = 1)
    {
        Affine a;
        a.set(name, std::move(coef));
        return a;
    }

    mpq_class const& constant() const { return constant_; }
    std::map<std::string, mpq_class> const& coefficients() const { return coef_; }
    bool is_constant() const { return coef_.empty(); }

    mpq_class coefficient(std::string const& name) const
    {
        auto it = coef_.find(name);
        return it == coef_.end() ? mpq_class(0) : it->second;
    }

    void set(std::string const& name, mpq_class c)
    {
        c.canonicalize();
        if (sgn(c) == 0)
            coef_.erase(name);
        else
            coef_[name] = std::move(c);
    }

    Affine& operator+=(Affine const& o)
    {
        constant_ += o.constant_;
        for (auto const& [n, c] : o.coef_)
            set(n, coefficient(n) + c);
        return *this;
    }
    Affine& operator-=(Affine const& o) { return *this += o * mpq_class(-1); }
    Affine& operator*=(mpq_class const& c)
    {
        if (sgn(c) == 0)
            return *this = Affine();
        constant_ *= c;
        for (auto& [n, v] : coef_)
            v *= c;
        return *this;
    }

    friend Affine operator+(Affine a, Affine const& b) { return a += b; }
    friend Affine operator-(Affine a, Affine const& b) { return a -= b; }
    friend Affine operator*(Affine a, mpq_class const& c) { return a *= c; }
    friend Affine operator*(mpq_class const& c, Affine a) { return a *= c; }
    friend Affine operator-(Affine a) { return a *= mpq_class(-1); }
    friend bool operator==(Affine const& a, Affine const& b)
    {
        return a.constant_ == b.constant_ && a.coef_ == b.coef_;
    }

    /// Replaces `name` by the form `value`.
    Affine substitute(std::string const& name, Affine const& value) const
    {
        auto it = coef_.find(name);
        if (it == coef_.end())
            return *this;
        Affine out = *this;
        mpq_class const c = it->second;
        out.coef_.erase(name);
        return out + value * c;
    }

    Affine rename(std::map<std::string, std::string> const& names) const
    {
        Affine out(constant_);
        for (auto const& [n, c] : coef_) {
            auto it = names.find(n);
            out.set(it == names.end() ? n : it->second, out.coefficient(it == names.end() ? n : it->second) + c);
        }
        return out;
    }

    mpq_class evaluate(std::map<std::string, mpq_class> const& at) const
    {
        mpq_class v = constant_;
        for (auto const& [n, c] : coef_) {
            auto it = at.find(n);
            if (it == at.end())
                throw InputError("no value for parameter '" + n + "'");
            v += c * it->second;
        }
        return v;
    }

    std::string to_string() const
    {
        // integer coefficients print as 4t, others as a fraction of the form
        mpz_class den = constant_.get_den();
        for (auto const& [n, c] : coef_)
            mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
        Affine scaled_form = *this * mpq_class(den);
        std::string body;
        auto term = [&](mpz_class const& c, std::string const& name) {
            mpz_class mag = abs(c);
            std::string t = name.empty() ? mag.get_str() : (mag == 1 ? name : mag.get_str() + name);
            if (body.empty())
                body = sgn(c) < 0 ? "-" + t : t;
            else
                body += (sgn(c) < 0 ? " - " : " + ") + t;
        };
        if (sgn(scaled_form.constant_) != 0)
            term(scaled_form.constant_.get_num(), "");
        for (auto const& [n, c] : scaled_form.coef_)
            term(c.get_num(), n);
        if (body.empty())
            return "0";
        if (den == 1)
            return body;
        bool const single = scaled_form.coef_.size() + (sgn(scaled_form.constant_) != 0) == 1;
        return (single ? body : "(" + body + ")") + "/" + den.get_str();
    }

private:
    mpq_class constant_ = 0;
    std::map<std::string, mpq_class> coef_;
};

namespace detail {

class AffineParser
{
public:
    explicit AffineParser(std::string_view text) : text_(text) {}

    Affine parse()
    {
        Affine a = expr();
        skip();
        if (pos_ != text_.size())
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return a;
    }

private:
    [[noreturn]] void fail(std::string const& msg) const
    {
        throw InputError("expression '" + std::string(text_) + "' at column " + std::to_string(pos_ + 1) + ": " +
                         msg);
    }

    void skip()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool peek(char c)
    {
        skip();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    Affine expr()
    {
        Affine a = term();
        while (true) {
            if (peek('+')) {
                ++pos_;
                a += term();
            } else if (peek('-')) {
                ++pos_;
                a -= term();
            } else {
                return a;
            }
        }
    }

    static Affine multiply(Affine const& a, Affine const& b, AffineParser const& p)
    {
        if (a.is_constant())
            return b * a.constant();
        if (b.is_constant())
            return a * b.constant();
        p.fail("product of two non-constant terms is not affine");
    }

    Affine term()
    {
        Affine a = factor();
        while (true) {
            skip();
            if (pos_ >= text_.size())
                return a;
            char const c = text_[pos_];
            if (c == '*') {
                ++pos_;
                a = multiply(a, factor(), *this);
            } else if (c == '/') {
                ++pos_;
                Affine d = factor();
                if (!d.is_constant())
                    fail("division by a non-constant");
                if (sgn(d.constant()) == 0)
                    fail("division by zero");
                a = a * mpq_class(1 / d.constant());
            } else if (c == '(' || std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                // implicit product: 4t, 2(1+s)
                a = multiply(a, factor(), *this);
            } else {
                return a;
            }
        }
    }

    Affine factor()
    {
        skip();
        if (pos_ >= text_.size())
            fail("unexpected end of expression");
        char const c = text_[pos_];
        if (c == '-') {
            ++pos_;
            return -factor();
        }
        if (c == '+') {
            ++pos_;
            return factor();
        }
        if (c == '(') {
            ++pos_;
            Affine a = expr();
            if (!peek(')'))
                fail("expected ')'");
            ++pos_;
            return a;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t const start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            mpq_class v(std::string(text_.substr(start, pos_ - start)), 10);
            if (pos_ < text_.size() && text_[pos_] == '.') {
                ++pos_;
                std::size_t const fs = pos_;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    ++pos_;
                std::string frac(text_.substr(fs, pos_ - fs));
                if (!frac.empty()) {
                    mpz_class den;
                    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
                    v += mpq_class(mpz_class(frac, 10), den);
                }
            }
            v.canonicalize();
            return Affine(v);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t const start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' || text_[pos_] == '\''))
                ++pos_;
            return Affine::variable(std::string(text_.substr(start, pos_ - start)));
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Parses `4t`, `1+s`, `10+2*s`, `lambda/2`, `2(k-1+t)`; rejects anything
/// non-affine.
inline Affine parse_affine(std::string_view text)
{
    return detail::AffineParser(text).parse();
}

/// Exponent θ of ζ^θ = exp(2πiθ/m).
struct PhaseExponent
{
    Affine exponent;
    long modulus = 2;

    PhaseExponent() = default;
    PhaseExponent(Affine e, long m) : exponent(std::move(e)), modulus(m)
    {
        if (m < 2)
            throw InputError("phase modulus must be at least 2, got " + std::to_string(m));
    }

    friend bool operator==(PhaseExponent const&, PhaseExponent const&) = default;
};

} // namespace lensconf::cyclosolve
