#pragma once

#include <istream>
#include <sstream>
#include <unordered_map>

#include "lensconf/cupmassey/dga.hpp"

namespace lensconf::cupmassey {

/// DGA text format:
///
///   BASIS
///   <name> <degree>          one per line
///   UNIT <name>
///   DIFFERENTIAL
///   <name> -> <combination>  unlisted elements are cocycles
///   PRODUCT
///   <name>.<name> -> <combination>
///
/// A combination is `0` or terms like `ab - 2/3*ac + c`. Products with the
/// unit are implied. `#` starts a comment line.
struct RawDGA
{
    using Combination = std::vector<std::pair<std::size_t, mpq_class>>;
    std::vector<std::pair<std::string, int>> basis;
    std::optional<std::size_t> unit;
    std::map<std::size_t, Combination> differential;
    std::map<std::pair<std::size_t, std::size_t>, Combination> product;

    template <typename Ring>
    DGATable<Ring> table(Ring const& ring) const
    {
        DGATable<Ring> t;
        for (auto const& [n, d] : basis)
            t.basis.push_back({n, d});
        t.unit = unit;
        auto convert = [&](Combination const& c) {
            std::vector<std::pair<std::size_t, typename Ring::value_type>> out;
            for (auto const& [id, q] : c)
                out.emplace_back(id, chaincore::ring_from_rational(ring, q));
            return out;
        };
        for (auto const& [id, c] : differential)
            t.differential[id] = convert(c);
        for (auto const& [key, c] : product)
            t.product[key] = convert(c);
        return t;
    }
};

inline RawDGA read_dga_text(std::istream& in)
{
    RawDGA raw;
    std::unordered_map<std::string, std::size_t> ids;
    enum class Section { none, basis, differential, product } section = Section::none;
    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](std::string const& msg) {
        return InputError("DGA file line " + std::to_string(lineno) + ": " + msg);
    };
    auto lookup = [&](std::string const& name) {
        auto it = ids.find(name);
        if (it == ids.end())
            throw fail("unknown basis element '" + name + "'");
        return it->second;
    };
    auto parse_combination = [&](std::string const& text) {
        RawDGA::Combination out;
        std::size_t pos = 0;
        auto skip_ws = [&] {
            while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
                ++pos;
        };
        skip_ws();
        if (text.substr(pos) == "0")
            return out;
        bool first = true;
        while (true) {
            skip_ws();
            if (pos >= text.size()) {
                if (first)
                    throw fail("empty combination");
                break;
            }
            int sign = 1;
            if (text[pos] == '+' || text[pos] == '-') {
                sign = text[pos] == '-' ? -1 : 1;
                ++pos;
                skip_ws();
            } else if (!first) {
                throw fail("expected '+' or '-' between terms");
            }
            first = false;
            std::size_t const start = pos;
            while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) && text[pos] != '+' &&
                   text[pos] != '-')
                ++pos;
            std::string token = text.substr(start, pos - start);
            if (token.empty())
                throw fail("missing term");
            mpq_class coef = 1;
            auto star = token.find('*');
            if (star != std::string::npos) {
                std::string c = token.substr(0, star);
                token = token.substr(star + 1);
                if (coef.set_str(c, 10) != 0)
                    throw fail("bad coefficient '" + c + "'");
                coef.canonicalize();
            }
            out.emplace_back(lookup(token), coef * sign);
        }
        return out;
    };

    while (std::getline(in, line)) {
        ++lineno;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        std::istringstream ls(line);
        std::string head;
        ls >> head;
        if (head == "BASIS") {
            section = Section::basis;
            continue;
        }
        if (head == "DIFFERENTIAL") {
            section = Section::differential;
            continue;
        }
        if (head == "PRODUCT") {
            section = Section::product;
            continue;
        }
        if (head == "UNIT") {
            std::string name, extra;
            if (!(ls >> name) || (ls >> extra))
                throw fail("expected 'UNIT <name>'");
            raw.unit = lookup(name);
            continue;
        }
        if (section == Section::none)
            throw fail("expected a section header (BASIS, DIFFERENTIAL, PRODUCT)");
        if (section == Section::basis) {
            int degree = 0;
            std::string extra;
            if (!(ls >> degree) || (ls >> extra))
                throw fail("expected '<name> <degree>'");
            if (head.find_first_of("+-*.>") != std::string::npos)
                throw fail("basis name '" + head + "' contains a reserved character");
            if (!ids.emplace(head, raw.basis.size()).second)
                throw fail("duplicate basis element '" + head + "'");
            raw.basis.emplace_back(head, degree);
            continue;
        }
        auto arrow = line.find("->");
        if (arrow == std::string::npos)
            throw fail("expected '->'");
        std::istringstream lhs(line.substr(0, arrow));
        std::string left, extra;
        if (!(lhs >> left) || (lhs >> extra))
            throw fail("malformed left-hand side");
        auto rhs = parse_combination(line.substr(arrow + 2));
        if (section == Section::differential) {
            auto id = lookup(left);
            if (raw.differential.count(id))
                throw fail("differential of '" + left + "' given twice");
            raw.differential[id] = std::move(rhs);
        } else {
            auto dot = left.find('.');
            if (dot == std::string::npos)
                throw fail("product must be written a.b");
            auto key = std::make_pair(lookup(left.substr(0, dot)), lookup(left.substr(dot + 1)));
            if (raw.product.count(key))
                throw fail("product '" + left + "' given twice");
            raw.product[key] = std::move(rhs);
        }
    }
    if (raw.basis.empty())
        throw InputError("DGA file: no basis elements");
    return raw;
}

template <typename Ring>
DGA<Ring> read_dga(std::istream& in, Ring ring = Ring{})
{
    return dga_from_table(ring, read_dga_text(in).table(ring));
}

} // namespace lensconf::cupmassey
