#pragma once

#include <istream>
#include <ostream>
#include <sstream>

#include "lensconf/simplicial/complex.hpp"

namespace lensconf::simplicial {

/// Header `dim vertex_count`, then the maximal simplices in lexicographic
/// order, one per line.
inline void write_complex(std::ostream& out, SimplicialComplex const& k)
{
    out << k.dimension() << ' ' << k.vertex_count() << '\n';
    for (auto const& s : k.maximal_simplices()) {
        for (std::size_t i = 0; i < s.size(); ++i)
            out << (i ? " " : "") << s[i];
        out << '\n';
    }
}

inline SimplicialComplex read_complex(std::istream& in)
{
    std::string line;
    std::size_t lineno = 0;
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++lineno;
            auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos || line[first] == '#')
                continue;
            return true;
        }
        return false;
    };
    auto fail = [&](std::string const& msg) {
        return InputError("complex file line " + std::to_string(lineno) + ": " + msg);
    };
    if (!next_line())
        throw InputError("complex file: missing header line");
    long long dim = 0, nv = 0;
    {
        std::istringstream hs(line);
        std::string extra;
        if (!(hs >> dim >> nv) || (hs >> extra) || dim < -1 || nv < 0)
            throw fail("expected 'dim vertex_count'");
    }
    std::vector<Simplex> simplices;
    while (next_line()) {
        std::istringstream ls(line);
        Simplex s;
        long long v;
        while (ls >> v) {
            if (v < 0 || v > 0xffffffffLL)
                throw fail("vertex id out of range");
            s.push_back(static_cast<Vertex>(v));
        }
        if (!ls.eof())
            throw fail("non-numeric vertex id");
        if (s.size() > static_cast<std::size_t>(dim) + 1)
            throw fail("simplex exceeds declared dimension " + std::to_string(dim));
        for (std::size_t i = 1; i < s.size(); ++i)
            if (s[i - 1] >= s[i])
                throw fail("vertices must be strictly increasing");
        simplices.push_back(std::move(s));
    }
    auto k = SimplicialComplex::from_simplices(std::move(simplices));
    if (k.dimension() != dim)
        throw InputError("complex file: declared dimension " + std::to_string(dim) + ", found " +
                         std::to_string(k.dimension()));
    if (static_cast<long long>(k.vertex_count()) != nv)
        throw InputError("complex file: declared " + std::to_string(nv) + " vertices, found " +
                         std::to_string(k.vertex_count()));
    return k;
}

} // namespace lensconf::simplicial
