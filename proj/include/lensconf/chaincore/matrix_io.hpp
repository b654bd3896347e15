#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>

#include "lensconf/chaincore/sparse_matrix.hpp"

namespace lensconf::chaincore {

using AnyMatrix = std::variant<SparseMatrix<Integers>, SparseMatrix<Rationals>, SparseMatrix<PrimeField>>;

/// Writes `rows cols ring` followed by `row col value` lines in column-major
/// order.
template <typename Ring>
void write_matrix(std::ostream& out, SparseMatrix<Ring> const& m)
{
    Ring const& ring = m.ring();
    out << m.rows() << ' ' << m.cols() << ' ' << ring.descriptor().name() << '\n';
    for (std::size_t j = 0; j < m.cols(); ++j)
        for (auto const& e : m.column(j))
            out << e.index << ' ' << j << ' ' << ring.to_string(e.value) << '\n';
}

inline void write_matrix(std::ostream& out, AnyMatrix const& m)
{
    std::visit([&](auto const& x) { write_matrix(out, x); }, m);
}

/// Parses the sparse matrix format. Errors carry the 1-based line number.
inline AnyMatrix read_matrix(std::istream& in)
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
    if (!next_line())
        throw InputError("matrix file: missing header line");
    std::istringstream header(line);
    std::size_t rows = 0, cols = 0;
    std::string ring_name;
    if (!(header >> rows >> cols >> ring_name))
        throw InputError("matrix file line " + std::to_string(lineno) + ": expected 'rows cols ring'");
    CoefficientRing const desc = CoefficientRing::parse(ring_name);

    return dispatch(desc, [&](auto ring) -> AnyMatrix {
        using Ring = decltype(ring);
        std::vector<std::tuple<std::uint32_t, std::uint32_t, typename Ring::value_type>> triplets;
        while (next_line()) {
            std::istringstream ls(line);
            long long r = -1, c = -1;
            std::string value, extra;
            if (!(ls >> r >> c >> value) || (ls >> extra) || r < 0 || c < 0)
                throw InputError("matrix file line " + std::to_string(lineno) + ": expected 'row col value'");
            try {
                triplets.emplace_back(static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c), ring.parse(value));
            } catch (InputError const& e) {
                throw InputError("matrix file line " + std::to_string(lineno) + ": " + e.what());
            }
        }
        return SparseMatrix<Ring>::from_triplets(ring, rows, cols, std::move(triplets));
    });
}

} // namespace lensconf::chaincore
