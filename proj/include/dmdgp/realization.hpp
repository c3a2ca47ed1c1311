#ifndef DMDGP_REALIZATION_HPP
#define DMDGP_REALIZATION_HPP

#include <string>
#include <string_view>

#include "dmdgp/instance.hpp"
#include "dmdgp/types.hpp"

namespace dmdgp {

/// Positions for vertices 1..K in the canonical triangular frame: x1 at the
/// origin, x2 on the first axis, x3 in the first coordinate plane with
/// positive second coordinate, and so on. Removes the congruence freedom
/// deterministically; both solvers share it.
std::vector<Point> canonical_clique(const DmdgpInstance& g);

/// Normalized mean distance deviation:
///   (1/|E|) sum |  ||x_i - x_j|| - d_ij | / d_ij.
/// Throws std::invalid_argument when a position is missing.
double mde(const Realization& x, const DmdgpInstance& g);

/// Largest |  ||x_i - x_j|| - d | / max(1, d) over the given edges, skipping
/// edges with an endpoint above `up_to` (0 means no limit).
double max_relative_residual(const Realization& x, std::span<const Edge> edges,
                             int up_to = 0);

/// One line per vertex: "<v> <x1> ... <xK>", shortest round-trip decimals.
std::string write_realization(const Realization& x);

/// Inverse of write_realization; `#` starts a comment. The dimension is
/// inferred from the first line. Throws ParseError with a line number.
Realization read_realization(std::string_view text);

}  // namespace dmdgp

#endif
