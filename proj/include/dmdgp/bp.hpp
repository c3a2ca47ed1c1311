#ifndef DMDGP_BP_HPP
#define DMDGP_BP_HPP

#include <cstdint>

#include "dmdgp/instance.hpp"
#include "dmdgp/types.hpp"

namespace dmdgp {

struct BpStats {
  std::uint64_t nodes_expanded = 0;  // accepted vertex placements
  std::uint64_t prunes = 0;          // candidates rejected by a pruning edge
  std::uint64_t solutions_found = 0;
  double wall_time = 0.0;  // seconds
};

struct BpLimits {
  std::uint64_t max_nodes = 0;  // 0 = unlimited
  double max_seconds = 0.0;     // 0 = unlimited
};

struct BpResult {
  SolveStatus status = SolveStatus::failure;
  std::string message;
  Realization x;  // populated on success
  BpStats stats;
  double mde = -1.0;  // on success
};

/// Depth-first search over the binary candidate tree, x+ branch before x-,
/// root clique in the canonical frame. Returns the first realization whose
/// pruning-edge residuals stay within tolerance (relative, scaled by
/// max(1, d)). Iterative; depth is bounded only by n.
BpResult bp_solve(const DmdgpInstance& g, double tolerance = 1e-4,
                  BpLimits limits = {});

struct BpEnumeration {
  std::vector<Realization> solutions;
  BpStats stats;
};

/// Full DFS without early stop; collects every leaf satisfying all pruning
/// edges within tolerance. Refuses instances with n - K > 24.
BpEnumeration enumerate_all_solutions(const DmdgpInstance& g,
                                      double tolerance = 1e-4);

/// Distinct values of ||x_j - x_i|| over all realizations of the
/// discretization-only tree, deduplicated at `dedup_tol` relative.
/// Refuses instances with n - K > 24.
std::vector<double> distance_value_set(const DmdgpInstance& g, int i, int j,
                                       double dedup_tol = 1e-7);

}  // namespace dmdgp

#endif
