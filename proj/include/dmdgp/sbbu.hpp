#ifndef DMDGP_SBBU_HPP
#define DMDGP_SBBU_HPP

#include <cstdint>
#include <limits>

#include "dmdgp/instance.hpp"
#include "dmdgp/partition.hpp"
#include "dmdgp/types.hpp"

namespace dmdgp {

struct SbbuEdgeTrace {
  int i = 0;
  int j = 0;
  bool skipped = false;
  int s_size = 0;                  // |S^ij| (0 when skipped)
  std::vector<int> s_vertices;     // the local symmetry vertices, ascending
  std::uint64_t candidates = 0;    // reflector compositions evaluated
  double residual = 0.0;           // best residual (solve) / residual at skip
  double second_residual = std::numeric_limits<double>::infinity();
  bool tie = false;                // two candidates tied at the minimum
};

struct SbbuStats {
  std::vector<SbbuEdgeTrace> trace;
  std::uint64_t work = 0;      // sum of 2^|S^ij| over explicitly solved edges
  std::uint64_t max_work = 0;  // max of those terms
  double wall_time = 0.0;
};

struct SbbuResult {
  SolveStatus status = SolveStatus::failure;
  std::string message;
  Realization x;
  SbbuStats stats;
  double mde = -1.0;
};

struct SbbuOptions {
  double tolerance = 1e-4;  // relative, scaled by max(1, d)
  // Hard cap on |S^ij| for one exhaustive scan; beyond it the subproblem is
  // declared intractable instead of overflowing the candidate counter.
  int max_symmetry_bits = 62;
};

/// Solver state: a growing partial realization x_1..x_t plus the component
/// partition over v_{K+1}..v_n and the work log.
struct SbbuState {
  explicit SbbuState(const DmdgpInstance& g)
      : x(g.n()), t(0), partition(g.dim(), g.n()) {}

  Realization x;
  int t;
  ComponentPartition partition;
  SbbuStats stats;
};

/// Grow the partial realization up to vertex j using only discretization
/// distances, taking the minus root at every step. Positions 1..t are never
/// recomputed. Throws DegeneracyError (naming the vertex) on degenerate
/// predecessors and ValidationError on a missing discretization distance.
void initialize_positions(SbbuState& state, const DmdgpInstance& g, int j);

/// Solve the subproblem spanned by pruning edge e: derive S^ij from the
/// partition, build one reflector per symmetry vertex from the current
/// positions, scan all 2^|S^ij| compositions applied to x_j (Gray-code
/// order, incremental evaluation), apply the winning composition to
/// x_{i+K+1}..x_t and merge the partition over [i+K, j]. Appends a trace
/// entry and updates the work counters. Requires t >= j and
/// find(i+K) != find(j). Throws SubproblemFailure when the best residual
/// exceeds tolerance * max(1, d).
void solve_subproblem(SbbuState& state, const DmdgpInstance& g, const Edge& e,
                      const SbbuOptions& options = {});

/// Symmetry-based build-up: processes pruning edges sorted by increasing j
/// (ties by decreasing i), skipping edges whose endpoints' components
/// already coincide, then grows the remaining suffix. The residual of every
/// skipped edge is evaluated and recorded, not assumed.
SbbuResult sbbu_solve(const DmdgpInstance& g, const SbbuOptions& options = {});

/// Conceptual variant: keeps a global binary vector s over vertices
/// K+1..n and a full realization x(s) derived from x0 with reflectors
/// computed from x0 only. For each pruning edge with nonempty S^ij it
/// exhaustively searches the free components of s. x0 must satisfy the
/// discretization constraints. Refuses instances with n - K > 20.
SbbuResult sbbu_conceptual_solve(const DmdgpInstance& g, const Realization& x0,
                                 double tolerance = 1e-4);

}  // namespace dmdgp

#endif
