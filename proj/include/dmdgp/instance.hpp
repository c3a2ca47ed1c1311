#ifndef DMDGP_INSTANCE_HPP
#define DMDGP_INSTANCE_HPP

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "dmdgp/types.hpp"

namespace dmdgp {

/// A weighted graph over vertices 1..n in the discretization order, with
/// dimension K. Immutable once built (add_edge during construction only).
class DmdgpInstance {
 public:
  DmdgpInstance(int n, int K);

  int n() const { return n_; }
  int dim() const { return k_; }

  /// Throws ValidationError on out-of-range vertices, non-positive or
  /// non-finite distance, and duplicate pairs (duplicates are data bugs,
  /// not merges).
  void add_edge(int i, int j, double d);

  bool has_edge(int i, int j) const;
  /// Distance for an existing edge; throws std::invalid_argument otherwise.
  double distance(int i, int j) const;

  /// Edges in insertion order (deterministic).
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }

 private:
  static std::uint64_t key(int i, int j);

  int n_;
  int k_;
  std::vector<Edge> edges_;
  std::unordered_map<std::uint64_t, double> index_;
};

/// Edges split by the |i-j| <= K rule.
struct EdgePartition {
  std::vector<Edge> discretization;
  std::vector<Edge> pruning;
};

EdgePartition classify_edges(const DmdgpInstance& g);

struct ValidationReport {
  struct TriangleViolation {
    int a, b, c;     // window vertices, a < b < c
    double excess;   // longest side minus the sum of the other two
  };

  std::vector<std::pair<int, int>> missing_edges;
  std::vector<TriangleViolation> triangle_violations;

  bool ok() const {
    return missing_edges.empty() && triangle_violations.empty();
  }
  std::string summary() const;
};

/// Structural check: every pair at index distance <= K must be present, and
/// the distances inside each window of K+1 consecutive vertices must satisfy
/// the triangle inequality. Geometric nondegeneracy is checked at solve time.
ValidationReport validate_dmdgp(const DmdgpInstance& g);

/// Pruning edges sorted by increasing j, ties by decreasing i.
using PruningOrder = std::vector<Edge>;

PruningOrder order_pruning_edges(const EdgePartition& partition);

/// Edges strictly before e in the order. Throws std::invalid_argument when
/// e is not part of the order.
std::vector<Edge> preceding_edges(const PruningOrder& order, const Edge& e);

/// Global symmetry vertices: indices l in [K+1, n] not covered by any edge
/// {i,j} with i+K < l <= j. Sorted ascending; always contains K+1.
std::vector<int> symmetry_vertices(const DmdgpInstance& g);

/// Brute-force local symmetry vertices of the subproblem spanned by pruning
/// edge e given the preceding edges: indices l in [i+K+1, j] not covered by
/// any {u,w} in `preceding` with u+K < l <= w. Sorted ascending.
std::vector<int> local_symmetry_vertices(const DmdgpInstance& g, const Edge& e,
                                         std::span<const Edge> preceding);

}  // namespace dmdgp

#endif
