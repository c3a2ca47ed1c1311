#ifndef DMDGP_TYPES_HPP
#define DMDGP_TYPES_HPP

#include <Eigen/Core>
#include <stdexcept>
#include <string>
#include <vector>

namespace dmdgp {

/// A position in K-dimensional Euclidean space.
using Point = Eigen::VectorXd;

/// Positions for vertices 1..n; vertex v lives at index v-1.
/// Uninitialized entries are zero-sized vectors.
using Realization = std::vector<Point>;

/// Weighted edge {i,j} with i < j and distance d > 0.
struct Edge {
  int i = 0;
  int j = 0;
  double d = 0.0;

  friend bool operator==(const Edge& a, const Edge& b) {
    return a.i == b.i && a.j == b.j;
  }
};

/// Affinely dependent input where an affine span of dimension K-1 is required.
struct DegeneracyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A sphere system (or clique) without a real solution beyond tolerance.
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Structural violation of the instance contract (missing edges, bad ranges,
/// duplicate edges, inconsistent input data).
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Rejection budget exhausted while sampling a synthetic chain.
struct GenerationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input text; the message carries the offending line number.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// No reflector composition matched the pruning distance within tolerance.
struct SubproblemFailure : std::runtime_error {
  SubproblemFailure(const std::string& msg, Edge edge, double residual,
                    int symmetry_count)
      : std::runtime_error(msg),
        edge(edge),
        best_residual(residual),
        symmetry_count(symmetry_count) {}

  Edge edge;
  double best_residual = 0.0;
  int symmetry_count = 0;
};

enum class SolveStatus {
  success,
  timeout,
  infeasible,
  degenerate,
  failure,
};

std::string to_string(SolveStatus s);

}  // namespace dmdgp

#endif
