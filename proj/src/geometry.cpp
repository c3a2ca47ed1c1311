#include "dmdgp/geometry.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

namespace dmdgp {

namespace {

void check_uniform_dimension(std::span<const Point> points) {
  if (points.empty()) {
    throw std::invalid_argument("expected a non-empty point sequence");
  }
  const auto k = points.front().size();
  for (const auto& p : points) {
    if (p.size() != k || !p.allFinite()) {
      throw std::invalid_argument("points must share one finite dimension");
    }
  }
}

// Unit vector spanning the orthogonal complement of the columns of
// `diffs` (K x (K-1)), i.e. the hyperplane normal.
Eigen::VectorXd orthogonal_complement(const Eigen::MatrixXd& diffs) {
  const auto k = diffs.rows();
  if (k == 1) {
    Eigen::VectorXd n(1);
    n << 1.0;
    return n;
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(diffs);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::VectorXd n = q.col(k - 1);
  n.normalize();
  return n;
}

}  // namespace

double cayley_menger(std::span<const Point> points) {
  check_uniform_dimension(points);
  const int k = static_cast<int>(points.front().size());
  if (static_cast<int>(points.size()) != k) {
    throw std::invalid_argument("cayley_menger expects exactly K points");
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(k + 1, k + 1);
  for (int i = 0; i < k; ++i) {
    m(0, i + 1) = 1.0;
    m(i + 1, 0) = 1.0;
    for (int j = i + 1; j < k; ++j) {
      const double sq = (points[i] - points[j]).squaredNorm();
      m(i + 1, j + 1) = sq;
      m(j + 1, i + 1) = sq;
    }
  }
  return m.determinant();
}

double scaled_cayley_menger(std::span<const Point> points) {
  const double cm = std::abs(cayley_menger(points));
  const int k = static_cast<int>(points.size());
  if (k == 1) {
    return cm;
  }
  // |CM| has dimension length^(2(K-1)); the product of the K(K-1)/2 squared
  // distances raised to 2/K matches it, so the ratio is dimensionless.
  double log_scale = 0.0;
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const double sq = (points[i] - points[j]).squaredNorm();
      if (sq <= 0.0) {
        return 0.0;  // coincident points: degenerate
      }
      log_scale += std::log(sq);
    }
  }
  return cm * std::exp(-2.0 / k * log_scale);
}

SphereIntersection k_laterate(std::span<const Point> centers,
                              std::span<const double> radii,
                              double tolerance) {
  check_uniform_dimension(centers);
  const int k = static_cast<int>(centers.front().size());
  if (static_cast<int>(centers.size()) != k ||
      static_cast<int>(radii.size()) != k) {
    throw std::invalid_argument("k_laterate expects K centers and K radii");
  }
  for (double r : radii) {
    if (!(r > 0.0) || !std::isfinite(r)) {
      throw std::invalid_argument("k_laterate radii must be positive");
    }
  }
  if (scaled_cayley_menger(centers) <= kSimplexDegeneracyThreshold) {
    throw DegeneracyError("k_laterate: affinely dependent sphere centers");
  }

  // Work in the frame centered at c1. Differencing the sphere equations
  // against the first one leaves K-1 linear equations plus one quadratic.
  const Point& c1 = centers[0];
  Eigen::VectorXd x0;
  Eigen::VectorXd u;  // unit kernel direction of the difference matrix
  if (k == 1) {
    x0 = Eigen::VectorXd::Zero(1);
    u = Eigen::VectorXd::Ones(1);
  } else {
    Eigen::MatrixXd a(k - 1, k);
    Eigen::VectorXd b(k - 1);
    for (int l = 1; l < k; ++l) {
      const Eigen::VectorXd diff = centers[l] - c1;
      a.row(l - 1) = diff.transpose();
      b(l - 1) =
          0.5 * (diff.squaredNorm() + radii[0] * radii[0] - radii[l] * radii[l]);
    }
    // Minimum-norm least-squares solution lies in the row space, hence is
    // orthogonal to the kernel direction.
    x0 = a.completeOrthogonalDecomposition().solve(b);
    u = orthogonal_complement(a.transpose());
  }

  const double disc = radii[0] * radii[0] - x0.squaredNorm();
  const double t = disc > 0.0 ? std::sqrt(disc) : 0.0;

  const Eigen::VectorXd xa = x0 + t * u;
  double worst = 0.0;
  for (int l = 0; l < k; ++l) {
    const double res = std::abs((xa - (centers[l] - c1)).norm() - radii[l]);
    worst = std::max(worst, res);
  }
  if (worst > tolerance) {
    std::ostringstream msg;
    msg << "k_laterate: empty sphere intersection (best residual " << worst
        << " > tolerance " << tolerance << ")";
    throw InfeasibleError(msg.str());
  }

  SphereIntersection out;
  if (2.0 * t < 1e-9) {
    out.tangent = true;
    out.plus = x0 + c1;
    out.minus = out.plus;
    return out;
  }

  // Signed volume of [c2-c1, ..., cK-c1, x-c1] is linear in t because the
  // particular solution lies in the span of the difference vectors; its sign
  // along u decides which root is the minus one.
  double orientation = 1.0;
  if (k > 1) {
    Eigen::MatrixXd vol(k, k);
    for (int l = 1; l < k; ++l) {
      vol.col(l - 1) = centers[l] - c1;
    }
    vol.col(k - 1) = u;
    orientation = vol.determinant();
  }
  if (orientation > 0.0) {
    out.plus = x0 + t * u + c1;
    out.minus = x0 - t * u + c1;
  } else {
    out.plus = x0 - t * u + c1;
    out.minus = x0 + t * u + c1;
  }
  return out;
}

HyperplaneReflector build_reflector(std::span<const Point> points) {
  check_uniform_dimension(points);
  const int k = static_cast<int>(points.front().size());
  if (static_cast<int>(points.size()) != k) {
    throw std::invalid_argument("build_reflector expects exactly K points");
  }
  HyperplaneReflector r;
  r.anchor = points.back();
  if (k == 1) {
    r.normal = Eigen::VectorXd::Ones(1);
    return r;
  }
  if (scaled_cayley_menger(points) <= kSimplexDegeneracyThreshold) {
    throw DegeneracyError("build_reflector: affinely dependent points");
  }
  Eigen::MatrixXd diffs(k, k - 1);
  for (int l = 0; l < k - 1; ++l) {
    diffs.col(l) = points[l] - r.anchor;
  }
  r.normal = orthogonal_complement(diffs);
  return r;
}

Point reflect(const HyperplaneReflector& r, const Point& y) {
  Point out = y;
  reflect_in_place(r, out);
  return out;
}

void reflect_in_place(const HyperplaneReflector& r, Point& y) {
  if (y.size() != r.normal.size() || y.size() != r.anchor.size()) {
    throw std::invalid_argument("reflect: dimension mismatch");
  }
  const double s = r.normal.dot(y - r.anchor);
  y.noalias() -= (2.0 * s) * r.normal;
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::success:
      return "success";
    case SolveStatus::timeout:
      return "timeout";
    case SolveStatus::infeasible:
      return "infeasible";
    case SolveStatus::degenerate:
      return "degenerate";
    case SolveStatus::failure:
      return "failure";
  }
  return "unknown";
}

}  // namespace dmdgp
