#ifndef DMDGP_GEOMETRY_HPP
#define DMDGP_GEOMETRY_HPP

#include <span>

#include "dmdgp/types.hpp"

namespace dmdgp {

/// Affine reflection through the hyperplane spanned by K affinely
/// independent points, stored as a unit normal plus one point on the plane.
struct HyperplaneReflector {
  Eigen::VectorXd normal;  // unit length
  Point anchor;
};

/// Cayley-Menger determinant of K points in R^K: the determinant of the
/// (K+1)x(K+1) matrix bordered by ones over the squared-distance matrix.
/// Vanishes exactly when the points fail to span a (K-1)-dimensional
/// affine subspace.
double cayley_menger(std::span<const Point> points);

/// |CM| divided by the geometric scale of the point set, giving a
/// dimensionless degeneracy measure that is robust to the unit choice.
double scaled_cayley_menger(std::span<const Point> points);

/// Scaled Cayley-Menger values at or below this are treated as degenerate.
inline constexpr double kSimplexDegeneracyThreshold = 1e-10;

struct SphereIntersection {
  Point plus;
  Point minus;
  bool tangent = false;  // the two roots coincided and were collapsed
};

/// Intersect K spheres in R^K. Returns the two intersection points; `minus`
/// is the root whose signed volume det[c2-c1, ..., cK-c1, x-c1] is <= 0.
/// Throws DegeneracyError when the centers are affinely dependent and
/// InfeasibleError when no point matches all radii within `tolerance`
/// (absolute residual on each sphere). Roots closer than 1e-9 are collapsed
/// into one point with the tangent flag set.
SphereIntersection k_laterate(std::span<const Point> centers,
                              std::span<const double> radii, double tolerance);

/// Reflector through the hyperplane of the K given points; the anchor is the
/// last input point. Throws DegeneracyError on affinely dependent input.
HyperplaneReflector build_reflector(std::span<const Point> points);

/// (I - 2 p p^T)(y - anchor) + anchor
Point reflect(const HyperplaneReflector& r, const Point& y);
void reflect_in_place(const HyperplaneReflector& r, Point& y);

}  // namespace dmdgp

#endif
