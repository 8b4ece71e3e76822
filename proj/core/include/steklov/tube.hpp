#pragma once

#include "steklov/curve.hpp"

namespace steklov {

// Tube coordinates of a point near the boundary: x = gamma(t_foot) + s nu(t_foot).
struct TubePoint {
  double t_foot = 0.0;
  double s = 0.0;  // negative inside the domain
};

// Two-sided collar {x : dist(x, boundary) < delta} on which the nearest-point projection is
// single valued. Construction rejects delta >= reach or delta * max|kappa| >= 1.
//
// Only tube injectivity is enforced. Connectedness of the complement of the inner collar and
// the chain-curve property used by the doubling arguments are not checked.
class TubeNeighborhood {
 public:
  TubeNeighborhood(CurvePtr curve, double halfwidth);

  const BoundaryCurve& curve() const { return *curve_; }
  const CurvePtr& curve_ptr() const { return curve_; }
  double halfwidth() const { return halfwidth_; }

 private:
  CurvePtr curve_;
  double halfwidth_;
};

// Throws kOutOfTube when |s| >= delta; kFootPointFailure when the projection fails.
TubePoint signed_distance(const TubeNeighborhood& tube, const Vec2& x);

Vec2 tube_to_cartesian(const BoundaryCurve& curve, const TubePoint& p);

// Gradient of the signed offset s; equals nu(foot), so grad d = -nu inside.
Vec2 signed_distance_gradient(const TubeNeighborhood& tube, const Vec2& x);

// Laplacian of the distance d = -s for interior tube points: -kappa / (1 - kappa d).
double laplacian_of_distance(const TubeNeighborhood& tube, const Vec2& x);

// Psi(y + s nu(y)) = y - s nu(y). An involution fixing the boundary.
Vec2 reflect(const TubeNeighborhood& tube, const Vec2& x);

// Central differences of reflect with step 1e-5 * delta.
Mat2 reflection_jacobian(const TubeNeighborhood& tube, const Vec2& x);

// Closed form in the tube frame: ((1 - s kappa)/(1 + s kappa)) T T^T - nu nu^T.
Mat2 reflection_jacobian_exact(const TubeNeighborhood& tube, const Vec2& x);

}  // namespace steklov
