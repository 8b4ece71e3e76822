#pragma once

#include <vector>

#include "steklov/curve.hpp"

namespace steklov {

struct QuadNode {
  Vec2 x;
  double w = 0.0;  // may be negative for the boundary-cap corrections
};

// Polar tensor rule on the full disk B(center, r): Gauss-Legendre in the radius times the
// periodic trapezoid rule in the angle.
std::vector<QuadNode> disk_quadrature(const Vec2& center, double r, int radial_order, int angular_count);

// M-point periodic trapezoid rule on the circle of radius r (arclength weights).
std::vector<QuadNode> circle_quadrature(const Vec2& center, double r, int angular_count);

// Intersection geometry of a ball centred at gamma(t_center) with the boundary. The curve
// enters the ball along a single parameter interval (t_minus, t_plus) and leaves through the
// circle at angles phi_plus (forward crossing) and phi_minus (backward crossing). Angles are
// unwrapped so that phi_plus < phi_minus < phi_plus + 2 pi and the interior arc is
// [phi_plus, phi_minus].
struct BoundaryBall {
  Vec2 center;
  double t_center = 0.0;
  double radius = 0.0;
  double t_minus = 0.0;
  double t_plus = 0.0;
  double psi0 = 0.0;  // angle of the unit tangent at the centre
  double phi_plus = 0.0;
  double phi_minus = 0.0;
};

// Throws kRegionViolation when another part of the curve meets the ball or the ball swallows
// the whole curve.
BoundaryBall boundary_ball(const BoundaryCurve& curve, double t_center, double r);

// Split rules over B cap Omega and B minus Omega. Each is a half-disk rule plus signed
// corrections along the enclosed curve piece, so the integrand is only sampled along rays in
// a thin sliver on the far side of the curve; it must extend smoothly there.
struct SplitBallQuadrature {
  std::vector<QuadNode> interior;
  std::vector<QuadNode> exterior;
};

SplitBallQuadrature split_ball_quadrature(const BoundaryCurve& curve, const BoundaryBall& ball, int order);

// Arcs of the circle of radius r inside and outside the domain, Gauss-Legendre with `order`
// nodes per arc (arclength weights).
struct SplitCircleQuadrature {
  std::vector<QuadNode> interior;
  std::vector<QuadNode> exterior;
};

SplitCircleQuadrature split_circle_quadrature(const BoundaryBall& ball, int order);

}  // namespace steklov
