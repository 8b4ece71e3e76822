#include "steklov/tube.hpp"

#include <cmath>
#include <sstream>

#include "steklov/error.hpp"

namespace steklov {

TubeNeighborhood::TubeNeighborhood(CurvePtr curve, double halfwidth)
    : curve_(std::move(curve)), halfwidth_(halfwidth) {
  if (!curve_) raise(ErrorCode::kInvalidArgument, "tube needs a curve");
  if (!(halfwidth_ > 0.0)) raise(ErrorCode::kInvalidArgument, "tube half-width must be positive");
  if (halfwidth_ * curve_->max_abs_curvature() >= 1.0) {
    std::ostringstream msg;
    msg << "half-width " << halfwidth_ << " violates delta * max|kappa| < 1 (max|kappa| = "
        << curve_->max_abs_curvature() << ")";
    raise(ErrorCode::kInvalidArgument, msg.str());
  }
  if (halfwidth_ > curve_->reach()) {
    std::ostringstream msg;
    msg << "half-width " << halfwidth_ << " exceeds the curve reach " << curve_->reach();
    raise(ErrorCode::kInvalidArgument, msg.str());
  }
}

TubePoint signed_distance(const TubeNeighborhood& tube, const Vec2& x) {
  const CurveProjection p = tube.curve().project(x);
  if (!(p.distance < tube.halfwidth())) {
    std::ostringstream msg;
    msg << "point (" << x.x() << ", " << x.y() << ") at distance " << p.distance
        << " is outside the tube of half-width " << tube.halfwidth();
    raise(ErrorCode::kOutOfTube, msg.str());
  }
  return {p.t, p.offset};
}

Vec2 tube_to_cartesian(const BoundaryCurve& curve, const TubePoint& p) {
  const CurveFrame f = curve.eval(p.t_foot);
  return f.point + p.s * f.normal;
}

Vec2 signed_distance_gradient(const TubeNeighborhood& tube, const Vec2& x) {
  const TubePoint p = signed_distance(tube, x);
  return tube.curve().eval(p.t_foot).normal;
}

double laplacian_of_distance(const TubeNeighborhood& tube, const Vec2& x) {
  const TubePoint p = signed_distance(tube, x);
  if (p.s > 1e-12 * (1.0 + tube.curve().diameter())) {
    raise(ErrorCode::kOutOfDomain, "laplacian_of_distance needs an interior point");
  }
  const double kappa = tube.curve().eval(p.t_foot).curvature;
  const double d = -p.s;
  const double denom = 1.0 - kappa * d;
  if (!(denom > 1e-12)) raise(ErrorCode::kCurvatureSingularity, "1 - kappa d vanishes");
  return -kappa / denom;
}

Vec2 reflect(const TubeNeighborhood& tube, const Vec2& x) {
  const TubePoint p = signed_distance(tube, x);
  const CurveFrame f = tube.curve().eval(p.t_foot);
  return f.point - p.s * f.normal;
}

Mat2 reflection_jacobian(const TubeNeighborhood& tube, const Vec2& x) {
  const double h = 1e-5 * tube.halfwidth();
  Mat2 j;
  for (int c = 0; c < 2; ++c) {
    Vec2 e = Vec2::Zero();
    e[c] = h;
    j.col(c) = (reflect(tube, x + e) - reflect(tube, x - e)) / (2.0 * h);
  }
  return j;
}

Mat2 reflection_jacobian_exact(const TubeNeighborhood& tube, const Vec2& x) {
  const TubePoint p = signed_distance(tube, x);
  const CurveFrame f = tube.curve().eval(p.t_foot);
  const double denom = 1.0 + p.s * f.curvature;
  if (!(std::abs(denom) > 1e-12)) raise(ErrorCode::kCurvatureSingularity, "1 + s kappa vanishes");
  const double stretch = (1.0 - p.s * f.curvature) / denom;
  return stretch * f.tangent * f.tangent.transpose() - f.normal * f.normal.transpose();
}

}  // namespace steklov
