#include "steklov/ball_quadrature.hpp"

#include <cmath>
#include <sstream>

#include "steklov/error.hpp"
#include "steklov/quadrature.hpp"

namespace steklov {
namespace {

Vec2 unit(double phi) { return {std::cos(phi), std::sin(phi)}; }

// Nearest representative of phi to ref.
double unwrap_near(double phi, double ref) { return ref + std::remainder(phi - ref, kTwoPi); }

// Crossing of |gamma(t) - y| = r marching from t_center in direction dir (+1 or -1).
double find_crossing(const BoundaryCurve& curve, double t_center, double r, int dir,
                     double speed) {
  const double coarse = kTwoPi / curve.sample_count();
  const double h = std::min(coarse, 0.25 * r / speed);
  auto rho = [&](double t) { return curve.chord(t, t_center).norm(); };
  double a = t_center;
  double b = t_center;
  bool found = false;
  for (double travelled = 0.0; travelled < kTwoPi; travelled += h) {
    b = a + dir * h;
    if (rho(b) >= r) {
      found = true;
      break;
    }
    a = b;
  }
  if (!found) raise(ErrorCode::kRegionViolation, "ball contains the whole boundary curve");
  // Bisection; a is inside the ball, b outside.
  for (int iter = 0; iter < 200 && std::abs(b - a) > 1e-15 * (1.0 + std::abs(a)); ++iter) {
    const double m = 0.5 * (a + b);
    if (rho(m) >= r) b = m; else a = m;
  }
  return 0.5 * (a + b);
}

void add_half_disk(std::vector<QuadNode>& out, const Vec2& y, double r, double phi0, int order) {
  const GaussLegendre& g = gauss_legendre(order);
  for (int i = 0; i < order; ++i) {
    const double phi = phi0 + 0.5 * kPi * (1.0 + g.nodes[i]);
    const double wphi = 0.5 * kPi * g.weights[i];
    const Vec2 e = unit(phi);
    for (int j = 0; j < order; ++j) {
      const double rho = 0.5 * r * (1.0 + g.nodes[j]);
      out.push_back({y + rho * e, wphi * 0.5 * r * g.weights[j] * rho});
    }
  }
}

}  // namespace

std::vector<QuadNode> disk_quadrature(const Vec2& center, double r, int radial_order, int angular_count) {
  const GaussLegendre& g = gauss_legendre(radial_order);
  std::vector<QuadNode> out;
  out.reserve(static_cast<std::size_t>(radial_order) * angular_count);
  const double wphi = kTwoPi / angular_count;
  for (int a = 0; a < angular_count; ++a) {
    const Vec2 e = unit(a * wphi);
    for (int j = 0; j < radial_order; ++j) {
      const double rho = 0.5 * r * (1.0 + g.nodes[j]);
      out.push_back({center + rho * e, wphi * 0.5 * r * g.weights[j] * rho});
    }
  }
  return out;
}

std::vector<QuadNode> circle_quadrature(const Vec2& center, double r, int angular_count) {
  std::vector<QuadNode> out(angular_count);
  const double h = kTwoPi / angular_count;
  for (int a = 0; a < angular_count; ++a) out[a] = {center + r * unit(a * h), r * h};
  return out;
}

BoundaryBall boundary_ball(const BoundaryCurve& curve, double t_center, double r) {
  if (!(r > 0.0)) raise(ErrorCode::kInvalidArgument, "ball radius must be positive");
  const CurveFrame f = curve.eval(t_center);
  BoundaryBall ball;
  ball.center = f.point;
  ball.t_center = t_center;
  ball.radius = r;
  ball.t_plus = find_crossing(curve, t_center, r, +1, f.speed);
  ball.t_minus = find_crossing(curve, t_center, r, -1, f.speed);
  if (ball.t_plus - ball.t_minus >= kTwoPi) {
    raise(ErrorCode::kRegionViolation, "ball contains the whole boundary curve");
  }
  // The rest of the curve must stay outside the ball.
  const int s = curve.sample_count();
  const double h = kTwoPi / s;
  for (int i = 0; i < s; ++i) {
    double t = curve.sample_param(i);
    while (t < ball.t_minus) t += kTwoPi;
    while (t >= ball.t_minus + kTwoPi) t -= kTwoPi;
    if (t <= ball.t_plus + h || t >= ball.t_minus + kTwoPi - h) continue;
    if ((curve.sample_point(i) - f.point).norm() <= r) {
      std::ostringstream msg;
      msg << "ball of radius " << r << " at t = " << t_center
          << " meets a second part of the boundary";
      raise(ErrorCode::kRegionViolation, msg.str());
    }
  }
  ball.psi0 = std::atan2(f.tangent.y(), f.tangent.x());
  const Vec2 dp = curve.chord(ball.t_plus, t_center);
  const Vec2 dm = curve.chord(ball.t_minus, t_center);
  ball.phi_plus = unwrap_near(std::atan2(dp.y(), dp.x()), ball.psi0);
  ball.phi_minus = unwrap_near(std::atan2(dm.y(), dm.x()), ball.psi0 + kPi);
  if (!(ball.phi_plus < ball.phi_minus)) {
    raise(ErrorCode::kRegionViolation, "ball crossing angles are out of order");
  }
  return ball;
}

SplitBallQuadrature split_ball_quadrature(const BoundaryCurve& curve, const BoundaryBall& ball, int order) {
  SplitBallQuadrature q;
  const Vec2& y = ball.center;
  const double r = ball.radius;
  add_half_disk(q.interior, y, r, ball.psi0, order);
  add_half_disk(q.exterior, y, r, ball.psi0 + kPi, order);

  // Along each ray through the enclosed curve piece, the sliver [rho(t), r] is added to one
  // side and removed from the other with the signed angular speed.
  const GaussLegendre& g = gauss_legendre(order);
  const double pieces[2][2] = {{ball.t_center, ball.t_plus}, {ball.t_minus, ball.t_center}};
  for (const auto& piece : pieces) {
    const double ta = piece[0];
    const double tb = piece[1];
    for (int i = 0; i < order; ++i) {
      const double t = 0.5 * (ta + tb) + 0.5 * (tb - ta) * g.nodes[i];
      const double wt = 0.5 * (tb - ta) * g.weights[i];
      const Vec2 diff = curve.chord(t, ball.t_center);
      const double rho_t = diff.norm();
      const double dphi = cross(diff, curve.derivative(t, 1)) / (rho_t * rho_t);
      const Vec2 e = diff / rho_t;
      for (int j = 0; j < order; ++j) {
        const double rho = rho_t + 0.5 * (r - rho_t) * (1.0 + g.nodes[j]);
        const double w = wt * dphi * 0.5 * (r - rho_t) * g.weights[j] * rho;
        const Vec2 x = y + rho * e;
        q.interior.push_back({x, -w});
        q.exterior.push_back({x, w});
      }
    }
  }
  return q;
}

SplitCircleQuadrature split_circle_quadrature(const BoundaryBall& ball, int order) {
  SplitCircleQuadrature q;
  const GaussLegendre& g = gauss_legendre(order);
  auto arc = [&](std::vector<QuadNode>& out, double a, double b) {
    for (int i = 0; i < order; ++i) {
      const double phi = 0.5 * (a + b) + 0.5 * (b - a) * g.nodes[i];
      out.push_back({ball.center + ball.radius * unit(phi), ball.radius * 0.5 * (b - a) * g.weights[i]});
    }
  };
  arc(q.interior, ball.phi_plus, ball.phi_minus);
  arc(q.exterior, ball.phi_minus, ball.phi_plus + kTwoPi);
  return q;
}

}  // namespace steklov
