#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "steklov/ball_quadrature.hpp"
#include "steklov/curve.hpp"
#include "steklov/error.hpp"
#include "steklov/random.hpp"
#include "steklov/tube.hpp"

namespace steklov {
namespace {

// Ellipse curvature written out directly from the parametrization (a cos t, b sin t).
double ellipse_curvature(double a, double b, double t) {
  const double st = std::sin(t), ct = std::cos(t);
  return a * b / std::pow(a * a * st * st + b * b * ct * ct, 1.5);
}

// argmin_t |x - gamma(t)| over a uniform grid.
double brute_force_foot(const BoundaryCurve& c, const Vec2& x, int n) {
  double best = 1e300, arg = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = kTwoPi * i / n;
    const double d = (c.point(t) - x).squaredNorm();
    if (d < best) {
      best = d;
      arg = t;
    }
  }
  return arg;
}

// Do the normal segments of half-width delta at n nodes cross anywhere?
bool normal_segments_collide(const BoundaryCurve& c, double delta, int n) {
  std::vector<Vec2> a(n), b(n);
  for (int i = 0; i < n; ++i) {
    const CurveFrame f = c.eval(kTwoPi * i / n);
    a[i] = f.point - delta * f.normal;
    b[i] = f.point + delta * f.normal;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Vec2 r = b[i] - a[i], s = b[j] - a[j];
      const double den = cross(r, s);
      if (std::abs(den) < 1e-14) continue;
      const double u = cross(a[j] - a[i], s) / den;
      const double v = cross(a[j] - a[i], r) / den;
      if (u > 0.0 && u < 1.0 && v > 0.0 && v < 1.0) return true;
    }
  }
  return false;
}

TEST(CurveEval, UnitCircleAtZero) {
  const BoundaryCurve c = BoundaryCurve::disk();
  const CurveFrame f = c.eval(0.0);
  EXPECT_NEAR(f.point.x(), 1.0, 1e-15);
  EXPECT_NEAR(f.point.y(), 0.0, 1e-15);
  EXPECT_NEAR(f.normal.x(), 1.0, 1e-15);
  EXPECT_NEAR(f.normal.y(), 0.0, 1e-15);
  EXPECT_NEAR(f.curvature, 1.0, 1e-14);
}

TEST(CurveEval, EllipseCurvatureMatchesClosedForm) {
  const BoundaryCurve c = BoundaryCurve::ellipse(2.0, 1.0);
  EXPECT_NEAR(c.eval(0.0).curvature, 2.0, 1e-13);
  for (double t : {0.1, 0.7, 1.3, 2.9, 4.4, 6.0}) {
    EXPECT_NEAR(c.eval(t).curvature, ellipse_curvature(2.0, 1.0, t), 1e-13);
  }
}

TEST(CurveEval, CircleOfRadiusTwo) {
  const BoundaryCurve c = BoundaryCurve::disk(2.0);
  for (double t : {0.0, 1.0, 2.5, 5.0}) EXPECT_NEAR(c.eval(t).curvature, 0.5, 1e-14);
}

TEST(CurveEval, NormalIsUnitAndOutward) {
  const BoundaryCurve c = BoundaryCurve::perturbed_disk(0.2, 3);
  for (int i = 0; i < 50; ++i) {
    const CurveFrame f = c.eval(kTwoPi * i / 50);
    EXPECT_NEAR(f.normal.norm(), 1.0, 1e-14);
    EXPECT_FALSE(c.contains(f.point + 1e-3 * f.normal));
    EXPECT_TRUE(c.contains(f.point - 1e-3 * f.normal));
  }
}

TEST(CurveEval, DegenerateParametrizationRejected) {
  FourierCoefficients x{{0.0, 1.0}, {0.0, 0.0}};
  FourierCoefficients y{{0.0, 0.0}, {0.0, 0.0}};
  EXPECT_THROW(BoundaryCurve("flat", x, y), Error);
}

TEST(CurveEval, ClockwiseRejected) {
  FourierCoefficients x{{0.0, 1.0}, {0.0, 0.0}};
  FourierCoefficients y{{0.0, 0.0}, {0.0, -1.0}};
  try {
    BoundaryCurve("cw", x, y);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidCurve);
  }
}

TEST(CurveEval, SelfIntersectionRejected) {
  // Figure-eight: (sin 2t, sin t) traced... use a limacon with an inner loop instead.
  FourierCoefficients x{{1.5, 1.0, 1.0}, {0.0, 0.0, 0.0}};
  FourierCoefficients y{{0.0, 0.0, 0.0}, {0.0, 1.0, 1.0}};
  try {
    BoundaryCurve("loop", x, y);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidCurve);
  }
}

TEST(CurveEval, PerimeterAndArea) {
  const BoundaryCurve c = BoundaryCurve::disk(1.5);
  EXPECT_NEAR(c.perimeter(), kTwoPi * 1.5, 1e-12);
  EXPECT_NEAR(c.area(), kPi * 2.25, 1e-12);
  const BoundaryCurve e = BoundaryCurve::ellipse(2.0, 1.0);
  EXPECT_NEAR(e.area(), kTwoPi, 1e-12);
  EXPECT_NEAR(e.perimeter(), 9.688448220547675, 1e-11);
}

TEST(CurveEval, PerturbedDiskIsRadialGraph) {
  const BoundaryCurve c = BoundaryCurve::perturbed_disk(0.1, 4);
  for (double t : {0.0, 0.4, 1.9, 3.3}) {
    const double r = 1.0 + 0.1 * std::cos(4.0 * t);
    EXPECT_NEAR((c.point(t) - r * Vec2(std::cos(t), std::sin(t))).norm(), 0.0, 1e-15);
  }
}

TEST(CurveIo, BuiltinNamesAndRoundTrip) {
  EXPECT_NEAR(make_curve("disk").perimeter(), kTwoPi, 1e-12);
  EXPECT_NEAR(make_curve("disk(2)").perimeter(), 2 * kTwoPi, 1e-12);
  EXPECT_NEAR(make_curve("ellipse(2, 1)").area(), kTwoPi, 1e-12);
  EXPECT_THROW(make_curve("ellipse(2)"), Error);
  EXPECT_THROW(make_curve("square"), Error);
  const BoundaryCurve c = make_curve("perturbed_disk(0.1,3)");
  const std::string path = ::testing::TempDir() + "curve.json";
  save_curve_file(c, path);
  const BoundaryCurve back = load_curve_file(path);
  EXPECT_EQ(back.hash(), c.hash());
  EXPECT_EQ(back.name(), c.name());
}

TEST(MaxTubeHalfwidth, Circles) {
  EXPECT_NEAR(max_tube_halfwidth(BoundaryCurve::disk()), 1.0, 1e-12);
  EXPECT_NEAR(max_tube_halfwidth(BoundaryCurve::disk(0.3)), 0.3, 1e-12);
  EXPECT_NEAR(max_tube_halfwidth(BoundaryCurve::disk(4.0)), 4.0, 1e-12);
}

TEST(MaxTubeHalfwidth, EllipseIsMinimalCurvatureRadius) {
  const BoundaryCurve c = BoundaryCurve::ellipse(2.0, 1.0);
  const double d = max_tube_halfwidth(c);
  EXPECT_NEAR(d, 0.5, 1e-10);
  EXPECT_LE(d, 1.0 / c.max_abs_curvature() + 1e-15);
}

TEST(MaxTubeHalfwidth, BruteForceInjectivity) {
  for (const BoundaryCurve& c : {BoundaryCurve::disk(), BoundaryCurve::ellipse(2.0, 1.0),
                                 BoundaryCurve::perturbed_disk(0.15, 3)}) {
    const double d = max_tube_halfwidth(c);
    EXPECT_FALSE(normal_segments_collide(c, 0.99 * d, 600)) << c.name();
    EXPECT_TRUE(normal_segments_collide(c, 1.05 * d, 600)) << c.name();
  }
}

TEST(SignedDistance, CircleExamples) {
  const TubeNeighborhood tube(share(BoundaryCurve::disk()), 0.9);
  TubePoint p = signed_distance(tube, Vec2(0.5, 0.0));
  EXPECT_NEAR(p.s, -0.5, 1e-14);
  EXPECT_NEAR(p.t_foot, 0.0, 1e-14);
  p = signed_distance(tube, Vec2(1.2, 0.0));
  EXPECT_NEAR(p.s, 0.2, 1e-14);
}

TEST(SignedDistance, EllipseMatchesBruteForce) {
  const auto c = share(BoundaryCurve::ellipse(2.0, 1.0));
  const TubeNeighborhood tube(c, 0.45);
  const Vec2 x(0.0, 0.7);
  const TubePoint p = signed_distance(tube, x);
  const double t_bf = brute_force_foot(*c, x, 1000000);
  EXPECT_NEAR(p.t_foot, t_bf, 2 * kTwoPi / 1000000);
  EXPECT_NEAR(p.t_foot, kPi / 2, 1e-12);
  EXPECT_NEAR(p.s, -0.3, 1e-13);
  EXPECT_NEAR(std::abs(p.s), (c->point(t_bf) - x).norm(), 1e-10);
}

TEST(SignedDistance, OutsideTubeRejected) {
  const TubeNeighborhood tube(share(BoundaryCurve::disk()), 0.3);
  try {
    signed_distance(tube, Vec2(0.5, 0.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOutOfTube);
  }
}

TEST(Tube, RejectsHalfwidthBeyondCurvatureBound) {
  const auto c = share(BoundaryCurve::ellipse(2.0, 1.0));
  EXPECT_THROW(TubeNeighborhood(c, 0.5), Error);
  EXPECT_THROW(TubeNeighborhood(c, 0.0), Error);
  EXPECT_NO_THROW(TubeNeighborhood(c, 0.49));
}

TEST(LaplacianOfDistance, Examples) {
  const TubeNeighborhood disk(share(BoundaryCurve::disk()), 0.9);
  EXPECT_NEAR(laplacian_of_distance(disk, Vec2(0.5, 0.0)), -2.0, 1e-13);
  EXPECT_NEAR(laplacian_of_distance(disk, Vec2(0.0, -0.5)), -2.0, 1e-13);
  EXPECT_NEAR(laplacian_of_distance(disk, Vec2(1.0, 0.0)), -1.0, 1e-13);

  const auto e = share(BoundaryCurve::ellipse(2.0, 1.0));
  const TubeNeighborhood tube(e, 0.45);
  const Vec2 x(0.0, 0.9);
  const double value = laplacian_of_distance(tube, x);
  EXPECT_NEAR(value, -0.25 / (1.0 - 0.025), 1e-12);
  // Five-point Laplacian of the distance function itself.
  const double h = 1e-3;
  auto d = [&](const Vec2& p) { return -signed_distance(tube, p).s; };
  const double fd = (d(x + Vec2(h, 0)) + d(x - Vec2(h, 0)) + d(x + Vec2(0, h)) + d(x - Vec2(0, h)) - 4 * d(x)) / (h * h);
  EXPECT_NEAR(value, fd, 1e-5);
}

TEST(Reflect, Examples) {
  const TubeNeighborhood disk(share(BoundaryCurve::disk()), 0.9);
  const Vec2 r = reflect(disk, Vec2(0.9, 0.0));
  EXPECT_NEAR(r.x(), 1.1, 1e-14);
  EXPECT_NEAR(r.y(), 0.0, 1e-14);
  const Vec2 b = disk.curve().point(0.77);
  EXPECT_NEAR((reflect(disk, b) - b).norm(), 0.0, 1e-14);

  const TubeNeighborhood ell(share(BoundaryCurve::ellipse(2.0, 1.0)), 0.45);
  const Vec2 q = reflect(ell, Vec2(0.0, 0.9));
  EXPECT_NEAR(q.x(), 0.0, 1e-13);
  EXPECT_NEAR(q.y(), 1.1, 1e-13);
}

TEST(ReflectionJacobian, AxisAlignedBoundaryPoint) {
  const TubeNeighborhood disk(share(BoundaryCurve::disk()), 0.9);
  const Mat2 j = reflection_jacobian(disk, Vec2(0.0, 1.0));
  EXPECT_NEAR(j(0, 0), 1.0, 1e-8);
  EXPECT_NEAR(j(1, 1), -1.0, 1e-8);
  EXPECT_NEAR(j(0, 1), 0.0, 1e-8);
  EXPECT_NEAR(j(1, 0), 0.0, 1e-8);
}

TEST(ReflectionJacobian, PolarOracleInsideDisk) {
  // On the unit circle the reflection is (r, theta) -> (2 - r, theta).
  const TubeNeighborhood disk(share(BoundaryCurve::disk()), 0.9);
  auto polar = [](const Vec2& p) {
    const double r = p.norm();
    return Vec2(((2.0 - r) / r) * p);
  };
  for (const Vec2 x : {Vec2(0.8, 0.0), Vec2(0.3, 0.5), Vec2(-0.6, -0.2)}) {
    const double h = 1e-6;
    Mat2 oracle;
    oracle.col(0) = (polar(x + Vec2(h, 0)) - polar(x - Vec2(h, 0))) / (2 * h);
    oracle.col(1) = (polar(x + Vec2(0, h)) - polar(x - Vec2(0, h))) / (2 * h);
    const Mat2 j = reflection_jacobian(disk, x);
    EXPECT_LT((j - oracle).norm(), 1e-7);
    EXPECT_LT((reflection_jacobian_exact(disk, x) - oracle).norm(), 1e-8);
  }
  const Mat2 j = reflection_jacobian(disk, Vec2(0.8, 0.0));
  const Mat2 a = j * j.transpose();
  EXPECT_NEAR(a(0, 0), 1.0, 1e-7);
  EXPECT_NEAR(a(1, 1), 2.25, 1e-7);
}

TEST(ReflectionJacobian, FlatLimit) {
  const double radius = 1e4;
  const TubeNeighborhood tube(share(BoundaryCurve::disk(radius)), 1.0);
  const Vec2 x(radius - 0.5, 0.0);
  const Mat2 j = reflection_jacobian_exact(tube, x);
  EXPECT_LT((j * j.transpose() - Mat2::Identity()).norm(), 1e-3);
}

class TubeProperties : public ::testing::TestWithParam<int> {};

BoundaryCurve property_curve(int which) {
  switch (which) {
    case 0: return BoundaryCurve::disk();
    case 1: return BoundaryCurve::ellipse(2.0, 1.0);
    default: return BoundaryCurve::perturbed_disk(0.15, 3);
  }
}

TEST_P(TubeProperties, RoundTripInvolutionAndGradients) {
  const auto curve = share(property_curve(GetParam()));
  const double delta = 0.9 * max_tube_halfwidth(*curve);
  const TubeNeighborhood tube(curve, delta);
  Rng rng(1234 + GetParam());
  double worst_round = 0.0, worst_inv = 0.0, worst_grad = 0.0, worst_lap = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const TubePoint p{rng.uniform(0.0, kTwoPi), rng.uniform(-0.95, 0.95) * delta};
    const Vec2 x = tube_to_cartesian(*curve, p);
    const TubePoint q = signed_distance(tube, x);
    worst_round = std::max(worst_round, (tube_to_cartesian(*curve, q) - x).norm());
    worst_inv = std::max(worst_inv, (reflect(tube, reflect(tube, x)) - x).norm());
    if (i % 10 == 0 && p.s < -0.05 * delta && p.s > -0.85 * delta) {
      const double h = 1e-4 * delta;
      auto d = [&](const Vec2& y) { return -signed_distance(tube, y).s; };
      const Vec2 grad((d(x + Vec2(h, 0)) - d(x - Vec2(h, 0))) / (2 * h),
                      (d(x + Vec2(0, h)) - d(x - Vec2(0, h))) / (2 * h));
      const Vec2 nu = curve->eval(q.t_foot).normal;
      worst_grad = std::max(worst_grad, (grad + nu).norm());
      const double hl = 1e-3 * delta;
      const double lap = (d(x + Vec2(hl, 0)) + d(x - Vec2(hl, 0)) + d(x + Vec2(0, hl)) +
                          d(x - Vec2(0, hl)) - 4 * d(x)) / (hl * hl);
      worst_lap = std::max(worst_lap, std::abs(lap - laplacian_of_distance(tube, x)));
    }
  }
  EXPECT_LT(worst_round, 1e-10 * curve->diameter());
  EXPECT_LT(worst_inv, 1e-10 * curve->diameter());
  EXPECT_LT(worst_grad, 1e-7);
  EXPECT_LT(worst_lap, 1e-4);
}

TEST_P(TubeProperties, ReflectionFixesExactlyTheBoundary) {
  const auto curve = share(property_curve(GetParam()));
  const TubeNeighborhood tube(curve, 0.9 * max_tube_halfwidth(*curve));
  Rng rng(99);
  for (int i = 0; i < 200; ++i) {
    const double t = rng.uniform(0.0, kTwoPi);
    const double s = (i % 2 == 0) ? 0.0 : rng.uniform(-0.5, 0.5) * tube.halfwidth();
    const Vec2 x = tube_to_cartesian(*curve, {t, s});
    const double moved = (reflect(tube, x) - x).norm();
    if (i % 2 == 0) {
      EXPECT_LT(moved, 1e-12);
    } else if (std::abs(s) > 1e-9) {
      EXPECT_GT(moved, 1e-12);
    }
  }
}

TEST_P(TubeProperties, ReflectionJacobianIsOrthogonalOnBoundary) {
  const auto curve = share(property_curve(GetParam()));
  const TubeNeighborhood tube(curve, 0.9 * max_tube_halfwidth(*curve));
  const double h = 1e-5 * tube.halfwidth();
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Vec2 x = curve->point(kTwoPi * i / 100);
    const Mat2 j = reflection_jacobian(tube, x);
    worst = std::max(worst, (j * j.transpose() - Mat2::Identity()).norm());
  }
  EXPECT_LT(worst, 10 * h * h + 2e-10);
}

INSTANTIATE_TEST_SUITE_P(Curves, TubeProperties, ::testing::Values(0, 1, 2));

TEST(BallQuadrature, HalfDiskAreaOnCircle) {
  const BoundaryCurve c = BoundaryCurve::disk();
  for (double r : {0.05, 0.3, 1.0, 1.5}) {
    const BoundaryBall ball = boundary_ball(c, 0.4, r);
    const SplitBallQuadrature q = split_ball_quadrature(c, ball, 80);
    double in = 0.0, out = 0.0;
    for (const auto& n : q.interior) in += n.w;
    for (const auto& n : q.exterior) out += n.w;
    // Lens area of two unit-circle... intersection of B(y, r) with the unit disk, |y| = 1.
    const double lens = r * r * std::acos(r / 2) + std::acos(1 - r * r / 2) -
                        0.5 * r * std::sqrt(4 - r * r);
    EXPECT_NEAR(in, lens, 1e-13) << r;
    EXPECT_NEAR(in + out, kPi * r * r, 1e-13) << r;
  }
}

TEST(BallQuadrature, PolynomialMomentsOnEllipse) {
  const BoundaryCurve c = BoundaryCurve::ellipse(2.0, 1.0);
  const double t0 = 1.1;
  const BoundaryBall ball = boundary_ball(c, t0, 0.3);
  const SplitBallQuadrature q = split_ball_quadrature(c, ball, 48);
  auto f = [](const Vec2& x) { return 1.0 + x.x() * x.x() - 0.3 * x.y() + x.x() * x.y() * x.y(); };
  // Brute force on a fine Cartesian grid.
  const int n = 2400;
  const double h = 0.6 / n;
  double inside = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Vec2 x = ball.center + Vec2(-0.3 + (i + 0.5) * h, -0.3 + (j + 0.5) * h);
      if ((x - ball.center).norm() >= 0.3) continue;
      if (x.x() * x.x() / 4 + x.y() * x.y() < 1.0) inside += f(x) * h * h;
    }
  }
  double in = 0.0, all = 0.0;
  for (const auto& nd : q.interior) in += nd.w * f(nd.x);
  all = in;
  for (const auto& nd : q.exterior) all += nd.w * f(nd.x);
  EXPECT_NEAR(in, inside, 2e-5);
  double full = 0.0;
  for (const auto& nd : disk_quadrature(ball.center, 0.3, 20, 64)) full += nd.w * f(nd.x);
  EXPECT_NEAR(all, full, 1e-13);
}

TEST(BallQuadrature, SecondBoundaryComponentRejected) {
  const BoundaryCurve c = BoundaryCurve::ellipse(2.0, 0.3);
  EXPECT_THROW(boundary_ball(c, kPi / 2, 0.7), Error);
}

TEST(BallQuadrature, CircleArcsSumToCircumference) {
  const BoundaryCurve c = BoundaryCurve::perturbed_disk(0.1, 3);
  const BoundaryBall ball = boundary_ball(c, 2.0, 0.2);
  const SplitCircleQuadrature q = split_circle_quadrature(ball, 16);
  double total = 0.0;
  for (const auto& n : q.interior) total += n.w;
  for (const auto& n : q.exterior) total += n.w;
  EXPECT_NEAR(total, kTwoPi * 0.2, 1e-14);
  for (const auto& n : q.interior) EXPECT_TRUE(c.contains(n.x));
  for (const auto& n : q.exterior) EXPECT_FALSE(c.contains(n.x));
}

}  // namespace
}  // namespace steklov
