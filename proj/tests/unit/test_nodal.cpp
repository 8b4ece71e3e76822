#include <algorithm>
#include <cmath>
#include <functional>

#include <gtest/gtest.h>

#include "steklov/csv.hpp"
#include "steklov/dtn.hpp"
#include "steklov/error.hpp"
#include "steklov/nodal.hpp"
#include "steklov/quadrature.hpp"
#include "steklov/random.hpp"
#include "steklov/v_transform.hpp"

namespace steklov {
namespace {

const SpectrumSlice& disk() {
  static const SpectrumSlice s = solve_spectrum(build_dtn(share(BoundaryCurve::disk()), 256), 64);
  return s;
}

const SpectrumSlice& ellipse() {
  static const SpectrumSlice s = solve_spectrum(build_dtn(share(BoundaryCurve::ellipse(2.0, 1.0)), 256), 41);
  return s;
}

const SteklovEigenpair& disk_mode(int k) { return disk().pairs[2 * k - 1]; }

// a p + b q for two pairs of one eigenspace, normalized when (p, q) is orthonormal.
SteklovEigenpair combine(const SteklovEigenpair& p, const SteklovEigenpair& q, double a, double b) {
  const double n = std::hypot(a, b);
  a /= n;
  b /= n;
  return SteklovEigenpair(p.geometry_ptr(), p.index(), p.lambda(), a * p.trace() + b * q.trace(),
                          a * p.density() + b * q.density(), a * p.constant() + b * q.constant(),
                          a * p.neumann() + b * q.neumann());
}

// Pair on the disk nodes whose trace is f(theta) and whose Neumann data is g(theta).
SteklovEigenpair synthetic(const std::function<double(double)>& f, const std::function<double(double)>& g,
                           double lambda) {
  const auto& geo = disk().geometry;
  const int n = geo->base().n;
  Eigen::VectorXd tr(n), nm(n);
  for (int j = 0; j < n; ++j) {
    const double t = kTwoPi * j / n;
    tr[j] = f(t);
    nm[j] = g(t);
  }
  return SteklovEigenpair(geo, 1, lambda, tr, Eigen::VectorXd::Zero(n), 0.0, nm);
}

// Trace of a disk mode as A cos(k theta - phi).
struct ModeShape {
  double amplitude;
  double phase;
};

ModeShape mode_shape(const SteklovEigenpair& pair, int k) {
  const cdouble c = pair.trace_series().coefficient(k);
  return {2.0 * std::abs(c), -std::arg(c)};
}

// int over B(e^{i theta_y}, r) cap unit disk of (A r^k cos(k theta - phi))^2, in polar
// coordinates of the disk with rho = 1 - r + r s^2 to remove the square-root endpoint.
double disk_ball_oracle(int k, const ModeShape& m, double theta_y, double r) {
  auto inner = [&](double s) {
    const double rho = 1.0 - r + r * s * s;
    const double c = std::clamp((rho * rho + 1.0 - r * r) / (2.0 * rho), -1.0, 1.0);
    const double beta = std::acos(c);
    const double ang = k == 0 ? 2.0 * beta
                              : beta + std::sin(2.0 * k * beta) * std::cos(2.0 * (k * theta_y - m.phase)) / (2.0 * k);
    return m.amplitude * m.amplitude * std::pow(rho, 2 * k + 1) * ang * 2.0 * r * s;
  };
  return integrate_composite(inner, 0.0, 1.0, 16, 32);
}

double lens_area(double r) {
  return r * r * std::acos(r / 2.0) + std::acos(1.0 - r * r / 2.0) - 0.5 * r * std::sqrt(4.0 - r * r);
}

TEST(BoundaryZeros, DiskModesHaveTwoKZeros) {
  for (int k = 1; k <= 31; ++k) {
    for (int s = 0; s < 2; ++s) {
      const SteklovEigenpair& pair = disk().pairs[2 * k - 1 + s];
      const NodalReport rep = boundary_zeros(pair);
      EXPECT_EQ(rep.count(), 2 * k) << pair.index();
      EXPECT_TRUE(rep.tangential.empty());
    }
  }
}

TEST(BoundaryZeros, DiskCountIsBasisInvariant) {
  Rng rng(42);
  for (int k : {1, 5, 17, 31}) {
    for (int trial = 0; trial < 10; ++trial) {
      const SteklovEigenpair pair =
          combine(disk().pairs[2 * k - 1], disk().pairs[2 * k], rng.uniform(-1, 1), rng.uniform(-1, 1));
      const NodalReport rep = boundary_zeros(pair);
      ASSERT_EQ(rep.count(), 2 * k);
      // Zeros of cos(k theta - phi) are pi / k apart.
      for (int i = 0; i + 1 < rep.count(); ++i) EXPECT_NEAR(rep.zeros[i + 1] - rep.zeros[i], kPi / k, 1e-9);
      const ModeShape m = mode_shape(pair, k);
      for (double t : rep.zeros) EXPECT_NEAR(std::cos(k * t - m.phase), 0.0, 1e-9);
    }
  }
}

TEST(BoundaryZeros, ConstantEigenfunctionHasNone) {
  EXPECT_EQ(boundary_zeros(disk().pairs[0]).count(), 0);
  EXPECT_EQ(boundary_zeros(ellipse().pairs[0]).count(), 0);
}

TEST(BoundaryZeros, EllipseMatchesDenseSignChangeCount) {
  for (std::size_t j = 1; j < ellipse().pairs.size(); j += 3) {
    const SteklovEigenpair& pair = ellipse().pairs[j];
    const std::vector<double> dense =
        resample_periodic(std::span<const double>(pair.trace().data(), pair.trace().size()), 1 << 20);
    int changes = 0;
    for (std::size_t i = 0; i < dense.size(); ++i) {
      if ((dense[i] < 0.0) != (dense[(i + 1) % dense.size()] < 0.0)) ++changes;
    }
    const NodalReport rep = boundary_zeros(pair);
    EXPECT_EQ(rep.count(), changes) << pair.index();
    EXPECT_TRUE(rep.tangential.empty()) << pair.index();
  }
}

TEST(BoundaryZeros, Invariants) {
  for (const SteklovEigenpair& pair : ellipse().pairs) {
    if (pair.lambda() < 1e-8) continue;
    const NodalReport rep = boundary_zeros(pair, 0, 1e-10);
    EXPECT_EQ(rep.count() % 2, 0);
    EXPECT_GE(rep.count(), 2);
    for (int i = 0; i + 1 < rep.count(); ++i) {
      EXPECT_GT(rep.zeros[i + 1] - rep.zeros[i], rep.tol);
      // Sign between consecutive zeros alternates.
      const double mid = 0.5 * (rep.zeros[i] + rep.zeros[i + 1]);
      const double next = i + 2 < rep.count() ? 0.5 * (rep.zeros[i + 1] + rep.zeros[i + 2])
                                              : 0.5 * (rep.zeros[i + 1] + rep.zeros[0] + kTwoPi);
      EXPECT_LT(pair.trace_at(mid) * pair.trace_at(next), 0.0);
    }
    const NodalReport fine = boundary_zeros(pair, 0, 0.5e-10);
    ASSERT_EQ(fine.count(), rep.count());
    for (int i = 0; i < rep.count(); ++i) EXPECT_LT(std::abs(fine.zeros[i] - rep.zeros[i]), rep.tol);
  }
}

TEST(BoundaryZeros, UndersampledGridIsRejected) {
  const SteklovEigenpair& pair = disk_mode(20);
  EXPECT_EQ(nodal_sample_guard(pair), 320);
  EXPECT_NO_THROW(boundary_zeros(pair, 320));
  try {
    boundary_zeros(pair, 319);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUndersampled);
  }
}

TEST(BoundaryZeros, ZeroPairInsideOneCellIsFound) {
  // Zeros at theta0 +- 1e-3 strictly inside the first cell of a 64-point grid.
  const double h = kTwoPi / 64;
  const double t0 = 0.5 * h;
  const double eps = 1e-3;
  const SteklovEigenpair pair = synthetic([&](double t) { return std::cos(t - t0) - std::cos(eps); },
                                          [&](double t) { return std::cos(t - t0); }, 1.0);
  const NodalReport rep = boundary_zeros(pair, 64);
  ASSERT_EQ(rep.count(), 2);
  EXPECT_NEAR(rep.zeros[0], t0 - eps, 1e-11);
  EXPECT_NEAR(rep.zeros[1], t0 + eps, 1e-11);
}

TEST(BoundaryZeros, TouchingZeroIsFlaggedNotCounted) {
  // 1 - cos(t - t0) has a double zero at t0.
  const double t0 = 0.3;
  const SteklovEigenpair pair = synthetic([&](double t) { return 1.0 - std::cos(t - t0); },
                                          [&](double t) { return -std::cos(t - t0); }, 1.0);
  const NodalReport rep = boundary_zeros(pair, 64, 1e-8);
  EXPECT_EQ(rep.count(), 0);
  ASSERT_EQ(rep.tangential.size(), 1u);
  EXPECT_NEAR(rep.tangential[0], t0, 1e-4);
}

TEST(BoundaryMass, DiskCosineOnSmallArc) {
  const SteklovEigenpair pair = synthetic([](double t) { return std::cos(t) / std::sqrt(kPi); },
                                          [](double t) { return std::cos(t) / std::sqrt(kPi); }, 1.0);
  for (double r : {1e-3, 0.05, 0.3}) {
    const double a = 2.0 * std::asin(0.5 * r);
    const double expect = (a + 0.5 * std::sin(2.0 * a)) / kPi;
    EXPECT_NEAR(boundary_mass(pair, 0.0, r), expect, 1e-12 * expect) << r;
  }
}

TEST(BoundaryMass, FullCurveHasUnitMass) {
  for (int j : {0, 3, 17, 40}) {
    const SteklovEigenpair& pair = ellipse().pairs[j];
    EXPECT_NEAR(boundary_mass(pair, 1.0, 5.0), 1.0, 1e-12);
  }
  EXPECT_NEAR(boundary_mass(disk_mode(7), 0.2, 2.5), 1.0, 1e-12);
}

TEST(BoundaryMass, TwoIntervalsOnEllipse) {
  // Ball of radius 2.1 about (0, 1) on x = 2 cos t, y = sin t meets the curve where
  // 3 sin^2 t + 2 sin t - 0.59 > 0.
  const SteklovEigenpair& pair = ellipse().pairs[9];
  const auto iv = boundary_ball_intervals(pair.curve(), 0.5 * kPi, 2.1);
  ASSERT_EQ(iv.size(), 2u);
  const double s_top = (-2.0 + std::sqrt(4.0 + 12.0 * 0.59)) / 6.0;
  const double s_bot = (-2.0 - std::sqrt(4.0 + 12.0 * 0.59)) / 6.0;
  std::vector<std::pair<double, double>> expect = {{std::asin(s_top), kPi - std::asin(s_top)},
                                                   {kPi - std::asin(s_bot), kTwoPi + std::asin(s_bot)}};
  for (int i = 0; i < 2; ++i) {
    // Compare modulo 2 pi.
    const double shift = std::round((expect[i].first - iv[i].first) / kTwoPi) * kTwoPi;
    EXPECT_NEAR(iv[i].first + shift, expect[i].first, 1e-12);
    EXPECT_NEAR(iv[i].second + shift, expect[i].second, 1e-12);
  }
  auto integrand = [&](double t) {
    const double u = pair.trace_at(t);
    return u * u * pair.curve().derivative(t, 1).norm();
  };
  double sum = 0.0;
  for (const auto& [a, b] : expect) sum += integrate_composite(integrand, a, b, 200, 16);
  EXPECT_NEAR(boundary_mass(pair, 0.5 * kPi, 2.1), sum, 1e-12);
}

TEST(BoundaryMass, MonotoneInRadius) {
  const SteklovEigenpair& pair = ellipse().pairs[12];
  double prev = 0.0;
  for (double r = 0.01; r < 4.5; r *= 1.3) {
    const double m = boundary_mass(pair, 2.0, r);
    EXPECT_GE(m, prev);
    prev = m;
  }
}

TEST(BoundaryMass, LebesguePointDoubling) {
  const SteklovEigenpair pair = synthetic([](double t) { return std::cos(t) / std::sqrt(kPi); },
                                          [](double t) { return std::cos(t) / std::sqrt(kPi); }, 1.0);
  const double ratio = boundary_mass(pair, 0.0, 2e-4) / boundary_mass(pair, 0.0, 1e-4);
  EXPECT_NEAR(ratio, 2.0, 1e-7);
}

TEST(DoublingProfile, DiskExtremumAndNodalPoint) {
  for (int k : {1, 6, 20}) {
    const SteklovEigenpair& pair = disk_mode(k);
    const NodalReport z = boundary_zeros(pair);
    const double t_zero = z.zeros[0];
    const double t_peak = t_zero + 0.5 * kPi / k;
    const DoublingReport peak = doubling_profile(pair, t_peak, 1e-5 / k, 1e-3 / k);
    const DoublingReport node = doubling_profile(pair, t_zero, 1e-5 / k, 1e-3 / k);
    EXPECT_NEAR(peak.exponents.front(), 1.0, 1e-7);
    EXPECT_NEAR(node.exponents.front(), 3.0, 1e-7);
    for (std::size_t i = 0; i + 1 < peak.mass.size(); ++i) EXPECT_LT(peak.mass[i], peak.mass[i + 1]);
  }
}

TEST(DoublingProfile, ConstantOnDiskIsArcLength) {
  const DoublingReport rep = doubling_profile(disk().pairs[0], 0.7, 0.01, 1.0);
  ASSERT_EQ(rep.radii.size(), 27u);
  ASSERT_EQ(rep.exponents.size(), 23u);
  for (std::size_t i = 0; i < rep.exponents.size(); ++i) {
    const double r = rep.radii[i];
    EXPECT_NEAR(rep.exponents[i], std::log2(std::asin(r) / std::asin(0.5 * r)), 1e-12);
  }
}

TEST(DoublingProfile, SolidModeExponents) {
  // Near the centre v^2 is ~const (area growth, e = 2) at a trace extremum and ~|x - y|^2 at a
  // boundary zero (e = 4).
  const int k = 4;
  const SteklovEigenpair& pair = disk_mode(k);
  const VTransform v = v_transform(pair, TubeNeighborhood(pair.curve_ptr(), 0.5));
  const double t_zero = boundary_zeros(pair).zeros[0];
  const DoublingReport peak = doubling_profile(pair, t_zero + 0.5 * kPi / k, 1e-5, 2e-5, DoublingMode::kSolid, &v);
  const DoublingReport node = doubling_profile(pair, t_zero, 1e-5, 2e-5, DoublingMode::kSolid, &v);
  EXPECT_NEAR(peak.exponents.front(), 2.0, 1e-3);
  EXPECT_NEAR(node.exponents.front(), 4.0, 1e-3);
  EXPECT_THROW(doubling_profile(pair, 0.0, 0.1, 0.2, DoublingMode::kSolid, nullptr), Error);
}

TEST(DoublingProfile, VanishingTraceIsDegenerate) {
  const SteklovEigenpair pair = synthetic([](double) { return 0.0; }, [](double) { return 0.0; }, 1.0);
  try {
    doubling_profile(pair, 0.0, 0.01, 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateCenter);
  }
}

TEST(InteriorBallMass, ConstantIsLensArea) {
  const SteklovEigenpair& pair = disk().pairs[0];
  const double u0 = pair.trace_at(0.0);
  for (double r : {0.05, 0.3, 0.8}) {
    EXPECT_NEAR(interior_ball_mass(pair, 1.1, r), u0 * u0 * lens_area(r), 1e-10 * lens_area(r));
  }
}

TEST(InteriorBallMass, DiskModesMatchPolarOracle) {
  for (int k : {1, 3, 10}) {
    const SteklovEigenpair& pair = disk_mode(k);
    const ModeShape m = mode_shape(pair, k);
    for (double ty : {0.0, 0.4}) {
      for (double r : {0.1, 0.3}) {
        const double expect = disk_ball_oracle(k, m, ty, r);
        EXPECT_NEAR(interior_ball_mass(pair, ty, r), expect, 1e-9 * expect) << k << " " << ty << " " << r;
      }
    }
  }
}

TEST(DomainMass, DiskClosedForms) {
  EXPECT_NEAR(domain_mass(disk().pairs[0]), 0.5, 1e-13);
  for (int k : {1, 4, 15, 31}) EXPECT_NEAR(domain_mass(disk_mode(k)), 1.0 / (2 * k + 2), 1e-12) << k;
}

TEST(DomainMass, EllipseMatchesStarQuadrature) {
  // Ellipse is star-shaped about the origin: x = s gamma(t), dA = s cross(gamma, gamma') ds dt.
  const SteklovEigenpair& pair = ellipse().pairs[6];
  const BoundaryCurve& c = pair.curve();
  const int nt = 256;
  const double breaks[] = {0.0, 0.5, 0.8, 0.95, 1.0};
  double sum = 0.0;
  for (int j = 0; j < nt; ++j) {
    const double t = kTwoPi * j / nt;
    const Vec2 g = c.point(t);
    const Vec2 d = c.derivative(t, 1);
    const double cross = g.x() * d.y() - g.y() * d.x();
    for (int p = 0; p < 4; ++p) {
      sum += integrate_gl(
                 [&](double s) {
                   const double u = evaluate_extension(pair, s * g).value;
                   return u * u * s * cross;
                 },
                 breaks[p], breaks[p + 1], 24) *
             kTwoPi / nt;
    }
  }
  EXPECT_NEAR(domain_mass(pair), sum, 1e-9 * sum);
}

TEST(SpecialPoint, DiskNetMassesFollowOracle) {
  const int k = 5;
  const SteklovEigenpair& pair = disk_mode(k);
  const ModeShape m = mode_shape(pair, k);
  const double rho = 0.15;
  const SpecialPointReport rep = special_point_search(pair, rho);
  EXPECT_EQ(rep.net.size(), static_cast<std::size_t>(std::ceil(kTwoPi / (0.5 * rho))));
  for (std::size_t i = 0; i < rep.net.size(); i += 7) {
    const double expect = disk_ball_oracle(k, m, rep.net[i], rho);
    EXPECT_NEAR(rep.ball_mass[i], expect, 1e-9 * expect);
  }
  EXPECT_EQ(rep.ball_mass[rep.best], *std::max_element(rep.ball_mass.begin(), rep.ball_mass.end()));
  EXPECT_NEAR(rep.total_mass, 1.0 / (2 * k + 2), 1e-12);
  EXPECT_NEAR(rep.y_star.norm(), 1.0, 1e-14);
  // Ball mass is P + Q cos(2(k theta - phi)); the net max is within the net spacing of P + |Q|.
  const double p = 0.5 * (disk_ball_oracle(k, m, m.phase / k, rho) + disk_ball_oracle(k, m, (m.phase + 0.5 * kPi) / k, rho));
  const double q = std::abs(disk_ball_oracle(k, m, m.phase / k, rho) - p);
  EXPECT_LE(rep.ball_mass[rep.best], p + q + 1e-12);
  EXPECT_GE(rep.ball_mass[rep.best], p + q * std::cos(k * 0.5 * rho) - 1e-12);
}

TEST(SpecialPoint, ConstantIsGeometric) {
  const double rho = 0.4;
  const SpecialPointReport rep = special_point_search(disk().pairs[0], rho);
  EXPECT_NEAR(rep.c_star, kPi * rho * rho * rho / lens_area(rho), 1e-9);
}

TEST(SpecialPoint, EllipsePairsAreFinite) {
  for (int j : {1, 25}) {
    const SteklovEigenpair& pair = ellipse().pairs[j];
    const SpecialPointReport rep = special_point_search(pair, 0.2);
    EXPECT_TRUE(std::isfinite(rep.c_star));
    EXPECT_GT(rep.c_star, 0.0);
  }
}

TEST(SpecialPoint, RadiusErrors) {
  try {
    special_point_search(disk_mode(1), 3.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNetConstruction);
  }
  try {
    special_point_search(disk_mode(1), 1.2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPrecondition);
  }
}

TEST(BoundaryControlsSolid, DiskFirstModeAtPeak) {
  const SteklovEigenpair& pair = disk_mode(1);
  const TubeNeighborhood tube(pair.curve_ptr(), 0.6);
  const ModeShape m = mode_shape(pair, 1);
  const double t0 = m.phase;
  const double r = 0.25;
  const ControlReport rep = boundary_controls_solid_check(pair, tube, t0, r);
  const double lam = pair.lambda();
  const double a = 2.0 * std::asin(0.5 * r / lam);
  const double lhs = m.amplitude * m.amplitude * (a + 0.5 * std::sin(2.0 * a));
  const double rhs = lam / r * disk_ball_oracle(1, m, t0, 2.0 * r / lam);
  EXPECT_NEAR(rep.lhs, lhs, 1e-11);
  EXPECT_NEAR(rep.rhs, rhs, 1e-9);
  EXPECT_GE(rep.lhs, 0.1 * rep.rhs);
  EXPECT_LT(rep.c_emp, 1.0);
}

TEST(BoundaryControlsSolid, ConstantIsGeometric) {
  const SteklovEigenpair& pair = disk().pairs[0];
  const TubeNeighborhood tube(pair.curve_ptr(), 0.6);
  const double r = 0.2;
  const ControlReport rep = boundary_controls_solid_check(pair, tube, 0.0, r);
  EXPECT_EQ(rep.lambda_eff, 1.0);
  const double ratio = (lens_area(2.0 * r) / r) / (4.0 * std::asin(0.5 * r));
  EXPECT_NEAR(rep.c_emp, ratio > 1.0 ? std::log2(ratio) : 0.0, 1e-9);
  EXPECT_THROW(boundary_controls_solid_check(pair, tube, 0.0, 0.31), Error);
}

TEST(NodalExport, CsvAndJson) {
  const NodalReport rep = boundary_zeros(disk_mode(2));
  const CsvTable t = parse_csv(nodal_report_to_csv(rep, *disk().geometry->curve));
  ASSERT_EQ(t.rows.size(), 4u);
  EXPECT_EQ(t.header, (std::vector<std::string>{"t", "x", "y", "kind"}));
  EXPECT_EQ(t.number(0, 0), rep.zeros[0]);
  EXPECT_EQ(t.rows[0][3], "simple");
  const std::string json = nodal_report_to_json(rep);
  EXPECT_NE(json.find("\"count\": 4"), std::string::npos);
  const DoublingReport d = doubling_profile(disk_mode(2), 0.0, 0.01, 0.04);
  const CsvTable dt = parse_csv(doubling_report_to_csv(d));
  ASSERT_EQ(dt.rows.size(), d.radii.size());
  EXPECT_EQ(dt.number(0, 2), d.exponents[0]);
  EXPECT_EQ(dt.rows.back()[2], "");
}

}  // namespace
}  // namespace steklov
