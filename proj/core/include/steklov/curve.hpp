#pragma once

#include <memory>
#include <string>
#include <vector>

#include "steklov/types.hpp"

namespace steklov {

// One coordinate of the boundary parametrization: sum_k cos_k cos(kt) + sin_k sin(kt).
// sin[0] is ignored.
struct FourierCoefficients {
  std::vector<double> cos;
  std::vector<double> sin;
};

struct CurveFrame {
  Vec2 point;
  Vec2 d1;  // gamma'(t)
  Vec2 d2;  // gamma''(t)
  Vec2 tangent;
  Vec2 normal;  // outward unit normal
  double speed = 0.0;
  double curvature = 0.0;  // positive where the boundary is convex
};

// Result of the unconstrained projection onto the curve.
struct CurveProjection {
  double t = 0.0;
  double offset = 0.0;  // signed: negative inside the domain
  double distance = 0.0;
};

// Closed, simple, counterclockwise curve with a truncated Fourier parametrization,
// gamma: [0, 2pi) -> R^2. Immutable after construction.
class BoundaryCurve {
 public:
  BoundaryCurve(std::string name, FourierCoefficients x, FourierCoefficients y,
                int sample_count = 0);

  static BoundaryCurve disk(double radius = 1.0);
  static BoundaryCurve ellipse(double a, double b);
  // Radial graph r(theta) = 1 + eps cos(m theta).
  static BoundaryCurve perturbed_disk(double eps, int m);

  const std::string& name() const { return name_; }
  const FourierCoefficients& x_coefficients() const { return x_; }
  const FourierCoefficients& y_coefficients() const { return y_; }
  int modes() const { return modes_; }

  Vec2 point(double t) const;
  Vec2 derivative(double t, int order) const;
  // gamma(t) - gamma(t0) without cancellation for nearby parameters.
  Vec2 chord(double t, double t0) const;
  // Throws kDegenerateCurve where |gamma'(t)| vanishes.
  CurveFrame eval(double t) const;

  // Holomorphic continuation of x(t) + i y(t) to complex parameters.
  cdouble complex_point(cdouble tau) const;
  cdouble complex_derivative(cdouble tau) const;

  double perimeter() const { return perimeter_; }
  double area() const { return area_; }
  double diameter() const { return diameter_; }
  double max_abs_curvature() const { return max_abs_curvature_; }
  // Largest half-width for which (y, s) -> y + s nu(y) is injective.
  double reach() const { return reach_; }

  int sample_count() const { return static_cast<int>(sample_params_.size()); }
  double sample_param(int i) const { return sample_params_[i]; }
  const Vec2& sample_point(int i) const { return sample_points_[i]; }

  // Nearest boundary point by a grid-accelerated scan of the samples followed by a
  // safeguarded Newton iteration on (x - gamma(t)) . gamma'(t) = 0.
  CurveProjection project(const Vec2& x) const;
  int nearest_sample(const Vec2& x) const;

  // Point-in-domain test via the signed offset of the projection.
  bool contains(const Vec2& x) const { return project(x).offset < 0.0; }

  // FNV-1a over the coefficient bit patterns, as 16 hex digits.
  std::string hash() const;

 private:
  void build_samples(int sample_count);
  void validate() const;
  void compute_invariants();

  std::string name_;
  FourierCoefficients x_;
  FourierCoefficients y_;
  int modes_ = 0;

  std::vector<double> sample_params_;
  std::vector<Vec2> sample_points_;

  double perimeter_ = 0.0;
  double area_ = 0.0;
  double diameter_ = 0.0;
  double max_abs_curvature_ = 0.0;
  double reach_ = 0.0;

  // Uniform bucket grid over the samples.
  Vec2 grid_origin_ = Vec2::Zero();
  double cell_ = 1.0;
  int grid_nx_ = 1;
  int grid_ny_ = 1;
  std::vector<std::vector<int>> buckets_;
};

using CurvePtr = std::shared_ptr<const BoundaryCurve>;

inline CurvePtr share(BoundaryCurve curve) {
  return std::make_shared<const BoundaryCurve>(std::move(curve));
}

// Curve reach from sampled pairs (Federer's formula) capped by the curvature bound.
double max_tube_halfwidth(const BoundaryCurve& curve);

// Parses "disk", "disk(R)", "ellipse(a,b)", "perturbed_disk(eps,m)", or a path to a JSON
// curve file {"name": ..., "fourier_x": [[a0,b0],...], "fourier_y": [...]}.
BoundaryCurve make_curve(const std::string& spec);
BoundaryCurve load_curve_file(const std::string& path);
void save_curve_file(const BoundaryCurve& curve, const std::string& path);

}  // namespace steklov
