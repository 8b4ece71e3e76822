#pragma once

#include <functional>
#include <string>
#include <vector>

#include "steklov/curve.hpp"
#include "steklov/random.hpp"

namespace steklov {

struct FieldSample {
  double value = 0.0;
  Vec2 gradient = Vec2::Zero();
};

enum class RegionKind { kPlane, kDomainInterior, kTube };

std::string_view to_string(RegionKind kind);

// Where a field may be evaluated. Domain and tube regions refer to a boundary curve; the tube
// is the two-sided collar of the given half-width.
struct FieldRegion {
  RegionKind kind = RegionKind::kPlane;
  CurvePtr curve;
  double halfwidth = 0.0;

  bool contains(const Vec2& x) const;
  // Sufficient test that the closed disk lies in the region.
  bool contains_disk(const Vec2& center, double r) const;
  // Random point of the region (plane: the square [-1, 1]^2).
  Vec2 sample(Rng& rng) const;
};

using FieldCallback = std::function<FieldSample(const Vec2&)>;

// A scalar function with its gradient. Fields that are only piecewise smooth across the
// region's curve may supply smooth one-sided continuations; quadratures over balls centred
// on the curve then sample `inner` on the domain side and `outer` on the other side.
struct ScalarField {
  FieldCallback eval;
  FieldRegion region;
  std::string description;
  FieldCallback inner;
  FieldCallback outer;

  FieldSample operator()(const Vec2& x) const { return eval(x); }
  bool piecewise() const { return static_cast<bool>(inner) && static_cast<bool>(outer); }
};

struct CoefficientSample {
  Mat2 a = Mat2::Identity();
  Vec2 b = Vec2::Zero();
  double c = 0.0;
};

using CoefficientCallback = std::function<CoefficientSample(const Vec2&)>;

// Coefficients of Div(A grad w) + b . grad w + c w = 0 with declared bounds: ellipticity
// alpha, Lipschitz constant gamma of A, and K bounding sum |a_ij| + sum |b_j| + |c|.
struct CoefficientField {
  CoefficientCallback eval;
  double alpha = 1.0;
  double gamma = 0.0;
  double k_bound = 0.0;
  CoefficientCallback inner;
  CoefficientCallback outer;

  CoefficientSample operator()(const Vec2& x) const { return eval(x); }
  bool piecewise() const { return static_cast<bool>(inner) && static_cast<bool>(outer); }
};

// Zero coefficients (Laplace equation): alpha = 1, gamma = 0, K = 2.
CoefficientField laplace_coefficients();

// u = Re sum_k c_k (z - center)^k on the whole plane.
ScalarField harmonic_polynomial(std::vector<cdouble> coefficients, const Vec2& center = Vec2::Zero());
// r^k cos(k theta - phase) about the origin.
ScalarField homogeneous_harmonic(int degree, double phase = 0.0);
ScalarField constant_field(double value);

struct GradientCheck {
  int probes = 0;
  double max_error = 0.0;  // |grad - FD| / (|grad| + scale)
  Vec2 worst = Vec2::Zero();
};

// Central differences of the value with step h = 1e-5 * scale against the stored gradient.
GradientCheck check_field_gradient(const ScalarField& field, int probes, std::uint64_t seed,
                                   double scale = 1.0);

struct CoefficientCheck {
  int probes = 0;
  double min_ellipticity = 0.0;  // smallest eigenvalue of A seen
  double max_lipschitz = 0.0;    // largest |A(x) - A(y)| / |x - y| over probe pairs
  double max_sup = 0.0;          // largest sum |a_ij| + sum |b_j| + |c|
  bool ellipticity_ok = false;
  bool lipschitz_ok = false;
  bool sup_ok = false;
  bool passed() const { return ellipticity_ok && lipschitz_ok && sup_ok; }
};

// Probes the declared bounds on random points of `region` (pairs for the Lipschitz test are
// taken within distance 0.05 * (1 + halfwidth) of each other).
CoefficientCheck check_coefficient_bounds(const CoefficientField& coeffs, const FieldRegion& region,
                                          int probes, std::uint64_t seed);

}  // namespace steklov
