#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Core>

namespace steklov {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using cdouble = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Spatial dimension. Exponents such as r^{n-1} and rho^{-(2n-1)} use it.
inline constexpr int kDim = 2;

inline double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

inline Vec2 perp_cw(const Vec2& a) { return {a.y(), -a.x()}; }

// Reduce an angle or curve parameter to [0, 2pi).
inline double wrap_angle(double t) {
  double w = std::fmod(t, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w -= kTwoPi;
  return w;
}

}  // namespace steklov
