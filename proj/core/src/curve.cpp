#include "steklov/curve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <limits>
#include <sstream>

#include "steklov/error.hpp"

namespace steklov {
namespace {

double series(const FourierCoefficients& c, double t, int order) {
  const double shift = 0.5 * kPi * order;
  double sum = 0.0;
  for (std::size_t k = 0; k < c.cos.size(); ++k) {
    const double kk = static_cast<double>(k);
    const double scale = order == 0 ? 1.0 : std::pow(kk, order);
    if (scale == 0.0) continue;
    sum += c.cos[k] * scale * std::cos(kk * t + shift);
  }
  for (std::size_t k = 1; k < c.sin.size(); ++k) {
    const double kk = static_cast<double>(k);
    const double scale = order == 0 ? 1.0 : std::pow(kk, order);
    sum += c.sin[k] * scale * std::sin(kk * t + shift);
  }
  return sum;
}

cdouble complex_series(const FourierCoefficients& c, cdouble tau, bool derivative) {
  cdouble sum(0.0, 0.0);
  for (std::size_t k = 0; k < c.cos.size(); ++k) {
    const double kk = static_cast<double>(k);
    sum += derivative ? -c.cos[k] * kk * std::sin(kk * tau) : c.cos[k] * std::cos(kk * tau);
  }
  for (std::size_t k = 1; k < c.sin.size(); ++k) {
    const double kk = static_cast<double>(k);
    sum += derivative ? c.sin[k] * kk * std::cos(kk * tau) : c.sin[k] * std::sin(kk * tau);
  }
  return sum;
}

bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
  const double d1 = cross(p2 - p1, q1 - p1);
  const double d2 = cross(p2 - p1, q2 - p1);
  const double d3 = cross(q2 - q1, p1 - q1);
  const double d4 = cross(q2 - q1, p2 - q1);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 &&
         d4 != 0;
}

void pad(FourierCoefficients& c, std::size_t n) {
  c.cos.resize(n, 0.0);
  c.sin.resize(n, 0.0);
}

}  // namespace

BoundaryCurve::BoundaryCurve(std::string name, FourierCoefficients x, FourierCoefficients y,
                             int sample_count)
    : name_(std::move(name)), x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n =
      std::max({x_.cos.size(), x_.sin.size(), y_.cos.size(), y_.sin.size(), std::size_t{1}});
  pad(x_, n);
  pad(y_, n);
  modes_ = static_cast<int>(n) - 1;
  if (sample_count <= 0) sample_count = std::max(1024, 64 * (modes_ + 1));
  sample_count = (sample_count + 3) / 4 * 4;
  build_samples(sample_count);
  validate();
  compute_invariants();
}

BoundaryCurve BoundaryCurve::disk(double radius) {
  if (!(radius > 0.0)) raise(ErrorCode::kInvalidArgument, "disk radius must be positive");
  FourierCoefficients x{{0.0, radius}, {0.0, 0.0}};
  FourierCoefficients y{{0.0, 0.0}, {0.0, radius}};
  std::ostringstream name;
  name << "disk(" << radius << ")";
  return BoundaryCurve(radius == 1.0 ? "disk" : name.str(), x, y);
}

BoundaryCurve BoundaryCurve::ellipse(double a, double b) {
  if (!(a > 0.0 && b > 0.0)) raise(ErrorCode::kInvalidArgument, "ellipse semi-axes must be positive");
  FourierCoefficients x{{0.0, a}, {0.0, 0.0}};
  FourierCoefficients y{{0.0, 0.0}, {0.0, b}};
  std::ostringstream name;
  name << "ellipse(" << a << "," << b << ")";
  return BoundaryCurve(name.str(), x, y);
}

BoundaryCurve BoundaryCurve::perturbed_disk(double eps, int m) {
  if (m < 1) raise(ErrorCode::kInvalidArgument, "perturbed_disk needs m >= 1");
  if (!(std::abs(eps) < 1.0)) raise(ErrorCode::kInvalidArgument, "perturbed_disk needs |eps| < 1");
  // (1 + eps cos m t)(cos t, sin t) expanded into single Fourier modes.
  FourierCoefficients x;
  FourierCoefficients y;
  pad(x, m + 2);
  pad(y, m + 2);
  x.cos[1] += 1.0;
  y.sin[1] += 1.0;
  x.cos[m + 1] += 0.5 * eps;
  y.sin[m + 1] += 0.5 * eps;
  if (m - 1 == 0) {
    x.cos[0] += eps;
  } else {
    x.cos[m - 1] += 0.5 * eps;
    y.sin[m - 1] -= 0.5 * eps;
  }
  std::ostringstream name;
  name << "perturbed_disk(" << eps << "," << m << ")";
  return BoundaryCurve(name.str(), x, y);
}

Vec2 BoundaryCurve::point(double t) const { return {series(x_, t, 0), series(y_, t, 0)}; }

Vec2 BoundaryCurve::derivative(double t, int order) const {
  return {series(x_, t, order), series(y_, t, order)};
}

Vec2 BoundaryCurve::chord(double t, double t0) const {
  auto diff = [&](const FourierCoefficients& c) {
    double sum = 0.0;
    for (std::size_t k = 1; k < c.cos.size(); ++k) {
      const double kk = static_cast<double>(k);
      const double half = std::sin(0.5 * kk * (t - t0));
      const double mid = 0.5 * kk * (t + t0);
      sum += -2.0 * c.cos[k] * std::sin(mid) * half + 2.0 * c.sin[k] * std::cos(mid) * half;
    }
    return sum;
  };
  return {diff(x_), diff(y_)};
}

CurveFrame BoundaryCurve::eval(double t) const {
  CurveFrame f;
  f.point = point(t);
  f.d1 = derivative(t, 1);
  f.d2 = derivative(t, 2);
  f.speed = f.d1.norm();
  const double scale = std::max(diameter_, 1e-300);
  if (!(f.speed > 1e-12 * scale)) {
    raise(ErrorCode::kDegenerateCurve, "parametrization is not regular at t = " + std::to_string(t));
  }
  f.tangent = f.d1 / f.speed;
  f.normal = perp_cw(f.tangent);
  f.curvature = cross(f.d1, f.d2) / (f.speed * f.speed * f.speed);
  return f;
}

cdouble BoundaryCurve::complex_point(cdouble tau) const {
  return complex_series(x_, tau, false) + cdouble(0.0, 1.0) * complex_series(y_, tau, false);
}

cdouble BoundaryCurve::complex_derivative(cdouble tau) const {
  return complex_series(x_, tau, true) + cdouble(0.0, 1.0) * complex_series(y_, tau, true);
}

void BoundaryCurve::build_samples(int sample_count) {
  sample_params_.resize(sample_count);
  sample_points_.resize(sample_count);
  for (int i = 0; i < sample_count; ++i) {
    sample_params_[i] = kTwoPi * i / sample_count;
    sample_points_[i] = point(sample_params_[i]);
  }
}

void BoundaryCurve::validate() const {
  const int s = sample_count();
  double extent = 0.0;
  for (const auto& p : sample_points_) extent = std::max(extent, p.norm());
  double min_speed = std::numeric_limits<double>::infinity();
  for (int i = 0; i < s; ++i) min_speed = std::min(min_speed, derivative(sample_params_[i], 1).norm());
  if (!(min_speed > 1e-10 * std::max(extent, 1e-300))) {
    raise(ErrorCode::kDegenerateCurve, "curve '" + name_ + "' has |gamma'| ~ 0 at a sample node");
  }
  double signed_area = 0.0;
  for (int i = 0; i < s; ++i) {
    signed_area += cross(sample_points_[i], derivative(sample_params_[i], 1));
  }
  signed_area *= 0.5 * kTwoPi / s;
  if (!(signed_area > 0.0)) {
    raise(ErrorCode::kInvalidCurve, "curve '" + name_ + "' is not counterclockwise");
  }
  for (int i = 0; i < s; ++i) {
    const Vec2& p1 = sample_points_[i];
    const Vec2& p2 = sample_points_[(i + 1) % s];
    const double pminx = std::min(p1.x(), p2.x()), pmaxx = std::max(p1.x(), p2.x());
    const double pminy = std::min(p1.y(), p2.y()), pmaxy = std::max(p1.y(), p2.y());
    for (int j = i + 2; j < s; ++j) {
      if (i == 0 && j == s - 1) continue;
      const Vec2& q1 = sample_points_[j];
      const Vec2& q2 = sample_points_[(j + 1) % s];
      if (std::max(q1.x(), q2.x()) < pminx || std::min(q1.x(), q2.x()) > pmaxx ||
          std::max(q1.y(), q2.y()) < pminy || std::min(q1.y(), q2.y()) > pmaxy) {
        continue;
      }
      if (segments_intersect(p1, p2, q1, q2)) {
        raise(ErrorCode::kInvalidCurve, "curve '" + name_ + "' self-intersects");
      }
    }
  }
}

void BoundaryCurve::compute_invariants() {
  const int s = sample_count();
  const double h = kTwoPi / s;
  std::vector<Vec2> normals(s);
  perimeter_ = 0.0;
  area_ = 0.0;
  max_abs_curvature_ = 0.0;
  int kappa_arg = 0;
  for (int i = 0; i < s; ++i) {
    const Vec2 d1 = derivative(sample_params_[i], 1);
    const Vec2 d2 = derivative(sample_params_[i], 2);
    const double speed = d1.norm();
    perimeter_ += speed * h;
    area_ += 0.5 * cross(sample_points_[i], d1) * h;
    normals[i] = perp_cw(d1 / speed);
    const double kappa = std::abs(cross(d1, d2)) / (speed * speed * speed);
    if (kappa > max_abs_curvature_) {
      max_abs_curvature_ = kappa;
      kappa_arg = i;
    }
  }
  // Golden-section refinement of max |kappa| between the neighbouring samples.
  {
    auto abs_kappa = [&](double t) {
      const Vec2 d1 = derivative(t, 1);
      const Vec2 d2 = derivative(t, 2);
      const double sp = d1.norm();
      return std::abs(cross(d1, d2)) / (sp * sp * sp);
    };
    double a = sample_params_[kappa_arg] - h;
    double b = sample_params_[kappa_arg] + h;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a);
    double d = a + g * (b - a);
    for (int iter = 0; iter < 80; ++iter) {
      if (abs_kappa(c) > abs_kappa(d)) {
        b = d;
      } else {
        a = c;
      }
      c = b - g * (b - a);
      d = a + g * (b - a);
    }
    max_abs_curvature_ = std::max(max_abs_curvature_, abs_kappa(0.5 * (a + b)));
  }

  diameter_ = 0.0;
  double federer = std::numeric_limits<double>::infinity();
  const double near2 = std::pow(0.25 / max_abs_curvature_, 2);
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) {
      if (i == j) continue;
      const Vec2 diff = sample_points_[j] - sample_points_[i];
      const double d2 = diff.squaredNorm();
      if (j > i) diameter_ = std::max(diameter_, std::sqrt(d2));
      // Close pairs only resolve the local curvature radius, already covered by the cap,
      // and lose digits to cancellation.
      if (d2 < near2) continue;
      const double normal_part = std::abs(diff.dot(normals[i]));
      if (normal_part > 0.0) federer = std::min(federer, d2 / (2.0 * normal_part));
    }
  }
  reach_ = std::min(federer, 1.0 / max_abs_curvature_);

  // Bucket grid for nearest-sample queries.
  Vec2 lo = sample_points_[0];
  Vec2 hi = sample_points_[0];
  for (const auto& p : sample_points_) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  cell_ = std::max(4.0 * perimeter_ / s, 1e-12);
  grid_origin_ = lo;
  grid_nx_ = std::max(1, static_cast<int>(std::ceil((hi.x() - lo.x()) / cell_)) + 1);
  grid_ny_ = std::max(1, static_cast<int>(std::ceil((hi.y() - lo.y()) / cell_)) + 1);
  buckets_.assign(static_cast<std::size_t>(grid_nx_) * grid_ny_, {});
  for (int i = 0; i < s; ++i) {
    const int cx = std::clamp(static_cast<int>((sample_points_[i].x() - lo.x()) / cell_), 0, grid_nx_ - 1);
    const int cy = std::clamp(static_cast<int>((sample_points_[i].y() - lo.y()) / cell_), 0, grid_ny_ - 1);
    buckets_[static_cast<std::size_t>(cy) * grid_nx_ + cx].push_back(i);
  }
}

int BoundaryCurve::nearest_sample(const Vec2& x) const {
  const int cx = std::clamp(static_cast<int>(std::floor((x.x() - grid_origin_.x()) / cell_)), 0, grid_nx_ - 1);
  const int cy = std::clamp(static_cast<int>(std::floor((x.y() - grid_origin_.y()) / cell_)), 0, grid_ny_ - 1);
  int best = -1;
  double best_d2 = std::numeric_limits<double>::infinity();
  const int max_ring = std::max(grid_nx_, grid_ny_);
  for (int ring = 0; ring <= max_ring; ++ring) {
    if (best >= 0) {
      const double bound = (ring - 1) * cell_;
      if (bound > 0.0 && bound * bound > best_d2) break;
    }
    for (int gy = cy - ring; gy <= cy + ring; ++gy) {
      if (gy < 0 || gy >= grid_ny_) continue;
      const bool edge_row = (gy == cy - ring || gy == cy + ring);
      for (int gx = cx - ring; gx <= cx + ring; ++gx) {
        if (gx < 0 || gx >= grid_nx_) continue;
        if (!edge_row && gx != cx - ring && gx != cx + ring) continue;
        for (int idx : buckets_[static_cast<std::size_t>(gy) * grid_nx_ + gx]) {
          const double d2 = (sample_points_[idx] - x).squaredNorm();
          if (d2 < best_d2) {
            best_d2 = d2;
            best = idx;
          }
        }
      }
    }
  }
  return best;
}

CurveProjection BoundaryCurve::project(const Vec2& x) const {
  const int s = sample_count();
  const int i0 = nearest_sample(x);
  const double h = kTwoPi / s;
  auto g = [&](double t) { return (x - point(t)).dot(derivative(t, 1)); };
  double t = sample_params_[i0];
  // Bracket: g > 0 before the minimizer, g < 0 after.
  double a = t - h;
  double b = t + h;
  double ga = g(a);
  double gb = g(b);
  const bool bracketed = ga >= 0.0 && gb <= 0.0;
  bool converged = false;
  for (int iter = 0; iter < 60; ++iter) {
    const Vec2 p = point(t);
    const Vec2 d1 = derivative(t, 1);
    const Vec2 d2 = derivative(t, 2);
    const double gt = (x - p).dot(d1);
    if (gt == 0.0) {
      converged = true;
      break;
    }
    const double dg = -d1.squaredNorm() + (x - p).dot(d2);
    double next = dg < 0.0 ? t - gt / dg : t + (gt > 0 ? 0.5 : -0.5) * h;
    if (bracketed) {
      if (gt > 0.0) a = t; else b = t;
      if (!(next >= a && next <= b)) next = 0.5 * (a + b);
    }
    const double step = std::abs(next - t);
    t = next;
    if (step < 1e-15 * (1.0 + std::abs(t))) {
      converged = true;
      break;
    }
    if (bracketed && (b - a) < 1e-15) {
      converged = true;
      break;
    }
  }
  const Vec2 p = point(t);
  const double dist = (x - p).norm();
  const double sample_dist = (x - sample_points_[i0]).norm();
  if (!converged && !(dist <= sample_dist)) {
    raise(ErrorCode::kFootPointFailure, "foot-point Newton iteration did not converge");
  }
  if (!(dist <= sample_dist * (1.0 + 1e-12) + 1e-15)) {
    raise(ErrorCode::kFootPointFailure, "foot-point iteration left the nearest-sample basin");
  }
  const CurveFrame f = eval(t);
  CurveProjection out;
  out.t = wrap_angle(t);
  out.offset = (x - p).dot(f.normal);
  out.distance = dist;
  return out;
}

std::string BoundaryCurve::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](const void* data, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ULL;
    }
  };
  for (const auto* c : {&x_, &y_}) {
    const std::uint64_t n = c->cos.size();
    mix(&n, sizeof(n));
    for (double v : c->cos) mix(&v, sizeof(v));
    for (double v : c->sin) mix(&v, sizeof(v));
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

double max_tube_halfwidth(const BoundaryCurve& curve) { return curve.reach(); }

}  // namespace steklov
