#include "steklov/frequency.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>

#include <nlohmann/json.hpp>

#include "steklov/ball_quadrature.hpp"
#include "steklov/error.hpp"

namespace steklov {

std::string_view to_string(FrequencyMode mode) {
  return mode == FrequencyMode::kHarmonic ? "harmonic" : "generalized";
}

namespace {

struct Tagged {
  Vec2 x;
  double w;
  bool outer;
};

struct Rule {
  std::vector<Tagged> disk;
  std::vector<Tagged> circle;
};

void append(std::vector<Tagged>& out, const std::vector<QuadNode>& nodes, bool outer) {
  for (const QuadNode& q : nodes) out.push_back({q.x, q.w, outer});
}

Rule make_rule(const Vec2& center, double r, int level, const BoundaryCurve* split_curve,
               const BoundaryBall* ball) {
  Rule rule;
  if (ball != nullptr) {
    const SplitBallQuadrature s = split_ball_quadrature(*split_curve, *ball, level);
    append(rule.disk, s.interior, false);
    append(rule.disk, s.exterior, true);
    const SplitCircleQuadrature c = split_circle_quadrature(*ball, 2 * level);
    append(rule.circle, c.interior, false);
    append(rule.circle, c.exterior, true);
  } else {
    append(rule.disk, disk_quadrature(center, r, level, 4 * level), false);
    append(rule.circle, circle_quadrature(center, r, 4 * level), false);
  }
  return rule;
}

struct Sums {
  double h = 0.0, d = 0.0, i = 0.0, mass = 0.0;
  double h_abs = 0.0, d_abs = 0.0, i_abs = 0.0, mass_abs = 0.0;
};

Sums integrate(const ScalarField& field, const CoefficientField* coeffs, const Rule& rule, bool split) {
  Sums s;
  for (const Tagged& q : rule.disk) {
    const FieldSample f = split ? (q.outer ? field.outer(q.x) : field.inner(q.x)) : field(q.x);
    const double g2 = f.gradient.squaredNorm();
    s.d += q.w * g2;
    s.d_abs += std::abs(q.w) * g2;
    s.mass += q.w * f.value * f.value;
    s.mass_abs += std::abs(q.w) * f.value * f.value;
    double integrand = g2;
    if (coeffs != nullptr) {
      const bool piece = split && coeffs->piecewise();
      const CoefficientSample c = piece ? (q.outer ? coeffs->outer(q.x) : coeffs->inner(q.x)) : (*coeffs)(q.x);
      integrand += f.value * c.b.dot(f.gradient) + c.c * f.value * f.value;
    }
    s.i += q.w * integrand;
    s.i_abs += std::abs(q.w * integrand);
  }
  for (const Tagged& q : rule.circle) {
    const FieldSample f = split ? (q.outer ? field.outer(q.x) : field.inner(q.x)) : field(q.x);
    s.h += q.w * f.value * f.value;
    s.h_abs += std::abs(q.w) * f.value * f.value;
  }
  return s;
}

bool stable(double a, double b, double abs_scale, double rel_tol) {
  return std::abs(a - b) <= rel_tol * std::abs(b) + 64.0 * std::numeric_limits<double>::epsilon() * abs_scale;
}

void check_center(const CoefficientField& coeffs, const Vec2& center, double tol) {
  const CoefficientSample c = coeffs(center);
  const double dev = (c.a - Mat2::Identity()).norm();
  if (!(dev <= tol)) {
    raise(ErrorCode::kInvalidCenter, "A(center) differs from the identity by " + std::to_string(dev));
  }
}

double frequency_of(const BallIntegrals& b, double r, bool generalized) {
  return r * (generalized ? b.i : b.d) / b.h;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

BallIntegrals ball_integrals(const ScalarField& field, const CoefficientField* coeffs, const Vec2& center,
                             double r, const FrequencyOptions& options) {
  if (!(r > 0.0)) raise(ErrorCode::kInvalidArgument, "radius must be positive");
  if (!field.region.contains_disk(center, r)) {
    raise(ErrorCode::kRegionViolation, "ball of radius " + std::to_string(r) + " leaves the " +
                                           std::string(to_string(field.region.kind)) + " region");
  }
  if (coeffs != nullptr) check_center(*coeffs, center, options.center_tol);

  const BoundaryCurve* curve = field.region.curve.get();
  std::optional<BoundaryBall> ball;
  if (field.piecewise() && curve != nullptr) {
    const CurveProjection p = curve->project(center);
    if (p.distance <= 1e-12 * (1.0 + curve->diameter())) ball = boundary_ball(*curve, p.t, r);
  }
  const bool split = ball.has_value();

  auto run = [&](int level) {
    return integrate(field, coeffs, make_rule(center, r, level, curve, split ? &*ball : nullptr), split);
  };

  BallIntegrals out;
  int level = std::max(1, options.start_level);
  Sums prev = run(level);
  while (2 * level <= options.max_level) {
    level *= 2;
    const Sums cur = run(level);
    out = {cur.h, cur.d, cur.i, cur.mass, level, false};
    if (stable(prev.h, cur.h, cur.h_abs, options.rel_tol) && stable(prev.d, cur.d, cur.d_abs, options.rel_tol) &&
        stable(prev.i, cur.i, cur.i_abs, options.rel_tol) &&
        stable(prev.mass, cur.mass, cur.mass_abs, options.rel_tol)) {
      out.converged = true;
      return out;
    }
    prev = cur;
  }
  if (out.level == 0) out = {prev.h, prev.d, prev.i, prev.mass, level, false};
  return out;
}

double h_of_r(const ScalarField& field, const Vec2& center, double r, const FrequencyOptions& options) {
  return ball_integrals(field, nullptr, center, r, options).h;
}

double d_of_r(const ScalarField& field, const Vec2& center, double r, const FrequencyOptions& options) {
  return ball_integrals(field, nullptr, center, r, options).d;
}

double i_of_r(const ScalarField& field, const CoefficientField& coeffs, const Vec2& center, double r,
              const FrequencyOptions& options) {
  return ball_integrals(field, &coeffs, center, r, options).i;
}

double ball_mass(const ScalarField& field, const Vec2& center, double r, const FrequencyOptions& options) {
  return ball_integrals(field, nullptr, center, r, options).mass;
}

std::vector<double> geometric_radii(double r_min, double r_max, double ratio) {
  if (!(r_min > 0.0) || !(r_max >= r_min) || !(ratio > 1.0)) {
    raise(ErrorCode::kInvalidArgument, "need 0 < r_min <= r_max and ratio > 1");
  }
  std::vector<double> out;
  for (int j = 0;; ++j) {
    const double r = r_min * std::pow(ratio, j);
    if (r > r_max * (1.0 + 1e-12)) break;
    out.push_back(r);
  }
  return out;
}

std::vector<double> geometric_radii_count(double r_min, double r_max, int count) {
  if (count < 2 || !(r_min > 0.0) || !(r_max > r_min)) {
    raise(ErrorCode::kInvalidArgument, "need count >= 2 and 0 < r_min < r_max");
  }
  std::vector<double> out(count);
  const double q = std::log(r_max / r_min) / (count - 1);
  for (int j = 0; j < count; ++j) out[j] = r_min * std::exp(q * j);
  out.back() = r_max;
  return out;
}

FrequencyProfile frequency_profile(const ScalarField& field, const CoefficientField* coeffs, const Vec2& center,
                                   const std::vector<double>& radii, const FrequencyOptions& options) {
  for (std::size_t k = 1; k < radii.size(); ++k) {
    if (!(radii[k] > radii[k - 1])) raise(ErrorCode::kInvalidArgument, "radius grid must increase");
  }
  FrequencyProfile p;
  p.center = center;
  p.mode = coeffs ? FrequencyMode::kGeneralized : FrequencyMode::kHarmonic;
  p.description = field.description;
  for (double r : radii) {
    const BallIntegrals b = ball_integrals(field, coeffs, center, r, options);
    if (!(b.h > options.h_floor)) {
      p.truncated = true;
      break;
    }
    p.radii.push_back(r);
    p.h.push_back(b.h);
    p.d.push_back(b.d);
    p.i.push_back(coeffs ? b.i : b.d);
    p.n.push_back(frequency_of(b, r, coeffs != nullptr));
    p.mass.push_back(b.mass);
  }
  return p;
}

std::string profile_to_csv(const FrequencyProfile& profile) {
  nlohmann::json meta = {
      {"center", {profile.center.x(), profile.center.y()}},
      {"mode", std::string(to_string(profile.mode))},
      {"field", profile.description},
      {"dimension", kDim},
      {"truncated", profile.truncated},
  };
  std::string out = "# " + meta.dump() + "\n";
  out += "r,H,D,I,N\n";
  for (std::size_t k = 0; k < profile.size(); ++k) {
    out += fmt17(profile.radii[k]) + "," + fmt17(profile.h[k]) + "," + fmt17(profile.d[k]) + "," +
           fmt17(profile.i[k]) + "," + fmt17(profile.n[k]) + "\n";
  }
  return out;
}

void save_profile_csv(const FrequencyProfile& profile, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) raise(ErrorCode::kIo, "cannot write " + path);
  f << profile_to_csv(profile);
  if (!f) raise(ErrorCode::kIo, "write failed: " + path);
}

MonotonicityReport check_monotonicity(const FrequencyProfile& profile, double tol_rel) {
  MonotonicityReport rep;
  rep.tol_rel = tol_rel;
  for (std::size_t k = 0; k + 1 < profile.size(); ++k) {
    const double a = profile.n[k];
    const double b = profile.n[k + 1];
    const double drop = (a - b) / std::max(std::abs(a), 1e-300);
    if (drop > rep.worst_violation) {
      rep.worst_violation = drop;
      rep.worst_index = static_cast<int>(k);
    }
    if (b < a - tol_rel * std::abs(a)) ++rep.violations;
  }
  return rep;
}

ReverseDoublingReport check_reverse_doubling(const FrequencyProfile& profile, double tol_rel) {
  ReverseDoublingReport rep;
  rep.tol_rel = tol_rel;
  for (std::size_t k = 0; k < profile.size(); ++k) {
    const double sm = profile.sphere_mean(k);
    const double excess = (profile.ball_mean(k) - sm) / std::max(sm, 1e-300);
    rep.worst_ball_excess = std::max(rep.worst_ball_excess, excess);
    if (excess > tol_rel) ++rep.violations;
    if (k + 1 < profile.size()) {
      const double drop = (sm - profile.sphere_mean(k + 1)) / std::max(sm, 1e-300);
      rep.worst_sphere_drop = std::max(rep.worst_sphere_drop, drop);
      if (drop > tol_rel) ++rep.violations;
    }
  }
  return rep;
}

HprimeReport check_hprime_identity(const ScalarField& field, const CoefficientField* coeffs, const Vec2& center,
                                   double r, double step_rel, const FrequencyOptions& options) {
  HprimeReport rep;
  rep.r = r;
  rep.step = step_rel * r;
  auto log_h = [&](double rho) { return std::log(h_of_r(field, center, rho, options) / rho); };
  auto central = [&](double h) { return (log_h(r + h) - log_h(r - h)) / (2.0 * h); };
  const double d1 = central(rep.step);
  const double d2 = central(0.5 * rep.step);
  rep.lhs = (4.0 * d2 - d1) / 3.0;
  const BallIntegrals b = ball_integrals(field, coeffs, center, r, options);
  rep.rhs = 2.0 * frequency_of(b, r, coeffs != nullptr) / r;
  rep.offset = rep.lhs - rep.rhs;
  const double floor = 1e-9 / r;
  if (std::abs(rep.rhs) > floor) {
    rep.residual = std::abs(rep.offset) / std::abs(rep.rhs);
  } else {
    rep.residual = std::abs(rep.offset) * r;
  }
  return rep;
}

DoublingCheck check_doubling_from_frequency(const ScalarField& field, const Vec2& center, double R, double eta,
                                            double tol_rel, const FrequencyOptions& options) {
  if (!(eta > 0.0 && eta < 1.0)) raise(ErrorCode::kInvalidArgument, "eta must lie in (0, 1)");
  DoublingCheck rep;
  rep.radius = R;
  rep.eta = eta;
  const BallIntegrals big = ball_integrals(field, nullptr, center, R, options);
  const BallIntegrals small = ball_integrals(field, nullptr, center, eta * R, options);
  rep.frequency = frequency_of(big, R, false);
  rep.bound = std::pow(eta, -2.0 * rep.frequency);
  rep.sphere_ratio = (big.h / R) / (small.h / (eta * R));
  rep.ball_ratio = (big.mass / (R * R)) / (small.mass / (eta * eta * R * R));
  rep.sphere_slack = rep.bound / rep.sphere_ratio - 1.0;
  rep.ball_slack = rep.bound / rep.ball_ratio - 1.0;
  rep.passed = rep.sphere_slack >= -tol_rel && rep.ball_slack >= -tol_rel;
  return rep;
}

FrequencyFromDoubling frequency_from_doubling(const ScalarField& field, const Vec2& center, double r, double alpha,
                                              double theta, double kappa, double beta, double tol_rel,
                                              const FrequencyOptions& options) {
  if (beta <= 0.0) beta = 0.5 * alpha;
  if (!(0.0 < beta && beta < alpha && alpha < theta && theta < 1.0 && kappa > 0.0)) {
    raise(ErrorCode::kPrecondition, "need 0 < beta < alpha < theta < 1 and kappa > 0");
  }
  FrequencyFromDoubling rep;
  rep.r = r;
  rep.alpha = alpha;
  rep.theta = theta;
  rep.kappa = kappa;
  rep.beta = beta;
  const BallIntegrals full = ball_integrals(field, nullptr, center, r, options);
  const BallIntegrals mid = ball_integrals(field, nullptr, center, alpha * r, options);
  const BallIntegrals low = ball_integrals(field, nullptr, center, beta * r, options);
  auto mean = [](const BallIntegrals& b, double rho) { return b.mass / (kPi * rho * rho); };
  rep.measured_kappa = mean(mid, alpha * r) / mean(full, r);
  if (rep.measured_kappa < kappa * (1.0 - tol_rel)) {
    raise(ErrorCode::kPrecondition, "doubling assumption fails: measured ratio " +
                                        std::to_string(rep.measured_kappa) + " < kappa " + std::to_string(kappa));
  }
  const double base = kappa * (1.0 - std::pow(theta, kDim));
  rep.bound = -std::log(base) / (2.0 * std::log(theta / alpha));
  rep.frequency = frequency_of(mid, alpha * r, false);
  rep.small_ball_ratio = mean(low, beta * r) / mean(mid, alpha * r);
  rep.small_ball_bound = std::pow(base, std::log(alpha / beta) / std::log(theta / alpha));
  rep.passed = rep.frequency <= rep.bound * (1.0 + tol_rel) + tol_rel &&
               rep.small_ball_ratio >= rep.small_ball_bound * (1.0 - tol_rel);
  return rep;
}

ChainReport chain_frequency_check(const ScalarField& field, double R, int samples, std::uint64_t seed,
                                  const FrequencyOptions& options) {
  if (!(R > 0.0 && R < 1.0)) raise(ErrorCode::kInvalidArgument, "R must lie in (0, 1)");
  if (samples < 1) raise(ErrorCode::kInvalidArgument, "need at least one sample");
  ChainReport rep;
  rep.R = R;
  rep.radius = 0.5 * (1.0 - R);
  rep.samples = samples;
  rep.origin_frequency = frequency_of(ball_integrals(field, nullptr, Vec2::Zero(), 1.0, options), 1.0, false);
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    Vec2 p = Vec2::Zero();
    if (s > 0) {
      const double rad = R * std::sqrt(rng.uniform());
      const double ang = rng.uniform(0.0, kTwoPi);
      p = rad * Vec2(std::cos(ang), std::sin(ang));
    }
    const double n = frequency_of(ball_integrals(field, nullptr, p, rep.radius, options), rep.radius, false);
    if (s == 0 || n > rep.max_frequency) {
      rep.max_frequency = n;
      rep.worst = p;
    }
  }
  const double tiny = 1e-12;
  if (rep.origin_frequency > tiny) {
    rep.c_emp = rep.max_frequency / rep.origin_frequency;
  } else {
    rep.c_emp = rep.max_frequency > tiny ? std::numeric_limits<double>::infinity() : 0.0;
  }
  return rep;
}

GeneralizedReport generalized_suite(const ScalarField& field, const CoefficientField& coeffs, const Vec2& center,
                                    const std::vector<double>& radii, double zeta,
                                    const FrequencyOptions& options) {
  if (!(zeta > 0.0 && zeta < 1.0)) raise(ErrorCode::kInvalidArgument, "zeta must lie in (0, 1)");
  GeneralizedReport rep;
  rep.zeta = zeta;
  rep.profile = frequency_profile(field, &coeffs, center, radii, options);
  const FrequencyProfile& p = rep.profile;
  const std::size_t m = p.size();
  rep.h_positive = !p.truncated && m == radii.size();
  if (m == 0) return rep;

  const double lo = -std::numeric_limits<double>::infinity();
  rep.d_upper_c = rep.d_lower_c = rep.c1_bound = lo;
  rep.n_over_r_min = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < m; ++k) {
    rep.d_upper_c = std::max(rep.d_upper_c, (p.d[k] - 2.0 * p.i[k]) / p.h[k]);
    rep.d_lower_c = std::max(rep.d_lower_c, (0.5 * p.i[k] - p.d[k]) / p.h[k]);
    rep.n_over_r_min = std::min(rep.n_over_r_min, p.n[k] / p.radii[k]);
    rep.ball_sphere_c = std::max(rep.ball_sphere_c, p.ball_mean(k) / p.sphere_mean(k));
    for (std::size_t j = k + 1; j < m; ++j) {
      rep.c1_bound = std::max(rep.c1_bound, p.n[k] - p.n[j]);
      rep.reverse_c = std::max(rep.reverse_c, p.sphere_mean(k) / p.sphere_mean(j));
      const double shape = std::pow(p.radii[j] / p.radii[k], 2.0 * p.n[j]);
      rep.sphere_doubling_c = std::max(rep.sphere_doubling_c, p.sphere_mean(j) / p.sphere_mean(k) / shape);
      rep.ball_doubling_c = std::max(rep.ball_doubling_c, p.ball_mean(j) / p.ball_mean(k) / shape);
    }
  }
  if (m == 1) rep.c1_bound = 0.0;
  for (std::size_t k = 0; k + 1 < m; ++k) {
    const HprimeReport h = check_hprime_identity(field, &coeffs, center, p.radii[k], 1e-3, options);
    rep.hprime_offset = std::max(rep.hprime_offset, std::abs(h.offset));
  }
  rep.c_zeta = lo;
  for (std::size_t j = 0; j < m; ++j) {
    const double rs = zeta * p.radii[j];
    const BallIntegrals b = ball_integrals(field, &coeffs, center, rs, options);
    const double kappa = (b.mass / (rs * rs)) / (p.mass[j] / (p.radii[j] * p.radii[j]));
    rep.c_zeta = std::max(rep.c_zeta, frequency_of(b, rs, true) / (1.0 - std::log(kappa)));
  }
  return rep;
}

}  // namespace steklov
