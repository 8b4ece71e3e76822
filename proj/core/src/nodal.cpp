#include "steklov/nodal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "steklov/ball_quadrature.hpp"
#include "steklov/csv.hpp"
#include "steklov/error.hpp"
#include "steklov/frequency.hpp"
#include "steklov/quadrature.hpp"

namespace steklov {
namespace {

constexpr double kGolden = 0.6180339887498949;

double wrap(double t) {
  t = std::fmod(t, kTwoPi);
  return t < 0.0 ? t + kTwoPi : t;
}

template <typename F>
double bisect(const F& f, double a, double b, double fa, double tol) {
  while (b - a > tol) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0.0) return m;
    if (std::signbit(fm) == std::signbit(fa)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

// Minimizer of g on [a, b].
template <typename G>
double golden_min(const G& g, double a, double b, double tol) {
  double c = b - kGolden * (b - a);
  double d = a + kGolden * (b - a);
  double gc = g(c);
  double gd = g(d);
  while (b - a > tol) {
    if (gc < gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - kGolden * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + kGolden * (b - a);
      gd = g(d);
    }
  }
  return 0.5 * (a + b);
}

// u at a quadrature node; the sliver outside the curve may exceed the default band.
double extension_value(const SteklovEigenpair& pair, const Vec2& x) {
  try {
    return evaluate_extension(pair, x).value;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kOutOfDomain) throw;
    return evaluate_continuation(pair, x).value;
  }
}

// Parameters of `count` points equally spaced in arclength, starting at t = 0.
std::vector<double> arclength_net(const BoundaryCurve& curve, int count) {
  const int cells = std::max(1024, 4 * count);
  auto speed = [&](double t) { return curve.derivative(t, 1).norm(); };
  std::vector<double> cum(cells + 1, 0.0);
  for (int k = 0; k < cells; ++k) {
    cum[k + 1] = cum[k] + integrate_gl(speed, kTwoPi * k / cells, kTwoPi * (k + 1) / cells, 8);
  }
  const double total = cum.back();
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) {
    const double target = total * i / count;
    const int k = std::clamp(static_cast<int>(std::upper_bound(cum.begin(), cum.end(), target) - cum.begin()) - 1,
                             0, cells - 1);
    const double t0 = kTwoPi * k / cells;
    double t = t0 + (target - cum[k]) / speed(t0);
    for (int it = 0; it < 8; ++it) {
      const double s = cum[k] + integrate_gl(speed, t0, t, 8);
      const double step = (s - target) / speed(t);
      t -= step;
      if (std::abs(step) < 1e-15) break;
    }
    out[i] = t;
  }
  return out;
}

nlohmann::json vector_json(const std::vector<double>& v) { return nlohmann::json(v); }

}  // namespace

int nodal_sample_guard(const SteklovEigenpair& pair) {
  const double need = 16.0 * std::max(pair.lambda(), 0.0) * pair.curve().perimeter() / kTwoPi;
  return std::max(64, static_cast<int>(std::ceil(need)));
}

NodalReport boundary_zeros(const SteklovEigenpair& pair, int samples, double tol) {
  if (!(tol > 0.0)) raise(ErrorCode::kInvalidArgument, "tolerance must be positive");
  const int guard = nodal_sample_guard(pair);
  const int m = samples > 0 ? samples : std::max(guard, 4 * pair.nodes());
  if (m < guard) {
    raise(ErrorCode::kUndersampled, std::to_string(m) + " samples is below the guard of " + std::to_string(guard) +
                                        " for lambda = " + format_double(pair.lambda()));
  }

  std::vector<double> f;
  if (m >= pair.nodes()) {
    f = resample_periodic(std::span<const double>(pair.trace().data(), pair.trace().size()), m);
  } else {
    f.resize(m);
    for (int i = 0; i < m; ++i) f[i] = pair.trace_at(kTwoPi * i / m);
  }
  double sup = 0.0;
  for (double v : f) sup = std::max(sup, std::abs(v));

  NodalReport rep;
  rep.lambda = pair.lambda();
  rep.index = pair.index();
  rep.samples = m;
  rep.tol = tol;
  if (sup == 0.0) return rep;

  auto trace = [&](double t) { return pair.trace_at(t); };
  const double h = kTwoPi / m;
  for (int i = 0; i < m; ++i) {
    const double a = h * i;
    const double fa = f[i];
    const double fb = f[(i + 1) % m];
    if (fa == 0.0) {
      const double fp = f[(i + m - 1) % m];
      if (fp * fb < 0.0) {
        rep.zeros.push_back(a);
      } else {
        rep.tangential.push_back(a);
      }
      continue;
    }
    if (fa * fb < 0.0) {
      rep.zeros.push_back(wrap(bisect(trace, a, a + h, fa, tol)));
      continue;
    }
    // Hidden crossings or a touching zero near a same-signed local minimum of |f|.
    const double fp = f[(i + m - 1) % m];
    if (fb == 0.0 || fp * fa <= 0.0 || std::abs(fa) > std::abs(fp) || std::abs(fa) > std::abs(fb)) continue;
    const double sigma = fa > 0.0 ? 1.0 : -1.0;
    const double lo = a - h;
    const double hi = a + h;
    const double ts = golden_min([&](double t) { return sigma * trace(t); }, lo, hi, tol);
    const double fs = trace(ts);
    if (sigma * fs < 0.0) {
      rep.zeros.push_back(wrap(bisect(trace, lo, ts, fp, tol)));
      rep.zeros.push_back(wrap(bisect(trace, ts, hi, fs, tol)));
    } else if (std::abs(fs) < tol * sup) {
      rep.tangential.push_back(wrap(ts));
    }
  }
  std::sort(rep.zeros.begin(), rep.zeros.end());
  rep.zeros.erase(std::unique(rep.zeros.begin(), rep.zeros.end(), [&](double x, double y) { return y - x <= 4.0 * tol; }),
                  rep.zeros.end());
  if (rep.zeros.size() > 1 && rep.zeros.front() + kTwoPi - rep.zeros.back() <= tol) rep.zeros.pop_back();
  std::sort(rep.tangential.begin(), rep.tangential.end());
  return rep;
}

namespace {

// Offsets (from t_center) of the parameter intervals of the boundary ball.
std::vector<std::pair<double, double>> ball_offsets(const BoundaryCurve& curve, double t_center, double r) {
  if (!(r > 0.0)) return {};
  const int m = curve.sample_count();
  auto g = [&](double d) { return curve.chord(t_center + d, t_center).norm() - r; };
  std::vector<double> gv(m + 1);
  for (int k = 0; k <= m; ++k) gv[k] = k == 0 || k == m ? -r : g(kTwoPi * k / m);

  // Crossings in order from t_center; the first one is an exit.
  std::vector<double> cross;
  for (int k = 0; k < m; ++k) {
    const double a = kTwoPi * k / m;
    const double b = kTwoPi * (k + 1) / m;
    if ((gv[k] < 0.0) != (gv[k + 1] < 0.0)) {
      cross.push_back(bisect(g, a, b, gv[k], 4.0 * std::numeric_limits<double>::epsilon() * b));
    }
  }
  if (cross.empty()) return {{-kPi, kPi}};
  std::vector<std::pair<double, double>> out;
  out.emplace_back(cross.back() - kTwoPi, cross.front());
  for (std::size_t i = 1; i + 1 < cross.size(); i += 2) out.emplace_back(cross[i], cross[i + 1]);
  return out;
}

}  // namespace

std::vector<std::pair<double, double>> boundary_ball_intervals(const BoundaryCurve& curve, double t_center,
                                                               double r) {
  std::vector<std::pair<double, double>> out = ball_offsets(curve, t_center, r);
  for (auto& [a, b] : out) {
    a += t_center;
    b += t_center;
  }
  return out;
}

double boundary_mass(const SteklovEigenpair& pair, double t_center, double r) {
  const BoundaryCurve& curve = pair.curve();
  const TrigSeries series = pair.trace_series().trimmed(1e-15);
  const int bw = series.bandwidth() + curve.modes() + 1;
  const double panel = 0.5 * kPi / bw;
  auto integrand = [&](double d) {
    const double t = t_center + d;
    const double u = series(t).real();
    return u * u * curve.derivative(t, 1).norm();
  };
  double total = 0.0;
  for (const auto& [a, b] : ball_offsets(curve, t_center, r)) {
    const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / panel)));
    total += integrate_composite(integrand, a, b, panels, 16);
  }
  return total;
}

double interior_ball_mass(const SteklovEigenpair& pair, double t_center, double r, double rel_tol) {
  const BoundaryCurve& curve = pair.curve();
  const BoundaryBall ball = boundary_ball(curve, t_center, r);
  auto quad = [&](int order) {
    double s = 0.0;
    for (const QuadNode& q : split_ball_quadrature(curve, ball, order).interior) {
      const double u = extension_value(pair, q.x);
      s += q.w * u * u;
    }
    return s;
  };
  double prev = quad(8);
  for (int order = 16; order <= 128; order *= 2) {
    const double cur = quad(order);
    if (std::abs(cur - prev) <= rel_tol * std::abs(cur) + 1e-300) return cur;
    prev = cur;
  }
  return prev;
}

double domain_mass(const SteklovEigenpair& pair) {
  const BoundaryCurve& curve = pair.curve();
  const TrigSeries& phi_series = pair.analytic_trace();
  const int m = 4 * std::max(pair.nodes(), 2 * (phi_series.bandwidth() + curve.modes() + 1));
  std::vector<cdouble> phi(m), dz(m), z(m), h(m);
  for (int j = 0; j < m; ++j) {
    const double t = kTwoPi * j / m;
    phi[j] = phi_series(t);
    z[j] = curve.complex_point(cdouble(t, 0.0));
    dz[j] = curve.complex_derivative(cdouble(t, 0.0));
    h[j] = phi[j] * dz[j];
  }
  // G' = Phi along the curve, so d/dt G(gamma(t)) = Phi gamma'.
  const TrigSeries g = TrigSeries::interpolate(std::span<const cdouble>(h)).antiderivative();
  const std::vector<cdouble> gv = g.sample(m);
  cdouble i1 = 0.0;
  cdouble i2 = 0.0;
  for (int j = 0; j < m; ++j) {
    i1 += phi[j] * std::conj(gv[j]) * dz[j];
    i2 += phi[j] * phi[j] * std::conj(z[j]) * dz[j];
  }
  // int over Omega of dw/dzbar = (1 / 2i) * contour integral of w dz.
  const cdouble scale = cdouble(0.0, -0.5) * (kTwoPi / m);
  return 0.5 * ((scale * i1).real() + (scale * i2).real());
}

std::string_view to_string(DoublingMode mode) { return mode == DoublingMode::kBoundary ? "boundary" : "solid"; }

DoublingMode parse_doubling_mode(std::string_view text) {
  if (text == "boundary") return DoublingMode::kBoundary;
  if (text == "solid") return DoublingMode::kSolid;
  raise(ErrorCode::kInvalidArgument, "mode must be 'boundary' or 'solid', got '" + std::string(text) + "'");
}

double DoublingReport::max_exponent() const {
  double e = -std::numeric_limits<double>::infinity();
  for (double v : exponents) e = std::max(e, v);
  return e;
}

DoublingReport doubling_profile(const SteklovEigenpair& pair, double t_center, double r_min, double r_max,
                                DoublingMode mode, const VTransform* v) {
  if (!(r_min > 0.0) || !(r_max >= 2.0 * r_min * (1 - 1e-12))) {
    raise(ErrorCode::kInvalidArgument, "need 0 < r_min and r_max >= 2 r_min");
  }
  if (mode == DoublingMode::kSolid && v == nullptr) {
    raise(ErrorCode::kInvalidArgument, "solid mode needs the v transform");
  }
  DoublingReport rep;
  rep.t_center = t_center;
  rep.center = pair.curve().point(t_center);
  rep.mode = mode;
  rep.lambda = pair.lambda();
  rep.index = pair.index();
  for (int k = 0;; ++k) {
    const double r = r_min * std::exp2(0.25 * k);
    if (r > r_max * (1 + 1e-12)) break;
    rep.radii.push_back(r);
  }
  FrequencyOptions opts;
  opts.rel_tol = 1e-10;
  const double floor = std::pow(64.0 * std::numeric_limits<double>::epsilon() * pair.trace_sup(), 2);
  for (std::size_t k = 0; k < rep.radii.size(); ++k) {
    const double r = rep.radii[k];
    const double m = mode == DoublingMode::kBoundary ? boundary_mass(pair, t_center, r)
                                                     : ball_mass(v->field, rep.center, r, opts);
    if (k == 0) {
      const double measure = mode == DoublingMode::kBoundary ? 2.0 * r : kPi * r * r;
      if (!(m > floor * measure)) {
        raise(ErrorCode::kDegenerateCenter, "mass " + format_double(m) + " at r_min = " + format_double(r) +
                                                " is at round-off level");
      }
    }
    rep.mass.push_back(m);
  }
  for (std::size_t k = 0; k + 4 < rep.radii.size(); ++k) rep.exponents.push_back(std::log2(rep.mass[k + 4] / rep.mass[k]));
  return rep;
}

SpecialPointReport special_point_search(const SteklovEigenpair& pair, double rho) {
  const BoundaryCurve& curve = pair.curve();
  if (!(rho > 0.0)) raise(ErrorCode::kInvalidArgument, "rho must be positive");
  if (rho >= 0.5 * curve.perimeter()) {
    raise(ErrorCode::kNetConstruction, "rho = " + format_double(rho) + " leaves no rho/2-net on a curve of perimeter " +
                                           format_double(curve.perimeter()));
  }
  if (rho >= curve.reach()) {
    raise(ErrorCode::kPrecondition, "rho = " + format_double(rho) + " is not below the reach " + format_double(curve.reach()));
  }
  SpecialPointReport rep;
  rep.rho = rho;
  const int count = static_cast<int>(std::ceil(curve.perimeter() / (0.5 * rho)));
  rep.net = arclength_net(curve, count);
  rep.ball_mass.reserve(count);
  for (double t : rep.net) rep.ball_mass.push_back(interior_ball_mass(pair, t, rho));
  rep.best = static_cast<int>(std::max_element(rep.ball_mass.begin(), rep.ball_mass.end()) - rep.ball_mass.begin());
  rep.t_star = rep.net[rep.best];
  rep.y_star = curve.point(rep.t_star);
  rep.total_mass = domain_mass(pair);
  rep.c_star = rho * rho * rho * rep.total_mass / rep.ball_mass[rep.best];
  return rep;
}

ControlReport boundary_controls_solid_check(const SteklovEigenpair& pair, const TubeNeighborhood& tube, double t0,
                                            double r) {
  if (pair.curve().hash() != tube.curve().hash()) {
    raise(ErrorCode::kInvalidArgument, "eigenpair and tube are defined on different curves");
  }
  ControlReport rep;
  rep.t0 = t0;
  rep.r = r;
  rep.lambda_eff = std::max(pair.lambda(), 1.0);
  if (!(r > 0.0) || !(2.0 * r / rep.lambda_eff < tube.halfwidth())) {
    raise(ErrorCode::kPrecondition, "need 0 < 2r/lambda < tube half-width");
  }
  rep.lhs = boundary_mass(pair, t0, r / rep.lambda_eff);
  rep.rhs = rep.lambda_eff / r * interior_ball_mass(pair, t0, 2.0 * r / rep.lambda_eff);
  if (!(rep.lhs > 0.0)) raise(ErrorCode::kDegenerateCenter, "boundary mass vanishes at t0");
  rep.c_emp = rep.rhs > rep.lhs ? std::log2(rep.rhs / rep.lhs) / std::pow(rep.lambda_eff, 5) : 0.0;
  return rep;
}

std::string nodal_report_to_csv(const NodalReport& report, const BoundaryCurve& curve) {
  std::string out = csv_row({"t", "x", "y", "kind"});
  auto emit = [&](double t, const char* kind) {
    const Vec2 p = curve.point(t);
    out += csv_row({format_double(t), format_double(p.x()), format_double(p.y()), kind});
  };
  for (double t : report.zeros) emit(t, "simple");
  for (double t : report.tangential) emit(t, "tangential");
  return out;
}

std::string nodal_report_to_json(const NodalReport& report) {
  nlohmann::json j = {
      {"lambda", report.lambda},   {"index", report.index},        {"samples", report.samples},
      {"tol", report.tol},         {"count", report.count()},      {"zeros", vector_json(report.zeros)},
      {"tangential", vector_json(report.tangential)},
  };
  return j.dump(2);
}

std::string doubling_report_to_csv(const DoublingReport& report) {
  std::string out = csv_row({"r", "mass", "exponent"});
  for (std::size_t k = 0; k < report.radii.size(); ++k) {
    out += csv_row({format_double(report.radii[k]), format_double(report.mass[k]),
                    k < report.exponents.size() ? format_double(report.exponents[k]) : std::string()});
  }
  return out;
}

std::string doubling_report_to_json(const DoublingReport& report) {
  nlohmann::json j = {
      {"lambda", report.lambda},
      {"index", report.index},
      {"mode", std::string(to_string(report.mode))},
      {"t_center", report.t_center},
      {"center", {report.center.x(), report.center.y()}},
      {"radii", vector_json(report.radii)},
      {"mass", vector_json(report.mass)},
      {"exponents", vector_json(report.exponents)},
      {"max_exponent", report.exponents.empty() ? 0.0 : report.max_exponent()},
  };
  return j.dump(2);
}

}  // namespace steklov
