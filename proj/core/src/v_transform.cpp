#include "steklov/v_transform.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "steklov/error.hpp"

namespace steklov {
namespace {

// Fourth-order central difference of g along direction e.
template <typename G>
auto diff4(const G& g, const Vec2& x, const Vec2& e, double h) {
  using T = decltype(g(x));
  const T out = (-g(x + 2.0 * h * e) + 8.0 * g(x + h * e) - 8.0 * g(x - h * e) + g(x - 2.0 * h * e)) / (12.0 * h);
  return out;
}

struct Context {
  std::shared_ptr<const SteklovEigenpair> pair;
  std::shared_ptr<const TubeNeighborhood> tube;
  double lambda = 0.0;
  double fd_step = 0.0;

  FieldSample inner_value(const Vec2& x, const TubePoint& tp) const {
    const CurveFrame f = tube->curve().eval(tp.t_foot);
    const ExtensionValue u = evaluate_extension(*pair, x);
    const double e = std::exp(-lambda * tp.s);
    // grad d = -nu with d = -s.
    return {u.value * e, e * (u.gradient - lambda * u.value * f.normal)};
  }

  FieldSample inner(const Vec2& x) const { return inner_value(x, signed_distance(*tube, x)); }

  FieldSample outer(const Vec2& xp) const {
    const Vec2 x = reflect(*tube, xp);
    const Mat2 j = reflection_jacobian_exact(*tube, xp);
    const FieldSample s = inner(x);
    return {s.value, j.transpose() * s.gradient};
  }

  CoefficientSample inner_coeffs(const TubePoint& tp) const {
    const CurveFrame f = tube->curve().eval(tp.t_foot);
    const double denom = 1.0 + f.curvature * tp.s;
    if (!(denom > 1e-12)) raise(ErrorCode::kCurvatureSingularity, "1 + s kappa vanishes");
    CoefficientSample c;
    c.a = Mat2::Identity();
    c.b = 2.0 * lambda * f.normal;
    // Laplacian of d is -kappa / (1 + kappa s).
    c.c = lambda * lambda + lambda * f.curvature / denom;
    return c;
  }

  CoefficientSample inner_coeffs(const Vec2& x) const { return inner_coeffs(signed_distance(*tube, x)); }

  Mat2 outer_a(const Vec2& xp) const {
    const Mat2 j = reflection_jacobian_exact(*tube, reflect(*tube, xp));
    return j * j.transpose();
  }

  CoefficientSample outer_coeffs(const Vec2& xp) const {
    const Vec2 x = reflect(*tube, xp);
    const Mat2 jx = reflection_jacobian_exact(*tube, x);
    const CoefficientSample in = inner_coeffs(x);
    CoefficientSample c;
    c.a = jx * jx.transpose();
    const double h = fd_step;
    Vec2 div_a = Vec2::Zero();
    Vec2 lap_psi = Vec2::Zero();
    for (int j = 0; j < 2; ++j) {
      const Vec2 e = Vec2::Unit(j);
      const Mat2 da = diff4([&](const Vec2& y) { return Mat2(outer_a(y)); }, xp, e, h);
      const Mat2 dj = diff4([&](const Vec2& y) { return Mat2(reflection_jacobian_exact(*tube, y)); }, x, e, h);
      div_a += da.col(j);
      lap_psi += dj.col(j);
    }
    c.b = -div_a + lap_psi + jx * in.b;
    c.c = in.c;
    return c;
  }
};

double sup_norm(const CoefficientSample& c) {
  return c.a.cwiseAbs().sum() + c.b.cwiseAbs().sum() + std::abs(c.c);
}

}  // namespace

VTransform v_transform(const SteklovEigenpair& pair, const TubeNeighborhood& tube) {
  if (pair.curve().hash() != tube.curve().hash()) {
    raise(ErrorCode::kInvalidArgument, "eigenpair and tube are defined on different curves");
  }
  auto ctx = std::make_shared<Context>();
  ctx->pair = std::make_shared<const SteklovEigenpair>(pair);
  ctx->tube = std::make_shared<const TubeNeighborhood>(tube);
  ctx->lambda = pair.lambda();
  ctx->fd_step = 1e-3 * tube.halfwidth();

  VTransform out;
  out.lambda = pair.lambda();
  out.halfwidth = tube.halfwidth();

  ScalarField& f = out.field;
  f.region = {RegionKind::kTube, tube.curve_ptr(), tube.halfwidth()};
  f.description = "v_transform(" + pair.curve().name() + ", j=" + std::to_string(pair.index()) +
                  ", lambda=" + std::to_string(pair.lambda()) + ")";
  f.inner = [ctx](const Vec2& x) { return ctx->inner(x); };
  f.outer = [ctx](const Vec2& x) { return ctx->outer(x); };
  f.eval = [ctx](const Vec2& x) {
    const TubePoint tp = signed_distance(*ctx->tube, x);
    return tp.s <= 0.0 ? ctx->inner_value(x, tp) : ctx->outer(x);
  };

  CoefficientField& c = out.coefficients;
  c.inner = [ctx](const Vec2& x) { return ctx->inner_coeffs(x); };
  c.outer = [ctx](const Vec2& x) { return ctx->outer_coeffs(x); };
  c.eval = [ctx](const Vec2& x) {
    const TubePoint tp = signed_distance(*ctx->tube, x);
    return tp.s <= 0.0 ? ctx->inner_coeffs(tp) : ctx->outer_coeffs(x);
  };

  // Scan for the declared bounds.
  const int nt = 256;
  const int ns = 17;
  const BoundaryCurve& curve = tube.curve();
  double min_eig = 1e300;
  double max_sup = 0.0;
  double max_lip = 0.0;
  double max_b = 0.0;
  double max_c = 0.0;
  std::vector<Mat2> prev_row(nt);
  std::vector<Vec2> prev_pts(nt);
  for (int is = 0; is < ns; ++is) {
    const double s = (-0.95 + 1.9 * is / (ns - 1)) * tube.halfwidth();
    Mat2 first_a;
    Vec2 first_x;
    Mat2 last_a;
    Vec2 last_x;
    for (int it = 0; it < nt; ++it) {
      const CurveFrame fr = curve.eval(kTwoPi * it / nt);
      const Vec2 x = fr.point + s * fr.normal;
      const CoefficientSample cs = c.eval(x);
      const Eigen::SelfAdjointEigenSolver<Mat2> eig(cs.a, Eigen::EigenvaluesOnly);
      min_eig = std::min(min_eig, eig.eigenvalues()(0));
      max_sup = std::max(max_sup, sup_norm(cs));
      max_b = std::max(max_b, cs.b.norm());
      max_c = std::max(max_c, std::abs(cs.c));
      if (it > 0) max_lip = std::max(max_lip, (cs.a - last_a).cwiseAbs().maxCoeff() / (x - last_x).norm());
      if (is > 0) max_lip = std::max(max_lip, (cs.a - prev_row[it]).cwiseAbs().maxCoeff() / (x - prev_pts[it]).norm());
      if (it == 0) {
        first_a = cs.a;
        first_x = x;
      }
      last_a = cs.a;
      last_x = x;
      prev_row[it] = cs.a;
      prev_pts[it] = x;
    }
    max_lip = std::max(max_lip, (first_a - last_a).cwiseAbs().maxCoeff() / (first_x - last_x).norm());
  }
  c.alpha = std::min(1.0, min_eig) / 1.25;
  c.gamma = 1.25 * max_lip + 1e-9;
  c.k_bound = 1.25 * max_sup;
  const double lam = std::abs(pair.lambda());
  if (lam > 1e-9) {
    out.b_constant = max_b / lam;
    out.c_constant = max_c / (lam * lam);
  }
  return out;
}

PdeResidual pde_residual(const ScalarField& field, const CoefficientField& coeffs, const Vec2& x, double h) {
  FieldCallback fw = field.eval;
  CoefficientCallback fc = coeffs.eval;
  if (field.piecewise() && field.region.curve) {
    const bool outside = field.region.curve->project(x).offset > 0.0;
    fw = outside ? field.outer : field.inner;
    if (coeffs.piecewise()) fc = outside ? coeffs.outer : coeffs.inner;
  }
  auto flux = [&](const Vec2& y) -> Vec2 { return fc(y).a * fw(y).gradient; };
  double div = 0.0;
  for (int j = 0; j < 2; ++j) div += diff4(flux, x, Vec2::Unit(j), h)(j);
  const FieldSample w = fw(x);
  const CoefficientSample c = fc(x);
  PdeResidual out;
  out.residual = div + c.b.dot(w.gradient) + c.c * w.value;
  out.scale = std::abs(c.c) * std::abs(w.value) + c.b.norm() * w.gradient.norm();
  return out;
}

}  // namespace steklov
