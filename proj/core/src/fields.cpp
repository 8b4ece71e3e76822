#include "steklov/fields.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "steklov/error.hpp"

namespace steklov {

std::string_view to_string(RegionKind kind) {
  switch (kind) {
    case RegionKind::kPlane: return "plane";
    case RegionKind::kDomainInterior: return "domain";
    case RegionKind::kTube: return "tube";
  }
  return "unknown";
}

bool FieldRegion::contains(const Vec2& x) const {
  switch (kind) {
    case RegionKind::kPlane: return true;
    case RegionKind::kDomainInterior: return curve->project(x).offset < 0.0;
    case RegionKind::kTube: return curve->project(x).distance < halfwidth;
  }
  return false;
}

bool FieldRegion::contains_disk(const Vec2& center, double r) const {
  switch (kind) {
    case RegionKind::kPlane: return true;
    case RegionKind::kDomainInterior: {
      const CurveProjection p = curve->project(center);
      return p.offset < 0.0 && p.distance > r;
    }
    case RegionKind::kTube: return curve->project(center).distance + r < halfwidth;
  }
  return false;
}

Vec2 FieldRegion::sample(Rng& rng) const {
  switch (kind) {
    case RegionKind::kPlane: return {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    case RegionKind::kDomainInterior: {
      Vec2 lo(1e300, 1e300);
      Vec2 hi(-1e300, -1e300);
      for (int i = 0; i < curve->sample_count(); i += 8) {
        lo = lo.cwiseMin(curve->sample_point(i));
        hi = hi.cwiseMax(curve->sample_point(i));
      }
      for (int attempt = 0; attempt < 10000; ++attempt) {
        const Vec2 x(rng.uniform(lo.x(), hi.x()), rng.uniform(lo.y(), hi.y()));
        if (contains(x)) return x;
      }
      raise(ErrorCode::kPrecondition, "could not sample the domain interior");
    }
    case RegionKind::kTube: {
      const double t = rng.uniform(0.0, kTwoPi);
      const double s = rng.uniform(-0.95, 0.95) * halfwidth;
      const CurveFrame f = curve->eval(t);
      return f.point + s * f.normal;
    }
  }
  return Vec2::Zero();
}

CoefficientField laplace_coefficients() {
  CoefficientField c;
  c.eval = [](const Vec2&) { return CoefficientSample{}; };
  c.alpha = 1.0;
  c.gamma = 0.0;
  c.k_bound = 2.0;
  return c;
}

ScalarField harmonic_polynomial(std::vector<cdouble> coefficients, const Vec2& center) {
  ScalarField f;
  std::string desc = "harmonic_polynomial(";
  for (std::size_t k = 0; k < coefficients.size(); ++k) {
    if (k) desc += ",";
    desc += std::to_string(coefficients[k].real()) + (coefficients[k].imag() < 0 ? "" : "+") +
            std::to_string(coefficients[k].imag()) + "i";
  }
  f.description = desc + ")";
  f.eval = [c = std::move(coefficients), center](const Vec2& x) {
    const cdouble z(x.x() - center.x(), x.y() - center.y());
    // Horner for P and P'.
    cdouble p(0.0, 0.0);
    cdouble dp(0.0, 0.0);
    for (std::size_t k = c.size(); k-- > 0;) {
      dp = dp * z + p;
      p = p * z + c[k];
    }
    // P' = u_x - i u_y.
    return FieldSample{p.real(), Vec2(dp.real(), -dp.imag())};
  };
  return f;
}

ScalarField homogeneous_harmonic(int degree, double phase) {
  if (degree < 0) raise(ErrorCode::kInvalidArgument, "degree must be nonnegative");
  std::vector<cdouble> c(degree + 1, cdouble(0.0, 0.0));
  c[degree] = std::polar(1.0, -phase);
  ScalarField f = harmonic_polynomial(std::move(c));
  f.description = "homogeneous(" + std::to_string(degree) + "," + std::to_string(phase) + ")";
  return f;
}

ScalarField constant_field(double value) {
  ScalarField f;
  f.description = "constant(" + std::to_string(value) + ")";
  f.eval = [value](const Vec2&) { return FieldSample{value, Vec2::Zero()}; };
  return f;
}

GradientCheck check_field_gradient(const ScalarField& field, int probes, std::uint64_t seed,
                                   double scale) {
  Rng rng(seed);
  GradientCheck out;
  out.probes = probes;
  const double h = 1e-5 * scale;
  for (int i = 0; i < probes; ++i) {
    const Vec2 x = field.region.sample(rng);
    const FieldSample s = field(x);
    Vec2 fd;
    for (int d = 0; d < 2; ++d) {
      Vec2 e = Vec2::Zero();
      e[d] = h;
      fd[d] = (field(x + e).value - field(x - e).value) / (2.0 * h);
    }
    const double err = (fd - s.gradient).norm() / (s.gradient.norm() + std::abs(s.value) / scale + 1e-300);
    if (err > out.max_error) {
      out.max_error = err;
      out.worst = x;
    }
  }
  return out;
}

namespace {

double sup_norm(const CoefficientSample& c) {
  return c.a.cwiseAbs().sum() + c.b.cwiseAbs().sum() + std::abs(c.c);
}

}  // namespace

CoefficientCheck check_coefficient_bounds(const CoefficientField& coeffs, const FieldRegion& region,
                                          int probes, std::uint64_t seed) {
  Rng rng(seed);
  CoefficientCheck out;
  out.probes = probes;
  out.min_ellipticity = 1e300;
  const double sep = 0.05 * (1.0 + region.halfwidth);
  for (int i = 0; i < probes; ++i) {
    const Vec2 x = region.sample(rng);
    const CoefficientSample cx = coeffs(x);
    const Eigen::SelfAdjointEigenSolver<Mat2> eig(0.5 * (cx.a + cx.a.transpose()), Eigen::EigenvaluesOnly);
    out.min_ellipticity = std::min(out.min_ellipticity, eig.eigenvalues()(0));
    out.max_sup = std::max(out.max_sup, sup_norm(cx));

    const double ang = rng.uniform(0.0, kTwoPi);
    Vec2 y = x + rng.uniform(0.01, 1.0) * sep * Vec2(std::cos(ang), std::sin(ang));
    if (!region.contains(y)) continue;
    const CoefficientSample cy = coeffs(y);
    const double dist = (x - y).norm();
    out.max_lipschitz = std::max(out.max_lipschitz, (cx.a - cy.a).cwiseAbs().maxCoeff() / dist);
  }
  out.ellipticity_ok = out.min_ellipticity >= coeffs.alpha;
  out.lipschitz_ok = out.max_lipschitz <= coeffs.gamma + 1e-12;
  out.sup_ok = out.max_sup <= coeffs.k_bound;
  return out;
}

}  // namespace steklov
