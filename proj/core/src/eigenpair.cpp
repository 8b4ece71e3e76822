#include "steklov/eigenpair.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "steklov/ball_quadrature.hpp"
#include "steklov/error.hpp"

namespace steklov {
namespace {

// Relative size below which analytic-trace coefficients are treated as round-off.
constexpr double kTrim = 1e-14;

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

ExtensionValue continuation(const SteklovEigenpair& pair, const Vec2& x, double t0, double s0) {
  const BoundaryCurve& c = pair.curve();
  const cdouble z(x.x(), x.y());
  cdouble tau(t0, -s0 / c.eval(t0).speed);
  const double scale = std::max(1.0, c.diameter());
  bool converged = false;
  for (int iter = 0; iter < 60; ++iter) {
    const cdouble resid = c.complex_point(tau) - z;
    if (std::abs(resid) < 1e-15 * scale) {
      converged = true;
      break;
    }
    const cdouble step = resid / c.complex_derivative(tau);
    tau -= step;
    if (std::abs(step) < 1e-16) {
      converged = std::abs(c.complex_point(tau) - z) < 1e-12 * scale;
      break;
    }
  }
  if (!converged) raise(ErrorCode::kFootPointFailure, "complex parameter inversion did not converge");
  cdouble phi, dphi;
  pair.analytic_trace().eval_with_derivative(tau, phi, dphi);
  const cdouble grad = dphi / c.complex_derivative(tau);
  ExtensionValue out;
  out.value = phi.real();
  out.gradient = Vec2(grad.real(), -grad.imag());
  out.path = ExtensionPath::kContinuation;
  out.inside = tau.imag() > 0.0;
  // Round-off in the coefficients grows like exp(|k| |Im tau|).
  const auto coeffs = pair.analytic_trace().coefficients();
  double peak = 0.0, amplification = 1.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const int k = pair.analytic_trace().kmin() + static_cast<int>(i);
    peak = std::max(peak, std::abs(coeffs[i]));
    amplification = std::max(amplification, std::exp(-k * tau.imag()));
  }
  out.near_boundary_warning = 1e-16 * peak * amplification * coeffs.size() > 1e-8 * pair.trace_sup();
  return out;
}

ExtensionValue single_layer(const SteklovEigenpair& pair, const Vec2& x, int level) {
  const NodeGrid& g = pair.geometry().levels[level];
  const std::vector<double>& sigma = pair.density_level(level);
  double u = 0.0;
  Vec2 grad = Vec2::Zero();
  for (int j = 0; j < g.n; ++j) {
    const Vec2 diff = x - g.point[j];
    const double r2 = diff.squaredNorm();
    const double q = sigma[j] * g.weight[j];
    u += std::log(r2) * q;
    grad += diff * (q / r2);
  }
  ExtensionValue out;
  out.value = -u / (4.0 * kPi) + pair.constant();
  out.gradient = -grad / kTwoPi;
  out.path = ExtensionPath::kSingleLayer;
  out.inside = true;
  return out;
}

}  // namespace

SteklovEigenpair::SteklovEigenpair(std::shared_ptr<const DtnGeometry> geometry, int index, double lambda,
                                   Eigen::VectorXd trace, Eigen::VectorXd density, double constant,
                                   Eigen::VectorXd neumann)
    : geometry_(std::move(geometry)),
      index_(index),
      lambda_(lambda),
      trace_(std::move(trace)),
      density_(std::move(density)),
      constant_(constant),
      neumann_(std::move(neumann)) {
  const int n = static_cast<int>(trace_.size());
  if (n != geometry_->base().n) raise(ErrorCode::kInvalidArgument, "trace size does not match the node grid");
  trace_sup_ = trace_.cwiseAbs().maxCoeff();
  bc_residual_ = (neumann_ - lambda_ * trace_).cwiseAbs().maxCoeff() / std::max(trace_sup_, 1e-300);

  const std::vector<double> f = to_std(trace_);
  trace_series_ = TrigSeries::interpolate(std::span<const double>(f));
  // Conjugate trace: dV/dt = (d u / d nu) |gamma'|.
  std::vector<double> dv(n);
  for (int j = 0; j < n; ++j) dv[j] = neumann_[j] * geometry_->base().speed[j];
  const TrigSeries v = TrigSeries::interpolate(std::span<const double>(dv)).antiderivative();
  analytic_ = (trace_series_ + v * cdouble(0.0, 1.0)).trimmed(kTrim);
  analytic_d_ = analytic_.derivative();

  const std::vector<double> sigma = to_std(density_);
  density_levels_.push_back(sigma);
  for (std::size_t l = 1; l < geometry_->levels.size(); ++l) {
    density_levels_.push_back(resample_periodic(sigma, geometry_->levels[l].n));
  }
}

std::vector<double> SpectrumSlice::eigenvalues() const {
  std::vector<double> out;
  for (const auto& p : pairs) out.push_back(p.lambda());
  return out;
}

std::vector<double> SpectrumSlice::residuals() const {
  std::vector<double> out;
  for (const auto& p : pairs) out.push_back(p.bc_residual());
  return out;
}

SpectrumSlice solve_spectrum(const DtnDiscretization& dtn, int count) {
  const int n = dtn.nodes;
  if (count < 1 || count > n / 4) {
    std::ostringstream msg;
    msg << "count " << count << " outside [1, N/4 = " << n / 4 << "]";
    raise(ErrorCode::kInvalidArgument, msg.str());
  }
  const Eigen::VectorXd sw = dtn.weights.array().sqrt();
  Eigen::MatrixXd a = sw.asDiagonal() * dtn.matrix * sw.cwiseInverse().asDiagonal();
  const double defect = (a - a.transpose()).norm() / dtn.matrix.norm();
  a = 0.5 * (a + a.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "symmetric eigensolver failed (N = " << n << ", ||A|| = " << a.norm()
        << ", symmetry defect = " << defect << ")";
    raise(ErrorCode::kSolverFailure, msg.str());
  }
  SpectrumSlice slice;
  slice.geometry = dtn.geometry;
  slice.nodes = n;
  slice.symmetry_defect = defect;
  slice.rcond = dtn.rcond;
  for (int i = 0; i < count; ++i) {
    Eigen::VectorXd f = solver.eigenvectors().col(i).cwiseQuotient(sw);
    // Deterministic sign: the first entry of appreciable size is positive.
    const double big = 1e-3 * f.cwiseAbs().maxCoeff();
    for (int j = 0; j < n; ++j) {
      if (std::abs(f[j]) > big) {
        if (f[j] < 0.0) f = -f;
        break;
      }
    }
    Eigen::VectorXd sigma = dtn.density_map * f;
    const double constant = dtn.constant_map.dot(f);
    Eigen::VectorXd g = dtn.matrix * f;
    slice.pairs.emplace_back(dtn.geometry, i, solver.eigenvalues()[i], std::move(f), std::move(sigma),
                             constant, std::move(g));
  }
  return slice;
}

double extension_band(const SteklovEigenpair& pair) {
  const double geometric = 0.1 * pair.geometry().reach;
  if (pair.lambda() <= 0.0) return geometric;
  return std::min(geometric, 0.5 / pair.lambda());
}

ExtensionValue evaluate_extension(const SteklovEigenpair& pair, const Vec2& x) {
  const NodeGrid& g = pair.geometry().base();
  double dmin2 = std::numeric_limits<double>::infinity();
  int jmin = 0;
  for (int j = 0; j < g.n; ++j) {
    const double d2 = (x - g.point[j]).squaredNorm();
    if (d2 < dmin2) {
      dmin2 = d2;
      jmin = j;
    }
  }
  const double dmin = std::sqrt(dmin2);
  const double hloc = g.weight[jmin];
  const double band = extension_band(pair);
  auto out_of_domain = [&](double dist) {
    std::ostringstream msg;
    msg << "point (" << x.x() << ", " << x.y() << ") is " << dist
        << " outside the boundary; the extension band is " << band;
    raise(ErrorCode::kOutOfDomain, msg.str());
  };
  if (dmin >= 2.5 * hloc) {
    double winding = 0.0;
    for (int j = 0; j < g.n; ++j) {
      const Vec2 diff = g.point[j] - x;
      winding += diff.dot(g.normal[j]) / diff.squaredNorm() * g.weight[j];
    }
    if (winding / kTwoPi > 0.5) {
      const double factor = 5.73 * hloc / dmin;
      const int level = factor <= 1.0 ? 0 : (factor <= 2.0 ? 1 : 2);
      return single_layer(pair, x, level);
    }
    if (dmin > 1.01 * band + 1e-12) out_of_domain(dmin);
  }
  const CurveProjection p = pair.curve().project(x);
  if (p.offset > 0.0 && p.distance > band) out_of_domain(p.distance);
  return continuation(pair, x, p.t, p.offset);
}

ExtensionValue evaluate_single_layer(const SteklovEigenpair& pair, const Vec2& x) {
  return single_layer(pair, x, static_cast<int>(pair.geometry().levels.size()) - 1);
}

ExtensionValue evaluate_continuation(const SteklovEigenpair& pair, const Vec2& x) {
  const CurveProjection p = pair.curve().project(x);
  return continuation(pair, x, p.t, p.offset);
}

SupBoundReport interior_sup_bound_check(const SteklovEigenpair& pair, const Vec2& center, double radius) {
  if (!(radius > 0.0)) raise(ErrorCode::kInvalidArgument, "radius must be positive");
  const CurveProjection p = pair.curve().project(center);
  if (!(p.offset < 0.0 && p.distance > radius)) {
    raise(ErrorCode::kRegionViolation, "ball is not contained in the domain");
  }
  SupBoundReport rep;
  rep.center = center;
  rep.radius = radius;
  rep.sup_half = std::abs(evaluate_extension(pair, center).value);
  const int radial = 32, angular = 128;
  for (int i = 1; i <= radial; ++i) {
    const double r = 0.5 * radius * i / radial;
    for (int a = 0; a < angular; ++a) {
      const double th = kTwoPi * a / angular;
      const Vec2 x = center + r * Vec2(std::cos(th), std::sin(th));
      rep.sup_half = std::max(rep.sup_half, std::abs(evaluate_extension(pair, x).value));
    }
  }
  double mass = 0.0;
  for (const auto& node : disk_quadrature(center, radius, 32, 128)) {
    const double u = evaluate_extension(pair, node.x).value;
    mass += node.w * u * u;
  }
  rep.mean_square = mass / (kPi * radius * radius);
  rep.constant = rep.mean_square > 0.0 ? rep.sup_half / std::sqrt(rep.mean_square)
                                       : std::numeric_limits<double>::infinity();
  return rep;
}

}  // namespace steklov
