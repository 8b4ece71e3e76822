#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "steklov/dtn.hpp"
#include "steklov/trig_series.hpp"

namespace steklov {

// One Steklov eigenpair with everything needed to evaluate its harmonic extension.
// Immutable; safe to share between threads.
class SteklovEigenpair {
 public:
  SteklovEigenpair(std::shared_ptr<const DtnGeometry> geometry, int index, double lambda,
                   Eigen::VectorXd trace, Eigen::VectorXd density, double constant,
                   Eigen::VectorXd neumann);

  int index() const { return index_; }
  double lambda() const { return lambda_; }
  int nodes() const { return static_cast<int>(trace_.size()); }
  const BoundaryCurve& curve() const { return *geometry_->curve; }
  const CurvePtr& curve_ptr() const { return geometry_->curve; }
  const DtnGeometry& geometry() const { return *geometry_; }
  const std::shared_ptr<const DtnGeometry>& geometry_ptr() const { return geometry_; }

  // Nodal values; normalized so that sum_j w_j f_j^2 = 1.
  const Eigen::VectorXd& trace() const { return trace_; }
  const Eigen::VectorXd& density() const { return density_; }
  double constant() const { return constant_; }
  // L f at the nodes.
  const Eigen::VectorXd& neumann() const { return neumann_; }

  // max_j |(L f)_j - lambda f_j| / max_j |f_j|.
  double bc_residual() const { return bc_residual_; }
  double trace_sup() const { return trace_sup_; }

  // Trigonometric interpolant of the trace, real on the real axis.
  double trace_at(double t) const { return trace_series_.real(t); }
  const TrigSeries& trace_series() const { return trace_series_; }

  // Boundary values of the holomorphic function Phi with Re Phi = u, as a series in the
  // curve parameter. Phi(gamma(tau)) = F(tau) continues u off the curve.
  const TrigSeries& analytic_trace() const { return analytic_; }
  const TrigSeries& analytic_trace_derivative() const { return analytic_d_; }

  // Single-layer density at level l (N * 2^l nodes).
  const std::vector<double>& density_level(int level) const { return density_levels_[level]; }

 private:
  std::shared_ptr<const DtnGeometry> geometry_;
  int index_;
  double lambda_;
  Eigen::VectorXd trace_;
  Eigen::VectorXd density_;
  double constant_;
  Eigen::VectorXd neumann_;
  double bc_residual_ = 0.0;
  double trace_sup_ = 0.0;
  TrigSeries trace_series_;
  TrigSeries analytic_;
  TrigSeries analytic_d_;
  std::vector<std::vector<double>> density_levels_;
};

struct SpectrumSlice {
  std::shared_ptr<const DtnGeometry> geometry;
  int nodes = 0;
  std::vector<SteklovEigenpair> pairs;
  double symmetry_defect = 0.0;
  double rcond = 0.0;

  std::vector<double> eigenvalues() const;
  std::vector<double> residuals() const;
};

// First `count` eigenpairs (count <= N/4), ascending. Throws kSolverFailure when the dense
// symmetric eigensolver fails.
SpectrumSlice solve_spectrum(const DtnDiscretization& dtn, int count);

enum class ExtensionPath { kSingleLayer, kContinuation };

struct ExtensionValue {
  double value = 0.0;
  Vec2 gradient = Vec2::Zero();
  ExtensionPath path = ExtensionPath::kSingleLayer;
  bool inside = true;
  // Set when the continuation amplifies coefficient noise past ~1e-8 of the trace scale.
  bool near_boundary_warning = false;
};

// Half-width of the exterior band where evaluation is allowed: min(0.1 reach, 0.5 / lambda).
double extension_band(const SteklovEigenpair& pair);

// u and grad u at x. Deep interior points use the single layer (density upsampled near the
// curve); points within two node spacings of the curve, and the exterior band, use the
// holomorphic continuation of the trace. Throws kOutOfDomain beyond the band.
ExtensionValue evaluate_extension(const SteklovEigenpair& pair, const Vec2& x);

// Individual evaluation paths, for diagnostics. The single layer sums over the 4N grid; the
// continuation inverts gamma(tau) = x by Newton from the projection onto the curve.
ExtensionValue evaluate_single_layer(const SteklovEigenpair& pair, const Vec2& x);
ExtensionValue evaluate_continuation(const SteklovEigenpair& pair, const Vec2& x);

struct SupBoundReport {
  Vec2 center = Vec2::Zero();
  double radius = 0.0;
  double sup_half = 0.0;    // sup over B(r/2) of |u|
  double mean_square = 0.0; // average of u^2 over B(r)
  double constant = 0.0;    // sup_half / sqrt(mean_square)
};

// Empirical interior estimate sup_{B(r/2)} |u| <= C (avg_{B(r)} u^2)^{1/2}. Throws
// kRegionViolation unless B(center, radius) lies inside the domain.
SupBoundReport interior_sup_bound_check(const SteklovEigenpair& pair, const Vec2& center, double radius);

}  // namespace steklov
