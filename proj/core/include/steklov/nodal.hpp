#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "steklov/eigenpair.hpp"
#include "steklov/tube.hpp"
#include "steklov/v_transform.hpp"

namespace steklov {

// Boundary zero set of an eigenfunction trace.
struct NodalReport {
  double lambda = 0.0;
  int index = 0;
  int samples = 0;
  double tol = 0.0;
  // Parameters of the sign-change zeros, sorted in [0, 2pi).
  std::vector<double> zeros;
  // Local minima of |f| below tol * sup|f| without a sign change. Not counted.
  std::vector<double> tangential;

  int count() const { return static_cast<int>(zeros.size()); }
};

// Smallest grid allowed by the sampling guard: ceil(16 lambda perimeter / 2pi), at least 64.
int nodal_sample_guard(const SteklovEigenpair& pair);

// samples = 0 picks max(guard, 4 nodes). Throws kUndersampled below the guard. Cells whose
// endpoints agree in sign are searched for a hidden pair of zeros by golden section on |f|.
NodalReport boundary_zeros(const SteklovEigenpair& pair, int samples = 0, double tol = 1e-12);

// Integral of u^2 over {t : |gamma(t) - gamma(t_center)| < r} in arclength.
double boundary_mass(const SteklovEigenpair& pair, double t_center, double r);

// Parameter intervals of the boundary ball, each [a, b] with a < b and b - a <= 2pi.
std::vector<std::pair<double, double>> boundary_ball_intervals(const BoundaryCurve& curve, double t_center,
                                                               double r);

// Integral of u^2 over B(gamma(t_center), r) cap Omega by the split ball rule, order doubled
// from 8 until stable to rel_tol.
double interior_ball_mass(const SteklovEigenpair& pair, double t_center, double r, double rel_tol = 1e-10);

// Integral of u^2 over Omega from boundary data only: with Phi holomorphic, Re Phi = u,
// u^2 = (|Phi|^2 + Re Phi^2) / 2 and both area integrals reduce to contour integrals.
double domain_mass(const SteklovEigenpair& pair);

enum class DoublingMode { kBoundary, kSolid };

std::string_view to_string(DoublingMode mode);
DoublingMode parse_doubling_mode(std::string_view text);

struct DoublingReport {
  double t_center = 0.0;
  Vec2 center = Vec2::Zero();
  DoublingMode mode = DoublingMode::kBoundary;
  double lambda = 0.0;
  int index = 0;
  std::vector<double> radii;   // r_min 2^{k/4}
  std::vector<double> mass;
  // exponents[k] = log2(mass(2 r_k) / mass(r_k)) for the radii with 2 r_k in the sweep.
  std::vector<double> exponents;

  double max_exponent() const;
};

// Boundary mode integrates u^2 in arclength; solid mode integrates v^2 over the full ball in
// the tube and needs `v`. Throws kDegenerateCenter when the mass at r_min is at round-off level.
DoublingReport doubling_profile(const SteklovEigenpair& pair, double t_center, double r_min, double r_max,
                                DoublingMode mode = DoublingMode::kBoundary, const VTransform* v = nullptr);

struct SpecialPointReport {
  double rho = 0.0;
  std::vector<double> net;         // parameters, rho/2 apart in arclength
  std::vector<double> ball_mass;   // int over B(y_i, rho) cap Omega of u^2
  int best = -1;
  double t_star = 0.0;
  Vec2 y_star = Vec2::Zero();
  double total_mass = 0.0;         // int over Omega of u^2
  double c_star = 0.0;             // rho^3 total_mass / ball_mass[best]
};

// Throws kNetConstruction for rho >= perimeter / 2 and kPrecondition for rho >= reach.
SpecialPointReport special_point_search(const SteklovEigenpair& pair, double rho);

struct ControlReport {
  double t0 = 0.0;
  double r = 0.0;
  double lambda_eff = 0.0;   // max(lambda, 1)
  double lhs = 0.0;          // boundary mass at radius r / lambda_eff
  double rhs = 0.0;          // (lambda_eff / r) int over B(x0, 2r/lambda_eff) cap Omega of u^2
  double c_emp = 0.0;        // log2(rhs / lhs) / lambda_eff^5 when rhs > lhs, else 0
};

// Throws kPrecondition when 2r / lambda_eff reaches the tube half-width.
ControlReport boundary_controls_solid_check(const SteklovEigenpair& pair, const TubeNeighborhood& tube, double t0,
                                            double r);

// One row per zero: t,x,y,kind (kind is "simple" or "tangential").
std::string nodal_report_to_csv(const NodalReport& report, const BoundaryCurve& curve);
std::string nodal_report_to_json(const NodalReport& report);
// One row per radius: r,mass,exponent (empty where undefined).
std::string doubling_report_to_csv(const DoublingReport& report);
std::string doubling_report_to_json(const DoublingReport& report);

}  // namespace steklov
