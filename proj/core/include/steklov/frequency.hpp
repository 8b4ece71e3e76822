#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "steklov/fields.hpp"

namespace steklov {

enum class FrequencyMode { kHarmonic, kGeneralized };

std::string_view to_string(FrequencyMode mode);

// Quadrature control for the ball and sphere integrals. The resolution level n means n
// Gauss-Legendre points radially (and along split-ball pieces) and 4n trapezoid points in the
// angle; n doubles from start_level until every integral is stable to rel_tol.
struct FrequencyOptions {
  double rel_tol = 1e-12;
  int start_level = 8;
  int max_level = 128;
  // Profiles stop at the first radius with H(r) <= h_floor.
  double h_floor = 1e-300;
  // Max Frobenius distance of A(center) from the identity in generalized mode.
  double center_tol = 1e-8;
};

// All integrals over B(center, r) and its boundary circle, from one adaptive pass.
struct BallIntegrals {
  double h = 0.0;     // int over the circle of w^2
  double d = 0.0;     // int over the ball of |grad w|^2
  double i = 0.0;     // int over the ball of |grad w|^2 + w b.grad w + c w^2 (= d without coefficients)
  double mass = 0.0;  // int over the ball of w^2
  int level = 0;
  bool converged = false;
};

// Throws kRegionViolation if the disk leaves the field's region, kInvalidCenter if A(center)
// is not the identity. Balls centred on the region curve of a piecewise field use the split
// rules; other balls use the polar tensor rule.
BallIntegrals ball_integrals(const ScalarField& field, const CoefficientField* coeffs, const Vec2& center,
                             double r, const FrequencyOptions& options = {});

double h_of_r(const ScalarField& field, const Vec2& center, double r, const FrequencyOptions& options = {});
double d_of_r(const ScalarField& field, const Vec2& center, double r, const FrequencyOptions& options = {});
double i_of_r(const ScalarField& field, const CoefficientField& coeffs, const Vec2& center, double r,
              const FrequencyOptions& options = {});
// int over B(center, r) of w^2.
double ball_mass(const ScalarField& field, const Vec2& center, double r, const FrequencyOptions& options = {});

struct FrequencyProfile {
  Vec2 center = Vec2::Zero();
  FrequencyMode mode = FrequencyMode::kHarmonic;
  std::string description;
  std::vector<double> radii;
  std::vector<double> h;
  std::vector<double> d;
  std::vector<double> i;
  std::vector<double> n;
  std::vector<double> mass;
  bool truncated = false;

  std::size_t size() const { return radii.size(); }
  double sphere_mean(std::size_t k) const { return h[k] / (kTwoPi * radii[k]); }
  double ball_mean(std::size_t k) const { return mass[k] / (kPi * radii[k] * radii[k]); }
};

// r_min * ratio^j for j = 0, 1, ... while <= r_max (1e-12 relative slack).
std::vector<double> geometric_radii(double r_min, double r_max, double ratio = 1.0905077326652577);
// `count` radii with constant ratio from r_min to r_max inclusive.
std::vector<double> geometric_radii_count(double r_min, double r_max, int count);

// Harmonic mode when coeffs is null (N = rD/H), generalized otherwise (N = rI/H).
FrequencyProfile frequency_profile(const ScalarField& field, const CoefficientField* coeffs, const Vec2& center,
                                   const std::vector<double>& radii, const FrequencyOptions& options = {});

// CSV with columns r,H,D,I,N preceded by one "# {json}" metadata line.
std::string profile_to_csv(const FrequencyProfile& profile);
void save_profile_csv(const FrequencyProfile& profile, const std::string& path);

struct MonotonicityReport {
  double tol_rel = 0.0;
  double worst_violation = 0.0;  // max over i of (N_i - N_{i+1}) / max(N_i, 1e-300), clamped at 0
  int worst_index = -1;
  int violations = 0;
  bool passed() const { return violations == 0; }
};

MonotonicityReport check_monotonicity(const FrequencyProfile& profile, double tol_rel = 1e-6);

// Sphere means nondecreasing in r and ball mean <= sphere mean at every radius.
struct ReverseDoublingReport {
  double tol_rel = 0.0;
  double worst_sphere_drop = 0.0;
  double worst_ball_excess = 0.0;
  int violations = 0;
  bool passed() const { return violations == 0; }
};

ReverseDoublingReport check_reverse_doubling(const FrequencyProfile& profile, double tol_rel = 1e-9);

struct HprimeReport {
  double r = 0.0;
  double step = 0.0;
  double lhs = 0.0;       // d/dr log(H / r), Richardson-extrapolated central difference
  double rhs = 0.0;       // 2 N(r) / r
  double residual = 0.0;  // |lhs - rhs| / |rhs| (0 when both vanish)
  double offset = 0.0;    // lhs - rhs, the empirical bounded term in generalized mode
};

HprimeReport check_hprime_identity(const ScalarField& field, const CoefficientField* coeffs, const Vec2& center,
                                   double r, double step_rel = 1e-3, const FrequencyOptions& options = {});

struct DoublingCheck {
  double radius = 0.0;
  double eta = 0.0;
  double frequency = 0.0;     // N(R)
  double bound = 0.0;         // eta^{-2 N(R)}
  double sphere_ratio = 0.0;  // mean over the sphere of radius R / mean at eta R
  double ball_ratio = 0.0;
  double sphere_slack = 0.0;  // bound / ratio - 1
  double ball_slack = 0.0;
  bool passed = false;
};

DoublingCheck check_doubling_from_frequency(const ScalarField& field, const Vec2& center, double R, double eta,
                                            double tol_rel = 1e-9, const FrequencyOptions& options = {});

struct FrequencyFromDoubling {
  double r = 0.0;
  double alpha = 0.0;
  double theta = 0.0;
  double kappa = 0.0;           // supplied
  double measured_kappa = 0.0;  // ball mean at alpha r / ball mean at r
  double bound = 0.0;           // -log(kappa (1 - theta^n)) / (2 log(theta / alpha))
  double frequency = 0.0;       // N(alpha r)
  double beta = 0.0;
  double small_ball_ratio = 0.0;  // ball mean at beta r / ball mean at alpha r
  double small_ball_bound = 0.0;  // (kappa (1 - theta^n))^{log(alpha/beta) / log(theta/alpha)}
  bool passed = false;
};

// Throws kPrecondition when the supplied kappa violates the doubling assumption or the
// parameters are out of order (0 < beta < alpha < theta < 1, 0 < kappa).
FrequencyFromDoubling frequency_from_doubling(const ScalarField& field, const Vec2& center, double r, double alpha,
                                              double theta, double kappa, double beta = 0.0,
                                              double tol_rel = 1e-9, const FrequencyOptions& options = {});

struct ChainReport {
  double R = 0.0;
  double radius = 0.0;           // (1 - R) / 2
  double origin_frequency = 0.0; // N(0, 1)
  double max_frequency = 0.0;    // max over sampled p of N(p, radius)
  Vec2 worst = Vec2::Zero();
  double c_emp = 0.0;            // max_frequency / origin_frequency (0 if both vanish)
  int samples = 0;
};

// Frequencies at the origin and at `samples` seeded points of B_R (the origin included).
ChainReport chain_frequency_check(const ScalarField& field, double R, int samples = 64, std::uint64_t seed = 42,
                                  const FrequencyOptions& options = {});

// Recorded constants for the generalized-frequency statements on one profile. Nothing here
// is asserted; each field is the smallest constant making the statement hold on the data.
struct GeneralizedReport {
  FrequencyProfile profile;
  bool h_positive = false;
  double d_upper_c = 0.0;        // max (D - 2I) / H        [D <= 2I + C H]
  double d_lower_c = 0.0;        // max (I / 2 - D) / H     [D >= I/2 - C H]
  double n_over_r_min = 0.0;     // min N / r
  double c1_bound = 0.0;         // max over R1 < R2 of N(R1) - N(R2), so N(R1) <= c1 + N(R2)
  double hprime_offset = 0.0;    // max |d/dr log(H/r) - 2N/r| at interior radii
  double reverse_c = 0.0;        // max over s < r of sphere mean(s) / sphere mean(r)
  double ball_sphere_c = 0.0;    // max ball mean / sphere mean
  double sphere_doubling_c = 0.0;  // max of ratio / (R2/R1)^{2 N(R2)} over pairs, sphere means
  double ball_doubling_c = 0.0;    // the same with ball means
  double zeta = 0.5;
  double c_zeta = 0.0;           // max N(zeta r) / (1 - log kappa), kappa = ball mean ratio
};

GeneralizedReport generalized_suite(const ScalarField& field, const CoefficientField& coeffs, const Vec2& center,
                                    const std::vector<double>& radii, double zeta = 0.5,
                                    const FrequencyOptions& options = {});

}  // namespace steklov
