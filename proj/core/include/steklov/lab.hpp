#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "steklov/eigenpair.hpp"
#include "steklov/fields.hpp"
#include "steklov/nodal.hpp"

namespace steklov {

struct ExperimentConfig {
  std::string domain = "disk";  // make_curve spec or curve file path
  int nodes = 512;
  int j_min = 1;
  int j_max = 40;
  std::uint64_t seed = 42;
  std::string output_dir = "out";
  // Optional spectrum cache (JSON); empty disables it.
  std::string spectrum_cache;

  // Nodal counting.
  int samples = 0;  // 0: automatic
  double tol = 1e-12;

  // Doubling sweep: `centers` boundary points equally spaced in the parameter plus the zeros,
  // radii r_max 2^{-k/4} down to r_max / 16 with r_max = min(0.5 / lambda, 0.25 reach).
  int centers = 64;
  DoublingMode mode = DoublingMode::kBoundary;
  double residual_gate = 1e-6;  // relative to lambda
  // Fits use lambda >= lambda_cut; unset means the median lambda of the included pairs.
  std::optional<double> lambda_cut;

  // Frequency suite.
  int max_degree = 8;
  int random_count = 20;
  int radius_count = 32;
  double r_min = 0.05;
  double r_max = 1.0;
  std::vector<int> v_modes = {1, 4, 8};

  // Complex-zero oracle.
  int oracle_count = 200;
  int oracle_max_degree = 12;
};

// Keys as in the struct; unknown keys raise kParse so typos do not pass silently.
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string config_to_json(const ExperimentConfig& config);

// Least squares of log q against log lambda over points with lambda >= lambda_cut and q > 0.
struct ScalingFit {
  std::string quantity;
  std::vector<double> lambda;
  std::vector<double> value;
  double lambda_cut = 0.0;
  int used = 0;
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS of the log residuals
};

double median(std::vector<double> v);
// Throws kInvalidArgument when fewer than two points pass the cut or all lambdas coincide.
ScalingFit fit_loglog(std::string quantity, const std::vector<double>& lambda, const std::vector<double>& value,
                      std::optional<double> lambda_cut = std::nullopt);

struct PairResult {
  int index = 0;
  double lambda = 0.0;
  double residual = 0.0;
  bool included = false;
  std::string reason;        // why the pair was excluded
  int zeros = 0;
  int tangential = 0;
  double max_exponent = 0.0; // over centres and radii
  double worst_t = 0.0;      // centre of the max exponent
  double worst_r = 0.0;
};

struct ScalingStudy {
  std::string domain;
  std::string curve_hash;
  int nodes = 0;
  std::vector<PairResult> pairs;  // sorted by (lambda, index)
  ScalingFit nodal;
  ScalingFit doubling;
  // max over included pairs with lambda >= the doubling lambda_cut of max_exponent / lambda^5.
  double c_emp = 0.0;
  // max over included pairs of Z / lambda^6 for lambda >= 1.
  double nodal_c = 0.0;
};

SpectrumSlice solve_for_config(const ExperimentConfig& config);

// Uses the given slice when non-null (it must hold pairs up to j_max).
ScalingStudy run_scaling_study(const ExperimentConfig& config, const SpectrumSlice* slice = nullptr);

// index,lambda,residual,included,reason,zeros,tangential,max_exponent,worst_t,worst_r with a
// "# {json}" line holding domain, hash, nodes and both fits.
std::string scaling_to_csv(const ScalingStudy& study);
std::string scaling_to_json(const ScalingStudy& study);

// Re Sum c_k z^k with random degree 1..6 and coefficients uniform in the unit square.
std::vector<ScalarField> random_harmonic_family(int count, std::uint64_t seed);

struct SuiteCase {
  std::string field;
  std::string check;
  bool passed = false;
  double worst = 0.0;  // the check's own worst violation or slack
};

struct FrequencySuiteReport {
  std::vector<SuiteCase> cases;
  int failures = 0;
  double worst_monotonicity = 0.0;
  double worst_hprime = 0.0;
  double worst_degree = 0.0;
  double worst_doubling_slack = 0.0;  // most negative bound/ratio - 1 (>= 0 when passing)
  double worst_equality = 0.0;        // max |slack| at eta = 1/2 over homogeneous members
  bool passed() const { return failures == 0; }
};

// Homogeneous degrees 0..max_degree plus random_count seeded combinations, each through the
// degree, monotonicity, sphere-mean, H', doubling, inverse-doubling and chain checks, then the
// generalized suite for v of the listed disk modes.
FrequencySuiteReport run_frequency_suite(const ExperimentConfig& config);
std::string frequency_suite_to_json(const FrequencySuiteReport& report);

struct ComplexZeroCase {
  std::vector<cdouble> coefficients;  // normalized so that f(0) = 1
  double sup = 0.0;                   // max over the 4096-point circle, before the safety factor
  double n_value = 0.0;               // log2(safety * sup), 0 for constants
  int zeros_in_half = 0;
  double root_residual = 0.0;
  bool root_built = false;
};

struct ComplexZeroReport {
  std::vector<ComplexZeroCase> cases;
  std::vector<std::string> redraws;
  int violations = 0;
  double safety = 1.01;
  bool passed() const { return violations == 0; }
};

// Throws kInvalidArgument when f(0) = 0 or the degree exceeds 64.
ComplexZeroCase evaluate_zero_case(const std::vector<cdouble>& coefficients, double safety = 1.01);
// Half of the cases are built from random roots in |z| < 1.5, half from random coefficients.
ComplexZeroReport run_complex_zero_oracle(int count, int max_degree, std::uint64_t seed);
std::string complex_zero_to_json(const ComplexZeroReport& report);

}  // namespace steklov
