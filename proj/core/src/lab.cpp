#include "steklov/lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

#include "steklov/csv.hpp"
#include "steklov/dtn.hpp"
#include "steklov/error.hpp"
#include "steklov/frequency.hpp"
#include "steklov/random.hpp"
#include "steklov/spectrum_io.hpp"
#include "steklov/v_transform.hpp"

namespace steklov {
namespace {

using nlohmann::json;

template <typename T>
void read_key(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

json fit_json(const ScalingFit& f) {
  return {{"quantity", f.quantity}, {"slope", f.slope},       {"intercept", f.intercept},
          {"residual", f.residual}, {"lambda_cut", f.lambda_cut}, {"used", f.used}};
}

cdouble horner(const std::vector<cdouble>& c, cdouble z) {
  cdouble p = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) p = p * z + *it;
  return p;
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    raise(ErrorCode::kParse, std::string("config: ") + e.what());
  }
  if (!j.is_object()) raise(ErrorCode::kParse, "config must be a JSON object");
  static const std::vector<std::string> known = {
      "domain",  "nodes",      "j_min",      "j_max",        "seed",        "output_dir",   "spectrum_cache",
      "samples", "tol",        "centers",    "mode",         "residual_gate", "lambda_cut", "max_degree",
      "random_count", "radius_count", "r_min", "r_max",      "v_modes",     "oracle_count", "oracle_max_degree"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) raise(ErrorCode::kParse, "config: unknown key '" + key + "'");
  }
  ExperimentConfig c;
  try {
    read_key(j, "domain", c.domain);
    read_key(j, "nodes", c.nodes);
    read_key(j, "j_min", c.j_min);
    read_key(j, "j_max", c.j_max);
    read_key(j, "seed", c.seed);
    read_key(j, "output_dir", c.output_dir);
    read_key(j, "spectrum_cache", c.spectrum_cache);
    read_key(j, "samples", c.samples);
    read_key(j, "tol", c.tol);
    read_key(j, "centers", c.centers);
    if (j.contains("mode")) c.mode = parse_doubling_mode(j.at("mode").get<std::string>());
    read_key(j, "residual_gate", c.residual_gate);
    if (j.contains("lambda_cut") && !j.at("lambda_cut").is_null()) c.lambda_cut = j.at("lambda_cut").get<double>();
    read_key(j, "max_degree", c.max_degree);
    read_key(j, "random_count", c.random_count);
    read_key(j, "radius_count", c.radius_count);
    read_key(j, "r_min", c.r_min);
    read_key(j, "r_max", c.r_max);
    read_key(j, "v_modes", c.v_modes);
    read_key(j, "oracle_count", c.oracle_count);
    read_key(j, "oracle_max_degree", c.oracle_max_degree);
  } catch (const json::exception& e) {
    raise(ErrorCode::kParse, std::string("config: ") + e.what());
  } catch (const Error& e) {
    raise(ErrorCode::kParse, std::string("config: ") + e.what());
  }
  if (c.j_min < 0 || c.j_max < c.j_min) raise(ErrorCode::kParse, "config: need 0 <= j_min <= j_max");
  if (c.nodes < 16) raise(ErrorCode::kParse, "config: nodes must be at least 16");
  return c;
}

ExperimentConfig load_config(const std::string& path) { return config_from_json(read_text_file(path)); }

std::string config_to_json(const ExperimentConfig& c) {
  json j = {
      {"domain", c.domain},
      {"nodes", c.nodes},
      {"j_min", c.j_min},
      {"j_max", c.j_max},
      {"seed", c.seed},
      {"output_dir", c.output_dir},
      {"spectrum_cache", c.spectrum_cache},
      {"samples", c.samples},
      {"tol", c.tol},
      {"centers", c.centers},
      {"mode", std::string(to_string(c.mode))},
      {"residual_gate", c.residual_gate},
      {"lambda_cut", c.lambda_cut ? json(*c.lambda_cut) : json(nullptr)},
      {"max_degree", c.max_degree},
      {"random_count", c.random_count},
      {"radius_count", c.radius_count},
      {"r_min", c.r_min},
      {"r_max", c.r_max},
      {"v_modes", c.v_modes},
      {"oracle_count", c.oracle_count},
      {"oracle_max_degree", c.oracle_max_degree},
  };
  return j.dump(2);
}

double median(std::vector<double> v) {
  if (v.empty()) raise(ErrorCode::kInvalidArgument, "median of an empty set");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

ScalingFit fit_loglog(std::string quantity, const std::vector<double>& lambda, const std::vector<double>& value,
                      std::optional<double> lambda_cut) {
  if (lambda.size() != value.size()) raise(ErrorCode::kInvalidArgument, "fit: size mismatch");
  ScalingFit f;
  f.quantity = std::move(quantity);
  f.lambda = lambda;
  f.value = value;
  if (lambda.empty()) raise(ErrorCode::kInvalidArgument, "fit: no data");
  f.lambda_cut = lambda_cut ? *lambda_cut : median(lambda);
  std::vector<double> x, y;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (lambda[i] >= f.lambda_cut && lambda[i] > 0.0 && value[i] > 0.0) {
      x.push_back(std::log(lambda[i]));
      y.push_back(std::log(value[i]));
    }
  }
  f.used = static_cast<int>(x.size());
  if (f.used < 2) raise(ErrorCode::kInvalidArgument, "fit: fewer than two points above lambda_cut");
  const double n = f.used;
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < f.used; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < f.used; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) raise(ErrorCode::kInvalidArgument, "fit: all lambdas above the cut coincide");
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (int i = 0; i < f.used; ++i) {
    const double e = y[i] - (f.intercept + f.slope * x[i]);
    ss += e * e;
  }
  f.residual = std::sqrt(ss / n);
  return f;
}

SpectrumSlice solve_for_config(const ExperimentConfig& config) {
  const CurvePtr curve = share(make_curve(config.domain));
  const int count = config.j_max + 1;
  if (count > config.nodes / 4) {
    raise(ErrorCode::kInvalidArgument, "j_max = " + std::to_string(config.j_max) + " needs at least " +
                                           std::to_string(4 * count) + " nodes");
  }
  SpectrumSlice slice;
  if (!config.spectrum_cache.empty() &&
      load_cached_spectrum(config.spectrum_cache, *curve, config.nodes, count, slice)) {
    return slice;
  }
  slice = solve_spectrum(build_dtn(curve, config.nodes), count);
  if (!config.spectrum_cache.empty()) save_spectrum(slice, config.spectrum_cache);
  return slice;
}

ScalingStudy run_scaling_study(const ExperimentConfig& config, const SpectrumSlice* given) {
  SpectrumSlice own;
  if (!given) {
    own = solve_for_config(config);
    given = &own;
  }
  const SpectrumSlice& slice = *given;
  if (static_cast<int>(slice.pairs.size()) <= config.j_max) {
    raise(ErrorCode::kInvalidArgument, "spectrum holds " + std::to_string(slice.pairs.size()) + " pairs, need j_max + 1");
  }
  const BoundaryCurve& curve = *slice.geometry->curve;
  ScalingStudy study;
  study.domain = curve.name();
  study.curve_hash = curve.hash();
  study.nodes = slice.nodes;

  std::optional<TubeNeighborhood> tube;
  if (config.mode == DoublingMode::kSolid) tube.emplace(slice.geometry->curve, 0.5 * curve.reach());

  for (int j = config.j_min; j <= config.j_max; ++j) {
    const SteklovEigenpair& pair = slice.pairs[j];
    PairResult res;
    res.index = pair.index();
    res.lambda = pair.lambda();
    res.residual = pair.bc_residual();
    if (!(pair.lambda() > 1e-6)) {
      res.reason = "lambda <= 1e-6 (constant eigenfunction)";
    } else if (!(pair.bc_residual() <= config.residual_gate * pair.lambda())) {
      res.reason = "residual " + format_double(pair.bc_residual()) + " above gate " +
                   format_double(config.residual_gate * pair.lambda());
    }
    if (!res.reason.empty()) {
      study.pairs.push_back(res);
      continue;
    }
    try {
      const NodalReport z = boundary_zeros(pair, config.samples, config.tol);
      res.zeros = z.count();
      res.tangential = static_cast<int>(z.tangential.size());

      std::vector<double> centres;
      for (int c = 0; c < config.centers; ++c) centres.push_back(kTwoPi * c / config.centers);
      centres.insert(centres.end(), z.zeros.begin(), z.zeros.end());
      const double r_max = std::min(0.5 / pair.lambda(), 0.25 * curve.reach());
      std::optional<VTransform> v;
      if (config.mode == DoublingMode::kSolid) v = v_transform(pair, *tube);
      res.max_exponent = -std::numeric_limits<double>::infinity();
      for (double t : centres) {
        DoublingReport d;
        try {
          d = doubling_profile(pair, t, r_max / 16.0, r_max, config.mode, v ? &*v : nullptr);
        } catch (const Error& e) {
          if (e.code() == ErrorCode::kDegenerateCenter) continue;
          throw;
        }
        for (std::size_t k = 0; k < d.exponents.size(); ++k) {
          if (d.exponents[k] > res.max_exponent) {
            res.max_exponent = d.exponents[k];
            res.worst_t = t;
            res.worst_r = d.radii[k];
          }
        }
      }
      res.included = true;
    } catch (const Error& e) {
      res.reason = std::string(to_string(e.code())) + ": " + e.what();
    }
    study.pairs.push_back(res);
  }
  std::stable_sort(study.pairs.begin(), study.pairs.end(), [](const PairResult& a, const PairResult& b) {
    return a.lambda != b.lambda ? a.lambda < b.lambda : a.index < b.index;
  });

  std::vector<double> lam, zc, ex;
  for (const PairResult& p : study.pairs) {
    if (!p.included) continue;
    lam.push_back(p.lambda);
    zc.push_back(p.zeros);
    ex.push_back(p.max_exponent);
  }
  if (lam.size() >= 2) {
    study.nodal = fit_loglog("zeros", lam, zc, config.lambda_cut);
    study.doubling = fit_loglog("max_exponent", lam, ex, config.lambda_cut);
    for (std::size_t i = 0; i < lam.size(); ++i) {
      if (lam[i] >= study.doubling.lambda_cut) study.c_emp = std::max(study.c_emp, ex[i] / std::pow(lam[i], 5));
      if (lam[i] >= 1.0) study.nodal_c = std::max(study.nodal_c, zc[i] / std::pow(lam[i], 6));
    }
  }
  return study;
}

std::string scaling_to_csv(const ScalingStudy& study) {
  json meta = {{"domain", study.domain}, {"curve_hash", study.curve_hash}, {"nodes", study.nodes},
               {"nodal", fit_json(study.nodal)}, {"doubling", fit_json(study.doubling)}, {"c_emp", study.c_emp}};
  std::string out = "# " + meta.dump() + "\n";
  out += csv_row({"index", "lambda", "residual", "included", "reason", "zeros", "tangential", "max_exponent",
                  "worst_t", "worst_r"});
  for (const PairResult& p : study.pairs) {
    out += csv_row({std::to_string(p.index), format_double(p.lambda), format_double(p.residual),
                    p.included ? "1" : "0", p.reason, std::to_string(p.zeros), std::to_string(p.tangential),
                    p.included ? format_double(p.max_exponent) : "", p.included ? format_double(p.worst_t) : "",
                    p.included ? format_double(p.worst_r) : ""});
  }
  return out;
}

std::string scaling_to_json(const ScalingStudy& study) {
  json pairs = json::array();
  for (const PairResult& p : study.pairs) {
    pairs.push_back({{"index", p.index},
                     {"lambda", p.lambda},
                     {"residual", p.residual},
                     {"included", p.included},
                     {"reason", p.reason},
                     {"zeros", p.zeros},
                     {"tangential", p.tangential},
                     {"max_exponent", p.included ? json(p.max_exponent) : json(nullptr)}});
  }
  json j = {{"domain", study.domain},   {"curve_hash", study.curve_hash}, {"nodes", study.nodes},
            {"nodal", fit_json(study.nodal)}, {"doubling", fit_json(study.doubling)}, {"c_emp", study.c_emp},
            {"nodal_c", study.nodal_c}, {"pairs", pairs}};
  return j.dump(2);
}

std::vector<ScalarField> random_harmonic_family(int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<ScalarField> out;
  for (int i = 0; i < count; ++i) {
    const int deg = rng.integer(1, 6);
    std::vector<cdouble> c(deg + 1);
    for (auto& v : c) {
      const double re = rng.uniform(-1.0, 1.0);
      v = {re, rng.uniform(-1.0, 1.0)};
    }
    out.push_back(harmonic_polynomial(c));
  }
  return out;
}

FrequencySuiteReport run_frequency_suite(const ExperimentConfig& config) {
  FrequencySuiteReport rep;
  auto record = [&](const std::string& field, const std::string& check, bool ok, double worst) {
    rep.cases.push_back({field, check, ok, worst});
    if (!ok) ++rep.failures;
  };

  struct Member {
    ScalarField field;
    int degree;  // -1 for combinations
  };
  std::vector<Member> family;
  for (int k = 0; k <= config.max_degree; ++k) family.push_back({homogeneous_harmonic(k), k});
  for (ScalarField& f : random_harmonic_family(config.random_count, config.seed)) family.push_back({std::move(f), -1});

  const std::vector<double> radii = geometric_radii_count(config.r_min, config.r_max, config.radius_count);
  const Vec2 origin = Vec2::Zero();
  for (const Member& m : family) {
    const ScalarField& u = m.field;
    const std::string& name = u.description;
    const FrequencyProfile p = frequency_profile(u, nullptr, origin, radii);
    if (m.degree >= 0) {
      double worst = 0.0;
      for (double n : p.n) worst = std::max(worst, std::abs(n - m.degree));
      rep.worst_degree = std::max(rep.worst_degree, worst);
      record(name, "degree", worst <= 1e-8, worst);
    }
    const MonotonicityReport mono = check_monotonicity(p, 1e-6);
    rep.worst_monotonicity = std::max(rep.worst_monotonicity, mono.worst_violation);
    record(name, "monotonicity", mono.passed(), mono.worst_violation);

    const ReverseDoublingReport rd = check_reverse_doubling(p);
    record(name, "sphere_mean", rd.passed(), std::max(rd.worst_sphere_drop, rd.worst_ball_excess));

    double worst_h = 0.0;
    for (std::size_t k = 0; k < radii.size(); k += 4) {
      worst_h = std::max(worst_h, check_hprime_identity(u, nullptr, origin, radii[k]).residual);
    }
    rep.worst_hprime = std::max(rep.worst_hprime, worst_h);
    record(name, "hprime", worst_h <= 1e-4, worst_h);

    for (double eta : {0.25, 0.5, 0.9}) {
      const DoublingCheck d = check_doubling_from_frequency(u, origin, config.r_max, eta);
      rep.worst_doubling_slack = std::min(rep.worst_doubling_slack, std::min(d.sphere_slack, d.ball_slack));
      record(name, "doubling(eta=" + format_double(eta) + ")", d.passed, d.sphere_slack);
      if (m.degree >= 0 && eta == 0.5) {
        rep.worst_equality = std::max(rep.worst_equality, std::abs(d.sphere_slack));
        record(name, "doubling_equality", std::abs(d.sphere_slack) <= 1e-8, d.sphere_slack);
      }
    }

    const double alpha = 0.5;
    const double theta = 0.75;
    const double r = config.r_max;
    const double big = ball_mass(u, origin, r) / (kPi * r * r);
    const double small = ball_mass(u, origin, alpha * r) / (kPi * alpha * alpha * r * r);
    if (big > 0.0 && small > 0.0) {
      const FrequencyFromDoubling fd =
          frequency_from_doubling(u, origin, r, alpha, theta, small / big * (1.0 - 1e-12));
      record(name, "inverse_doubling", fd.passed, fd.bound - fd.frequency);
    }

    const ChainReport chain = chain_frequency_check(u, 0.5, 16, config.seed);
    record(name, "chain", std::isfinite(chain.max_frequency), chain.c_emp);
  }

  if (!config.v_modes.empty()) {
    const SpectrumSlice disk = solve_spectrum(build_dtn(share(BoundaryCurve::disk()), 256), 2 * 20 + 1);
    const TubeNeighborhood tube(disk.geometry->curve, 0.5);
    FrequencyOptions opts;
    opts.rel_tol = 1e-9;
    for (int k : config.v_modes) {
      if (k < 1 || 2 * k - 1 >= static_cast<int>(disk.pairs.size())) {
        raise(ErrorCode::kInvalidArgument, "v_modes entries must lie in [1, 20]");
      }
      const SteklovEigenpair& pair = disk.pairs[2 * k - 1];
      const VTransform v = v_transform(pair, tube);
      const std::vector<double> vr = geometric_radii_count(0.025 / k, 0.4 / k, 12);
      const GeneralizedReport g = generalized_suite(v.field, v.coefficients, pair.curve().point(0.3), vr, 0.5, opts);
      const bool finite = std::isfinite(g.d_upper_c) && std::isfinite(g.d_lower_c) && std::isfinite(g.c1_bound) &&
                          std::isfinite(g.hprime_offset) && std::isfinite(g.sphere_doubling_c) &&
                          std::isfinite(g.c_zeta);
      record(v.field.description, "generalized", g.h_positive && finite, g.c1_bound);
    }
  }
  return rep;
}

std::string frequency_suite_to_json(const FrequencySuiteReport& r) {
  json cases = json::array();
  for (const SuiteCase& c : r.cases) {
    cases.push_back({{"field", c.field}, {"check", c.check}, {"passed", c.passed}, {"worst", c.worst}});
  }
  json j = {{"passed", r.passed()},
            {"failures", r.failures},
            {"worst_monotonicity", r.worst_monotonicity},
            {"worst_hprime", r.worst_hprime},
            {"worst_degree", r.worst_degree},
            {"worst_doubling_slack", r.worst_doubling_slack},
            {"worst_equality", r.worst_equality},
            {"cases", cases}};
  return j.dump(2);
}

ComplexZeroCase evaluate_zero_case(const std::vector<cdouble>& coefficients, double safety) {
  std::vector<cdouble> c = coefficients;
  while (c.size() > 1 && c.back() == cdouble(0.0)) c.pop_back();
  if (c.empty() || c[0] == cdouble(0.0)) raise(ErrorCode::kInvalidArgument, "need f(0) != 0");
  const int d = static_cast<int>(c.size()) - 1;
  if (d > 64) raise(ErrorCode::kInvalidArgument, "degree above 64");
  const cdouble c0 = c[0];
  for (auto& v : c) v /= c0;

  ComplexZeroCase out;
  out.coefficients = c;
  if (d == 0) {
    out.sup = 1.0;
    out.n_value = 0.0;
    return out;
  }
  const int m = 4096;
  for (int j = 0; j < m; ++j) out.sup = std::max(out.sup, std::abs(horner(c, std::polar(1.0, kTwoPi * j / m))));
  out.n_value = std::log2(safety * out.sup);

  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) comp(i, d - 1) = -c[i] / c[d];
  const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(comp, false);
  if (solver.info() != Eigen::Success) raise(ErrorCode::kSolverFailure, "companion eigensolver failed");
  for (int i = 0; i < d; ++i) {
    const cdouble z = solver.eigenvalues()(i);
    double scale = 0.0;
    double zp = 1.0;
    for (int k = 0; k <= d; ++k) {
      scale += std::abs(c[k]) * zp;
      zp *= std::abs(z);
    }
    out.root_residual = std::max(out.root_residual, std::abs(horner(c, z)) / scale);
    if (std::abs(z) < 0.5) ++out.zeros_in_half;
  }
  return out;
}

ComplexZeroReport run_complex_zero_oracle(int count, int max_degree, std::uint64_t seed) {
  if (max_degree < 1 || max_degree > 64) raise(ErrorCode::kInvalidArgument, "max_degree must lie in [1, 64]");
  ComplexZeroReport rep;
  Rng rng(seed);
  for (int i = 0; i < count; ++i) {
    const bool root_built = i % 2 == 0;
    for (int attempt = 0;; ++attempt) {
      if (attempt > 100) raise(ErrorCode::kSolverFailure, "case " + std::to_string(i) + ": too many re-draws");
      const int d = rng.integer(1, max_degree);
      std::vector<cdouble> c;
      std::string why;
      if (root_built) {
        c = {cdouble(1.0)};
        for (int k = 0; k < d; ++k) {
          const double rad = 1.5 * std::sqrt(rng.uniform());
          const cdouble z = std::polar(rad, rng.uniform(0.0, kTwoPi));
          if (std::abs(z) < 1e-3) why = "root at the origin";
          // Multiply by (z_var - z).
          std::vector<cdouble> next(c.size() + 1, 0.0);
          for (std::size_t q = 0; q < c.size(); ++q) {
            next[q + 1] += c[q];
            next[q] -= z * c[q];
          }
          c = std::move(next);
        }
      } else {
        c.resize(d + 1);
        for (auto& v : c) {
          const double re = rng.uniform(-1.0, 1.0);
          v = {re, rng.uniform(-1.0, 1.0)};
        }
        if (std::abs(c[0]) < 1e-3) why = "|f(0)| < 1e-3";
        if (std::abs(c[d]) < 1e-3) why = "leading coefficient < 1e-3";
      }
      ComplexZeroCase zc;
      if (why.empty()) {
        zc = evaluate_zero_case(c, rep.safety);
        if (zc.root_residual > 1e-10) why = "root residual " + format_double(zc.root_residual);
      }
      if (!why.empty()) {
        rep.redraws.push_back("case " + std::to_string(i) + " attempt " + std::to_string(attempt) + ": " + why);
        continue;
      }
      zc.root_built = root_built;
      if (zc.zeros_in_half > zc.n_value) ++rep.violations;
      rep.cases.push_back(std::move(zc));
      break;
    }
  }
  return rep;
}

std::string complex_zero_to_json(const ComplexZeroReport& r) {
  json cases = json::array();
  for (const ComplexZeroCase& c : r.cases) {
    json coeffs = json::array();
    for (const cdouble& v : c.coefficients) coeffs.push_back({v.real(), v.imag()});
    cases.push_back({{"degree", static_cast<int>(c.coefficients.size()) - 1},
                     {"coefficients", coeffs},
                     {"sup", c.sup},
                     {"N", c.n_value},
                     {"zeros_in_half", c.zeros_in_half},
                     {"root_residual", c.root_residual},
                     {"root_built", c.root_built}});
  }
  json j = {{"passed", r.passed()}, {"violations", r.violations}, {"safety", r.safety},
            {"redraws", r.redraws}, {"cases", cases}};
  return j.dump(2);
}

}  // namespace steklov
