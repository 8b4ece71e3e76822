#include <cmath>
#include <cstdlib>
#include <filesystem>

#include <gtest/gtest.h>

#include "steklov/csv.hpp"
#include "steklov/dtn.hpp"
#include "steklov/error.hpp"
#include "steklov/frequency.hpp"
#include "steklov/lab.hpp"
#include "steklov/plot.hpp"

namespace steklov {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("steklov_lab_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no steklov::Error thrown";
  return ErrorCode::kInvalidArgument;
}

const SpectrumSlice& disk() {
  static const SpectrumSlice s = solve_spectrum(build_dtn(share(BoundaryCurve::disk()), 256), 41);
  return s;
}

ExperimentConfig disk_config() {
  ExperimentConfig c;
  c.domain = "disk";
  c.nodes = 256;
  c.j_min = 0;
  c.j_max = 40;
  c.centers = 8;
  return c;
}

// ---- CSV ----

TEST(Csv, EscapesAndParsesRoundTrip) {
  const std::string text = "# meta line\n" + csv_row({"a", "b,c", "d\"e"}) + csv_row({"1", "line\nbreak", ""});
  const CsvTable t = parse_csv(text);
  ASSERT_EQ(t.comments.size(), 1u);
  EXPECT_EQ(t.comments[0], "meta line");
  EXPECT_EQ(t.header, (std::vector<std::string>{"a", "b,c", "d\"e"}));
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0][1], "line\nbreak");
  EXPECT_EQ(t.rows[0][2], "");
  EXPECT_EQ(t.column("d\"e"), 2);
  EXPECT_DOUBLE_EQ(t.number(0, 0), 1.0);
}

TEST(Csv, AcceptsCrlf) {
  const CsvTable t = parse_csv("x,y\r\n1,2\r\n");
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0][1], "2");
}

TEST(Csv, ErrorsNameTheProblem) {
  EXPECT_EQ(code_of([] { parse_csv(""); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([] { parse_csv("a,b\n\"open,1\n"); }), ErrorCode::kParse);
  try {
    parse_csv("a,b\n1,2\n3\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos) << e.what();
  }
  const CsvTable t = parse_csv("a\nfoo\n");
  EXPECT_EQ(code_of([&] { t.number(0, 0); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([&] { t.column("missing"); }), ErrorCode::kParse);
}

TEST(Csv, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17}) EXPECT_EQ(std::stod(format_double(v)), v);
  EXPECT_EQ(format_double(std::nan("")), "nan");
  EXPECT_EQ(format_double(-INFINITY), "-inf");
}

TEST(Csv, WriteCreatesParentsAndLeavesNoTemp) {
  const fs::path dir = scratch("write");
  const fs::path p = dir / "a" / "b" / "out.csv";
  write_text_file(p.string(), "x\n1\n");
  EXPECT_EQ(read_text_file(p.string()), "x\n1\n");
  EXPECT_FALSE(fs::exists(p.string() + ".tmp"));
}

// ---- Config ----

TEST(Config, ParsesOverridesAndDefaults) {
  const ExperimentConfig c =
      config_from_json(R"j({"domain": "ellipse(2,1)", "nodes": 512, "j_max": 100, "mode": "solid", "lambda_cut": 3.5})j");
  EXPECT_EQ(c.domain, "ellipse(2,1)");
  EXPECT_EQ(c.nodes, 512);
  EXPECT_EQ(c.j_max, 100);
  EXPECT_EQ(c.mode, DoublingMode::kSolid);
  ASSERT_TRUE(c.lambda_cut.has_value());
  EXPECT_EQ(*c.lambda_cut, 3.5);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.residual_gate, 1e-6);
}

TEST(Config, RoundTripsThroughJson) {
  ExperimentConfig c;
  c.seed = 7;
  c.v_modes = {2, 3};
  c.lambda_cut = 2.0;
  const ExperimentConfig d = config_from_json(config_to_json(c));
  EXPECT_EQ(config_to_json(c), config_to_json(d));
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  EXPECT_EQ(code_of([] { config_from_json(R"({"node": 5})"); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([] { config_from_json(R"({"mode": "sideways"})"); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([] { config_from_json(R"({"j_min": 5, "j_max": 2})"); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([] { config_from_json("[1, 2]"); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([] { config_from_json("{"); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([] { load_config("/nonexistent/config.json"); }), ErrorCode::kIo);
}

// ---- Fits ----

TEST(ScalingFitTest, DiskExactDataGivesSlopeOneInterceptLogTwo) {
  std::vector<double> lam, z;
  for (const SteklovEigenpair& p : disk().pairs) {
    if (p.lambda() < 0.5) continue;
    const double k = std::round(p.lambda());
    lam.push_back(k);
    z.push_back(2.0 * k);
  }
  const ScalingFit f = fit_loglog("zeros", lam, z);
  EXPECT_NEAR(f.slope, 1.0, 1e-12);
  EXPECT_NEAR(f.intercept, std::log(2.0), 1e-12);
  EXPECT_LT(f.residual, 1e-12);
  EXPECT_EQ(f.lambda_cut, median(lam));
}

TEST(ScalingFitTest, CutIsRespectedAndRecorded) {
  const std::vector<double> lam = {1, 2, 3, 4, 5, 6};
  const std::vector<double> q = {100, 100, 9, 16, 25, 36};  // transient below 3
  const ScalingFit f = fit_loglog("q", lam, q, 3.0);
  EXPECT_EQ(f.used, 4);
  EXPECT_EQ(f.lambda_cut, 3.0);
  EXPECT_NEAR(f.slope, 2.0, 1e-12);
  EXPECT_EQ(code_of([&] { fit_loglog("q", lam, q, 6.0); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { fit_loglog("q", {2, 2}, {1, 3}, 1.0); }), ErrorCode::kInvalidArgument);
}

TEST(ScalingFitTest, MedianEvenAndOdd) {
  EXPECT_EQ(median({3, 1, 2}), 2.0);
  EXPECT_EQ(median({4, 1, 2, 3}), 2.5);
}

// ---- Scaling study ----

const ScalingStudy& disk_study() {
  static const ScalingStudy s = run_scaling_study(disk_config(), &disk());
  return s;
}

TEST(ScalingStudyTest, DiskNodalFitSlopeIsOne) {
  const ScalingStudy& s = disk_study();
  EXPECT_NEAR(s.nodal.slope, 1.0, 1e-6);
  EXPECT_NEAR(s.nodal.intercept, std::log(2.0), 1e-6);
}

TEST(ScalingStudyTest, DiskCountsAreTwoKAndBelowLambdaSixBound) {
  const ScalingStudy& s = disk_study();
  int included = 0;
  for (const PairResult& p : s.pairs) {
    if (!p.included) continue;
    ++included;
    EXPECT_EQ(p.zeros, 2 * static_cast<int>(std::lround(p.lambda))) << "pair " << p.index;
    if (p.lambda >= 1.0) EXPECT_LE(p.zeros, 2.0 * std::pow(p.lambda, 6));
  }
  EXPECT_EQ(included, 40);
  EXPECT_LE(s.nodal_c, 2.0);
}

TEST(ScalingStudyTest, ConstantPairExcludedWithReason) {
  const ScalingStudy& s = disk_study();
  ASSERT_FALSE(s.pairs.empty());
  EXPECT_EQ(s.pairs.front().index, 0);
  EXPECT_FALSE(s.pairs.front().included);
  EXPECT_NE(s.pairs.front().reason.find("constant"), std::string::npos);
}

TEST(ScalingStudyTest, ResidualGateExcludesWithLoggedReason) {
  ExperimentConfig c = disk_config();
  c.j_min = 1;
  c.j_max = 4;
  c.residual_gate = 0.0;
  const ScalingStudy s = run_scaling_study(c, &disk());
  for (const PairResult& p : s.pairs) {
    if (p.residual > 0.0) {
      EXPECT_FALSE(p.included);
      EXPECT_NE(p.reason.find("above gate"), std::string::npos);
    }
  }
}

TEST(ScalingStudyTest, PairsSortedByLambdaThenIndex) {
  const ScalingStudy& s = disk_study();
  for (std::size_t i = 1; i < s.pairs.size(); ++i) {
    const PairResult& a = s.pairs[i - 1];
    const PairResult& b = s.pairs[i];
    EXPECT_TRUE(a.lambda < b.lambda || (a.lambda == b.lambda && a.index < b.index));
  }
}

TEST(ScalingStudyTest, DoublingExponentsGrowSlowly) {
  const ScalingStudy& s = disk_study();
  EXPECT_LE(s.doubling.slope, 5.0);
  EXPECT_LE(s.c_emp, 1.0);
  for (const PairResult& p : s.pairs) {
    if (p.included) EXPECT_TRUE(std::isfinite(p.max_exponent));
  }
}

TEST(ScalingStudyTest, CsvIsDeterministicAndParsable) {
  ExperimentConfig c = disk_config();
  c.j_max = 8;
  const std::string a = scaling_to_csv(run_scaling_study(c, &disk()));
  const std::string b = scaling_to_csv(run_scaling_study(c, &disk()));
  EXPECT_EQ(a, b);
  const CsvTable t = parse_csv(a);
  EXPECT_EQ(t.rows.size(), 9u);
  ASSERT_EQ(t.comments.size(), 1u);
  EXPECT_EQ(t.comments[0].front(), '{');
  EXPECT_EQ(t.header.front(), "index");
}

TEST(ScalingStudyTest, RejectsTooShortSlice) {
  ExperimentConfig c = disk_config();
  c.j_max = 60;
  EXPECT_EQ(code_of([&] { run_scaling_study(c, &disk()); }), ErrorCode::kInvalidArgument);
  c.nodes = 128;
  EXPECT_EQ(code_of([&] { solve_for_config(c); }), ErrorCode::kInvalidArgument);
}

TEST(ScalingStudyTest, SpectrumCacheReuses) {
  const fs::path dir = scratch("cache");
  ExperimentConfig c = disk_config();
  c.nodes = 64;
  c.j_max = 10;
  c.spectrum_cache = (dir / "disk.json").string();
  const SpectrumSlice a = solve_for_config(c);
  ASSERT_TRUE(fs::exists(c.spectrum_cache));
  const SpectrumSlice b = solve_for_config(c);
  ASSERT_EQ(a.pairs.size(), b.pairs.size());
  for (std::size_t j = 0; j < a.pairs.size(); ++j) EXPECT_EQ(a.pairs[j].lambda(), b.pairs[j].lambda());
}

// ---- Frequency suite ----

TEST(FrequencySuite, SmallFamilyPasses) {
  ExperimentConfig c;
  c.max_degree = 3;
  c.random_count = 3;
  c.radius_count = 8;
  c.v_modes = {1};
  const FrequencySuiteReport r = run_frequency_suite(c);
  for (const SuiteCase& s : r.cases) EXPECT_TRUE(s.passed) << s.field << " " << s.check << " " << s.worst;
  EXPECT_TRUE(r.passed());
  EXPECT_LE(r.worst_degree, 1e-8);
  EXPECT_LE(r.worst_equality, 1e-8);
  EXPECT_GE(r.worst_doubling_slack, -1e-8);
  EXPECT_NE(frequency_suite_to_json(r).find("\"passed\": true"), std::string::npos);
}

TEST(FrequencySuite, DegreeThreeFrequencyIsThree) {
  const FrequencyProfile p =
      frequency_profile(homogeneous_harmonic(3), nullptr, Vec2::Zero(), geometric_radii_count(0.05, 1.0, 32));
  for (double n : p.n) EXPECT_NEAR(n, 3.0, 1e-8);
}

TEST(FrequencySuite, SphereMeanIncreasesOnRandomFamily) {
  for (const ScalarField& u : random_harmonic_family(10, 42)) {
    const FrequencyProfile p = frequency_profile(u, nullptr, Vec2::Zero(), geometric_radii_count(0.05, 1.0, 32));
    EXPECT_TRUE(check_reverse_doubling(p).passed()) << u.description;
  }
}

TEST(FrequencySuite, FamilyIsSeeded) {
  const auto a = random_harmonic_family(5, 9);
  const auto b = random_harmonic_family(5, 9);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].description, b[i].description);
}

TEST(FrequencySuite, RejectsOutOfRangeMode) {
  ExperimentConfig c;
  c.max_degree = 0;
  c.random_count = 0;
  c.radius_count = 4;
  c.v_modes = {21};
  EXPECT_EQ(code_of([&] { run_frequency_suite(c); }), ErrorCode::kInvalidArgument);
}

// ---- Complex-zero oracle ----

TEST(ComplexZero, TwoRootExample) {
  // (z - 0.3)(z - 0.1) / 0.03 = 1 - (40/3) z + (100/3) z^2.
  const ComplexZeroCase c = evaluate_zero_case({0.03, -0.4, 1.0});
  EXPECT_EQ(c.zeros_in_half, 2);
  const double sup = 1.3 * 1.1 / 0.03;  // attained at z = -1
  EXPECT_NEAR(c.sup, sup, 1e-9);
  EXPECT_NEAR(c.n_value, std::log2(1.01 * sup), 1e-9);
  EXPECT_LE(c.zeros_in_half, c.n_value);
  EXPECT_NEAR(std::abs(c.coefficients[0]), 1.0, 1e-15);
  EXPECT_LT(c.root_residual, 1e-12);
}

TEST(ComplexZero, ConstantHasNoZerosAndNZero) {
  const ComplexZeroCase c = evaluate_zero_case({cdouble(2.0, 1.0)});
  EXPECT_EQ(c.zeros_in_half, 0);
  EXPECT_EQ(c.n_value, 0.0);
}

TEST(ComplexZero, RejectsVanishingAtOrigin) {
  EXPECT_EQ(code_of([] { evaluate_zero_case({0.0, 1.0}); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { run_complex_zero_oracle(1, 65, 1); }), ErrorCode::kInvalidArgument);
}

TEST(ComplexZero, DefaultBatteryHasNoViolations) {
  const ComplexZeroReport r = run_complex_zero_oracle(200, 12, 42);
  EXPECT_EQ(r.cases.size(), 200u);
  EXPECT_EQ(r.violations, 0);
  for (const ComplexZeroCase& c : r.cases) {
    EXPECT_NEAR(std::abs(c.coefficients[0]), 1.0, 1e-12);
    EXPECT_LE(c.zeros_in_half, c.n_value);
    EXPECT_LE(c.coefficients.size(), 13u);
  }
}

TEST(ComplexZero, DeterministicIncludingRedraws) {
  const ComplexZeroReport a = run_complex_zero_oracle(50, 12, 3);
  const ComplexZeroReport b = run_complex_zero_oracle(50, 12, 3);
  EXPECT_EQ(complex_zero_to_json(a), complex_zero_to_json(b));
}

// ---- Plots ----

std::string scaling_csv(const std::vector<double>& lam, const std::vector<int>& zeros, const std::vector<double>& ex) {
  std::string out = csv_row({"index", "lambda", "residual", "included", "reason", "zeros", "tangential",
                             "max_exponent", "worst_t", "worst_r"});
  for (std::size_t i = 0; i < lam.size(); ++i) {
    out += csv_row({std::to_string(i + 1), format_double(lam[i]), "0", "1", "", std::to_string(zeros[i]), "0",
                    format_double(ex[i]), "0", "0.1"});
  }
  return out;
}

TEST(Plots, EmptyCsvRaisesAndWritesNothing) {
  const fs::path dir = scratch("empty");
  write_text_file((dir / "empty.csv").string(), "");
  EXPECT_EQ(code_of([&] { emit_plots({(dir / "empty.csv").string()}, (dir / "out").string()); }), ErrorCode::kParse);
  EXPECT_FALSE(fs::exists(dir / "out" / "nodal.svg"));
  EXPECT_FALSE(fs::exists(dir / "out" / "doubling.svg"));
}

TEST(Plots, MalformedCsvNamesRowAndWritesNothing) {
  const fs::path dir = scratch("malformed");
  write_text_file((dir / "good.csv").string(), scaling_csv({1, 2}, {2, 4}, {1, 1.5}));
  std::string bad = scaling_csv({1, 2}, {2, 4}, {1, 1.5});
  bad += "3,abc,0,1,,6,0,2,0,0.1\n";
  write_text_file((dir / "bad.csv").string(), bad);
  try {
    emit_plots({(dir / "good.csv").string(), (dir / "bad.csv").string()}, (dir / "out").string());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    const std::string msg = e.what();
    EXPECT_NE(msg.find("bad.csv"), std::string::npos) << msg;
    EXPECT_NE(msg.find("row 3"), std::string::npos) << msg;
  }
  EXPECT_FALSE(fs::exists(dir / "out" / "nodal.svg"));
}

TEST(Plots, DiskStudyShowsSlopeOneFit) {
  const fs::path dir = scratch("disk");
  write_text_file((dir / "disk.csv").string(), scaling_to_csv(disk_study()));
  const auto files = emit_plots({(dir / "disk.csv").string()}, (dir / "out").string());
  ASSERT_EQ(files.size(), 2u);
  const std::string svg = read_text_file(files[0]);
  EXPECT_NE(svg.find("disk (slope 1.000)"), std::string::npos);
  EXPECT_NE(svg.find("2 lambda^6"), std::string::npos);
  EXPECT_NE(read_text_file(files[1]).find("lambda^5"), std::string::npos);
}

TEST(Plots, RenderIsDeterministicAndEscapes) {
  PlotSpec s{"a < b & c", "x", "y", {{"s\"1", {1, 2, 4}, {1, 4, 16}}}, {}, true};
  const std::string a = render_loglog_svg(s);
  EXPECT_EQ(a, render_loglog_svg(s));
  EXPECT_NE(a.find("a &lt; b &amp; c"), std::string::npos);
  EXPECT_NE(a.find("s&quot;1 (slope 2.000)"), std::string::npos);
  PlotSpec none{"t", "x", "y", {{"neg", {-1}, {1}}}, {}, true};
  EXPECT_EQ(code_of([&] { render_loglog_svg(none); }), ErrorCode::kInvalidArgument);
}

TEST(Plots, TwoRunOverlayMatchesGolden) {
  const fs::path dir = scratch("overlay");
  write_text_file((dir / "run_a.csv").string(), scaling_csv({1, 2, 3, 4}, {2, 4, 6, 8}, {1.0, 1.5, 2.0, 2.5}));
  write_text_file((dir / "run_b.csv").string(), scaling_csv({1.5, 2.5, 3.5}, {4, 6, 10}, {1.2, 1.4, 3.0}));
  const auto files = emit_plots({(dir / "run_a.csv").string(), (dir / "run_b.csv").string()}, (dir / "out").string());
  const std::string nodal = read_text_file(files[0]);
  EXPECT_NE(nodal.find("run_a (slope"), std::string::npos);
  EXPECT_NE(nodal.find("run_b (slope"), std::string::npos);
  const fs::path golden_dir = fs::path(STEKLOV_TEST_DATA_DIR) / "overlay";
  if (std::getenv("STEKLOV_UPDATE_GOLDEN")) {
    fs::create_directories(golden_dir);
    write_text_file((golden_dir / "nodal.svg").string(), nodal);
    write_text_file((golden_dir / "doubling.svg").string(), read_text_file(files[1]));
  }
  EXPECT_EQ(nodal, read_text_file((golden_dir / "nodal.svg").string()));
  EXPECT_EQ(read_text_file(files[1]), read_text_file((golden_dir / "doubling.svg").string()));
}

}  // namespace
}  // namespace steklov
