#include "steklov/spectrum_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "json_util.hpp"
#include "steklov/csv.hpp"
#include "steklov/error.hpp"

namespace steklov {
namespace {

constexpr const char* kFormat = "steklov-spectrum/1";

nlohmann::json vec(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd unvec(const nlohmann::json& j, int n, const char* what) {
  const std::vector<double> v = j.get<std::vector<double>>();
  if (static_cast<int>(v.size()) != n) raise(ErrorCode::kParse, std::string("spectrum field '") + what + "' has the wrong length");
  return Eigen::Map<const Eigen::VectorXd>(v.data(), n);
}

}  // namespace

std::string spectrum_to_json(const SpectrumSlice& slice) {
  nlohmann::json j;
  j["format"] = kFormat;
  j["curve"] = detail::curve_to_json(*slice.geometry->curve);
  j["curve_hash"] = slice.geometry->curve->hash();
  j["nodes"] = slice.nodes;
  j["symmetry_defect"] = slice.symmetry_defect;
  j["rcond"] = slice.rcond;
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& p : slice.pairs) {
    pairs.push_back({{"index", p.index()},
                     {"lambda", p.lambda()},
                     {"residual", p.bc_residual()},
                     {"constant", p.constant()},
                     {"trace", vec(p.trace())},
                     {"density", vec(p.density())},
                     {"neumann", vec(p.neumann())}});
  }
  j["pairs"] = std::move(pairs);
  return j.dump();
}

SpectrumSlice spectrum_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::kParse, std::string("spectrum file: ") + e.what());
  }
  try {
    if (j.value("format", std::string()) != kFormat) raise(ErrorCode::kParse, "not a spectrum file");
    auto curve = share(detail::curve_from_json(j.at("curve")));
    if (curve->hash() != j.at("curve_hash").get<std::string>()) {
      raise(ErrorCode::kParse, "spectrum curve hash does not match its coefficients");
    }
    const int n = j.at("nodes").get<int>();
    SpectrumSlice slice;
    slice.geometry = make_dtn_geometry(curve, n);
    slice.nodes = n;
    slice.symmetry_defect = j.value("symmetry_defect", 0.0);
    slice.rcond = j.value("rcond", 0.0);
    for (const auto& p : j.at("pairs")) {
      slice.pairs.emplace_back(slice.geometry, p.at("index").get<int>(), p.at("lambda").get<double>(),
                               unvec(p.at("trace"), n, "trace"), unvec(p.at("density"), n, "density"),
                               p.at("constant").get<double>(), unvec(p.at("neumann"), n, "neumann"));
    }
    return slice;
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::kParse, std::string("spectrum file: ") + e.what());
  }
}

void save_spectrum(const SpectrumSlice& slice, const std::string& path) {
  write_text_file(path, spectrum_to_json(slice) + "\n");
}

SpectrumSlice load_spectrum(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::kIo, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return spectrum_from_json(ss.str());
}

bool load_cached_spectrum(const std::string& path, const BoundaryCurve& curve, int nodes, int count,
                          SpectrumSlice& out) {
  if (!std::filesystem::exists(path)) return false;
  try {
    SpectrumSlice s = load_spectrum(path);
    if (s.geometry->curve->hash() != curve.hash() || s.nodes != nodes ||
        static_cast<int>(s.pairs.size()) < count) {
      return false;
    }
    out = std::move(s);
    return true;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace steklov
