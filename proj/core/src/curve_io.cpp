#include <cctype>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <nlohmann/json.hpp>

#include "steklov/curve.hpp"
#include "steklov/error.hpp"
#include "json_util.hpp"

namespace steklov {
namespace {

std::vector<double> parse_args(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      raise(ErrorCode::kParse, "bad curve argument '" + item + "'");
    }
  }
  return out;
}

}  // namespace

BoundaryCurve make_curve(const std::string& spec) {
  static const std::regex call(R"(^\s*([a-z_]+)\s*(?:\((.*)\))?\s*$)");
  std::smatch m;
  if (std::regex_match(spec, m, call)) {
    const std::string name = m[1];
    const std::vector<double> args = m[2].matched ? parse_args(m[2]) : std::vector<double>{};
    if (name == "disk") {
      if (args.empty()) return BoundaryCurve::disk();
      if (args.size() == 1) return BoundaryCurve::disk(args[0]);
      raise(ErrorCode::kParse, "disk takes at most one argument");
    }
    if (name == "ellipse") {
      if (args.size() != 2) raise(ErrorCode::kParse, "ellipse(a,b) takes two arguments");
      return BoundaryCurve::ellipse(args[0], args[1]);
    }
    if (name == "perturbed_disk") {
      if (args.size() != 2) raise(ErrorCode::kParse, "perturbed_disk(eps,m) takes two arguments");
      return BoundaryCurve::perturbed_disk(args[0], static_cast<int>(args[1]));
    }
  }
  if (std::filesystem::exists(spec)) return load_curve_file(spec);
  raise(ErrorCode::kParse, "unknown domain '" + spec + "'");
}

BoundaryCurve load_curve_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::kIo, "cannot open curve file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::kParse, "curve file " + path + ": " + e.what());
  }
  const std::string name = j.value("name", std::filesystem::path(path).stem().string());
  return BoundaryCurve(name, detail::coefficients_from_json(j, "fourier_x"), detail::coefficients_from_json(j, "fourier_y"));
}

void save_curve_file(const BoundaryCurve& curve, const std::string& path) {
  const nlohmann::json j = detail::curve_to_json(curve);
  std::ofstream out(path);
  if (!out) raise(ErrorCode::kIo, "cannot write curve file " + path);
  out << j.dump(2) << "\n";
}

}  // namespace steklov
