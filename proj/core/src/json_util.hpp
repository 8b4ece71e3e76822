#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "steklov/curve.hpp"
#include "steklov/error.hpp"

namespace steklov::detail {

inline FourierCoefficients coefficients_from_json(const nlohmann::json& j, const std::string& key) {
  if (!j.contains(key) || !j[key].is_array()) raise(ErrorCode::kParse, "curve file needs array '" + key + "'");
  FourierCoefficients c;
  for (const auto& pair : j[key]) {
    if (!pair.is_array() || pair.size() != 2) {
      raise(ErrorCode::kParse, "'" + key + "' entries must be [cos_k, sin_k] pairs");
    }
    c.cos.push_back(pair[0].get<double>());
    c.sin.push_back(pair[1].get<double>());
  }
  return c;
}

inline nlohmann::json coefficients_to_json(const FourierCoefficients& c) {
  nlohmann::json arr = nlohmann::json::array();
  for (std::size_t k = 0; k < c.cos.size(); ++k) arr.push_back({c.cos[k], k < c.sin.size() ? c.sin[k] : 0.0});
  return arr;
}

inline nlohmann::json curve_to_json(const BoundaryCurve& curve) {
  nlohmann::json j;
  j["name"] = curve.name();
  j["fourier_x"] = coefficients_to_json(curve.x_coefficients());
  j["fourier_y"] = coefficients_to_json(curve.y_coefficients());
  return j;
}

inline BoundaryCurve curve_from_json(const nlohmann::json& j) {
  return BoundaryCurve(j.value("name", std::string("curve")), coefficients_from_json(j, "fourier_x"),
                       coefficients_from_json(j, "fourier_y"));
}

}  // namespace steklov::detail
