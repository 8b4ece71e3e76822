#pragma once

#include <string>

#include "steklov/eigenpair.hpp"

namespace steklov {

// JSON: {"format", "curve": {name, fourier_x, fourier_y}, "curve_hash", "nodes",
// "symmetry_defect", "rcond", "pairs": [{index, lambda, residual, constant, trace, density,
// neumann}]}. Doubles are written with round-trip precision.
std::string spectrum_to_json(const SpectrumSlice& slice);
SpectrumSlice spectrum_from_json(const std::string& text);

void save_spectrum(const SpectrumSlice& slice, const std::string& path);
SpectrumSlice load_spectrum(const std::string& path);

// Loads a cached spectrum if it exists, matches the curve hash and node count, and holds at
// least `count` pairs. Returns false otherwise.
bool load_cached_spectrum(const std::string& path, const BoundaryCurve& curve, int nodes, int count,
                          SpectrumSlice& out);

}  // namespace steklov
