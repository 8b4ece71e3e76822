#pragma once

#include <span>
#include <vector>

#include "steklov/types.hpp"

namespace steklov {

// Finite Fourier series sum_k c_k e^{i k tau} over a contiguous band k in [kmin, kmax].
// Evaluation accepts complex tau, which is how boundary data is continued off the curve.
class TrigSeries {
 public:
  TrigSeries() = default;
  TrigSeries(int kmin, std::vector<cdouble> coefficients);

  // Interpolant through samples at t_j = 2 pi j / n. For even n the Nyquist mode is split
  // symmetrically, so real samples give an interpolant that is real on the real axis.
  static TrigSeries interpolate(std::span<const double> samples);
  static TrigSeries interpolate(std::span<const cdouble> samples);

  cdouble operator()(cdouble tau) const;
  cdouble operator()(double t) const { return (*this)(cdouble(t, 0.0)); }
  double real(double t) const { return (*this)(t).real(); }

  // Value and first derivative in one pass.
  void eval_with_derivative(cdouble tau, cdouble& value, cdouble& derivative) const;

  TrigSeries derivative() const;
  // Term-wise antiderivative; the k = 0 coefficient is dropped.
  TrigSeries antiderivative() const;

  TrigSeries operator+(const TrigSeries& other) const;
  TrigSeries operator*(cdouble scale) const;

  // Removes outer coefficients with |c_k| <= rel_threshold * max|c|.
  TrigSeries trimmed(double rel_threshold) const;

  // Samples on an m-point uniform grid (m >= number of coefficients avoids aliasing).
  std::vector<cdouble> sample(int m) const;

  cdouble coefficient(int k) const;
  int kmin() const { return kmin_; }
  int kmax() const { return kmin_ + static_cast<int>(c_.size()) - 1; }
  int bandwidth() const;
  bool empty() const { return c_.empty(); }
  std::span<const cdouble> coefficients() const { return c_; }

 private:
  int kmin_ = 0;
  std::vector<cdouble> c_;
};

// Forward DFT X_k = sum_j x_j e^{-2 pi i jk/n}.
std::vector<cdouble> dft(std::span<const cdouble> x);
std::vector<cdouble> inverse_dft(std::span<const cdouble> x);

// Spectral resampling of periodic real samples from n to m points (m >= n).
std::vector<double> resample_periodic(std::span<const double> samples, int m);

}  // namespace steklov
