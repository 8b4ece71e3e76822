#include "steklov/trig_series.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/FFT>

#include "steklov/error.hpp"

namespace steklov {

TrigSeries::TrigSeries(int kmin, std::vector<cdouble> coefficients)
    : kmin_(kmin), c_(std::move(coefficients)) {}

std::vector<cdouble> dft(std::span<const cdouble> x) {
  Eigen::FFT<double> fft;
  std::vector<cdouble> in(x.begin(), x.end());
  std::vector<cdouble> out;
  fft.fwd(out, in);
  return out;
}

std::vector<cdouble> inverse_dft(std::span<const cdouble> x) {
  Eigen::FFT<double> fft;
  std::vector<cdouble> in(x.begin(), x.end());
  std::vector<cdouble> out;
  fft.inv(out, in);  // Eigen scales the inverse by 1/n
  for (auto& v : out) v *= static_cast<double>(x.size());
  return out;
}

TrigSeries TrigSeries::interpolate(std::span<const cdouble> samples) {
  const int n = static_cast<int>(samples.size());
  if (n < 2) raise(ErrorCode::kInvalidArgument, "need at least two samples to interpolate");
  const std::vector<cdouble> x = dft(samples);
  const int half = n / 2;
  if (n % 2 == 0) {
    std::vector<cdouble> c(n + 1);
    for (int k = -half; k <= half; ++k) {
      const int idx = ((k % n) + n) % n;
      cdouble v = x[idx] / static_cast<double>(n);
      if (k == half || k == -half) v *= 0.5;
      c[k + half] = v;
    }
    return TrigSeries(-half, std::move(c));
  }
  std::vector<cdouble> c(n);
  for (int k = -half; k <= half; ++k) {
    const int idx = ((k % n) + n) % n;
    c[k + half] = x[idx] / static_cast<double>(n);
  }
  return TrigSeries(-half, std::move(c));
}

TrigSeries TrigSeries::interpolate(std::span<const double> samples) {
  std::vector<cdouble> z(samples.begin(), samples.end());
  return interpolate(std::span<const cdouble>(z));
}

cdouble TrigSeries::operator()(cdouble tau) const {
  if (c_.empty()) return {0.0, 0.0};
  const cdouble w = std::exp(cdouble(0.0, 1.0) * tau);
  cdouble e = std::exp(cdouble(0.0, static_cast<double>(kmin_)) * tau);
  cdouble sum(0.0, 0.0);
  for (const cdouble& ck : c_) {
    sum += ck * e;
    e *= w;
  }
  return sum;
}

void TrigSeries::eval_with_derivative(cdouble tau, cdouble& value, cdouble& derivative) const {
  value = derivative = {0.0, 0.0};
  if (c_.empty()) return;
  const cdouble w = std::exp(cdouble(0.0, 1.0) * tau);
  cdouble e = std::exp(cdouble(0.0, static_cast<double>(kmin_)) * tau);
  int k = kmin_;
  for (const cdouble& ck : c_) {
    const cdouble term = ck * e;
    value += term;
    derivative += cdouble(0.0, static_cast<double>(k)) * term;
    e *= w;
    ++k;
  }
}

TrigSeries TrigSeries::derivative() const {
  std::vector<cdouble> d(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) {
    d[i] = cdouble(0.0, static_cast<double>(kmin_ + static_cast<int>(i))) * c_[i];
  }
  return TrigSeries(kmin_, std::move(d));
}

TrigSeries TrigSeries::antiderivative() const {
  std::vector<cdouble> d(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) {
    const int k = kmin_ + static_cast<int>(i);
    d[i] = k == 0 ? cdouble(0.0, 0.0) : c_[i] / cdouble(0.0, static_cast<double>(k));
  }
  return TrigSeries(kmin_, std::move(d));
}

TrigSeries TrigSeries::operator+(const TrigSeries& other) const {
  if (c_.empty()) return other;
  if (other.c_.empty()) return *this;
  const int lo = std::min(kmin_, other.kmin_);
  const int hi = std::max(kmax(), other.kmax());
  std::vector<cdouble> c(hi - lo + 1, cdouble(0.0, 0.0));
  for (std::size_t i = 0; i < c_.size(); ++i) c[kmin_ - lo + i] += c_[i];
  for (std::size_t i = 0; i < other.c_.size(); ++i) c[other.kmin_ - lo + i] += other.c_[i];
  return TrigSeries(lo, std::move(c));
}

TrigSeries TrigSeries::operator*(cdouble scale) const {
  std::vector<cdouble> c(c_);
  for (auto& v : c) v *= scale;
  return TrigSeries(kmin_, std::move(c));
}

TrigSeries TrigSeries::trimmed(double rel_threshold) const {
  if (c_.empty()) return *this;
  double peak = 0.0;
  for (const auto& v : c_) peak = std::max(peak, std::abs(v));
  const double cut = rel_threshold * peak;
  std::size_t lo = 0;
  std::size_t hi = c_.size();
  while (lo < hi && std::abs(c_[lo]) <= cut) ++lo;
  while (hi > lo && std::abs(c_[hi - 1]) <= cut) --hi;
  if (lo == hi) return TrigSeries(0, {cdouble(0.0, 0.0)});
  return TrigSeries(kmin_ + static_cast<int>(lo),
                    std::vector<cdouble>(c_.begin() + lo, c_.begin() + hi));
}

std::vector<cdouble> TrigSeries::sample(int m) const {
  std::vector<cdouble> out(m);
  for (int j = 0; j < m; ++j) out[j] = (*this)(kTwoPi * j / m);
  return out;
}

cdouble TrigSeries::coefficient(int k) const {
  if (k < kmin_ || k > kmax()) return {0.0, 0.0};
  return c_[k - kmin_];
}

int TrigSeries::bandwidth() const {
  if (c_.empty()) return 0;
  return std::max(std::abs(kmin_), std::abs(kmax()));
}

std::vector<double> resample_periodic(std::span<const double> samples, int m) {
  const int n = static_cast<int>(samples.size());
  if (m < n) raise(ErrorCode::kInvalidArgument, "resample_periodic only upsamples");
  if (m == n) return {samples.begin(), samples.end()};
  const TrigSeries s = TrigSeries::interpolate(samples);
  std::vector<cdouble> spectrum(m, cdouble(0.0, 0.0));
  for (int k = s.kmin(); k <= s.kmax(); ++k) {
    spectrum[((k % m) + m) % m] += s.coefficient(k);
  }
  const std::vector<cdouble> values = inverse_dft(spectrum);
  std::vector<double> out(m);
  for (int j = 0; j < m; ++j) out[j] = values[j].real();
  return out;
}

}  // namespace steklov
