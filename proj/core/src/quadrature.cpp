#include "steklov/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "steklov/error.hpp"
#include "steklov/types.hpp"

namespace steklov {
namespace {

GaussLegendre compute_rule(int n) {
  GaussLegendre rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

const GaussLegendre& gauss_legendre(int order) {
  if (order < 1 || order > 4096) raise(ErrorCode::kInvalidArgument, "Gauss-Legendre order out of range");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussLegendre>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) {
    it = cache.emplace(order, std::make_unique<GaussLegendre>(compute_rule(order))).first;
  }
  return *it->second;
}

double integrate_gl(const std::function<double(double)>& f, double a, double b, int order) {
  const GaussLegendre& rule = gauss_legendre(order);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (int i = 0; i < order; ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * sum;
}

double integrate_composite(const std::function<double(double)>& f, double a, double b, int panels,
                           int order) {
  if (panels < 1) panels = 1;
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) sum += integrate_gl(f, a + p * h, a + (p + 1) * h, order);
  return sum;
}

double integrate_periodic(const std::function<double(double)>& f, int m) {
  const double h = kTwoPi / m;
  double sum = 0.0;
  for (int i = 0; i < m; ++i) sum += f(i * h);
  return h * sum;
}

AdaptiveResult refine_until_stable(const std::function<double(int)>& quadrature, int start,
                                   int max_level, double rel_tol, double abs_tol) {
  AdaptiveResult result;
  int level = start;
  double previous = quadrature(level);
  while (2 * level <= max_level) {
    level *= 2;
    const double current = quadrature(level);
    result.value = current;
    result.change = std::abs(current - previous);
    result.level = level;
    if (result.change <= rel_tol * std::abs(current) + abs_tol) {
      result.converged = true;
      return result;
    }
    previous = current;
  }
  if (result.level == 0) {
    result.value = previous;
    result.level = level;
  }
  return result;
}

}  // namespace steklov
