#pragma once

#include <functional>
#include <span>
#include <vector>

namespace steklov {

// Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Cached per order; safe to call concurrently.
const GaussLegendre& gauss_legendre(int order);

// Maps the rule onto [a, b] and sums f at the mapped nodes.
double integrate_gl(const std::function<double(double)>& f, double a, double b, int order);

// Composite Gauss-Legendre with `panels` equal panels.
double integrate_composite(const std::function<double(double)>& f, double a, double b, int panels,
                           int order);

// Periodic trapezoid sum over [0, 2pi) with m points.
double integrate_periodic(const std::function<double(double)>& f, int m);

struct AdaptiveResult {
  double value = 0.0;
  double change = 0.0;  // |Q(2n) - Q(n)| at the accepted level
  int level = 0;        // resolution parameter at acceptance
  bool converged = false;
};

// Doubles the resolution parameter starting at `start` until successive values agree to
// rel_tol * |value| + abs_tol, or `max_level` is exceeded.
AdaptiveResult refine_until_stable(const std::function<double(int)>& quadrature, int start,
                                   int max_level, double rel_tol, double abs_tol = 0.0);

}  // namespace steklov
