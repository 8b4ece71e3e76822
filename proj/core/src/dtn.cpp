#include "steklov/dtn.hpp"

#include <cmath>
#include <sstream>

#include "steklov/error.hpp"

namespace steklov {

NodeGrid make_node_grid(const BoundaryCurve& curve, int n) {
  NodeGrid g;
  g.n = n;
  g.t.resize(n);
  g.point.resize(n);
  g.normal.resize(n);
  g.speed.resize(n);
  g.curvature.resize(n);
  g.weight.resize(n);
  for (int j = 0; j < n; ++j) {
    g.t[j] = kTwoPi * j / n;
    const CurveFrame f = curve.eval(g.t[j]);
    g.point[j] = f.point;
    g.normal[j] = f.normal;
    g.speed[j] = f.speed;
    g.curvature[j] = f.curvature;
    g.weight[j] = kTwoPi * f.speed / n;
  }
  return g;
}

std::shared_ptr<const DtnGeometry> make_dtn_geometry(CurvePtr curve, int nodes) {
  auto geometry = std::make_shared<DtnGeometry>();
  geometry->curve = curve;
  geometry->reach = curve->reach();
  for (int level = 0; level < 3; ++level) geometry->levels.push_back(make_node_grid(*curve, nodes << level));
  return geometry;
}

DtnDiscretization build_dtn(CurvePtr curve, int nodes) {
  if (!curve) raise(ErrorCode::kInvalidArgument, "build_dtn needs a curve");
  if (nodes < 64 || nodes % 2 != 0) {
    raise(ErrorCode::kInvalidArgument, "node count must be even and at least 64");
  }
  auto geometry = make_dtn_geometry(curve, nodes);
  const NodeGrid& g = geometry->base();
  const int n = nodes;
  const double h = kTwoPi / n;

  // Kress weights for the periodic log kernel: sum_j R(t_i - t_j) phi(t_j) approximates
  // the integral of log(4 sin^2((t_i - s)/2)) phi(s) ds.
  std::vector<double> kress(n, 0.0);
  for (int d = 0; d < n; ++d) {
    const double delta = h * d;
    double sum = 0.0;
    for (int m = 1; m < n / 2; ++m) sum += std::cos(m * delta) / m;
    kress[d] = -(4.0 * kPi / n) * sum - (4.0 * kPi / (static_cast<double>(n) * n)) * std::cos(0.5 * n * delta);
  }

  Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(n + 1, n + 1);
  Eigen::MatrixXd kprime(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double m2;
      if (i == j) {
        m2 = std::log(g.speed[i] * g.speed[i]);
        kprime(i, j) = -g.curvature[i] / (4.0 * kPi) * g.weight[j];
      } else {
        const Vec2 diff = g.point[i] - g.point[j];
        const double r2 = diff.squaredNorm();
        const double half = std::sin(0.5 * (g.t[i] - g.t[j]));
        m2 = std::log(r2 / (4.0 * half * half));
        kprime(i, j) = -(1.0 / kTwoPi) * diff.dot(g.normal[i]) / r2 * g.weight[j];
      }
      aug(i, j) = -(1.0 / (4.0 * kPi)) * (kress[(i - j + n) % n] + h * m2) * g.speed[j];
    }
    aug(i, n) = 1.0;
    aug(n, i) = g.weight[i];
  }

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(aug);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-13)) {
    std::ostringstream msg;
    msg << "single-layer system is numerically singular (rcond = " << rcond
        << "); rescale the domain";
    raise(ErrorCode::kConditioning, msg.str());
  }
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n + 1, n);
  rhs.topRows(n).setIdentity();
  const Eigen::MatrixXd sol = lu.solve(rhs);

  DtnDiscretization dtn;
  dtn.geometry = geometry;
  dtn.nodes = n;
  dtn.density_map = sol.topRows(n);
  dtn.constant_map = sol.row(n);
  kprime.diagonal().array() += 0.5;
  dtn.matrix = kprime * dtn.density_map;
  dtn.weights = Eigen::Map<const Eigen::VectorXd>(g.weight.data(), n);
  dtn.rcond = rcond;
  return dtn;
}

double symmetry_defect(const DtnDiscretization& dtn) {
  const Eigen::VectorXd sw = dtn.weights.array().sqrt();
  const Eigen::MatrixXd a = sw.asDiagonal() * dtn.matrix * sw.cwiseInverse().asDiagonal();
  return (a - a.transpose()).norm() / dtn.matrix.norm();
}

}  // namespace steklov
