#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "steklov/curve.hpp"

namespace steklov {

// Equispaced collocation nodes t_j = 2 pi j / n with the geometry the integral operators need.
struct NodeGrid {
  int n = 0;
  std::vector<double> t;
  std::vector<Vec2> point;
  std::vector<Vec2> normal;
  std::vector<double> speed;
  std::vector<double> curvature;
  std::vector<double> weight;  // 2 pi |gamma'(t_j)| / n
};

NodeGrid make_node_grid(const BoundaryCurve& curve, int n);

// Curve and node grids shared by a discretization and every eigenpair solved from it.
// Levels 0, 1, 2 hold N, 2N and 4N nodes for near-boundary upsampling.
struct DtnGeometry {
  CurvePtr curve;
  std::vector<NodeGrid> levels;
  double reach = 0.0;

  const NodeGrid& base() const { return levels.front(); }
};

std::shared_ptr<const DtnGeometry> make_dtn_geometry(CurvePtr curve, int nodes);

// Dense Nystrom discretization of the Dirichlet-to-Neumann map.
//
// Boundary data f is represented as u = S[sigma] + a with the side condition
// integral(sigma) = 0; the constant a keeps the system regular when the logarithmic capacity
// of the curve is 1 (the unit disk). Then Lambda f = (I/2 + K') sigma.
struct DtnDiscretization {
  std::shared_ptr<const DtnGeometry> geometry;
  int nodes = 0;
  Eigen::MatrixXd matrix;          // L, N x N
  Eigen::MatrixXd density_map;     // sigma = P f
  Eigen::RowVectorXd constant_map; // a = c f
  Eigen::VectorXd weights;
  double rcond = 0.0;              // reciprocal condition estimate of the augmented system

  const BoundaryCurve& curve() const { return *geometry->curve; }
};

// N even and >= 64. Throws kConditioning when the augmented single-layer system is singular
// to working precision.
DtnDiscretization build_dtn(CurvePtr curve, int nodes);

// ||A - A^T|| / ||L|| for A = W^{1/2} L W^{-1/2} (Frobenius norms).
double symmetry_defect(const DtnDiscretization& dtn);

}  // namespace steklov
