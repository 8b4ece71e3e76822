#pragma once

#include <memory>

#include "steklov/eigenpair.hpp"
#include "steklov/fields.hpp"
#include "steklov/tube.hpp"

namespace steklov {

// v = u e^{lambda d} on the inner collar, reflected to the outer collar by v(x') = v(Psi(x')),
// with the coefficients of the equation v satisfies on each side.
struct VTransform {
  ScalarField field;
  CoefficientField coefficients;
  double lambda = 0.0;
  double halfwidth = 0.0;
  // Scan maxima sup|b| / lambda and sup|c| / lambda^2 over the tube (0 when lambda = 0).
  double b_constant = 0.0;
  double c_constant = 0.0;
};

// The inner branch is u e^{-lambda s} with s the signed offset, valid on both sides of the
// curve wherever the extension of u is; the outer branch is the inner one composed with Psi.
// Field and coefficients are piecewise: inner for s <= 0, outer for s > 0. Declared bounds
// come from a 256 x 17 scan of the tube with a 25% margin. Throws kInvalidArgument if the
// tube and pair use different curves.
VTransform v_transform(const SteklovEigenpair& pair, const TubeNeighborhood& tube);

struct PdeResidual {
  double residual = 0.0;  // Div(A grad w) + b . grad w + c w by fourth-order differences
  double scale = 0.0;     // |c||w| + |b||grad w|
  double relative() const { return std::abs(residual) / (scale > 0.0 ? scale : 1.0); }
};

// Uses the one-sided branch of x for every stencil point, so the stencil may straddle the
// curve only when the branches are smooth there.
PdeResidual pde_residual(const ScalarField& field, const CoefficientField& coeffs, const Vec2& x, double h);

}  // namespace steklov
