#pragma once

#include "morsedec/types.hpp"

namespace morsedec {

/// Composite Gauss-Legendre quadrature: equal panels of roughly unit length,
/// `points_per_unit` nodes per panel. An x_max of NaN means "choose from the
/// potential shape" (see default_quadrature_for).
struct QuadratureSpec {
  Real x_min = -2.0;
  Real x_max = std::numeric_limits<Real>::quiet_NaN();
  int points_per_unit = 48;
};

struct QuadratureGrid {
  Vector nodes;
  Vector weights;
  QuadratureSpec spec;  // resolved (x_max concrete)
};

/// Gauss-Legendre nodes and weights on [-1, 1], Newton iteration on P_n.
void gauss_legendre(int n, Vector& nodes, Vector& weights);

/// Resolve the default domain for shape parameter s: the left edge is fixed
/// (Morse states die doubly-exponentially at x -> -inf), the right edge must
/// cover the slow exp(-2(s-[s])x) tail of the last bound state.
QuadratureSpec default_quadrature_for(Real s, const QuadratureSpec& base = {});

QuadratureGrid build_quadrature(const QuadratureSpec& spec);

}  // namespace morsedec
