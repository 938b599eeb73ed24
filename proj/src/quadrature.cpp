#include "morsedec/quadrature.hpp"

#include <cmath>

namespace morsedec {

void gauss_legendre(int n, Vector& nodes, Vector& weights) {
  nodes.resize(n);
  weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev-like initial guess, then Newton on P_n.
    Real x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    Real pp = 0;
    for (int it = 0; it < 100; ++it) {
      Real p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        Real p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      Real dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    weights[n - 1 - i] = weights[i];
  }
}

QuadratureSpec default_quadrature_for(Real s, const QuadratureSpec& base) {
  QuadratureSpec spec = base;
  if (std::isnan(spec.x_max)) {
    // Outer turning point of the shallowest bound state, plus enough room for
    // its exp(-2 beta_min x) density tail to drop below ~1e-10 of unity.
    const int n_top = static_cast<int>(std::floor(s));
    const Real beta_min = std::max(s - n_top, 0.05);
    const Real k = s + 0.5;
    const Real e_top = -beta_min * beta_min;
    // V(x) = k^2 (w^2 - 2w), w = e^{-x}; solve for the small root.
    const Real w = 1.0 - std::sqrt(std::max(1.0 + e_top / (k * k), 0.0));
    const Real x_turn = (w > 0) ? -std::log(w) : 4.0;
    spec.x_max = std::max(12.0, x_turn + 25.0 / (2.0 * beta_min));
  }
  return spec;
}

QuadratureGrid build_quadrature(const QuadratureSpec& spec) {
  if (!(spec.x_max > spec.x_min))
    throw std::domain_error("quadrature: x_max must exceed x_min");
  if (spec.points_per_unit < 4)
    throw std::domain_error("quadrature: need at least 4 points per unit");

  const Real range = spec.x_max - spec.x_min;
  const int n_panels = std::max(1, static_cast<int>(std::lround(range)));
  const Real panel = range / n_panels;
  const int per_panel = spec.points_per_unit;

  Vector gl_x, gl_w;
  gauss_legendre(per_panel, gl_x, gl_w);

  QuadratureGrid grid;
  grid.spec = spec;
  grid.nodes.resize(n_panels * per_panel);
  grid.weights.resize(n_panels * per_panel);
  for (int p = 0; p < n_panels; ++p) {
    const Real a = spec.x_min + p * panel;
    const Real mid = a + 0.5 * panel;
    for (int q = 0; q < per_panel; ++q) {
      grid.nodes[p * per_panel + q] = mid + 0.5 * panel * gl_x[q];
      grid.weights[p * per_panel + q] = 0.5 * panel * gl_w[q];
    }
  }
  return grid;
}

}  // namespace morsedec
