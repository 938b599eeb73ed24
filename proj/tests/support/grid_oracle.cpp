#include "support/grid_oracle.hpp"

#include <Eigen/Sparse>

#include <cmath>

namespace morsedec::testing {

namespace {

inline Real morse_potential(Real s, Real x) {
  const Real k = s + 0.5;
  const Real w = std::exp(-x);
  return k * k * (w * w - 2.0 * w);
}

}  // namespace

GridEigenpair numerov_eigenpair(Real s, Real guess, const GridOracleSpec& spec) {
  const int n = spec.n_points;
  const Real h = (spec.x_hi - spec.x_lo) / (n + 1);
  const Real inv_h2 = 1.0 / (h * h);

  Vector x(n), v(n);
  for (int i = 0; i < n; ++i) {
    x[i] = spec.x_lo + (i + 1) * h;
    v[i] = morse_potential(s, x[i]);
  }

  // Numerov: (psi_{i+1} - 2 psi_i + psi_{i-1})/h^2
  //            = (f_{i+1} psi_{i+1} + 10 f_i psi_i + f_{i-1} psi_{i-1})/12,
  // f = V - E, rearranged into A psi = E B psi with tridiagonal A, B.
  using Sparse = Eigen::SparseMatrix<Real>;
  std::vector<Eigen::Triplet<Real>> ta, tb;
  ta.reserve(3 * n);
  tb.reserve(3 * n);
  for (int i = 0; i < n; ++i) {
    ta.emplace_back(i, i, 2.0 * inv_h2 + (10.0 / 12.0) * v[i]);
    tb.emplace_back(i, i, 10.0 / 12.0);
    if (i + 1 < n) {
      ta.emplace_back(i, i + 1, -inv_h2 + v[i + 1] / 12.0);
      ta.emplace_back(i + 1, i, -inv_h2 + v[i] / 12.0);
      tb.emplace_back(i, i + 1, 1.0 / 12.0);
      tb.emplace_back(i + 1, i, 1.0 / 12.0);
    }
  }
  Sparse a(n, n), b(n, n);
  a.setFromTriplets(ta.begin(), ta.end());
  b.setFromTriplets(tb.begin(), tb.end());

  Sparse shifted = a - guess * b;
  Eigen::SparseLU<Sparse> lu;
  lu.compute(shifted);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("grid oracle: factorization failed");

  // Deterministic start with support everywhere.
  Vector psi(n);
  for (int i = 0; i < n; ++i)
    psi[i] = std::sin(M_PI * (i + 1) / (n + 1.0)) + 0.3;
  psi.normalize();

  Real eigenvalue = guess;
  for (int it = 0; it < 8; ++it) {
    Vector rhs = b * psi;
    psi = lu.solve(rhs);
    psi.normalize();
    eigenvalue = psi.dot(a * psi) / psi.dot(b * psi);
  }

  // Match the analytic sign convention: positive tail at large x.
  const Real peak = psi.cwiseAbs().maxCoeff();
  for (int i = n - 1; i >= 0; --i)
    if (std::abs(psi[i]) > 1e-3 * peak) {
      if (psi[i] < 0) psi = -psi;
      break;
    }

  GridEigenpair out;
  out.eigenvalue = eigenvalue;
  out.x = x;
  out.psi = psi / std::sqrt(h * psi.squaredNorm());
  out.h = h;
  return out;
}

Real grid_x_element(const GridEigenpair& a, const GridEigenpair& b) {
  return a.h * (a.psi.cwiseProduct(a.x).cwiseProduct(b.psi)).sum();
}

}  // namespace morsedec::testing
