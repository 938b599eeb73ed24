#pragma once

// Synthetic systems used as oracles: the equidistant ladder (harmonic limit)
// and seeded random density matrices.

#include "morsedec/morse.hpp"

#include <random>

namespace morsedec::testing {

/// Equidistant spectrum E_n = e0 + n*omega with the standard ladder
/// <n-1|X|n> = sqrt(n); feeding this through the dissipator must reduce the
/// dynamics to amplitude damping.
inline MorseModel make_harmonic_ladder(int n_levels, Real omega, Real e0 = 0) {
  MorseModel m;
  m.s = 0;  // not meaningful for a synthetic spectrum
  m.n_bound = n_levels;
  m.energies.resize(n_levels);
  for (int n = 0; n < n_levels; ++n) m.energies[n] = e0 + n * omega;
  m.x_matrix = Matrix::Zero(n_levels, n_levels);
  for (int n = 1; n < n_levels; ++n) {
    m.x_matrix(n - 1, n) = std::sqrt(static_cast<Real>(n));
    m.x_matrix(n, n - 1) = m.x_matrix(n - 1, n);
  }
  m.p_matrix.resize(n_levels, n_levels);
  for (int r = 0; r < n_levels; ++r)
    for (int c = 0; c < n_levels; ++c)
      m.p_matrix(r, c) =
          Complex(0.0, 0.5) * (m.energies[r] - m.energies[c]) * m.x_matrix(r, c);
  return m;
}

/// Truncated coherent state sum_n alpha^n/sqrt(n!) |n>, renormalized.
inline StateVector ladder_coherent(int n_levels, Complex alpha) {
  StateVector st;
  st.amplitudes.resize(n_levels);
  Complex term = 1.0;
  for (int n = 0; n < n_levels; ++n) {
    st.amplitudes[n] = term;
    term *= alpha / std::sqrt(static_cast<Real>(n + 1));
  }
  st.norm_deficit = 0;
  st.amplitudes.normalize();
  return st;
}

inline ComplexMatrix random_complex(int n, std::mt19937& rng) {
  std::normal_distribution<Real> gauss(0.0, 1.0);
  ComplexMatrix m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = Complex(gauss(rng), gauss(rng));
  return m;
}

inline ComplexMatrix random_hermitian(int n, std::mt19937& rng) {
  const ComplexMatrix m = random_complex(n, rng);
  return 0.5 * (m + m.adjoint());
}

/// Full-rank random density matrix, G G^dag / Tr.
inline DensityMatrix random_density(int n, std::mt19937& rng) {
  const ComplexMatrix g = random_complex(n, rng);
  DensityMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return rho;
}

/// Random Hermitian scaled to unit trace (not necessarily positive).
inline ComplexMatrix random_hermitian_unit_trace(int n, std::mt19937& rng) {
  ComplexMatrix m = random_hermitian(n, rng);
  const Real tr = m.trace().real();
  if (std::abs(tr) < 0.1) m += Matrix::Identity(n, n).cast<Complex>();
  return m / m.trace().real();
}

}  // namespace morsedec::testing
