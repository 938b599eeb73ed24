#pragma once

// Independent grid oracle for the Morse bound states: Numerov discretization
// of -psi'' + V psi = E psi as a generalized tridiagonal eigenproblem
// A psi = E B psi, solved by shifted inverse iteration. Shares nothing with
// the analytic eigenfunction path it cross-checks.

#include "morsedec/types.hpp"

namespace morsedec::testing {

struct GridEigenpair {
  Real eigenvalue = 0;
  Vector x;            // interior grid nodes
  Vector psi;          // normalized so that h * sum psi^2 = 1, right tail > 0
  Real h = 0;
};

struct GridOracleSpec {
  Real x_lo = -2.0;
  Real x_hi = 6.5;
  int n_points = 8192;  // interior points
};

/// Eigenpair of the discretized Morse Hamiltonian nearest `guess`.
GridEigenpair numerov_eigenpair(Real s, Real guess, const GridOracleSpec& spec);

/// x matrix element by trapezoid over the grid eigenvectors.
Real grid_x_element(const GridEigenpair& a, const GridEigenpair& b);

}  // namespace morsedec::testing
