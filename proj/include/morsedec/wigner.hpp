#pragma once

#include "morsedec/morse.hpp"
#include "morsedec/types.hpp"

#include <string>

namespace morsedec {

/// Rectangular (x, p) window. Cells are midpoint-centered: the j-th x value
/// is x_min + (j + 1/2) dx. n_u is the number of points on the chord
/// integration axis; support_pad widens the position support beyond the
/// window before it is intersected with the model's quadrature domain.
struct PhaseSpaceGridSpec {
  Real x_min = -1.5, x_max = 2.5;
  Real p_min = -60.0, p_max = 60.0;
  int nx = 256, np = 256;
  int n_u = 1024;
  Real support_pad = 1.0;
  Real min_window_mass = 0.999;
};

struct PhaseSpaceGrid {
  PhaseSpaceGridSpec spec;
  Matrix values;  ///< np x nx, row index = p ascending, col index = x ascending

  Real dx() const { return (spec.x_max - spec.x_min) / spec.nx; }
  Real dp() const { return (spec.p_max - spec.p_min) / spec.np; }
  Real x_at(int j) const { return spec.x_min + (j + 0.5) * dx(); }
  Real p_at(int k) const { return spec.p_min + (k + 0.5) * dp(); }
};

/// W(x, p) = (1/2pi) Int <x-u/2| rho |x+u/2> e^{iup} du, evaluated by
/// reconstructing the position representation on a chord grid per x column
/// and applying the Fourier kernel as one dense product. Requires at least
/// `min_window_mass` of the position density inside the window. The result
/// is real; an imaginary residue above 1e-8 raises NumericalError.
PhaseSpaceGrid wigner_transform(const DensityMatrix& rho,
                                const MorseModel& model,
                                const PhaseSpaceGridSpec& spec,
                                int n_threads = 1);

/// Integral of |min(W, 0)|: the negative volume of the quasiprobability.
Real negativity(const PhaseSpaceGrid& grid);

/// Sum W dx dp (1 for a state contained in the window).
Real grid_integral(const PhaseSpaceGrid& grid);

/// 2 pi Int W^2 dx dp; equals Tr rho^2 for contained states.
Real purity_from_wigner(const PhaseSpaceGrid& grid);

/// Int W dp per x column; the position density |psi(x)|^2 for pure states.
Vector position_marginal(const PhaseSpaceGrid& grid);

Real mean_x(const PhaseSpaceGrid& grid);
Real mean_p(const PhaseSpaceGrid& grid);

/// 16-bit binary PGM (P5, big-endian samples), rows written from p_max down.
/// Values are mapped affinely from [w_min, w_max] onto [0, 65535].
void write_pgm16(const std::string& path, const PhaseSpaceGrid& grid,
                 Real w_min, Real w_max);

}  // namespace morsedec
