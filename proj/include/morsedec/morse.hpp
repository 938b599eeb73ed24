#pragma once

#include "morsedec/quadrature.hpp"
#include "morsedec/types.hpp"

#include <string>

namespace morsedec {

/// Bound-state physics of the dimensionless Morse oscillator
///   H = P^2 + (s+1/2)^2 (e^{-2X} - 2 e^{-X}),   [X, P] = i.
/// Immutable after construction; safe to share between threads.
struct MorseModel {
  Real s = 0;                 ///< shape parameter (> 1 for a physical molecule)
  int n_bound = 0;            ///< floor(s) + 1 bound states
  Vector energies;            ///< E_m = -(s-m)^2
  Matrix x_matrix;            ///< <phi_m|X|phi_n>, real symmetric
  ComplexMatrix p_matrix;     ///< (i/2)(E_m - E_n) x_mn, Hermitian, zero diagonal
  QuadratureSpec quad_spec;   ///< grid the matrices were built on
};

/// Normalized wave packet expanded over the bound states.
struct StateVector {
  ComplexVector amplitudes;
  Real norm_deficit = 0;  ///< weight lost to the discarded continuum
};

/// s = sqrt(2 m D) / (hbar alpha) - 1/2. All inputs must be positive.
Real shape_param_from_physical(Real mass, Real dissociation_energy,
                               Real range_param, Real hbar);

int bound_state_count(Real s);
Vector bound_energies(Real s);

/// Classical angular frequency of small oscillations, 2(s + 1/2).
Real classical_frequency(Real s);
/// t0 = 2 pi / classical_frequency(s), the natural time unit.
Real small_oscillation_period(Real s);

/// Evaluates all bound eigenfunctions of a given s at arbitrary points.
/// phi_n(x) = N_n y^{s-n} e^{-y/2} L_n^{(2(s-n))}(y), y = (2s+1) e^{-x},
/// accumulated in log space (y spans ~1e-11 .. ~8e2 over the domain).
class EigenfunctionEvaluator {
 public:
  explicit EigenfunctionEvaluator(Real s);

  int n_bound() const { return n_bound_; }
  Real value(int n, Real x) const;
  /// phi_n and d phi_n / dx (analytic; independent of any matrix identity).
  void value_and_slope(int n, Real x, Real& value, Real& slope) const;
  /// Column of all phi_n(x), n = 0..n_bound-1.
  void eval_all(Real x, Eigen::Ref<Vector> out) const;

 private:
  Real s_;
  int n_bound_;
  Real y_scale_;    // 2s + 1
  Vector beta_;     // s - n
  Vector ln_norm_;  // 0.5 (ln n! + ln 2(s-n) - ln Gamma(2s-n+1))
};

Real eval_eigenfunction(Real s, int n, Real x);

/// Builds spectrum and operator matrices. The x matrix is assembled at the
/// spec's density and revalidated at doubled density; disagreement beyond
/// 1e-8 in any entry raises NumericalError.
MorseModel build_model(Real s, const QuadratureSpec& spec = {});

/// Displaced and boosted ground state phi_0(x - x0) e^{i p0 x}, projected
/// onto the bound subspace and renormalized. Throws DissociationError when
/// the continuum weight reaches `threshold`.
StateVector coherent_state(const MorseModel& model, Real x0, Real p0,
                           Real threshold = 1e-3);

DensityMatrix to_density(const StateVector& state);

/// Binary model cache (little-endian header + row-major x matrix).
void save_model(const MorseModel& model, const std::string& path);
MorseModel load_model(const std::string& path);

}  // namespace morsedec
