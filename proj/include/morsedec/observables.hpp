#pragma once

#include "morsedec/morse.hpp"
#include "morsedec/types.hpp"

#include <iosfwd>
#include <vector>

namespace morsedec {

/// Sampled time series of a single trajectory. All lists are aligned with
/// `times`; `autocorr` is filled only when a reference state was supplied.
struct TrajectoryRecord {
  std::vector<Real> times;
  std::vector<Real> x_exp, p_exp, energy, entropy, purity, trace_err, min_eig;
  std::vector<Real> herm_drift;  ///< max |rho - rho^dag| before symmetrization
  std::vector<Real> autocorr;
  std::vector<Real> snapshot_times;
  std::vector<DensityMatrix> snapshots;
};

/// Tr(op * rho) for complex-valued operators; no reality assumption.
template <typename DA, typename DB>
Complex trace_product(const Eigen::MatrixBase<DA>& op,
                      const Eigen::MatrixBase<DB>& rho) {
  if (op.rows() != rho.rows() || op.cols() != rho.cols() ||
      op.rows() != op.cols())
    throw std::invalid_argument("trace_product: dimension mismatch");
  return (op.transpose().cwiseProduct(rho)).sum();
}

/// Tr(op * rho) for a Hermitian operator and state; the imaginary residue
/// must stay below 1e-9 and is discarded.
template <typename DA, typename DB>
Real expectation(const Eigen::MatrixBase<DA>& op,
                 const Eigen::MatrixBase<DB>& rho) {
  const Complex value = trace_product(op, rho);
  if (std::abs(value.imag()) >= 1e-9)
    throw NumericalError("expectation value has imaginary residue " +
                         std::to_string(value.imag()));
  return value.real();
}

/// -Tr(rho ln rho) over the eigenvalues, with 0 ln 0 = 0. Eigenvalues in
/// [-1e-6, 0) are clamped to zero; anything below raises PositivityError.
Real entropy(const DensityMatrix& rho);
Real entropy_from_eigenvalues(const Vector& eigenvalues);

/// Tr(rho^2).
Real purity(const DensityMatrix& rho);

/// <psi0| rho |psi0>, equals the survival probability |<psi0|psi(t)>|^2
/// for pure states.
Real autocorrelation(const DensityMatrix& rho, const StateVector& initial);

/// Fixed-schema CSV writer (header comment carries the schema version):
/// t, x_exp, p_exp, energy, entropy, purity, trace_err, min_eig, t_over_t0.
void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& record,
                          Real t0);

}  // namespace morsedec
