#include "morsedec/observables.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace morsedec {

Real entropy_from_eigenvalues(const Vector& eigenvalues) {
  Real s = 0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    Real p = eigenvalues[i];
    if (p < -1e-6)
      throw PositivityError("density matrix eigenvalue " + std::to_string(p) +
                            " below positivity tolerance", p);
    if (p <= 0) continue;
    s -= p * std::log(p);
  }
  return s;
}

Real entropy(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho,
                                                      Eigen::EigenvaluesOnly);
  return entropy_from_eigenvalues(solver.eigenvalues());
}

Real purity(const DensityMatrix& rho) {
  // Tr(rho^2) = sum_ij rho_ij rho_ji, O(N^2).
  const Complex tr = rho.transpose().cwiseProduct(rho).sum();
  return tr.real();
}

Real autocorrelation(const DensityMatrix& rho, const StateVector& initial) {
  if (rho.rows() != initial.amplitudes.size())
    throw std::invalid_argument("autocorrelation: dimension mismatch");
  const Complex v = initial.amplitudes.dot(rho * initial.amplitudes);
  return std::max(0.0, v.real());
}

void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& record,
                          Real t0) {
  os << "# morsedec trajectory csv v1\n";
  os << "t,x_exp,p_exp,energy,entropy,purity,trace_err,min_eig,t_over_t0\n";
  char line[512];
  for (std::size_t i = 0; i < record.times.size(); ++i) {
    std::snprintf(line, sizeof(line),
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  record.times[i], record.x_exp[i], record.p_exp[i],
                  record.energy[i], record.entropy[i], record.purity[i],
                  record.trace_err[i], record.min_eig[i], record.times[i] / t0);
    os << line;
  }
}

}  // namespace morsedec
