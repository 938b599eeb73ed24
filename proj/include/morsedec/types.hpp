#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace morsedec {

using Real = double;
using Complex = std::complex<Real>;

using Vector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Density operator in the bound eigenbasis, N x N complex Hermitian.
using DensityMatrix = ComplexMatrix;

/// Quadrature / matrix-element computation failed to converge.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Initial state is not representable in the bound subspace.
class DissociationError : public std::domain_error {
 public:
  DissociationError(const std::string& what, Real deficit)
      : std::domain_error(what), norm_deficit(deficit) {}
  Real norm_deficit;
};

/// Density-matrix eigenvalue fell below the accepted negativity tolerance.
class PositivityError : public std::runtime_error {
 public:
  explicit PositivityError(const std::string& what, Real min_eigenvalue)
      : std::runtime_error(what), min_eig(min_eigenvalue) {}
  Real min_eig;
};

/// Time evolution aborted; carries the last time that passed all monitors.
class EvolveAbort : public std::runtime_error {
 public:
  EvolveAbort(const std::string& what, Real last_good)
      : std::runtime_error(what), last_good_time(last_good) {}
  Real last_good_time;
};

/// Breakpoint fit did not separate two regimes at the required slope ratio.
class InconclusiveFit : public std::runtime_error {
 public:
  explicit InconclusiveFit(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace morsedec
