#pragma once

#include "morsedec/morse.hpp"
#include "morsedec/types.hpp"

namespace morsedec {

/// Thermal oscillator environment. Temperature is measured in units of
/// hbar*omega01/k, matching how the coupling scenarios are quoted.
struct EnvironmentSpec {
  Real temperature = 0;  ///< >= 0, units of hbar*omega01/k
  Real lambda = 0;       ///< >= 0, overall coupling pi g^2 D / omega^3
  Real omega01 = 0;      ///< cached E_1 - E_0 of the system
};

EnvironmentSpec make_environment(const MorseModel& model, Real temperature,
                                 Real lambda);

/// Ingredients of the dissipator. All matrices are N x N real; x_lower, xe
/// and xa are nonzero only above the diagonal (row m < col n), i.e. the
/// operator maps each eigenstate to superpositions of lower-energy ones.
struct DissipatorOperators {
  Matrix x_lower;  ///< upper triangle of the X matrix
  Matrix xe;       ///< emission-weighted: lambda x_mn w^3 (nbar + 1)
  Matrix xa;       ///< absorption-weighted: lambda x_mn w^3 nbar
  Matrix rates;    ///< rates(i,k): k -> i transition probability per unit time
  Matrix gamma_c;  ///< coherence decay: gamma_c(j,i) = (out_i + out_j)/2
};

/// Mean occupation of the environment mode at dimensionless Bohr frequency
/// omega > 0. Returns 0 at zero temperature or when the exponent overflows.
Real bose_occupation(Real omega, const EnvironmentSpec& env);

DissipatorOperators build_dissipator(const MorseModel& model,
                                     const EnvironmentSpec& env);

/// lambda such that omega01 / gamma01(T=0) equals `ratio` exactly.
Real calibrate_lambda(const MorseModel& model, Real ratio);

}  // namespace morsedec
