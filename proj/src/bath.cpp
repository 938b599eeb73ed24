#include "morsedec/bath.hpp"

#include <cmath>

namespace morsedec {

EnvironmentSpec make_environment(const MorseModel& model, Real temperature,
                                 Real lambda) {
  if (temperature < 0)
    throw std::domain_error("environment temperature must be >= 0");
  if (lambda < 0) throw std::domain_error("environment lambda must be >= 0");
  if (model.n_bound < 2)
    throw std::domain_error("environment needs at least two bound states");
  EnvironmentSpec env;
  env.temperature = temperature;
  env.lambda = lambda;
  env.omega01 = model.energies[1] - model.energies[0];
  return env;
}

Real bose_occupation(Real omega, const EnvironmentSpec& env) {
  if (!(omega > 0)) throw std::domain_error("bose_occupation: omega must be > 0");
  if (env.temperature <= 0) return 0.0;
  const Real exponent = omega / (env.temperature * env.omega01);
  if (exponent > 700.0) return 0.0;  // smooth T -> 0 limit
  return 1.0 / std::expm1(exponent);
}

DissipatorOperators build_dissipator(const MorseModel& model,
                                     const EnvironmentSpec& env) {
  const int n = model.n_bound;
  DissipatorOperators d;
  d.x_lower = Matrix::Zero(n, n);
  d.xe = Matrix::Zero(n, n);
  d.xa = Matrix::Zero(n, n);
  d.rates = Matrix::Zero(n, n);
  d.gamma_c = Matrix::Zero(n, n);

  for (int m = 0; m < n; ++m) {
    for (int k = m + 1; k < n; ++k) {
      const Real omega = model.energies[k] - model.energies[m];
      const Real x = model.x_matrix(m, k);
      const Real w3 = omega * omega * omega;
      const Real nbar = bose_occupation(omega, env);
      d.x_lower(m, k) = x;
      d.xe(m, k) = env.lambda * x * w3 * (nbar + 1.0);
      d.xa(m, k) = env.lambda * x * w3 * nbar;
      // Emission k -> m and the absorption mirror m -> k; the products are
      // squares of real matrix elements, so the rates are nonnegative.
      d.rates(m, k) = 2.0 * d.xe(m, k) * x;
      d.rates(k, m) = 2.0 * d.xa(m, k) * x;
    }
  }

  const Vector outflow = d.rates.colwise().sum();  // total rate out of each level
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      d.gamma_c(j, i) = 0.5 * (outflow[i] + outflow[j]);
  return d;
}

Real calibrate_lambda(const MorseModel& model, Real ratio) {
  if (!(ratio > 0)) throw std::domain_error("calibrate_lambda: ratio must be > 0");
  if (model.n_bound < 2)
    throw std::domain_error("calibrate_lambda: need at least two bound states");
  const Real x01 = model.x_matrix(0, 1);
  const Real omega01 = model.energies[1] - model.energies[0];
  if (std::abs(x01) < 1e-14)
    throw std::domain_error(
        "calibrate_lambda: vanishing <0|X|1>, coupling is degenerate");
  return 1.0 / (2.0 * ratio * x01 * x01 * omega01 * omega01);
}

}  // namespace morsedec
