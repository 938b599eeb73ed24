#pragma once

#include "morsedec/bath.hpp"
#include "morsedec/morse.hpp"
#include "morsedec/observables.hpp"
#include "morsedec/types.hpp"

#include <string>
#include <vector>

namespace morsedec {

enum class Level { full, secular, pauli };

std::string to_string(Level level);
Level parse_level(const std::string& name);

struct TrajectoryConfig {
  Real dt = 0;
  Real t_max = 0;
  int sample_stride = 1;
  Level level = Level::full;
};

/// Stiffest Bohr frequency of the model, E_{N-1} - E_0.
Real max_bohr_frequency(const MorseModel& model);

/// Default step: `points_per_period` RK4 steps per period of the stiffest
/// coherence (50 by default; 20 is the documented stability floor).
Real default_dt(const MorseModel& model, int points_per_period = 50);

void validate_config(const TrajectoryConfig& cfg, const MorseModel& model);

/// Right-hand side of the Schroedinger-picture master equation:
///   d rho/dt = -i[H, rho]
///              - (X^dag Xe rho + X Xa^dag rho - Xa^dag rho X - Xe rho X^dag + h.c.)
/// with H diagonal in the eigenbasis. The returned derivative is traceless by
/// algebraic cancellation; the residual is asserted below 1e-12.
DensityMatrix liouvillian_rhs(const DensityMatrix& rho, const MorseModel& model,
                              const DissipatorOperators& diss);

/// Interaction-picture secular equation: populations exchange via the rate
/// matrix, every coherence decays independently at gamma_c.
DensityMatrix secular_rhs(const DensityMatrix& rho,
                          const DissipatorOperators& diss);

/// Classical rate equation for the populations alone.
Vector pauli_rhs(const Vector& populations, const Matrix& rates);

/// Boltzmann state over the bound levels at the environment temperature;
/// the ground-state projector at T = 0.
DensityMatrix thermal_state(const MorseModel& model, const EnvironmentSpec& env);

struct EvolveOptions {
  std::vector<Real> snapshot_times;           ///< dimensionless time units
  const StateVector* autocorr_reference = nullptr;
  Real positivity_tolerance = 1e-6;
  Real trace_tolerance = 1e-6;
};

/// Fixed-step RK4 integration of the selected level with monitors sampled
/// every `sample_stride` steps (the state is symmetrized at sample points
/// only, so raw integrator drift stays observable). Aborts with EvolveAbort
/// on trace or positivity failure, keeping the last good time.
TrajectoryRecord evolve(const DensityMatrix& initial,
                        const TrajectoryConfig& cfg, const MorseModel& model,
                        const DissipatorOperators& diss,
                        const EvolveOptions& options = {});

TrajectoryRecord evolve(const StateVector& initial, const TrajectoryConfig& cfg,
                        const MorseModel& model, const DissipatorOperators& diss,
                        const EvolveOptions& options = {});

/// Per-sample binary records: 8-byte time, then the row-major complex matrix
/// as interleaved 8-byte reals. Pairs with a JSON sidecar written by callers.
void write_snapshot_file(const std::string& path,
                         const TrajectoryRecord& record);

}  // namespace morsedec
