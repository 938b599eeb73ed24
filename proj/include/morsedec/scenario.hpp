#pragma once

#include "morsedec/analysis.hpp"
#include "morsedec/dynamics.hpp"
#include "morsedec/wigner.hpp"

#include <nlohmann/json_fwd.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace morsedec {

/// Configuration error with the offending field path, reported verbatim.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& path, const std::string& message)
      : std::runtime_error(path.empty() ? message : path + ": " + message),
        field_path(path) {}
  std::string field_path;
};

struct CouplingSpec {
  std::optional<Real> ratio;   ///< omega01/gamma01 at T = 0
  std::optional<Real> lambda;  ///< raw coupling; exactly one of the two
};

enum class InitialKind { coherent, eigenstate, thermal };

struct InitialSpec {
  InitialKind kind = InitialKind::coherent;
  Real x0 = 0, p0 = 0;  // coherent
  int eigenstate = 0;   // eigenstate
};

struct TimeSpec {
  Real t_max_t0 = 0;
  int sample_stride = 8;
  int points_per_period = 50;      ///< sets dt unless overridden
  std::optional<Real> dt;          ///< dimensionless override
};

struct SnapshotSpec {
  std::vector<Real> times_t0;
};

struct WignerOutputSpec {
  PhaseSpaceGridSpec grid;
  std::vector<Real> times_t0;
};

struct SweepSpec {
  std::string parameter;  ///< "x0" | "temperature" | "lambda"
  std::vector<Real> values;
};

struct ScenarioConfig {
  Real s = 54.54;
  CouplingSpec coupling;
  Real temperature = 0;
  InitialSpec initial;
  Level level = Level::full;
  TimeSpec time;
  Real dissociation_threshold = 1e-3;
  QuadratureSpec quadrature;
  bool write_csv = true;
  std::optional<SnapshotSpec> snapshots;
  std::optional<WignerOutputSpec> wigner;
  std::optional<SweepSpec> sweep;
};

ScenarioConfig parse_config(const nlohmann::json& j);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Fully resolved config (all defaults explicit); embedded in the manifest
/// so a run can be reproduced from its manifest alone.
nlohmann::json config_to_json(const ScenarioConfig& config);

/// FNV-1a 64-bit over the canonical serialized config.
std::string config_hash(const ScenarioConfig& config);

struct RunArtifacts {
  std::vector<std::string> files;  ///< paths relative to the output directory
  Real lambda = 0, omega01 = 0, t0 = 0, dt = 0;
  TrajectoryRecord record;
};

/// Executes one scenario: trajectory CSV, optional snapshot dump, optional
/// Wigner frames (per-run color normalization), and a run manifest. Fully
/// deterministic; rerunning the same config reproduces every byte.
RunArtifacts run_scenario(const ScenarioConfig& config,
                          const std::filesystem::path& out_dir,
                          int n_threads = 1);

struct SweepPointResult {
  Real value = 0;
  Real t_d_t0 = 0;
  Real residual = 0;
  Real entropy_purity_gap = 0;
  bool conclusive = false;
  std::string note;
};

struct SweepArtifacts {
  std::vector<SweepPointResult> points;
  std::optional<ExponentialLaw> law;  ///< over t_d in t0 units
  std::vector<std::string> files;
};

/// Runs the grid concurrently, extracts a decoherence time per point, fits
/// the exponential law over the conclusive points (needs at least 4), and
/// writes summary.csv, law.json and the manifest.
SweepArtifacts run_sweep(const ScenarioConfig& config,
                         const std::filesystem::path& out_dir,
                         int n_threads = 1);

struct CalibrationReport {
  Real s = 0, lambda = 0, gamma01 = 0, omega01 = 0, t0 = 0, ratio = 0;
  struct Entry {
    int from = 0, to = 0;
    Real rate = 0;
  };
  std::vector<Entry> largest_rates;  ///< ten largest zero-temperature rates
};

CalibrationReport calibrate_report(Real s, Real ratio);
std::string format_calibration_table(const CalibrationReport& report);
nlohmann::json calibration_to_json(const CalibrationReport& report);

}  // namespace morsedec
