#include "morsedec/scenario.hpp"
#include "morsedec/version.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <functional>
#include <thread>
#include <iostream>

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitPhysics = 3;
constexpr int kExitNumerical = 4;

std::string default_out_dir() {
  const char* env = std::getenv("MORSEDEC_OUT_DIR");
  return env ? env : ".";
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const morsedec::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const morsedec::DissociationError& e) {
    std::cerr << "physics precondition failed: " << e.what() << "\n";
    return kExitPhysics;
  } catch (const morsedec::EvolveAbort& e) {
    std::cerr << "numerical abort: " << e.what()
              << " (last good time " << e.last_good_time << ")\n";
    return kExitNumerical;
  } catch (const morsedec::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const morsedec::PositivityError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::domain_error& e) {
    std::cerr << "physics precondition failed: " << e.what() << "\n";
    return kExitPhysics;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"morsedec: decoherence dynamics of Morse-oscillator wave "
               "packets coupled to a thermal bath"};
  app.set_version_flag("--version", morsedec::kVersion);
  app.require_subcommand(1);

  std::string out_dir = default_out_dir();
  int threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  app.add_option("--out-dir", out_dir, "output directory (default: $MORSEDEC_OUT_DIR or .)");
  app.add_option("--threads", threads, "worker threads for sweeps and Wigner rendering");

  std::string run_config, run_level, cache_path;
  CLI::App* run = app.add_subcommand("run", "run a single scenario from a JSON config");
  run->add_option("config", run_config, "scenario config (or a manifest to replay)")
      ->required();
  run->add_option("--level", run_level, "override the dynamics level (full|secular|pauli)");
  run->add_option("--model-cache", cache_path,
                  "binary model cache; loaded when present, else written");

  std::string sweep_config;
  CLI::App* sweep = app.add_subcommand("sweep", "run a parameter grid and fit t_d(x0)");
  sweep->add_option("config", sweep_config, "sweep config")->required();

  double ratio = 0;
  double cal_s = 54.54;
  bool cal_json = false;
  CLI::App* calibrate = app.add_subcommand("calibrate",
                                           "report lambda for a target omega01/gamma01");
  calibrate->add_option("--ratio", ratio, "target omega01/gamma01 at T=0")->required();
  calibrate->add_option("--s", cal_s, "shape parameter (default 54.54)");
  calibrate->add_flag("--json", cal_json, "emit JSON instead of a table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return kExitUsage;
  }

  if (threads < 1) {
    std::cerr << "--threads must be >= 1\n";
    return kExitUsage;
  }

  if (run->parsed()) {
    return guarded([&] {
      morsedec::ScenarioConfig config = morsedec::load_config(run_config);
      if (!run_level.empty()) config.level = morsedec::parse_level(run_level);
      if (!cache_path.empty() && !std::filesystem::exists(cache_path)) {
        // build once so later runs with the same flag skip the quadrature
        morsedec::save_model(
            morsedec::build_model(config.s, config.quadrature), cache_path);
      }
      const morsedec::RunArtifacts artifacts =
          morsedec::run_scenario(config, out_dir, threads);
      std::cout << "wrote " << artifacts.files.size() << " files to " << out_dir
                << " (lambda " << artifacts.lambda << ", t0 " << artifacts.t0
                << ", dt " << artifacts.dt << ")\n";
      return 0;
    });
  }

  if (sweep->parsed()) {
    return guarded([&] {
      const morsedec::ScenarioConfig config = morsedec::load_config(sweep_config);
      const morsedec::SweepArtifacts artifacts =
          morsedec::run_sweep(config, out_dir, threads);
      for (const auto& p : artifacts.points) {
        std::cout << p.value << ": ";
        if (p.conclusive)
          std::cout << "t_d = " << p.t_d_t0 << " t0\n";
        else
          std::cout << "inconclusive (" << p.note << ")\n";
      }
      if (artifacts.law)
        std::cout << "law: t_d(x0) = " << artifacts.law->t_d0
                  << " t0 * exp(-" << artifacts.law->kappa
                  << " x0), r^2 = " << artifacts.law->r_squared << "\n";
      else
        std::cout << "law: not fitted (fewer than 4 conclusive points)\n";
      return 0;
    });
  }

  // calibrate
  if (!(ratio > 0)) {
    std::cerr << "--ratio must be > 0\n";
    return kExitUsage;
  }
  return guarded([&] {
    const morsedec::CalibrationReport report =
        morsedec::calibrate_report(cal_s, ratio);
    if (cal_json)
      std::cout << morsedec::calibration_to_json(report).dump(2) << "\n";
    else
      std::cout << morsedec::format_calibration_table(report);
    return 0;
  });
}
