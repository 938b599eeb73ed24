#include "morsedec/scenario.hpp"

#include "morsedec/version.hpp"

#include <nlohmann/json.hpp>

#include <atomic>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

namespace morsedec {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError(path, message);
}

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) {
        ok = true;
        break;
      }
    if (!ok) fail(path.empty() ? key : path + "." + key, "unknown field");
  }
}

Real get_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<Real>();
}

Real get_number_or(const json& parent, const char* key, const std::string& path,
                   Real fallback) {
  if (!parent.contains(key)) return fallback;
  return get_number(parent.at(key), path + "." + key);
}

int get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

std::vector<Real> get_number_list(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of numbers");
  std::vector<Real> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(get_number(j.at(i), path + "[" + std::to_string(i) + "]"));
  return out;
}

PhaseSpaceGridSpec parse_grid(const json& j, const std::string& path) {
  check_keys(j, path, {"x_min", "x_max", "p_min", "p_max", "nx", "np", "n_u",
                       "support_pad", "min_window_mass"});
  PhaseSpaceGridSpec g;
  g.x_min = get_number_or(j, "x_min", path, g.x_min);
  g.x_max = get_number_or(j, "x_max", path, g.x_max);
  g.p_min = get_number_or(j, "p_min", path, g.p_min);
  g.p_max = get_number_or(j, "p_max", path, g.p_max);
  if (j.contains("nx")) g.nx = get_int(j.at("nx"), path + ".nx");
  if (j.contains("np")) g.np = get_int(j.at("np"), path + ".np");
  if (j.contains("n_u")) g.n_u = get_int(j.at("n_u"), path + ".n_u");
  g.support_pad = get_number_or(j, "support_pad", path, g.support_pad);
  g.min_window_mass = get_number_or(j, "min_window_mass", path, g.min_window_mass);
  if (!(g.x_max > g.x_min) || !(g.p_max > g.p_min))
    fail(path, "window bounds are not ordered");
  if (g.nx < 2 || g.np < 2 || g.n_u < 16) fail(path, "grid is too small");
  return g;
}

}  // namespace

ScenarioConfig parse_config(const json& j) {
  if (!j.is_object()) fail("", "config must be a JSON object");
  check_keys(j, "", {"s", "coupling", "temperature", "initial", "level", "time",
                     "dissociation_threshold", "quadrature", "outputs", "sweep"});
  ScenarioConfig c;
  c.s = get_number_or(j, "s", "", c.s);
  if (!(c.s > 1)) fail("s", "shape parameter must exceed 1");

  if (!j.contains("coupling") || !j.at("coupling").is_object())
    fail("coupling", "expected an object with exactly one of ratio|lambda");
  const json& coup = j.at("coupling");
  check_keys(coup, "coupling", {"ratio", "lambda"});
  if (coup.contains("ratio") == coup.contains("lambda"))
    fail("coupling", "exactly one of ratio|lambda is required");
  if (coup.contains("ratio")) {
    c.coupling.ratio = get_number(coup.at("ratio"), "coupling.ratio");
    if (!(*c.coupling.ratio > 0)) fail("coupling.ratio", "must be > 0");
  } else {
    c.coupling.lambda = get_number(coup.at("lambda"), "coupling.lambda");
    if (*c.coupling.lambda < 0) fail("coupling.lambda", "must be >= 0");
  }

  if (!j.contains("temperature")) fail("temperature", "required");
  c.temperature = get_number(j.at("temperature"), "temperature");
  if (c.temperature < 0) fail("temperature", "must be >= 0");

  if (!j.contains("initial") || !j.at("initial").is_object())
    fail("initial", "expected an object with exactly one variant");
  const json& init = j.at("initial");
  check_keys(init, "initial", {"coherent", "eigenstate", "thermal"});
  if (init.size() != 1)
    fail("initial", "exactly one of coherent|eigenstate|thermal is required");
  if (init.contains("coherent")) {
    const json& coh = init.at("coherent");
    check_keys(coh, "initial.coherent", {"x0", "p0"});
    c.initial.kind = InitialKind::coherent;
    c.initial.x0 = get_number_or(coh, "x0", "initial.coherent", 0.0);
    c.initial.p0 = get_number_or(coh, "p0", "initial.coherent", 0.0);
  } else if (init.contains("eigenstate")) {
    c.initial.kind = InitialKind::eigenstate;
    c.initial.eigenstate = get_int(init.at("eigenstate"), "initial.eigenstate");
    if (c.initial.eigenstate < 0) fail("initial.eigenstate", "must be >= 0");
  } else {
    c.initial.kind = InitialKind::thermal;
  }

  if (j.contains("level")) {
    if (!j.at("level").is_string()) fail("level", "expected full|secular|pauli");
    try {
      c.level = parse_level(j.at("level").get<std::string>());
    } catch (const std::invalid_argument& e) {
      fail("level", e.what());
    }
  }

  if (!j.contains("time") || !j.at("time").is_object())
    fail("time", "expected an object");
  const json& time = j.at("time");
  check_keys(time, "time", {"t_max_t0", "sample_stride", "points_per_period", "dt"});
  if (!time.contains("t_max_t0")) fail("time.t_max_t0", "required");
  c.time.t_max_t0 = get_number(time.at("t_max_t0"), "time.t_max_t0");
  if (!(c.time.t_max_t0 > 0)) fail("time.t_max_t0", "must be > 0");
  if (time.contains("sample_stride")) {
    c.time.sample_stride = get_int(time.at("sample_stride"), "time.sample_stride");
    if (c.time.sample_stride < 1) fail("time.sample_stride", "must be >= 1");
  }
  if (time.contains("points_per_period")) {
    c.time.points_per_period =
        get_int(time.at("points_per_period"), "time.points_per_period");
    if (c.time.points_per_period < 20)
      fail("time.points_per_period", "must be >= 20 (stability bound)");
  }
  if (time.contains("dt")) {
    c.time.dt = get_number(time.at("dt"), "time.dt");
    if (!(*c.time.dt > 0)) fail("time.dt", "must be > 0");
  }

  c.dissociation_threshold =
      get_number_or(j, "dissociation_threshold", "", c.dissociation_threshold);
  if (!(c.dissociation_threshold > 0))
    fail("dissociation_threshold", "must be > 0");

  if (j.contains("quadrature")) {
    const json& q = j.at("quadrature");
    check_keys(q, "quadrature", {"x_min", "x_max", "points_per_unit"});
    c.quadrature.x_min = get_number_or(q, "x_min", "quadrature", c.quadrature.x_min);
    if (q.contains("x_max") && !q.at("x_max").is_null())
      c.quadrature.x_max = get_number(q.at("x_max"), "quadrature.x_max");
    if (q.contains("points_per_unit")) {
      c.quadrature.points_per_unit =
          get_int(q.at("points_per_unit"), "quadrature.points_per_unit");
      if (c.quadrature.points_per_unit < 4)
        fail("quadrature.points_per_unit", "must be >= 4");
    }
  }

  if (j.contains("outputs")) {
    const json& out = j.at("outputs");
    check_keys(out, "outputs", {"csv", "snapshots", "wigner"});
    if (out.contains("csv")) {
      if (!out.at("csv").is_boolean()) fail("outputs.csv", "expected a boolean");
      c.write_csv = out.at("csv").get<bool>();
    }
    if (out.contains("snapshots")) {
      const json& snap = out.at("snapshots");
      check_keys(snap, "outputs.snapshots", {"times_t0"});
      if (!snap.contains("times_t0"))
        fail("outputs.snapshots.times_t0", "required");
      SnapshotSpec spec;
      spec.times_t0 = get_number_list(snap.at("times_t0"),
                                      "outputs.snapshots.times_t0");
      c.snapshots = spec;
    }
    if (out.contains("wigner")) {
      const json& wig = out.at("wigner");
      check_keys(wig, "outputs.wigner", {"times_t0", "grid"});
      if (!wig.contains("times_t0")) fail("outputs.wigner.times_t0", "required");
      WignerOutputSpec spec;
      spec.times_t0 = get_number_list(wig.at("times_t0"),
                                      "outputs.wigner.times_t0");
      if (wig.contains("grid"))
        spec.grid = parse_grid(wig.at("grid"), "outputs.wigner.grid");
      c.wigner = spec;
    }
  }

  if (j.contains("sweep")) {
    const json& sw = j.at("sweep");
    check_keys(sw, "sweep", {"parameter", "values"});
    if (!sw.contains("parameter") || !sw.at("parameter").is_string())
      fail("sweep.parameter", "expected x0|temperature|lambda");
    SweepSpec spec;
    spec.parameter = sw.at("parameter").get<std::string>();
    if (spec.parameter != "x0" && spec.parameter != "temperature" &&
        spec.parameter != "lambda")
      fail("sweep.parameter", "expected x0|temperature|lambda");
    if (!sw.contains("values")) fail("sweep.values", "required");
    spec.values = get_number_list(sw.at("values"), "sweep.values");
    c.sweep = spec;
  }
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) fail("", "cannot open config file " + path.string());
  json j;
  try {
    is >> j;
  } catch (const json::parse_error& e) {
    fail("", std::string("JSON parse error: ") + e.what());
  }
  // A manifest can be replayed directly: use its embedded config.
  if (j.is_object() && j.contains("config") && j.contains("tool") &&
      j.at("tool") == "morsedec")
    return parse_config(j.at("config"));
  return parse_config(j);
}

json config_to_json(const ScenarioConfig& c) {
  json j;
  j["s"] = c.s;
  if (c.coupling.ratio)
    j["coupling"] = {{"ratio", *c.coupling.ratio}};
  else
    j["coupling"] = {{"lambda", *c.coupling.lambda}};
  j["temperature"] = c.temperature;
  switch (c.initial.kind) {
    case InitialKind::coherent:
      j["initial"] = {{"coherent", {{"x0", c.initial.x0}, {"p0", c.initial.p0}}}};
      break;
    case InitialKind::eigenstate:
      j["initial"] = {{"eigenstate", c.initial.eigenstate}};
      break;
    case InitialKind::thermal:
      j["initial"] = {{"thermal", true}};
      break;
  }
  j["level"] = to_string(c.level);
  j["time"]["t_max_t0"] = c.time.t_max_t0;
  j["time"]["sample_stride"] = c.time.sample_stride;
  j["time"]["points_per_period"] = c.time.points_per_period;
  if (c.time.dt) j["time"]["dt"] = *c.time.dt;
  j["dissociation_threshold"] = c.dissociation_threshold;
  j["quadrature"]["x_min"] = c.quadrature.x_min;
  if (!std::isnan(c.quadrature.x_max)) j["quadrature"]["x_max"] = c.quadrature.x_max;
  j["quadrature"]["points_per_unit"] = c.quadrature.points_per_unit;
  j["outputs"]["csv"] = c.write_csv;
  if (c.snapshots) j["outputs"]["snapshots"]["times_t0"] = c.snapshots->times_t0;
  if (c.wigner) {
    j["outputs"]["wigner"]["times_t0"] = c.wigner->times_t0;
    const PhaseSpaceGridSpec& g = c.wigner->grid;
    j["outputs"]["wigner"]["grid"] = {
        {"x_min", g.x_min},     {"x_max", g.x_max},
        {"p_min", g.p_min},     {"p_max", g.p_max},
        {"nx", g.nx},           {"np", g.np},
        {"n_u", g.n_u},         {"support_pad", g.support_pad},
        {"min_window_mass", g.min_window_mass}};
  }
  if (c.sweep) {
    j["sweep"]["parameter"] = c.sweep->parameter;
    j["sweep"]["values"] = c.sweep->values;
  }
  return j;
}

std::string config_hash(const ScenarioConfig& config) {
  const std::string text = config_to_json(config).dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

namespace {

DensityMatrix build_initial(const ScenarioConfig& c, const MorseModel& model,
                            const EnvironmentSpec& env, Real x0_override,
                            bool use_override) {
  switch (c.initial.kind) {
    case InitialKind::coherent: {
      const Real x0 = use_override ? x0_override : c.initial.x0;
      return to_density(
          coherent_state(model, x0, c.initial.p0, c.dissociation_threshold));
    }
    case InitialKind::eigenstate: {
      if (c.initial.eigenstate >= model.n_bound)
        throw std::domain_error("initial eigenstate index " +
                                std::to_string(c.initial.eigenstate) +
                                " is not a bound state (n_bound " +
                                std::to_string(model.n_bound) + ")");
      DensityMatrix rho = DensityMatrix::Zero(model.n_bound, model.n_bound);
      rho(c.initial.eigenstate, c.initial.eigenstate) = 1.0;
      return rho;
    }
    case InitialKind::thermal:
      return thermal_state(model, env);
  }
  throw std::logic_error("unreachable");
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
}

json make_manifest(const ScenarioConfig& config, const MorseModel& model,
                   Real lambda, Real dt, long n_steps,
                   const std::vector<std::string>& files) {
  json m;
  m["tool"] = "morsedec";
  m["version"] = kVersion;
  m["config"] = config_to_json(config);
  m["config_hash"] = config_hash(config);
  m["derived"]["n_bound"] = model.n_bound;
  m["derived"]["omega01"] = model.energies[1] - model.energies[0];
  m["derived"]["omega_max"] = max_bohr_frequency(model);
  m["derived"]["t0"] = small_oscillation_period(model.s);
  m["derived"]["t0_convention"] = "2pi/(2(s+1/2)), classical small-oscillation period";
  m["derived"]["lambda"] = lambda;
  m["derived"]["dt"] = dt;
  m["derived"]["n_steps"] = n_steps;
  m["derived"]["quadrature_x_max"] = model.quad_spec.x_max;
  m["outputs"] = files;
  return m;
}

}  // namespace

RunArtifacts run_scenario(const ScenarioConfig& config,
                          const std::filesystem::path& out_dir, int n_threads) {
  std::filesystem::create_directories(out_dir);
  const MorseModel model = build_model(config.s, config.quadrature);
  const Real lambda = config.coupling.ratio
                          ? calibrate_lambda(model, *config.coupling.ratio)
                          : *config.coupling.lambda;
  const EnvironmentSpec env = make_environment(model, config.temperature, lambda);
  const DissipatorOperators diss = build_dissipator(model, env);
  const Real t0 = small_oscillation_period(config.s);

  TrajectoryConfig traj;
  traj.dt = config.time.dt.value_or(default_dt(model, config.time.points_per_period));
  traj.t_max = config.time.t_max_t0 * t0;
  traj.sample_stride = config.time.sample_stride;
  traj.level = config.level;

  EvolveOptions options;
  if (config.snapshots)
    for (Real t : config.snapshots->times_t0)
      options.snapshot_times.push_back(t * t0);
  const std::size_t n_user_snapshots = options.snapshot_times.size();
  if (config.wigner)
    for (Real t : config.wigner->times_t0)
      options.snapshot_times.push_back(t * t0);

  const DensityMatrix rho0 = build_initial(config, model, env, 0, false);
  RunArtifacts artifacts;
  artifacts.record = evolve(rho0, traj, model, diss, options);
  artifacts.lambda = lambda;
  artifacts.omega01 = env.omega01;
  artifacts.t0 = t0;
  artifacts.dt = traj.dt;
  const TrajectoryRecord& rec = artifacts.record;

  if (config.write_csv) {
    std::ostringstream csv;
    write_trajectory_csv(csv, rec, t0);
    write_text_file(out_dir / "trajectory.csv", csv.str());
    artifacts.files.push_back("trajectory.csv");
  }

  if (config.snapshots) {
    TrajectoryRecord user_only;
    user_only.snapshot_times.assign(rec.snapshot_times.begin(),
                                    rec.snapshot_times.begin() + n_user_snapshots);
    user_only.snapshots.assign(rec.snapshots.begin(),
                               rec.snapshots.begin() + n_user_snapshots);
    write_snapshot_file((out_dir / "snapshots.bin").string(), user_only);
    json side;
    side["n"] = model.n_bound;
    side["s"] = config.s;
    side["lambda"] = lambda;
    side["temperature"] = config.temperature;
    side["level"] = to_string(config.level);
    side["dt"] = traj.dt;
    side["count"] = user_only.snapshot_times.size();
    side["times"] = user_only.snapshot_times;
    side["layout"] =
        "per record: f64 time, then row-major complex matrix as interleaved "
        "f64 (re, im), little-endian";
    write_text_file(out_dir / "snapshots.json", side.dump(2) + "\n");
    artifacts.files.push_back("snapshots.bin");
    artifacts.files.push_back("snapshots.json");
  }

  if (config.wigner) {
    std::vector<PhaseSpaceGrid> frames;
    std::vector<Real> frame_times;
    for (Real t_t0 : config.wigner->times_t0) {
      const Real target = t_t0 * t0;
      std::size_t best = n_user_snapshots;
      for (std::size_t i = n_user_snapshots; i < rec.snapshot_times.size(); ++i)
        if (std::abs(rec.snapshot_times[i] - target) <
            std::abs(rec.snapshot_times[best] - target))
          best = i;
      frames.push_back(wigner_transform(rec.snapshots[best], model,
                                        config.wigner->grid, n_threads));
      frame_times.push_back(rec.snapshot_times[best]);
    }
    Real w_min = 0, w_max = 0;  // per-run color scale across all frames
    for (const PhaseSpaceGrid& f : frames) {
      w_min = std::min(w_min, f.values.minCoeff());
      w_max = std::max(w_max, f.values.maxCoeff());
    }
    for (std::size_t i = 0; i < frames.size(); ++i) {
      char name[64];
      std::snprintf(name, sizeof(name), "wigner_%03zu", i);
      const std::string pgm = std::string(name) + ".pgm";
      write_pgm16((out_dir / pgm).string(), frames[i], w_min, w_max);
      json side;
      side["t"] = frame_times[i];
      side["t_over_t0"] = frame_times[i] / t0;
      side["w_min"] = w_min;
      side["w_max"] = w_max;
      side["x_min"] = frames[i].spec.x_min;
      side["x_max"] = frames[i].spec.x_max;
      side["p_min"] = frames[i].spec.p_min;
      side["p_max"] = frames[i].spec.p_max;
      side["nx"] = frames[i].spec.nx;
      side["np"] = frames[i].spec.np;
      side["row_order"] = "top row is p_max";
      write_text_file(out_dir / (std::string(name) + ".json"),
                      side.dump(2) + "\n");
      artifacts.files.push_back(pgm);
      artifacts.files.push_back(std::string(name) + ".json");
    }
  }

  const long n_steps = static_cast<long>(std::ceil(traj.t_max / traj.dt - 1e-9));
  json manifest =
      make_manifest(config, model, lambda, traj.dt, n_steps, artifacts.files);
  write_text_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
  artifacts.files.push_back("manifest.json");
  return artifacts;
}

SweepArtifacts run_sweep(const ScenarioConfig& config,
                         const std::filesystem::path& out_dir, int n_threads) {
  if (!config.sweep) throw ConfigError("sweep", "sweep block is required");
  if (config.sweep->parameter == "x0" &&
      config.initial.kind != InitialKind::coherent)
    throw ConfigError("sweep.parameter",
                      "an x0 sweep requires a coherent initial state");
  std::filesystem::create_directories(out_dir);

  const MorseModel model = build_model(config.s, config.quadrature);
  const Real base_lambda = config.coupling.ratio
                               ? calibrate_lambda(model, *config.coupling.ratio)
                               : *config.coupling.lambda;
  const Real t0 = small_oscillation_period(config.s);

  std::vector<std::size_t> order(config.sweep->values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return config.sweep->values[a] < config.sweep->values[b];
  });

  std::vector<SweepPointResult> results(order.size());
  std::vector<std::exception_ptr> errors(order.size());
  std::atomic<std::size_t> cursor{0};

  auto run_point = [&](std::size_t slot) {
    const Real value = config.sweep->values[order[slot]];
    SweepPointResult& r = results[slot];
    r.value = value;
    try {
      Real temperature = config.temperature;
      Real lambda = base_lambda;
      Real x0_override = 0;
      bool use_x0 = false;
      if (config.sweep->parameter == "temperature")
        temperature = value;
      else if (config.sweep->parameter == "lambda")
        lambda = value;
      else {
        x0_override = value;
        use_x0 = true;
      }
      const EnvironmentSpec env = make_environment(model, temperature, lambda);
      const DissipatorOperators diss = build_dissipator(model, env);
      TrajectoryConfig traj;
      traj.dt = config.time.dt.value_or(
          default_dt(model, config.time.points_per_period));
      traj.t_max = config.time.t_max_t0 * t0;
      traj.sample_stride = config.time.sample_stride;
      traj.level = config.level;
      const DensityMatrix rho0 =
          build_initial(config, model, env, x0_override, use_x0);
      const TrajectoryRecord rec = evolve(rho0, traj, model, diss);
      std::vector<Real> times_t0(rec.times.size());
      for (std::size_t i = 0; i < rec.times.size(); ++i)
        times_t0[i] = rec.times[i] / t0;
      const DecoherenceResult fit =
          detect_decoherence_time(times_t0, rec.entropy, rec.purity);
      r.t_d_t0 = fit.from_entropy.t_d;
      r.residual = fit.from_entropy.residual;
      r.entropy_purity_gap = fit.rel_gap;
      r.conclusive = fit.consistent;
      if (!fit.consistent)
        r.note = "entropy and purity breakpoints disagree beyond 15%";
    } catch (const InconclusiveFit& e) {
      r.conclusive = false;
      r.note = e.what();
    } catch (const EvolveAbort& e) {
      r.conclusive = false;
      r.note = e.what();
    } catch (...) {
      errors[slot] = std::current_exception();
    }
  };

  const int workers =
      std::max(1, std::min<int>(n_threads, static_cast<int>(order.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < order.size(); ++i) run_point(i);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = cursor.fetch_add(1);
          if (i >= order.size()) return;
          run_point(i);
        }
      });
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  SweepArtifacts artifacts;
  artifacts.points = results;

  std::vector<std::pair<Real, Real>> conclusive;
  for (const SweepPointResult& r : results)
    if (r.conclusive) conclusive.push_back({r.value, r.t_d_t0});
  if (conclusive.size() >= 4)
    artifacts.law = fit_exponential(conclusive);

  std::ostringstream csv;
  csv << "# morsedec sweep summary v1\n";
  csv << config.sweep->parameter
      << ",t_d_over_t0,residual,conclusive,entropy_purity_gap,note\n";
  char line[256];
  for (const SweepPointResult& r : results) {
    std::string note = r.note;
    for (char& ch : note)
      if (ch == ',' || ch == '\n') ch = ';';
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%d,%.17g,",
                  r.value, r.t_d_t0, r.residual, r.conclusive ? 1 : 0,
                  r.entropy_purity_gap);
    csv << line << note << "\n";
  }
  write_text_file(out_dir / "summary.csv", csv.str());
  artifacts.files.push_back("summary.csv");

  json law;
  law["parameter"] = config.sweep->parameter;
  law["units"] = "t_d in multiples of t0";
  if (artifacts.law) {
    law["fitted"] = true;
    law["t_d0_over_t0"] = artifacts.law->t_d0;
    law["kappa"] = artifacts.law->kappa;
    law["range"] = {artifacts.law->x0_range.first, artifacts.law->x0_range.second};
    law["r_squared"] = artifacts.law->r_squared;
  } else {
    law["fitted"] = false;
    law["reason"] = "fewer than 4 conclusive points";
  }
  law["n_conclusive"] = conclusive.size();
  write_text_file(out_dir / "law.json", law.dump(2) + "\n");
  artifacts.files.push_back("law.json");

  json manifest = make_manifest(config, model, base_lambda,
                                config.time.dt.value_or(default_dt(
                                    model, config.time.points_per_period)),
                                0, artifacts.files);
  write_text_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
  artifacts.files.push_back("manifest.json");
  return artifacts;
}

CalibrationReport calibrate_report(Real s, Real ratio) {
  const MorseModel model = build_model(s);
  CalibrationReport report;
  report.s = s;
  report.ratio = ratio;
  report.lambda = calibrate_lambda(model, ratio);
  report.omega01 = model.energies[1] - model.energies[0];
  report.t0 = small_oscillation_period(s);

  const EnvironmentSpec env = make_environment(model, 0.0, report.lambda);
  const DissipatorOperators diss = build_dissipator(model, env);
  report.gamma01 = diss.rates(0, 1);

  std::vector<CalibrationReport::Entry> entries;
  for (int i = 0; i < model.n_bound; ++i)
    for (int k = 0; k < model.n_bound; ++k)
      if (diss.rates(i, k) > 0) entries.push_back({k, i, diss.rates(i, k)});
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.rate > b.rate; });
  if (entries.size() > 10) entries.resize(10);
  report.largest_rates = entries;
  return report;
}

std::string format_calibration_table(const CalibrationReport& report) {
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof(line), "s                 = %.10g\n", report.s);
  os << line;
  std::snprintf(line, sizeof(line), "lambda            = %.10e\n", report.lambda);
  os << line;
  std::snprintf(line, sizeof(line), "omega01           = %.10g\n", report.omega01);
  os << line;
  std::snprintf(line, sizeof(line), "gamma01 (T=0)     = %.10e\n", report.gamma01);
  os << line;
  std::snprintf(line, sizeof(line), "omega01/gamma01   = %.10g\n",
                report.omega01 / report.gamma01);
  os << line;
  std::snprintf(line, sizeof(line), "t0                = %.10g\n", report.t0);
  os << line;
  os << "largest zero-temperature rates (transition, per unit time):\n";
  for (const auto& e : report.largest_rates) {
    std::snprintf(line, sizeof(line), "  %3d -> %3d   %.6e\n", e.from, e.to,
                  e.rate);
    os << line;
  }
  return os.str();
}

json calibration_to_json(const CalibrationReport& report) {
  json j;
  j["s"] = report.s;
  j["ratio"] = report.ratio;
  j["lambda"] = report.lambda;
  j["omega01"] = report.omega01;
  j["gamma01_T0"] = report.gamma01;
  j["omega01_over_gamma01"] = report.omega01 / report.gamma01;
  j["t0"] = report.t0;
  j["largest_rates"] = json::array();
  for (const auto& e : report.largest_rates)
    j["largest_rates"].push_back(
        {{"from", e.from}, {"to", e.to}, {"rate", e.rate}});
  return j;
}

}  // namespace morsedec
