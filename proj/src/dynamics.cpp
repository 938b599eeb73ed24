#include "morsedec/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace morsedec {

std::string to_string(Level level) {
  switch (level) {
    case Level::full: return "full";
    case Level::secular: return "secular";
    case Level::pauli: return "pauli";
  }
  return "full";
}

Level parse_level(const std::string& name) {
  if (name == "full") return Level::full;
  if (name == "secular") return Level::secular;
  if (name == "pauli") return Level::pauli;
  throw std::invalid_argument("unknown level '" + name +
                              "' (expected full|secular|pauli)");
}

Real max_bohr_frequency(const MorseModel& model) {
  return model.energies[model.n_bound - 1] - model.energies[0];
}

Real default_dt(const MorseModel& model, int points_per_period) {
  return 2.0 * M_PI / (points_per_period * max_bohr_frequency(model));
}

void validate_config(const TrajectoryConfig& cfg, const MorseModel& model) {
  if (!(cfg.dt > 0)) throw std::domain_error("trajectory dt must be > 0");
  if (!(cfg.t_max > 0)) throw std::domain_error("trajectory t_max must be > 0");
  if (cfg.sample_stride < 1)
    throw std::domain_error("sample_stride must be >= 1");
  const Real bound = 2.0 * M_PI / (20.0 * max_bohr_frequency(model));
  if (cfg.dt > bound * (1.0 + 1e-12))
    throw std::domain_error(
        "dt " + std::to_string(cfg.dt) + " exceeds the stability bound " +
        std::to_string(bound) + " (20 steps per period of the stiffest mode)");
}

namespace {

void add_commutator(const Vector& energies, const DensityMatrix& rho,
                    DensityMatrix& out) {
  const int n = static_cast<int>(energies.size());
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) {
      const Real w = energies[r] - energies[c];
      const Complex v = rho(r, c);
      out(r, c) += Complex(w * v.imag(), -w * v.real());  // -i w rho
    }
}

// Precomputed complex copies of the dissipator matrices; complex-complex
// products are the fastest kernel Eigen offers at this size.
struct FullGenerator {
  ComplexMatrix X, Xt, Xe, Xet, Xa, Xat, A, At;
  Vector energies;
  bool dissipative = false;

  FullGenerator(const MorseModel& model, const DissipatorOperators& diss) {
    energies = model.energies;
    const Matrix a_real = diss.x_lower.transpose() * diss.xe +
                          diss.x_lower * diss.xa.transpose();
    dissipative = a_real.cwiseAbs().maxCoeff() > 0;
    X = diss.x_lower.cast<Complex>();
    Xt = diss.x_lower.transpose().cast<Complex>();
    Xe = diss.xe.cast<Complex>();
    Xet = diss.xe.transpose().cast<Complex>();
    Xa = diss.xa.cast<Complex>();
    Xat = diss.xa.transpose().cast<Complex>();
    A = a_real.cast<Complex>();
    At = a_real.transpose().cast<Complex>();
  }

  // Exact for Hermitian rho; the hot path of evolve().
  void rhs_hermitian(const DensityMatrix& rho, DensityMatrix& out,
                     ComplexMatrix& w1, ComplexMatrix& w2,
                     ComplexMatrix& w3) const {
    if (dissipative) {
      w1.noalias() = rho * X;
      w2.noalias() = Xat * w1;            // Xa^dag rho X
      w1.noalias() = rho * Xt;
      w3.noalias() = Xe * w1;             // Xe rho X^dag
      w1.noalias() = A * rho;             // (X^dag Xe + X Xa^dag) rho
      out = w2 + w2.adjoint() + w3 + w3.adjoint() - w1 - w1.adjoint();
    } else {
      out.setZero();
    }
    add_commutator(energies, rho, out);
  }

  // No Hermiticity assumption; used by the public liouvillian_rhs.
  void rhs_general(const DensityMatrix& rho, DensityMatrix& out) const {
    if (dissipative) {
      out.noalias() = Xat * (rho * X).eval();
      out.noalias() += Xt * (rho * Xa).eval();
      out.noalias() += Xe * (rho * Xt).eval();
      out.noalias() += X * (rho * Xet).eval();
      out.noalias() -= A * rho;
      out.noalias() -= rho * At;
    } else {
      out.setZero();
    }
    add_commutator(energies, rho, out);
  }
};

}  // namespace

DensityMatrix liouvillian_rhs(const DensityMatrix& rho, const MorseModel& model,
                              const DissipatorOperators& diss) {
  if (rho.rows() != model.n_bound || rho.cols() != model.n_bound)
    throw std::invalid_argument("liouvillian_rhs: dimension mismatch");
  FullGenerator gen(model, diss);
  DensityMatrix out(rho.rows(), rho.cols());
  gen.rhs_general(rho, out);
  const Real trace_residual = std::abs(out.trace());
  if (trace_residual >= 1e-12 * std::max(1.0, rho.cwiseAbs().maxCoeff()))
    throw NumericalError("liouvillian derivative trace residual " +
                         std::to_string(trace_residual));
  return out;
}

DensityMatrix secular_rhs(const DensityMatrix& rho,
                          const DissipatorOperators& diss) {
  if (rho.rows() != diss.rates.rows() || rho.cols() != diss.rates.cols())
    throw std::invalid_argument("secular_rhs: dimension mismatch");
  DensityMatrix out = -(diss.gamma_c.cast<Complex>().cwiseProduct(rho));
  out.diagonal() += diss.rates.cast<Complex>() * rho.diagonal();
  return out;
}

Vector pauli_rhs(const Vector& populations, const Matrix& rates) {
  if (populations.size() != rates.rows() || rates.rows() != rates.cols())
    throw std::invalid_argument("pauli_rhs: dimension mismatch");
  if (populations.minCoeff() < -1e-12)
    throw std::domain_error("pauli_rhs: negative input population");
  const Vector outflow = rates.colwise().sum();
  return rates * populations - outflow.cwiseProduct(populations);
}

DensityMatrix thermal_state(const MorseModel& model,
                            const EnvironmentSpec& env) {
  const int n = model.n_bound;
  DensityMatrix rho = DensityMatrix::Zero(n, n);
  if (env.temperature <= 0) {
    rho(0, 0) = 1.0;
    return rho;
  }
  Vector p(n);
  for (int i = 0; i < n; ++i)
    p[i] = std::exp(-(model.energies[i] - model.energies[0]) /
                    (env.temperature * env.omega01));
  p /= p.sum();
  rho.diagonal() = p.cast<Complex>();
  return rho;
}

namespace {

struct SamplePlan {
  long n_steps = 0;
  std::vector<long> snapshot_steps;  // aligned with requested snapshot times
};

SamplePlan plan_run(const TrajectoryConfig& cfg, const EvolveOptions& options) {
  SamplePlan plan;
  plan.n_steps = static_cast<long>(std::ceil(cfg.t_max / cfg.dt - 1e-9));
  plan.n_steps = std::max(plan.n_steps, 1L);
  for (Real t : options.snapshot_times) {
    long k = std::lround(t / cfg.dt);
    k = std::clamp(k, 0L, plan.n_steps);
    // snap to the sampling comb so the state has been symmetrized
    const long stride = cfg.sample_stride;
    long lower = (k / stride) * stride;
    long upper = std::min(lower + stride, plan.n_steps);
    plan.snapshot_steps.push_back((k - lower <= upper - k) ? lower : upper);
  }
  return plan;
}

class Recorder {
 public:
  Recorder(const MorseModel& model, const EvolveOptions& options)
      : model_(model), options_(options) {}

  // Returns false (and fills abort info) when a monitor trips.
  bool sample(Real t, DensityMatrix& rho, TrajectoryRecord& rec,
              std::string& abort_reason) {
    const Real herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    const Real trace_err = std::abs(rho.trace().real() - 1.0) +
                           std::abs(rho.trace().imag());
    if (trace_err > options_.trace_tolerance) {
      abort_reason = "trace error " + std::to_string(trace_err) +
                     " at t=" + std::to_string(t) +
                     " exceeds tolerance; use a smaller dt";
      return false;
    }
    solver_.compute(rho, Eigen::EigenvaluesOnly);
    const Vector& evals = solver_.eigenvalues();
    const Real min_eig = evals.minCoeff();
    if (min_eig < -options_.positivity_tolerance) {
      abort_reason = "positivity violation: min eigenvalue " +
                     std::to_string(min_eig) + " at t=" + std::to_string(t);
      return false;
    }
    rec.times.push_back(t);
    rec.herm_drift.push_back(herm);
    rec.trace_err.push_back(trace_err);
    rec.min_eig.push_back(min_eig);
    // clamp against the run's own tolerance (already enforced above)
    Real s = 0;
    for (Eigen::Index i = 0; i < evals.size(); ++i)
      if (evals[i] > 0) s -= evals[i] * std::log(evals[i]);
    rec.entropy.push_back(s);
    rec.purity.push_back(purity(rho));
    rec.x_exp.push_back(expectation(model_.x_matrix, rho));
    rec.p_exp.push_back(expectation(model_.p_matrix, rho));
    rec.energy.push_back(
        (model_.energies.cast<Complex>().cwiseProduct(rho.diagonal())).sum().real());
    if (options_.autocorr_reference)
      rec.autocorr.push_back(autocorrelation(rho, *options_.autocorr_reference));
    return true;
  }

 private:
  const MorseModel& model_;
  const EvolveOptions& options_;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver_;
};

TrajectoryRecord evolve_matrix(const DensityMatrix& initial,
                               const TrajectoryConfig& cfg,
                               const MorseModel& model,
                               const DissipatorOperators& diss,
                               const EvolveOptions& options) {
  const int n = model.n_bound;
  const SamplePlan plan = plan_run(cfg, options);
  const FullGenerator gen(model, diss);

  DensityMatrix rho = initial;
  DensityMatrix k1(n, n), k2(n, n), k3(n, n), k4(n, n), stage(n, n);
  ComplexMatrix w1(n, n), w2(n, n), w3(n, n);

  auto rhs = [&](const DensityMatrix& in, DensityMatrix& out) {
    if (cfg.level == Level::full)
      gen.rhs_hermitian(in, out, w1, w2, w3);
    else
      out = secular_rhs(in, diss);
  };

  TrajectoryRecord rec;
  Recorder recorder(model, options);
  std::string abort_reason;
  Real last_good = 0;

  auto handle_sample = [&](long step) {
    const Real t = step * cfg.dt;
    if (!recorder.sample(t, rho, rec, abort_reason))
      throw EvolveAbort(abort_reason, last_good);
    last_good = t;
    for (std::size_t i = 0; i < plan.snapshot_steps.size(); ++i)
      if (plan.snapshot_steps[i] == step) {
        rec.snapshot_times.push_back(t);
        rec.snapshots.push_back(rho);
      }
  };

  handle_sample(0);
  const Real h = cfg.dt;
  for (long step = 1; step <= plan.n_steps; ++step) {
    rhs(rho, k1);
    stage = rho + (0.5 * h) * k1;
    rhs(stage, k2);
    stage = rho + (0.5 * h) * k2;
    rhs(stage, k3);
    stage = rho + h * k3;
    rhs(stage, k4);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (step % cfg.sample_stride == 0 || step == plan.n_steps)
      handle_sample(step);
  }
  return rec;
}

TrajectoryRecord evolve_pauli(const DensityMatrix& initial,
                              const TrajectoryConfig& cfg,
                              const MorseModel& model,
                              const DissipatorOperators& diss,
                              const EvolveOptions& options) {
  const int n = model.n_bound;
  const SamplePlan plan = plan_run(cfg, options);
  const Vector outflow = diss.rates.colwise().sum();

  Vector p = initial.diagonal().real();
  Vector k1(n), k2(n), k3(n), k4(n), stage(n);
  auto rhs = [&](const Vector& in, Vector& out) {
    out = diss.rates * in - outflow.cwiseProduct(in);
  };

  TrajectoryRecord rec;
  std::string abort_reason;
  Real last_good = 0;

  auto sample = [&](long step) {
    const Real t = step * cfg.dt;
    const Real trace_err = std::abs(p.sum() - 1.0);
    if (trace_err > options.trace_tolerance)
      throw EvolveAbort("trace error " + std::to_string(trace_err) +
                            " at t=" + std::to_string(t) +
                            " exceeds tolerance; use a smaller dt",
                        last_good);
    const Real min_eig = p.minCoeff();
    if (min_eig < -options.positivity_tolerance)
      throw EvolveAbort("positivity violation: min population " +
                            std::to_string(min_eig) + " at t=" +
                            std::to_string(t),
                        last_good);
    rec.times.push_back(t);
    rec.herm_drift.push_back(0.0);
    rec.trace_err.push_back(trace_err);
    rec.min_eig.push_back(min_eig);
    Real s = 0;
    for (Eigen::Index i = 0; i < p.size(); ++i)
      if (p[i] > 0) s -= p[i] * std::log(p[i]);
    rec.entropy.push_back(s);
    rec.purity.push_back(p.squaredNorm());
    rec.x_exp.push_back(model.x_matrix.diagonal().dot(p));
    rec.p_exp.push_back(0.0);
    rec.energy.push_back(model.energies.dot(p));
    if (options.autocorr_reference)
      rec.autocorr.push_back(
          options.autocorr_reference->amplitudes.cwiseAbs2().dot(p));
    last_good = t;
    for (std::size_t i = 0; i < plan.snapshot_steps.size(); ++i)
      if (plan.snapshot_steps[i] == step) {
        rec.snapshot_times.push_back(t);
        DensityMatrix snap = DensityMatrix::Zero(n, n);
        snap.diagonal() = p.cast<Complex>();
        rec.snapshots.push_back(snap);
      }
  };

  sample(0);
  const Real h = cfg.dt;
  for (long step = 1; step <= plan.n_steps; ++step) {
    rhs(p, k1);
    stage = p + (0.5 * h) * k1;
    rhs(stage, k2);
    stage = p + (0.5 * h) * k2;
    rhs(stage, k3);
    stage = p + h * k3;
    rhs(stage, k4);
    p += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (step % cfg.sample_stride == 0 || step == plan.n_steps) sample(step);
  }
  return rec;
}

}  // namespace

TrajectoryRecord evolve(const DensityMatrix& initial,
                        const TrajectoryConfig& cfg, const MorseModel& model,
                        const DissipatorOperators& diss,
                        const EvolveOptions& options) {
  validate_config(cfg, model);
  if (initial.rows() != model.n_bound || initial.cols() != model.n_bound)
    throw std::invalid_argument("evolve: initial state dimension mismatch");
  if (std::abs(initial.trace().real() - 1.0) > 1e-10)
    throw std::invalid_argument("evolve: initial state is not normalized");
  if (cfg.level == Level::pauli)
    return evolve_pauli(initial, cfg, model, diss, options);
  return evolve_matrix(initial, cfg, model, diss, options);
}

TrajectoryRecord evolve(const StateVector& initial, const TrajectoryConfig& cfg,
                        const MorseModel& model, const DissipatorOperators& diss,
                        const EvolveOptions& options) {
  return evolve(to_density(initial), cfg, model, diss, options);
}

void write_snapshot_file(const std::string& path,
                         const TrajectoryRecord& record) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open snapshot file: " + path);
  auto put = [&os](Real v) {
    std::uint64_t u;
    std::memcpy(&u, &v, 8);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(u >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
  };
  for (std::size_t i = 0; i < record.snapshots.size(); ++i) {
    put(record.snapshot_times[i]);
    const DensityMatrix& rho = record.snapshots[i];
    for (Eigen::Index r = 0; r < rho.rows(); ++r)
      for (Eigen::Index c = 0; c < rho.cols(); ++c) {
        put(rho(r, c).real());
        put(rho(r, c).imag());
      }
  }
  if (!os) throw std::runtime_error("snapshot write failed: " + path);
}

}  // namespace morsedec
