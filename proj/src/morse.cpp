#include "morsedec/morse.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace morsedec {

Real shape_param_from_physical(Real mass, Real dissociation_energy,
                               Real range_param, Real hbar) {
  if (!(mass > 0) || !(dissociation_energy > 0) || !(range_param > 0) ||
      !(hbar > 0))
    throw std::domain_error("shape_param_from_physical: inputs must be positive");
  return std::sqrt(2.0 * mass * dissociation_energy) / (hbar * range_param) - 0.5;
}

int bound_state_count(Real s) {
  if (!(s > 0)) throw std::domain_error("bound_state_count: s must be positive");
  return static_cast<int>(std::floor(s)) + 1;
}

Vector bound_energies(Real s) {
  const int n = bound_state_count(s);
  Vector e(n);
  for (int m = 0; m < n; ++m) e[m] = -(s - m) * (s - m);
  return e;
}

Real classical_frequency(Real s) {
  if (!(s > 0)) throw std::domain_error("classical_frequency: s must be positive");
  return 2.0 * (s + 0.5);
}

Real small_oscillation_period(Real s) { return 2.0 * M_PI / classical_frequency(s); }

EigenfunctionEvaluator::EigenfunctionEvaluator(Real s)
    : s_(s), n_bound_(bound_state_count(s)), y_scale_(2.0 * s + 1.0) {
  beta_.resize(n_bound_);
  ln_norm_.resize(n_bound_);
  for (int n = 0; n < n_bound_; ++n) {
    const Real beta = s - n;
    beta_[n] = beta;
    ln_norm_[n] = 0.5 * (std::lgamma(n + 1.0) + std::log(2.0 * beta) -
                         std::lgamma(2.0 * s - n + 1.0));
  }
}

namespace {

// Generalized Laguerre L_n^{(alpha)}(y) by the standard three-term recurrence.
inline Real laguerre(int n, Real alpha, Real y) {
  if (n == 0) return 1.0;
  Real lm1 = 1.0;
  Real l = 1.0 + alpha - y;
  for (int k = 2; k <= n; ++k) {
    const Real lp = ((2.0 * k - 1.0 + alpha - y) * l - (k - 1.0 + alpha) * lm1) / k;
    lm1 = l;
    l = lp;
  }
  return l;
}

inline Real assemble(Real ln_norm, Real beta, Real ln_y, Real y, Real lag) {
  if (lag == 0.0) return 0.0;
  const Real mag = ln_norm + beta * ln_y - 0.5 * y + std::log(std::abs(lag));
  return std::copysign(std::exp(mag), lag);
}

}  // namespace

Real EigenfunctionEvaluator::value(int n, Real x) const {
  if (n < 0 || n >= n_bound_)
    throw std::out_of_range("eigenfunction index out of range");
  const Real y = y_scale_ * std::exp(-x);
  const Real ln_y = std::log(y_scale_) - x;
  return assemble(ln_norm_[n], beta_[n], ln_y, y, laguerre(n, 2.0 * beta_[n], y));
}

void EigenfunctionEvaluator::value_and_slope(int n, Real x, Real& value,
                                             Real& slope) const {
  if (n < 0 || n >= n_bound_)
    throw std::out_of_range("eigenfunction index out of range");
  const Real beta = beta_[n];
  const Real y = y_scale_ * std::exp(-x);
  const Real ln_y = std::log(y_scale_) - x;
  value = assemble(ln_norm_[n], beta, ln_y, y, laguerre(n, 2.0 * beta, y));
  // d/dx phi_n = (y/2 - beta) phi_n + N y^{beta+1} e^{-y/2} L_{n-1}^{(2beta+1)},
  // using d/dy L_n^{(a)} = -L_{n-1}^{(a+1)}.
  slope = (0.5 * y - beta) * value;
  if (n >= 1) {
    const Real lag1 = laguerre(n - 1, 2.0 * beta + 1.0, y);
    slope += assemble(ln_norm_[n], beta + 1.0, ln_y, y, lag1);
  }
}

void EigenfunctionEvaluator::eval_all(Real x, Eigen::Ref<Vector> out) const {
  const Real y = y_scale_ * std::exp(-x);
  const Real ln_y = std::log(y_scale_) - x;
  for (int n = 0; n < n_bound_; ++n)
    out[n] = assemble(ln_norm_[n], beta_[n], ln_y, y,
                      laguerre(n, 2.0 * beta_[n], y));
}

Real eval_eigenfunction(Real s, int n, Real x) {
  return EigenfunctionEvaluator(s).value(n, x);
}

namespace {

Matrix position_matrix_on_grid(const EigenfunctionEvaluator& eval,
                               const QuadratureGrid& grid) {
  const int n = eval.n_bound();
  const int q = static_cast<int>(grid.nodes.size());
  Matrix phi(n, q);
  Vector col(n);
  for (int j = 0; j < q; ++j) {
    eval.eval_all(grid.nodes[j], col);
    phi.col(j) = col;
  }
  const Vector wx = grid.weights.cwiseProduct(grid.nodes);
  return phi * wx.asDiagonal() * phi.transpose();
}

}  // namespace

MorseModel build_model(Real s, const QuadratureSpec& spec) {
  MorseModel model;
  model.s = s;
  model.n_bound = bound_state_count(s);
  model.energies = bound_energies(s);
  model.quad_spec = default_quadrature_for(s, spec);

  const EigenfunctionEvaluator eval(s);
  const QuadratureGrid grid = build_quadrature(model.quad_spec);
  model.x_matrix = position_matrix_on_grid(eval, grid);

  QuadratureSpec fine = model.quad_spec;
  fine.points_per_unit *= 2;
  const Matrix x_fine = position_matrix_on_grid(eval, build_quadrature(fine));
  const Real disagreement = (x_fine - model.x_matrix).cwiseAbs().maxCoeff();
  if (disagreement > 1e-8)
    throw NumericalError(
        "position matrix quadrature did not converge: doubling the node "
        "density moved an entry by " + std::to_string(disagreement));

  model.p_matrix.resize(model.n_bound, model.n_bound);
  for (int m = 0; m < model.n_bound; ++m)
    for (int n2 = 0; n2 < model.n_bound; ++n2)
      model.p_matrix(m, n2) = Complex(0.0, 0.5) *
                              (model.energies[m] - model.energies[n2]) *
                              model.x_matrix(m, n2);
  return model;
}

StateVector coherent_state(const MorseModel& model, Real x0, Real p0,
                           Real threshold) {
  const EigenfunctionEvaluator eval(model.s);
  const QuadratureGrid grid = build_quadrature(model.quad_spec);
  const int q = static_cast<int>(grid.nodes.size());
  const int n = model.n_bound;

  ComplexVector c = ComplexVector::Zero(n);
  Vector col(n);
  for (int j = 0; j < q; ++j) {
    const Real x = grid.nodes[j];
    const Real packet = eval.value(0, x - x0);
    if (packet == 0.0) continue;
    const Complex f = grid.weights[j] * packet *
                      std::exp(Complex(0.0, p0 * x));
    eval.eval_all(x, col);
    c += f * col.cast<Complex>();
  }

  const Real bound_weight = c.squaredNorm();
  const Real deficit = std::max(0.0, 1.0 - bound_weight);
  if (deficit >= threshold)
    throw DissociationError(
        "coherent state is not representable in the bound subspace "
        "(norm deficit " + std::to_string(deficit) + ")", deficit);

  StateVector state;
  state.amplitudes = c / std::sqrt(bound_weight);
  state.norm_deficit = deficit;
  return state;
}

DensityMatrix to_density(const StateVector& state) {
  return state.amplitudes * state.amplitudes.adjoint();
}

namespace {

constexpr char kMagic[8] = {'M', 'O', 'R', 'S', 'E', 'M', 'D', 'L'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 4);
}

void put_f64(std::ostream& os, Real v) {
  std::uint64_t u;
  std::memcpy(&u, &v, 8);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(u >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

Real get_f64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t u = 0;
  for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  Real v;
  std::memcpy(&v, &u, 8);
  return v;
}

}  // namespace

void save_model(const MorseModel& model, const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open model cache for writing: " + path);
  os.write(kMagic, 8);
  put_u32(os, kVersion);
  put_u32(os, static_cast<std::uint32_t>(model.n_bound));
  put_f64(os, model.s);
  put_f64(os, model.quad_spec.x_min);
  put_f64(os, model.quad_spec.x_max);
  put_u32(os, static_cast<std::uint32_t>(model.quad_spec.points_per_unit));
  for (int m = 0; m < model.n_bound; ++m)
    for (int n = 0; n < model.n_bound; ++n) put_f64(os, model.x_matrix(m, n));
  if (!os) throw std::runtime_error("model cache write failed: " + path);
}

MorseModel load_model(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open model cache: " + path);
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kMagic, 8) != 0)
    throw std::runtime_error("not a model cache file: " + path);
  if (get_u32(is) != kVersion)
    throw std::runtime_error("unsupported model cache version: " + path);

  MorseModel model;
  model.n_bound = static_cast<int>(get_u32(is));
  model.s = get_f64(is);
  model.quad_spec.x_min = get_f64(is);
  model.quad_spec.x_max = get_f64(is);
  model.quad_spec.points_per_unit = static_cast<int>(get_u32(is));
  if (model.n_bound != bound_state_count(model.s))
    throw std::runtime_error("model cache is inconsistent: " + path);
  model.energies = bound_energies(model.s);

  model.x_matrix.resize(model.n_bound, model.n_bound);
  for (int m = 0; m < model.n_bound; ++m)
    for (int n = 0; n < model.n_bound; ++n) model.x_matrix(m, n) = get_f64(is);
  if (!is) throw std::runtime_error("model cache truncated: " + path);

  model.p_matrix.resize(model.n_bound, model.n_bound);
  for (int m = 0; m < model.n_bound; ++m)
    for (int n = 0; n < model.n_bound; ++n)
      model.p_matrix(m, n) = Complex(0.0, 0.5) *
                             (model.energies[m] - model.energies[n]) *
                             model.x_matrix(m, n);
  return model;
}

}  // namespace morsedec
