#include "morsedec/wigner.hpp"

#include "morsedec/quadrature.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <thread>
#include <vector>

namespace morsedec {

namespace {

Real window_mass(const DensityMatrix& rho, const MorseModel& model,
                 const EigenfunctionEvaluator& eval,
                 const PhaseSpaceGridSpec& spec) {
  const QuadratureGrid grid = build_quadrature(model.quad_spec);
  const int n = model.n_bound;
  Vector phi(n);
  Real mass = 0;
  for (Eigen::Index i = 0; i < grid.nodes.size(); ++i) {
    const Real x = grid.nodes[i];
    if (x < spec.x_min || x > spec.x_max) continue;
    eval.eval_all(x, phi);
    const Complex dens = phi.cast<Complex>().dot(rho * phi.cast<Complex>());
    mass += grid.weights[i] * dens.real();
  }
  return mass;
}

}  // namespace

PhaseSpaceGrid wigner_transform(const DensityMatrix& rho,
                                const MorseModel& model,
                                const PhaseSpaceGridSpec& spec, int n_threads) {
  if (rho.rows() != model.n_bound || rho.cols() != model.n_bound)
    throw std::invalid_argument("wigner_transform: dimension mismatch");
  if (spec.nx < 2 || spec.np < 2 || spec.n_u < 16)
    throw std::domain_error("wigner_transform: degenerate grid spec");

  const EigenfunctionEvaluator eval(model.s);
  const Real mass = window_mass(rho, model, eval, spec);
  if (mass < spec.min_window_mass)
    throw std::domain_error(
        "wigner window covers only " + std::to_string(mass) +
        " of the position density (need " +
        std::to_string(spec.min_window_mass) + "); widen the window");

  const Real supp_lo = std::max(model.quad_spec.x_min,
                                spec.x_min - spec.support_pad);
  const Real supp_hi = std::min(model.quad_spec.x_max,
                                spec.x_max + spec.support_pad);
  const Real u_max = supp_hi - supp_lo;
  const Real du = 2.0 * u_max / spec.n_u;

  PhaseSpaceGrid out;
  out.spec = spec;
  const Real dx = out.dx();
  const Real dp = out.dp();

  const int n = model.n_bound;
  const int nu = spec.n_u;

  // Chord values g_j(u) = <x_j - u/2| rho |x_j + u/2>, one column per x.
  Matrix g_re = Matrix::Zero(nu, spec.nx);
  Matrix g_im = Matrix::Zero(nu, spec.nx);

  auto fill_columns = [&](int j_begin, int j_end) {
    Matrix left(nu, n), right(nu, n);
    ComplexMatrix m(nu, n);
    Vector phi(n);
    for (int j = j_begin; j < j_end; ++j) {
      const Real x = spec.x_min + (j + 0.5) * dx;
      for (int l = 0; l < nu; ++l) {
        const Real u = -u_max + (l + 0.5) * du;
        const Real xl = x - 0.5 * u;
        const Real xr = x + 0.5 * u;
        if (xl < supp_lo || xl > supp_hi || xr < supp_lo || xr > supp_hi) {
          left.row(l).setZero();
          right.row(l).setZero();
          continue;
        }
        eval.eval_all(xl, phi);
        left.row(l) = phi;
        eval.eval_all(xr, phi);
        right.row(l) = phi;
      }
      m.noalias() = left * rho;
      g_re.col(j) = (m.real().cwiseProduct(right)).rowwise().sum();
      g_im.col(j) = (m.imag().cwiseProduct(right)).rowwise().sum();
    }
  };

  const int workers = std::max(1, n_threads);
  if (workers == 1) {
    fill_columns(0, spec.nx);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (spec.nx + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const int b = w * chunk;
      const int e = std::min(spec.nx, b + chunk);
      if (b < e) pool.emplace_back(fill_columns, b, e);
    }
    for (auto& t : pool) t.join();
  }

  // Fourier kernel as explicit matrices: W = Re(E g), E(k,l) = e^{i u_l p_k}.
  Matrix e_re(spec.np, nu), e_im(spec.np, nu);
  for (int k = 0; k < spec.np; ++k) {
    const Real p = spec.p_min + (k + 0.5) * dp;
    for (int l = 0; l < nu; ++l) {
      const Real u = -u_max + (l + 0.5) * du;
      e_re(k, l) = std::cos(u * p);
      e_im(k, l) = std::sin(u * p);
    }
  }
  const Real scale = du / (2.0 * M_PI);
  out.values.noalias() = scale * (e_re * g_re - e_im * g_im);
  const Matrix w_imag = scale * (e_re * g_im + e_im * g_re);
  const Real residual = w_imag.cwiseAbs().maxCoeff();
  if (residual >= 1e-8)
    throw NumericalError("wigner transform imaginary residue " +
                         std::to_string(residual));
  return out;
}

Real negativity(const PhaseSpaceGrid& grid) {
  return grid.values.cwiseMin(0.0).cwiseAbs().sum() * grid.dx() * grid.dp();
}

Real grid_integral(const PhaseSpaceGrid& grid) {
  return grid.values.sum() * grid.dx() * grid.dp();
}

Real purity_from_wigner(const PhaseSpaceGrid& grid) {
  return 2.0 * M_PI * grid.values.squaredNorm() * grid.dx() * grid.dp();
}

Vector position_marginal(const PhaseSpaceGrid& grid) {
  return grid.values.colwise().sum().transpose() * grid.dp();
}

Real mean_x(const PhaseSpaceGrid& grid) {
  Real acc = 0;
  const Vector marg = position_marginal(grid);
  for (int j = 0; j < grid.spec.nx; ++j) acc += grid.x_at(j) * marg[j];
  return acc * grid.dx();
}

Real mean_p(const PhaseSpaceGrid& grid) {
  const Vector marg = grid.values.rowwise().sum() * grid.dx();
  Real acc = 0;
  for (int k = 0; k < grid.spec.np; ++k) acc += grid.p_at(k) * marg[k];
  return acc * grid.dp();
}

void write_pgm16(const std::string& path, const PhaseSpaceGrid& grid,
                 Real w_min, Real w_max) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open pgm file: " + path);
  os << "P5\n" << grid.spec.nx << " " << grid.spec.np << "\n65535\n";
  const Real span = (w_max > w_min) ? (w_max - w_min) : 1.0;
  std::vector<unsigned char> row(2 * grid.spec.nx);
  for (int k = grid.spec.np - 1; k >= 0; --k) {  // image rows: p_max at top
    for (int j = 0; j < grid.spec.nx; ++j) {
      Real v = (grid.values(k, j) - w_min) / span;
      v = std::min(1.0, std::max(0.0, v));
      const auto pix = static_cast<std::uint16_t>(std::lround(v * 65535.0));
      row[2 * j] = static_cast<unsigned char>(pix >> 8);  // big-endian
      row[2 * j + 1] = static_cast<unsigned char>(pix & 0xff);
    }
    os.write(reinterpret_cast<const char*>(row.data()), row.size());
  }
  if (!os) throw std::runtime_error("pgm write failed: " + path);
}

}  // namespace morsedec
