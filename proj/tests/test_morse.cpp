#include "morsedec/morse.hpp"
#include "morsedec/observables.hpp"

#include "support/grid_oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

using namespace morsedec;

namespace {

const MorseModel& no_model() {
  static const MorseModel model = build_model(54.54);
  return model;
}

}  // namespace

TEST_CASE("shape parameter from molecular constants") {
  // sqrt(2 m D)/(hbar alpha) = 55.04 for the NO parameters used throughout
  CHECK(shape_param_from_physical(0.5, 55.04 * 55.04, 1.0, 1.0) ==
        doctest::Approx(54.54).epsilon(1e-12));
  CHECK(shape_param_from_physical(0.5, 0.25, 1.0, 1.0) ==
        doctest::Approx(0.0).epsilon(1e-12));

  const Real s1 = shape_param_from_physical(1.3, 7.7, 2.1, 1.0);
  const Real s2 = shape_param_from_physical(1.3, 7.7, 2.1, 2.0);
  CHECK(s2 + 0.5 == doctest::Approx(0.5 * (s1 + 0.5)).epsilon(1e-12));

  CHECK_THROWS_AS(shape_param_from_physical(-1, 1, 1, 1), std::domain_error);
  CHECK_THROWS_AS(shape_param_from_physical(1, 0, 1, 1), std::domain_error);
  CHECK_THROWS_AS(shape_param_from_physical(1, 1, -2, 1), std::domain_error);
  CHECK_THROWS_AS(shape_param_from_physical(1, 1, 1, 0), std::domain_error);
}

TEST_CASE("bound spectrum") {
  const Vector e = bound_energies(54.54);
  REQUIRE(e.size() == 55);
  CHECK(e[0] == doctest::Approx(-2974.6116).epsilon(1e-12));
  CHECK(e[1] == doctest::Approx(-2866.5316).epsilon(1e-12));
  CHECK(e[1] - e[0] == doctest::Approx(108.08).epsilon(1e-12));
  for (int m = 0; m + 1 < e.size(); ++m) {
    CHECK(e[m] < e[m + 1]);
    CHECK(e[m + 1] < 0);
  }

  const Vector e3 = bound_energies(2.5);
  REQUIRE(e3.size() == 3);
  CHECK(e3[0] == doctest::Approx(-6.25));
  CHECK(e3[1] == doctest::Approx(-2.25));
  CHECK(e3[2] == doctest::Approx(-0.25));

  CHECK_THROWS_AS(bound_energies(0.0), std::domain_error);
  CHECK_THROWS_AS(bound_energies(-3.0), std::domain_error);
}

TEST_CASE("small oscillation period") {
  CHECK(classical_frequency(54.54) == doctest::Approx(110.08).epsilon(1e-12));
  CHECK(small_oscillation_period(54.54) == doctest::Approx(0.05708).epsilon(1e-4));
  // classical frequency sits exactly 2 above the 0-1 spacing
  const Vector e = bound_energies(54.54);
  CHECK(classical_frequency(54.54) - (e[1] - e[0]) == doctest::Approx(2.0));
  // 1/s asymptotics
  for (Real s : {10.0, 100.0, 1000.0})
    CHECK(small_oscillation_period(s) * (2.0 * s + 1.0) ==
          doctest::Approx(2.0 * M_PI));
}

TEST_CASE("eigenfunctions are orthonormal under the module quadrature") {
  const MorseModel& model = no_model();
  const EigenfunctionEvaluator eval(model.s);
  const QuadratureGrid grid = build_quadrature(model.quad_spec);

  Matrix phi(model.n_bound, grid.nodes.size());
  Vector col(model.n_bound);
  for (Eigen::Index q = 0; q < grid.nodes.size(); ++q) {
    eval.eval_all(grid.nodes[q], col);
    phi.col(q) = col;
  }
  const Matrix gram = phi * grid.weights.asDiagonal() * phi.transpose();
  const Matrix err = gram - Matrix::Identity(model.n_bound, model.n_bound);
  CHECK(err.cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("eigenfunction node counts (Sturm oscillation)") {
  const EigenfunctionEvaluator eval(54.54);
  auto sign_changes = [&](int n) {
    int changes = 0;
    Real prev = 0;
    for (int i = 0; i <= 6000; ++i) {
      const Real x = -1.0 + 6.0 * i / 6000.0;
      const Real v = eval.value(n, x);
      if (std::abs(v) < 1e-12) continue;
      if (prev != 0 && std::signbit(v) != std::signbit(prev)) ++changes;
      prev = v;
    }
    return changes;
  };
  CHECK(sign_changes(0) == 0);
  CHECK(sign_changes(5) == 5);
}

TEST_CASE("quadrature of P^2 + V reproduces the analytic energies") {
  const MorseModel& model = no_model();
  const EigenfunctionEvaluator eval(model.s);
  const QuadratureGrid grid = build_quadrature(model.quad_spec);
  const Real k = model.s + 0.5;

  for (int n = 0; n < model.n_bound; ++n) {
    Real kinetic = 0, potential = 0;
    for (Eigen::Index q = 0; q < grid.nodes.size(); ++q) {
      const Real x = grid.nodes[q];
      Real value, slope;
      eval.value_and_slope(n, x, value, slope);
      const Real w = std::exp(-x);
      kinetic += grid.weights[q] * slope * slope;
      potential += grid.weights[q] * k * k * (w * w - 2.0 * w) * value * value;
    }
    const Real e_quad = kinetic + potential;
    CHECK(std::abs(e_quad - model.energies[n]) <=
          1e-6 * std::abs(model.energies[n]));
  }
}

TEST_CASE("spectrum matches the independent grid oracle") {
  const Vector e = bound_energies(54.54);
  for (int m = 0; m < 40; m += (m < 6 ? 1 : 5)) {
    const testing::GridEigenpair pair = testing::numerov_eigenpair(54.54, e[m], {});
    CHECK(std::abs(pair.eigenvalue - e[m]) <= 1e-6 * std::abs(e[m]));
  }
}

TEST_CASE("position matrix: symmetry, anharmonic stretch, oracle agreement") {
  const MorseModel& model = no_model();
  const Matrix& x = model.x_matrix;

  CHECK((x - x.transpose()).cwiseAbs().maxCoeff() < 1e-10);
  for (int n = 0; n + 1 < model.n_bound; ++n) CHECK(x(n, n) < x(n + 1, n + 1));
  CHECK(x(0, 0) > 0);  // mean displacement of the ground state is outward

  // entry-wise against Numerov eigenvectors for the low block
  std::vector<testing::GridEigenpair> pairs;
  for (int m = 0; m < 12; ++m)
    pairs.push_back(testing::numerov_eigenpair(54.54, model.energies[m], {}));
  for (int m = 0; m < 12; ++m)
    for (int n = m; n < 12; ++n) {
      const Real oracle = testing::grid_x_element(pairs[m], pairs[n]);
      CHECK(std::abs(x(m, n) - oracle) < 1e-6);
    }
}

TEST_CASE("quadrature non-convergence raises a numerical error") {
  QuadratureSpec coarse;
  coarse.points_per_unit = 4;
  CHECK_THROWS_AS(build_model(54.54, coarse), NumericalError);
}

TEST_CASE("momentum matrix: structure and derivative-quadrature oracle") {
  const MorseModel& model = no_model();
  const ComplexMatrix& p = model.p_matrix;

  CHECK(p.diagonal().cwiseAbs().maxCoeff() == 0.0);
  CHECK((p - p.adjoint()).cwiseAbs().maxCoeff() < 1e-12);

  const EigenfunctionEvaluator eval(model.s);
  const QuadratureGrid grid = build_quadrature(model.quad_spec);
  for (int m = 0; m < 40; m += 7)
    for (int n = 0; n < 40; n += 5) {
      Real acc = 0;
      for (Eigen::Index q = 0; q < grid.nodes.size(); ++q) {
        Real value_n, slope_n;
        eval.value_and_slope(n, grid.nodes[q], value_n, slope_n);
        acc += grid.weights[q] * eval.value(m, grid.nodes[q]) * slope_n;
      }
      const Complex oracle(0.0, -acc);  // -i d/dx
      CHECK(std::abs(p(m, n) - oracle) < 1e-6);
    }
}

TEST_CASE("operator consistency: commutator identity vs derivative quadrature") {
  // <m|P|n> = (i/2)(E_m - E_n) <m|X|n> holds by construction; check the
  // underlying X against -i d/dx through integration by parts instead:
  // Int phi_m phi_n' = -Int phi_m' phi_n for decaying states.
  const MorseModel& model = no_model();
  const EigenfunctionEvaluator eval(model.s);
  const QuadratureGrid grid = build_quadrature(model.quad_spec);
  for (int m = 3; m < 40; m += 9)
    for (int n = 1; n < 40; n += 11) {
      Real left = 0, right = 0;
      for (Eigen::Index q = 0; q < grid.nodes.size(); ++q) {
        Real vm, sm, vn, sn;
        eval.value_and_slope(m, grid.nodes[q], vm, sm);
        eval.value_and_slope(n, grid.nodes[q], vn, sn);
        left += grid.weights[q] * vm * sn;
        right -= grid.weights[q] * sm * vn;
      }
      CHECK(std::abs(left - right) < 1e-8);
    }
}

TEST_CASE("coherent states") {
  const MorseModel& model = no_model();

  SUBCASE("identity case") {
    const StateVector st = coherent_state(model, 0.0, 0.0);
    CHECK(st.norm_deficit < 1e-12);
    CHECK(std::abs(st.amplitudes[0]) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(st.amplitudes.tail(model.n_bound - 1).cwiseAbs().maxCoeff() < 1e-7);
  }

  SUBCASE("normalization") {
    for (Real x0 : {0.5, 1.0, 2.0}) {
      const StateVector st = coherent_state(model, x0, 0.0);
      CHECK(std::abs(st.amplitudes.squaredNorm() - 1.0) < 1e-12);
    }
  }

  SUBCASE("displaced mean position") {
    const StateVector ground = coherent_state(model, 0.0, 0.0);
    const StateVector st = coherent_state(model, 0.5, 0.0);
    const Real x_g = expectation(model.x_matrix, to_density(ground));
    const Real x_s = expectation(model.x_matrix, to_density(st));
    CHECK(std::abs((x_s - x_g) - 0.5) < 0.05 * 0.5);
  }

  SUBCASE("boosted mean momentum") {
    const StateVector st = coherent_state(model, 0.5, 3.0);
    CHECK(expectation(model.p_matrix, to_density(st)) ==
          doctest::Approx(3.0).epsilon(0.02));
  }

  SUBCASE("x0 = 2 stays inside the bound subspace") {
    const StateVector st = coherent_state(model, 2.0, 0.0);
    CHECK(st.norm_deficit < 1e-3);
    CHECK(st.norm_deficit > 0);
  }

  SUBCASE("dissociation error") {
    CHECK_THROWS_AS(coherent_state(model, 2.0, 0.0, 1e-12), DissociationError);
  }
}

TEST_CASE("completeness: reprojection reproduces the amplitudes") {
  const MorseModel& model = no_model();
  const StateVector st = coherent_state(model, 0.5, 1.0);
  const EigenfunctionEvaluator eval(model.s);
  const QuadratureGrid grid = build_quadrature(model.quad_spec);

  ComplexVector back = ComplexVector::Zero(model.n_bound);
  Vector col(model.n_bound);
  for (Eigen::Index q = 0; q < grid.nodes.size(); ++q) {
    eval.eval_all(grid.nodes[q], col);
    const Complex psi = col.cast<Complex>().transpose() * st.amplitudes;
    back += grid.weights[q] * psi * col.cast<Complex>();
  }
  CHECK((back - st.amplitudes).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("partial Thomas-Reiche-Kuhn weight over the bound states") {
  const MorseModel& model = no_model();
  Real sum = 0;
  for (int n = 1; n < model.n_bound; ++n)
    sum += (model.energies[n] - model.energies[0]) *
           model.x_matrix(0, n) * model.x_matrix(0, n);
  CHECK(sum > 0);
  CHECK(sum < 1.0);  // the full sum rule including the continuum is 1
}

TEST_CASE("model cache round trip") {
  const MorseModel& model = no_model();
  const std::string path =
      (std::filesystem::temp_directory_path() / "morsedec_model_cache.bin").string();
  save_model(model, path);
  const MorseModel loaded = load_model(path);
  CHECK(loaded.n_bound == model.n_bound);
  CHECK(loaded.s == model.s);
  CHECK((loaded.x_matrix - model.x_matrix).cwiseAbs().maxCoeff() == 0.0);
  CHECK((loaded.energies - model.energies).cwiseAbs().maxCoeff() == 0.0);
  CHECK((loaded.p_matrix - model.p_matrix).cwiseAbs().maxCoeff() == 0.0);
  std::filesystem::remove(path);

  CHECK_THROWS(load_model("/nonexistent/morsedec.bin"));
}

TEST_CASE("eigenfunction index bounds") {
  const EigenfunctionEvaluator eval(2.5);
  CHECK_THROWS_AS(eval.value(3, 0.0), std::out_of_range);
  CHECK_THROWS_AS(eval.value(-1, 0.0), std::out_of_range);
}
