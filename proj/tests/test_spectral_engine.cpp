// Copyright 2026 The tfpauli Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "oracles.hpp"
#include "tfpauli/errors.hpp"
#include "tfpauli/field_ops.hpp"
#include "tfpauli/operators.hpp"
#include "tfpauli/potentials.hpp"
#include "tfpauli/spectral.hpp"
#include "tfpauli/tf_solver.hpp"

using namespace tfpauli;
using oracle::kPi;

namespace {

ScalarField bump(GridPtr g, double depth, double radius) {
  return make_potential({"smooth-bump", {{"depth", depth}, {"radius", radius}}}, g);
}

Eigen::VectorXd all_eigenvalues(const OperatorHandle& op) {
  if (op.is_real()) {
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(op.dense_real(),
                                                          Eigen::EigenvaluesOnly)
        .eigenvalues();
  }
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(op.dense_complex(),
                                                         Eigen::EigenvaluesOnly)
      .eigenvalues();
}

Eigen::MatrixXcd random_block(Eigen::Index rows, Eigen::Index cols,
                              oracle::Gen& gen) {
  Eigen::MatrixXcd x(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      x(r, c) = cplx(gen.uniform(-1, 1), gen.uniform(-1, 1));
    }
  }
  return x;
}

VectorPotential plus(const VectorPotential& a, const VectorPotential& b) {
  return axpy(a, 1.0, b);
}

}  // namespace

TEST_CASE("grid spacing, masking and indexing") {
  const GridPtr g = BoxGrid::cube(2.0, 11);
  CHECK(g->spacing()[0] == doctest::Approx(0.2));
  CHECK(g->active_count() == 9u * 9u * 9u);
  CHECK_FALSE(g->in_domain(g->index(0, 4, 4)));
  CHECK_FALSE(g->in_domain(g->index(4, 10, 4)));
  CHECK(g->in_domain(g->index(1, 1, 1)));
  const auto c = g->coords(g->index(3, 5, 7));
  CHECK(c == std::array<int, 3>{3, 5, 7});
  CHECK(g->wrap_neighbor(g->index(10, 0, 0), 0, 1) == g->index(0, 0, 0));
  CHECK_THROWS_AS(BoxGrid(Vec3{1, 1, 1}, {9, 9, 9},
                          [](const Vec3&) { return false; }),
                  InputError);
}

TEST_CASE("field energy of A = (0, 0, 2x) on the open unit box is 4") {
  const GridPtr g = BoxGrid::cube(1.0, 24);
  const auto a = VectorPotential::sample(
      g, [](const Vec3& p) { return Vec3{0, 0, 2.0 * p[0]}; }, FieldBoundary::open);
  const FieldEnergy e = field_energy(a);
  CHECK(e.grad_energy == doctest::Approx(4.0).epsilon(1e-2));
  CHECK(e.b_energy == doctest::Approx(4.0).epsilon(1e-2));
}

TEST_CASE("zero field has zero energy and no divergence") {
  const GridPtr g = BoxGrid::cube(1.0, 12);
  const auto a = VectorPotential::zeros(g);
  CHECK(field_energy(a).b_energy == 0.0);
  CHECK(field_energy(a).grad_energy == 0.0);
  CHECK(max_divergence(a) == 0.0);
}

TEST_CASE("boundary field fraction separates confined and box-filling fields") {
  const int n = 16;
  const GridPtr g = BoxGrid::cube(1.0, n);
  CHECK(boundary_field_fraction(VectorPotential::zeros(g)) == 0.0);

  const auto vortex = VectorPotential::sample(
      g,
      [](const Vec3& p) {
        const double dx = p[0] - 0.5, dy = p[1] - 0.5, dz = p[2] - 0.5;
        const double w = std::exp(-(dx * dx + dy * dy + dz * dz) / 0.005);
        return Vec3{-dy * w, dx * w, 0.0};
      },
      FieldBoundary::periodic);
  CHECK(boundary_field_fraction(vortex) < 1e-8);

  // A_z depends on x alone, so only B_y survives and depends on i alone.
  const double dx = g->spacing()[0];
  const double k = 2.0 * kPi / (n * dx);
  const auto wave = VectorPotential::sample(
      g, [k](const Vec3& p) { return Vec3{0.0, 0.0, std::sin(k * p[0])}; },
      FieldBoundary::periodic);
  double edge = 0.0, total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double b = (std::sin(k * ((i + 1) % n) * dx) - std::sin(k * i * dx)) / dx;
    for (int j = 0; j < n; ++j) {
      for (int l = 0; l < n; ++l) {
        total += b * b;
        const bool outer = i == 0 || i + 1 >= n - 1 || j == 0 || j >= n - 1 ||
                           l == 0 || l + 1 >= n - 1;
        if (outer) edge += b * b;
      }
    }
  }
  CHECK(boundary_field_fraction(wave) == doctest::Approx(edge / total).epsilon(1e-12));
}

TEST_CASE("grad and curl energies agree on divergence-free periodic fields") {
  const GridPtr g = BoxGrid::cube(1.0, 32);
  oracle::Gen gen(7);
  for (int trial = 0; trial < 8; ++trial) {
    const auto a = random_band_limited_field(g, gen.integer(1, 5),
                                             gen.uniform(0.1, 3.0), gen.next());
    const FieldEnergy e = field_energy(a);
    CHECK(std::abs(e.grad_energy - e.b_energy) <= 1e-10 * e.b_energy);
    CHECK(max_divergence(a) <= 1e-10 * a.max_abs() / g->spacing()[0]);
  }
}

TEST_CASE("Helmholtz projection is an idempotent map onto div-free fields") {
  const GridPtr g = BoxGrid::cube(1.0, 20);
  oracle::Gen gen(11);
  for (int trial = 0; trial < 5; ++trial) {
    VectorPotential a = VectorPotential::zeros(g);
    for (auto& comp : a.components) {
      for (auto& v : comp) v = gen.uniform(-1, 1);
    }
    const auto p = helmholtz_project(a);
    const auto pp = helmholtz_project(p);
    CHECK(axpy(pp, -1.0, p).max_abs() <= 1e-12 * p.max_abs());
    CHECK(max_divergence(p) <= 1e-10 * a.max_abs() / g->spacing()[0]);
    // Gradients are annihilated.
    const auto phi = random_smooth_scalar(*g, 3, 1.0, gen.next());
    CHECK(helmholtz_project(grid_gradient(g, phi)).max_abs() <= 1e-12);
    // Orthogonal projection: <a - Pa, Pa> = 0.
    CHECK(std::abs(inner_product(axpy(a, -1.0, p), p)) <=
          1e-12 * inner_product(a, a));
  }
}

TEST_CASE("curl_nodes_adjoint is the adjoint of curl_nodes") {
  const GridPtr g = BoxGrid::cube(1.0, 10);
  oracle::Gen gen(3);
  VectorPotential a = VectorPotential::zeros(g);
  for (auto& comp : a.components) {
    for (auto& v : comp) v = gen.uniform(-1, 1);
  }
  FaceField b;
  for (auto& comp : b) {
    comp.resize(g->node_count());
    for (auto& v : comp) v = gen.uniform(-1, 1);
  }
  const FaceField ca = curl_nodes(a);
  double lhs = 0.0;
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < g->node_count(); ++i) lhs += ca[c][i] * b[c][i];
  }
  const auto adj = curl_nodes_adjoint(g, b);
  const double rhs = inner_product(a, adj) / g->cell_volume();
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("b_energy_gradient matches finite differences") {
  const GridPtr g = BoxGrid::cube(1.0, 16);
  const auto a = random_band_limited_field(g, 3, 1.0, 5);
  const auto d = random_band_limited_field(g, 4, 1.0, 6);
  const double t = 1e-5;
  const double fd = (field_energy(axpy(a, t, d)).b_energy -
                     field_energy(axpy(a, -t, d)).b_energy) /
                    (2 * t);
  CHECK(inner_product(b_energy_gradient(a), d) ==
        doctest::Approx(fd).epsilon(1e-7));
}

TEST_CASE("inverse_field_hessian inverts 2 lambda curl curl on div-free fields") {
  const GridPtr g = BoxGrid::cube(1.0, 16);
  const auto a = random_band_limited_field(g, 3, 1.0, 9);
  const double lambda = 2.5;
  VectorPotential hess = b_energy_gradient(a);
  for (auto& comp : hess.components) {
    for (auto& v : comp) v *= lambda;
  }
  const auto back = inverse_field_hessian(hess, lambda);
  CHECK(axpy(back, -1.0, a).max_abs() <= 1e-10);
}

TEST_CASE("operators are Hermitian") {
  const GridPtr g = BoxGrid::cube(1.0, 10);
  const auto v = bump(g, 10.0, 0.4);
  const auto a = random_band_limited_field(g, 2, 2.0, 1);
  oracle::Gen gen(21);
  for (bool pauli : {false, true}) {
    const auto op = build_magnetic_hamiltonian(0.3, a, v, g, pauli);
    for (int trial = 0; trial < 10; ++trial) {
      const Eigen::MatrixXcd x = random_block(op.dim(), 1, gen);
      const Eigen::MatrixXcd y = random_block(op.dim(), 1, gen);
      Eigen::MatrixXcd hx(op.dim(), 1), hy(op.dim(), 1);
      op.apply(x, hx);
      op.apply(y, hy);
      const cplx lhs = x.col(0).dot(hy.col(0));
      const cplx rhs = std::conj(y.col(0).dot(hx.col(0)));
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(lhs));
    }
  }
}

TEST_CASE("magnetic operator at A = 0 reduces to the Dirichlet operator") {
  const GridPtr g = BoxGrid::cube(1.0, 12);
  const auto v = bump(g, 12.0, 0.35);
  const auto dir = build_dirichlet_hamiltonian(0.25, v, g);
  const auto mag =
      build_magnetic_hamiltonian(0.25, VectorPotential::zeros(g), v, g, false);
  const auto pauli =
      build_magnetic_hamiltonian(0.25, VectorPotential::zeros(g), v, g, true);
  oracle::Gen gen(5);
  const Eigen::MatrixXcd x = random_block(dir.dim(), 3, gen);
  Eigen::MatrixXd yr(dir.dim(), 3), yi(dir.dim(), 3);
  dir.apply(Eigen::MatrixXd(x.real()), yr);
  dir.apply(Eigen::MatrixXd(x.imag()), yi);
  Eigen::MatrixXcd ym(dir.dim(), 3);
  mag.apply(x, ym);
  CHECK((ym.real() - yr).norm() + (ym.imag() - yi).norm() <= 1e-14 * yr.norm());
  // Pauli with A = 0 acts on each spin component separately.
  Eigen::MatrixXcd xs = Eigen::MatrixXcd::Zero(pauli.dim(), 3);
  for (Eigen::Index i = 0; i < dir.dim(); ++i) xs.row(2 * i + 1) = x.row(i);
  Eigen::MatrixXcd ys(pauli.dim(), 3);
  pauli.apply(xs, ys);
  double err = 0.0;
  for (Eigen::Index i = 0; i < dir.dim(); ++i) {
    err += (ys.row(2 * i + 1) - ym.row(i)).norm() + ys.row(2 * i).norm();
  }
  CHECK(err <= 1e-12 * ym.norm());
}

TEST_CASE("spectrum is gauge invariant") {
  const GridPtr g = BoxGrid::cube(1.0, 9);
  const auto v = bump(g, 8.0, 0.4);
  const auto a = random_band_limited_field(g, 2, 3.0, 2);
  oracle::Gen gen(99);
  for (bool pauli : {false, true}) {
    const auto ref = all_eigenvalues(build_magnetic_hamiltonian(0.3, a, v, g, pauli));
    for (int trial = 0; trial < 4; ++trial) {
      const auto phi = random_smooth_scalar(*g, gen.integer(1, 3),
                                            gen.uniform(0.5, 5.0), gen.next());
      const auto gauged = plus(a, grid_gradient(g, phi));
      const auto ev = all_eigenvalues(build_magnetic_hamiltonian(0.3, gauged, v, g, pauli));
      CHECK((ev - ref).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("diamagnetic inequality for the lowest eigenvalue") {
  const GridPtr g = BoxGrid::cube(1.0, 10);
  const auto v = bump(g, 15.0, 0.4);
  const double base = all_eigenvalues(build_dirichlet_hamiltonian(0.3, v, g))[0];
  oracle::Gen gen(8);
  for (int trial = 0; trial < 6; ++trial) {
    const auto a = random_band_limited_field(g, gen.integer(1, 3),
                                             gen.uniform(0.1, 4.0), gen.next());
    const double low =
        all_eigenvalues(build_magnetic_hamiltonian(0.3, a, v, g, false))[0];
    CHECK(low >= base - 1e-10);
  }
}

TEST_CASE("assembled Pauli form converges to the squared form at second order") {
  std::vector<double> diffs;
  for (int n : {17, 33, 65}) {
    const GridPtr g = BoxGrid::cube(1.0, n);
    // Period of the field torus, so that A is smooth across the wrap.
    const double k = 2 * kPi / (n * g->spacing()[0]);
    const auto a = VectorPotential::sample(
        g,
        [&](const Vec3& p) {
          return Vec3{std::sin(k * p[1]), 0.5 * std::cos(k * p[2]), std::sin(k * p[0])};
        },
        FieldBoundary::periodic);
    const auto op =
        build_magnetic_hamiltonian(0.5, a, ScalarField::zeros(g), g, true);
    Eigen::VectorXcd u(op.dim());
    for (std::size_t s = 0; s < op.active_nodes().size(); ++s) {
      const Vec3 p = g->position(op.active_nodes()[s]);
      // Cubic vanishing at the wall keeps the comparison about the interior
      // stencils; a zero extension across the wall is only first order.
      const double env = std::pow(
          std::sin(kPi * p[0]) * std::sin(kPi * p[1]) * std::sin(kPi * p[2]), 3);
      u[2 * s] = env * cplx(1.0, p[0]);
      u[2 * s + 1] = env * cplx(0.5 * p[1], -0.3);
    }
    const double kin = op.kinetic_expectation(u);
    diffs.push_back(std::abs(kin - op.squared_form_expectation(u)) / std::abs(kin));
  }
  CHECK(std::log2(diffs[0] / diffs[1]) >= 1.8);
  CHECK(std::log2(diffs[1] / diffs[2]) >= 1.8);
}

TEST_CASE("constant well has the discrete Dirichlet eigenvalue") {
  const int n = 24;
  const GridPtr g = BoxGrid::cube(1.0, n);
  const auto op = build_dirichlet_hamiltonian(1.0, ScalarField::constant(g, 30.0), g);
  const auto r = neg_trace(op, 1);
  const double exact = 3.0 * oracle::dirichlet_mode(1, n - 2, 1.0) - 30.0;
  REQUIRE(r.count == 1);
  CHECK(r.negative_eigenvalues[0] == doctest::Approx(exact).epsilon(1e-9));
  CHECK(r.converged);
}

TEST_CASE("iterative and dense negative spectra agree") {
  struct Case {
    int n;
    bool magnetic, pauli;
  };
  for (const Case c : {Case{15, false, false}, Case{15, true, false}, Case{13, true, true}}) {
    const GridPtr g = BoxGrid::cube(1.0, c.n);
    const auto v = bump(g, 30.0, 0.45);
    const auto op = c.magnetic
                        ? build_magnetic_hamiltonian(
                              0.2, random_band_limited_field(g, 2, 1.0, 4), v, g, c.pauli)
                        : build_dirichlet_hamiltonian(0.2, v, g);
    REQUIRE(op.dim() > 1728);
    const int mult = c.pauli ? 1 : 2;
    const auto it = neg_trace(op, mult);
    NegTraceOptions dense;
    dense.eigen.dense_threshold = 100000;
    const auto ref = neg_trace(op, mult, dense);
    REQUIRE(it.count == ref.count);
    CHECK(it.count > 3);
    CHECK(it.neg_trace == doctest::Approx(ref.neg_trace).epsilon(1e-9));
  }
}

TEST_CASE("negative trace is empty without a well and monotone in V and domain") {
  const GridPtr g = BoxGrid::cube(1.0, 14);
  const auto zero = neg_trace(build_dirichlet_hamiltonian(0.2, ScalarField::zeros(g), g), 2);
  CHECK(zero.count == 0);
  CHECK(zero.neg_trace == 0.0);

  oracle::Gen gen(31);
  for (int trial = 0; trial < 4; ++trial) {
    const auto v = bump(g, gen.uniform(5.0, 30.0), gen.uniform(0.2, 0.45));
    auto v1 = v;
    for (auto& x : v1.values) x += 1.0;
    const double h = gen.uniform(0.15, 0.4);
    const auto t0 = neg_trace(build_dirichlet_hamiltonian(h, v, g), 2);
    const auto t1 = neg_trace(build_dirichlet_hamiltonian(h, v1, g), 2);
    CHECK(t1.neg_trace < t0.neg_trace);
  }

  auto ball = [](double radius) {
    return std::make_shared<const BoxGrid>(
        Vec3{1, 1, 1}, std::array<int, 3>{14, 14, 14}, [=](const Vec3& p) {
          const double x = p[0] - 0.5, y = p[1] - 0.5, z = p[2] - 0.5;
          return x * x + y * y + z * z < radius * radius;
        });
  };
  const auto small = ball(0.3), large = ball(0.45);
  const auto ts = neg_trace(build_dirichlet_hamiltonian(0.15, ScalarField::constant(small, 20.0), small), 2);
  const auto tl = neg_trace(build_dirichlet_hamiltonian(0.15, ScalarField::constant(large, 20.0), large), 2);
  CHECK(tl.neg_trace <= ts.neg_trace);
}

TEST_CASE("signed potentials are accepted") {
  const GridPtr g = BoxGrid::cube(1.0, 12);
  auto v = bump(g, 20.0, 0.3);
  for (auto& x : v.values) x -= 3.0;
  const auto r = neg_trace(build_dirichlet_hamiltonian(0.2, v, g), 2);
  CHECK(r.converged);
  CHECK(r.neg_trace <= 0.0);
}

TEST_CASE("Weyl estimate arithmetic") {
  const GridPtr g = BoxGrid::cube(1.0, 16);
  const double w = weyl_estimate(ScalarField::constant(g, 1.0), 0.1, 2);
  CHECK(w == doctest::Approx(-2.0 / (15.0 * kPi * kPi) * 1000.0).epsilon(1e-12));
  CHECK(std::abs(w + 13.509) < 1e-3);
  CHECK(weyl_estimate(ScalarField::zeros(g), 0.1, 2) == 0.0);
  const auto v = bump(g, 9.0, 0.4);
  CHECK(weyl_estimate(v, 0.05, 2) ==
        doctest::Approx(8.0 * weyl_estimate(v, 0.1, 2)).epsilon(1e-14));
  CHECK(weyl_estimate(v, 0.1, 1) ==
        doctest::Approx(0.5 * weyl_estimate(v, 0.1, 2)).epsilon(1e-14));
}

TEST_CASE("semiclassical error shape") {
  CHECK(semiclassical_error_bound(1.0, 1.0, 1.0, 1.0) == doctest::Approx(2.0));
  // The h^{-3} h^{1/2} leading term dominates as h -> 0.
  const double h = 1e-8;
  CHECK(semiclassical_error_bound(h / 4, 1.0, 1.0) /
            semiclassical_error_bound(h, 1.0, 1.0) ==
        doctest::Approx(32.0).epsilon(1e-3));
  // Relative to the h^{-3} trace scale the shape vanishes.
  CHECK(semiclassical_error_bound(1e-4, 1.0, 1.0) * 1e-12 < 1.1e-2);
}

TEST_CASE("spectral inputs are validated") {
  const GridPtr g = BoxGrid::cube(1.0, 8);
  const GridPtr other = BoxGrid::cube(1.0, 9);
  const auto v = ScalarField::constant(g, 1.0);
  CHECK_THROWS_AS(build_dirichlet_hamiltonian(0.0, v, g), InputError);
  CHECK_THROWS_AS(build_dirichlet_hamiltonian(0.1, v, other), InputError);
  CHECK_THROWS_AS(neg_trace(build_dirichlet_hamiltonian(0.1, v, g), 3), InputError);
  CHECK_THROWS_AS(
      neg_trace(build_magnetic_hamiltonian(0.1, VectorPotential::zeros(g), v, g, true), 2),
      InputError);
  CHECK_THROWS_AS(weyl_estimate(v, -0.1, 2), InputError);
  CHECK_THROWS_AS(make_potential({"no-such-family", {}}, g), InputError);
}
