// Copyright 2026 The tfpauli Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "tfpauli/errors.hpp"
#include "tfpauli/field_minimizer.hpp"
#include "tfpauli/field_ops.hpp"
#include "tfpauli/operators.hpp"
#include "tfpauli/potentials.hpp"

using namespace tfpauli;
using oracle::kPi;

namespace {

ScalarField bump(GridPtr g, double depth = 15.0) {
  return make_potential({"smooth-bump", {{"depth", depth}, {"radius", 0.4}}}, g);
}

EnergyConfig config(double h, bool pauli, double lambda) {
  EnergyConfig c;
  c.h = h;
  c.lambda = lambda;
  c.pauli = pauli;
  c.multiplicity = pauli ? 1 : 2;
  return c;
}

double directional_fd(const VectorPotential& a, const VectorPotential& d,
                      const ScalarField& v, const EnergyConfig& cfg, double t) {
  return (total_energy(axpy(a, t, d), v, cfg) - total_energy(axpy(a, -t, d), v, cfg)) /
         (2 * t);
}

}  // namespace

TEST_CASE("energy config: lambda, alpha and coupling warning") {
  EnergyConfig c;
  CHECK_THROWS_AS(c.validate(), InputError);  // neither set
  c.alpha = 0.1;
  CHECK(c.lambda_value() == doctest::Approx(1.0 / (8 * kPi * 0.01)));
  c.lambda = 2.0;
  CHECK_THROWS_AS(c.validate(), InputError);  // both set
  c.lambda.reset();
  CHECK_FALSE(c.coupling_warning(10.0, 1.0).has_value());
  CHECK(c.coupling_warning(200.0, 1.0).has_value());
  c.pauli = true;
  c.multiplicity = 2;
  CHECK_THROWS_AS(c.validate(), InputError);
  c.multiplicity = 1;
  CHECK_NOTHROW(c.validate());
  c.h = -1.0;
  CHECK_THROWS_AS(c.validate(), InputError);
}

TEST_CASE("total energy at A = 0 is the non-magnetic trace") {
  const GridPtr g = BoxGrid::cube(1.0, 12);
  const auto v = bump(g);
  const auto zero = VectorPotential::zeros(g);
  const double ref = neg_trace(build_dirichlet_hamiltonian(0.25, v, g), 2).neg_trace;
  CHECK(total_energy(zero, v, config(0.25, false, 16.0)) == ref);
  CHECK(total_energy(zero, v, config(0.25, true, 16.0)) == ref);
}

TEST_CASE("energy is affine in lambda") {
  const GridPtr g = BoxGrid::cube(1.0, 12);
  const auto v = bump(g);
  const auto a = random_band_limited_field(g, 2, 0.5, 3);
  const double e1 = total_energy(a, v, config(0.25, true, 1.0));
  const double e2 = total_energy(a, v, config(0.25, true, 2.0));
  CHECK(e2 - e1 == doctest::Approx(field_energy(a).b_energy).epsilon(1e-9));
}

TEST_CASE("non-divergence-free fields are rejected") {
  const GridPtr g = BoxGrid::cube(1.0, 10);
  auto a = VectorPotential::sample(
      g, [](const Vec3& p) { return Vec3{p[0], 0, 0}; }, FieldBoundary::periodic);
  CHECK_THROWS_AS(total_energy(a, bump(g), config(0.3, false, 1.0)), InputError);
}

TEST_CASE("Schrodinger energy never drops below its A = 0 value on random fields") {
  const GridPtr g = BoxGrid::cube(1.0, 12);
  const auto v = bump(g);
  const double h = 0.25;
  const auto cfg = config(h, false, 1.0 / (h * h));
  const double e0 = total_energy(VectorPotential::zeros(g), v, cfg);
  oracle::Gen gen(404);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_band_limited_field(g, gen.integer(1, 4),
                                             gen.uniform(0.01, 2.0), gen.next());
    CHECK(total_energy(a, v, cfg) >= e0 - 1e-6 * std::abs(e0));
  }
}

TEST_CASE("gradient vanishes at A = 0") {
  const GridPtr g = BoxGrid::cube(1.0, 12);
  const auto v = bump(g);
  for (bool pauli : {false, true}) {
    const auto r = field_gradient(VectorPotential::zeros(g), v, config(0.25, pauli, 16.0));
    CHECK(std::sqrt(inner_product(r.gradient, r.gradient)) <= 1e-10);
  }
}

TEST_CASE("gradient matches central differences of the energy") {
  const GridPtr g = BoxGrid::cube(1.0, 11);
  oracle::Gen gen(12);
  for (bool pauli : {false, true}) {
    const auto v = bump(g, gen.uniform(10.0, 25.0));
    const double h = gen.uniform(0.2, 0.35);
    const auto cfg = config(h, pauli, gen.uniform(0.5, 3.0));
    const auto a = random_band_limited_field(g, 2, gen.uniform(0.2, 1.0), gen.next());
    const auto grad = field_gradient(a, v, cfg);
    REQUIRE_FALSE(grad.degenerate);
    for (int k = 0; k < 3; ++k) {
      const auto d = random_band_limited_field(g, 3, 1.0, gen.next());
      const double fd = directional_fd(a, d, v, cfg, 1e-4);
      CHECK(std::abs(inner_product(grad.gradient, d) - fd) <= 1e-5 * std::abs(fd));
    }
  }
}

TEST_CASE("with no bound states the gradient is the field term 2 lambda curl B") {
  const int n = 24;
  const GridPtr g = BoxGrid::cube(1.0, n);
  const double dx = g->spacing()[0], period = n * dx, k = 2 * kPi / period;
  const auto a = VectorPotential::sample(
      g, [&](const Vec3& p) { return Vec3{0, 0, std::sin(k * p[0])}; },
      FieldBoundary::periodic);
  const double lambda = 1.7;
  const auto r = field_gradient(a, ScalarField::zeros(g), config(0.2, false, lambda));
  const double symbol = (2.0 - 2.0 * std::cos(k * dx)) / (dx * dx);
  double worst = 0.0, worst_cont = 0.0;
  for (std::size_t i = 0; i < g->node_count(); ++i) {
    const double x = g->position(i)[0];
    const double got = r.gradient.components[2][i];
    worst = std::max(worst, std::abs(got - 2 * lambda * symbol * std::sin(k * x)));
    worst_cont = std::max(worst_cont, std::abs(got - 2 * lambda * k * k * std::sin(k * x)));
  }
  CHECK(worst <= 1e-9 * 2 * lambda * symbol);
  CHECK(worst_cont <= 1e-2 * 2 * lambda * k * k);
}

TEST_CASE("minimiser from A = 0 stops at once") {
  const GridPtr g = BoxGrid::cube(1.0, 12);
  const auto v = bump(g);
  const auto m = minimize_field(VectorPotential::zeros(g), v, config(0.25, true, 16.0));
  CHECK(m.converged);
  CHECK(m.iterations == 0);
  CHECK(m.total_energy == m.baseline_energy);
}

TEST_CASE("minimiser contracts from a random start") {
  const GridPtr g = BoxGrid::cube(1.0, 12);
  const auto v = bump(g);
  for (bool pauli : {false, true}) {
    const double h = 0.25;
    const auto cfg = config(h, pauli, 1.0 / (h * h));
    const auto a0 = random_band_limited_field(g, 2, 0.05, 77);
    const auto m = minimize_field(a0, v, cfg);
    CHECK_FALSE(m.stagnated);
    for (std::size_t i = 1; i < m.descent_history.size(); ++i) {
      CHECK(m.descent_history[i] <= m.descent_history[i - 1]);
    }
    CHECK(m.max_divergence_seen <= 1e-10);
    CHECK(m.total_energy >= m.baseline_energy - 1e-6 * std::abs(m.baseline_energy));
    CHECK(m.total_energy <= m.descent_history.front());
    CHECK(field_energy(m.a_star).b_energy <= 1e-4);
  }
}

TEST_CASE("bound sweep records") {
  const GridPtr g = BoxGrid::cube(1.0, 12);
  const auto v = bump(g);
  EnergyConfig cfg;
  cfg.pauli = true;
  cfg.multiplicity = 1;
  CHECK(verify_bound_sweep(v, {}, cfg).empty());
  CHECK_THROWS_AS(verify_bound_sweep(v, {0.2, 0.3}, cfg), InputError);
  CHECK_THROWS_AS(verify_bound_sweep(v, {0.3, -0.1}, cfg), InputError);
  const auto recs = verify_bound_sweep(v, {0.4, 0.3}, cfg, {}, 0.05, 5);
  REQUIRE(recs.size() == 2);
  for (const auto& r : recs) {
    CHECK(r.usable);
    CHECK(r.bound_holds);
    CHECK(r.g == doctest::Approx(r.h * r.h * r.h * r.gap));
    CHECK(r.error_shape ==
          doctest::Approx(semiclassical_error_bound(r.h, v.sup_bound(), 1000.0 / 1331.0)));
  }
}

TEST_CASE("hydrogen check obeys the exact charge scaling") {
  const int n = 21;
  const auto g1 = hydrogen_grid(8.0, n);
  const auto g2 = hydrogen_grid(4.0, n);
  const auto r1 = hydrogen_bound_check(1.0, VectorPotential::zeros(g1), g1);
  const auto r2 = hydrogen_bound_check(2.0, VectorPotential::zeros(g2), g2);
  CHECK(r2.lowest == doctest::Approx(4.0 * r1.lowest).epsilon(1e-9));
  CHECK(r1.bound == -0.25);
  const auto a1 = random_band_limited_field(g1, 2, 0.5, 42);
  const auto a2 = random_band_limited_field(g2, 2, 1.0, 42);
  const auto m1 = hydrogen_bound_check(1.0, a1, g1);
  const auto m2 = hydrogen_bound_check(2.0, a2, g2);
  CHECK(m2.lowest == doctest::Approx(4.0 * m1.lowest).epsilon(1e-9));
  CHECK(m1.lowest >= r1.lowest - 1e-10);  // diamagnetic
  CHECK_THROWS_AS(hydrogen_grid(5.0, 20), InputError);
  CHECK_THROWS_AS(hydrogen_bound_check(-1.0, VectorPotential::zeros(g1), g1),
                  InputError);
}
