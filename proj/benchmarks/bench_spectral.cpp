// Copyright 2026 The tfpauli Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "tfpauli/field_minimizer.hpp"
#include "tfpauli/field_ops.hpp"
#include "tfpauli/operators.hpp"
#include "tfpauli/potentials.hpp"
#include "tfpauli/spectral.hpp"

namespace {

using namespace tfpauli;

ScalarField well(GridPtr g) {
  return make_potential({"smooth-bump", {{"depth", 15.0}, {"radius", 0.4}}}, g);
}

void BM_ApplyDirichlet(benchmark::State& state) {
  const GridPtr g = BoxGrid::cube(1.0, static_cast<int>(state.range(0)));
  const auto op = build_dirichlet_hamiltonian(0.2, well(g), g);
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(op.dim(), 8), y(op.dim(), 8);
  for (auto _ : state) {
    op.apply(x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * op.dim() * 8);
}
BENCHMARK(BM_ApplyDirichlet)->Arg(32)->Arg(64);

void BM_ApplyPauli(benchmark::State& state) {
  const GridPtr g = BoxGrid::cube(1.0, static_cast<int>(state.range(0)));
  const auto a = random_band_limited_field(g, 2, 0.5, 1);
  const auto op = build_magnetic_hamiltonian(0.2, a, well(g), g, true);
  Eigen::MatrixXcd x = Eigen::MatrixXcd::Random(op.dim(), 8), y(op.dim(), 8);
  for (auto _ : state) {
    op.apply(x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * op.dim() * 8);
}
BENCHMARK(BM_ApplyPauli)->Arg(32)->Arg(48);

void BM_NegTraceDirichlet(benchmark::State& state) {
  const GridPtr g = BoxGrid::cube(1.0, 32);
  const double h = static_cast<double>(state.range(0)) / 100.0;
  const auto op = build_dirichlet_hamiltonian(h, well(g), g);
  for (auto _ : state) benchmark::DoNotOptimize(neg_trace(op, 2).neg_trace);
}
BENCHMARK(BM_NegTraceDirichlet)->Arg(40)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_FieldGradientPauli(benchmark::State& state) {
  const GridPtr g = BoxGrid::cube(1.0, 24);
  const auto v = well(g);
  const auto a = random_band_limited_field(g, 2, 0.1, 2);
  EnergyConfig cfg;
  cfg.h = 0.3;
  cfg.lambda = 1.0 / (0.3 * 0.3);
  cfg.pauli = true;
  cfg.multiplicity = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(field_gradient(a, v, cfg).energy.total);
  }
}
BENCHMARK(BM_FieldGradientPauli)->Unit(benchmark::kMillisecond);

void BM_FieldEnergy(benchmark::State& state) {
  const GridPtr g = BoxGrid::cube(1.0, static_cast<int>(state.range(0)));
  const auto a = random_band_limited_field(g, 4, 1.0, 3);
  for (auto _ : state) benchmark::DoNotOptimize(field_energy(a).b_energy);
}
BENCHMARK(BM_FieldEnergy)->Arg(48)->Unit(benchmark::kMillisecond);

void BM_HelmholtzProject(benchmark::State& state) {
  const GridPtr g = BoxGrid::cube(1.0, static_cast<int>(state.range(0)));
  const auto a = random_band_limited_field(g, 4, 1.0, 4);
  for (auto _ : state) benchmark::DoNotOptimize(helmholtz_project(a).components[0][0]);
}
BENCHMARK(BM_HelmholtzProject)->Arg(48)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
