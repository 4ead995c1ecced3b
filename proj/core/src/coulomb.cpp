// Copyright 2026 The tfpauli Authors
// SPDX-License-Identifier: Apache-2.0

#include "tfpauli/coulomb.hpp"

#include <cmath>
#include <numbers>

#include "tfpauli/errors.hpp"

namespace tfpauli {

namespace {

void require_finite(const RadialFunction& f, const char* what) {
  if (f.values.size() != f.grid.size()) {
    throw InputError(std::string(what) + ": sample count does not match grid");
  }
  for (double v : f.values) {
    if (!std::isfinite(v)) {
      throw InputError(std::string(what) + ": non-finite sample");
    }
  }
}

// phi_i = sum_j w_j g_j / max(r_i, r_j), evaluated with prefix sums.
std::vector<double> newton_kernel(const RadialGrid& grid,
                                  const std::vector<double>& g) {
  const auto& r = grid.nodes();
  const auto& w = grid.weights();
  const std::size_t n = grid.size();
  std::vector<double> phi(n, 0.0);

  std::vector<double> outer(n + 1, 0.0);
  for (std::size_t j = n; j-- > 0;) {
    outer[j] = outer[j + 1] + w[j] * g[j] / r[j];
  }
  double inner = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    inner += w[i] * g[i];
    phi[i] = inner / r[i] + outer[i + 1];
  }
  return phi;
}

}  // namespace

RadialGrid::RadialGrid(std::vector<double> nodes, std::vector<double> weights,
                       double log_step)
    : nodes_(std::move(nodes)), weights_(std::move(weights)),
      log_step_(log_step) {}

RadialGrid RadialGrid::default_grid() {
  return log_spaced(1e-6, 1e3, 4000);
}

RadialGrid RadialGrid::log_spaced(double r_min, double r_max,
                                  std::size_t count) {
  if (!(r_min > 0.0) || !(r_max > r_min) || count < 3) {
    throw InputError("RadialGrid: need 0 < r_min < r_max and >= 3 nodes");
  }
  const double s0 = std::log(r_min);
  const double ds = (std::log(r_max) - s0) / static_cast<double>(count - 1);
  std::vector<double> nodes(count), weights(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double r = std::exp(s0 + ds * static_cast<double>(i));
    nodes[i] = r;
    weights[i] = 4.0 * std::numbers::pi * r * r * r * ds;
  }
  weights.front() *= 0.5;
  weights.back() *= 0.5;
  return RadialGrid(std::move(nodes), std::move(weights), ds);
}

RadialGrid RadialGrid::scaled(double factor) const {
  if (!(factor > 0.0)) throw InputError("RadialGrid::scaled: factor <= 0");
  std::vector<double> nodes = nodes_, weights = weights_;
  const double f3 = factor * factor * factor;
  for (auto& r : nodes) r *= factor;
  for (auto& w : weights) w *= f3;
  return RadialGrid(std::move(nodes), std::move(weights), log_step_);
}

double RadialGrid::integrate(const std::vector<double>& values) const {
  if (values.size() != size()) {
    throw InputError("RadialGrid::integrate: sample count mismatch");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < size(); ++i) sum += weights_[i] * values[i];
  return sum + head_integral(values);
}

double RadialGrid::head_integral(const std::vector<double>& values) const {
  // f ~ f0 (r/r0)^p on [0, r0], with p read off the first two nodes.
  const double f0 = values[0], f1 = values[1];
  if (f0 == 0.0 || f1 == 0.0 || (f0 > 0.0) != (f1 > 0.0)) return 0.0;
  const double p = std::log(f1 / f0) / std::log(nodes_[1] / nodes_[0]);
  if (!(p > -2.9)) return 0.0;
  const double r0 = nodes_[0];
  return 4.0 * std::numbers::pi * f0 * r0 * r0 * r0 / (p + 3.0);
}

bool RadialGrid::same_as(const RadialGrid& other) const noexcept {
  return nodes_ == other.nodes_ && weights_ == other.weights_;
}

RadialFunction RadialFunction::zeros(const RadialGrid& grid) {
  return {grid, std::vector<double>(grid.size(), 0.0)};
}

RadialFunction RadialFunction::sample(const RadialGrid& grid,
                                      const std::function<double(double)>& f) {
  RadialFunction out = zeros(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out.values[i] = f(grid.nodes()[i]);
  }
  return out;
}

double coulomb_energy(const RadialFunction& f, const RadialFunction& g) {
  require_finite(f, "coulomb_energy");
  require_finite(g, "coulomb_energy");
  if (!f.grid.same_as(g.grid)) {
    throw InputError("coulomb_energy: f and g live on different grids");
  }
  const auto phi = newton_kernel(g.grid, g.values);
  double sum = 0.0;
  const auto& w = f.grid.weights();
  for (std::size_t i = 0; i < f.grid.size(); ++i) {
    sum += w[i] * f.values[i] * phi[i];
  }
  return 0.5 * sum;
}

RadialFunction newton_potential(const RadialFunction& rho) {
  require_finite(rho, "newton_potential");
  for (double v : rho.values) {
    if (v < 0.0) throw InputError("newton_potential: negative density");
  }
  return {rho.grid, newton_kernel(rho.grid, rho.values)};
}

RadialFunction tf_mean_field(const RadialFunction& rho, double Z, double eps) {
  if (!(eps < 1.0)) throw InputError("tf_mean_field: eps must be < 1");
  if (eps < 0.0) throw InputError("tf_mean_field: eps must be >= 0");
  RadialFunction w = newton_potential(rho);
  const double scale = 1.0 / (1.0 - eps);
  const auto& r = rho.grid.nodes();
  for (std::size_t i = 0; i < w.values.size(); ++i) {
    w.values[i] = scale * (-Z / r[i] + w.values[i]);
  }
  return w;
}

}  // namespace tfpauli
