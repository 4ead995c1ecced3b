// Copyright 2026 The tfpauli Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace tfpauli {

/// Log-spaced radial quadrature for integrals of the form
/// \f$\int_0^\infty 4\pi r^2 f(r)\,dr\f$.
///
/// Nodes are r_i = exp(s_i) with s uniform; weights are the composite
/// trapezoid weights in s, so w_i = 4 pi r_i^3 ds (halved at both ends).
class RadialGrid {
 public:
  RadialGrid() = default;

  /// 4000 nodes on [1e-6, 1e3].
  static RadialGrid default_grid();
  static RadialGrid log_spaced(double r_min, double r_max, std::size_t count);

  /// Grid with every node multiplied by `factor` (weights by factor^3).
  /// Quadrature on the scaled grid of a scaled function is exact
  /// up to rounding, which is what the Z-scaling checks rely on.
  RadialGrid scaled(double factor) const;

  std::size_t size() const noexcept { return nodes_.size(); }
  const std::vector<double>& nodes() const noexcept { return nodes_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double log_step() const noexcept { return log_step_; }

  /// \f$\sum_i w_i f(r_i)\f$ plus the contribution of [0, r_0], where
  /// the samples are continued as a power law through the first two nodes.
  double integrate(const std::vector<double>& values) const;
  double head_integral(const std::vector<double>& values) const;

  bool same_as(const RadialGrid& other) const noexcept;

 private:
  RadialGrid(std::vector<double> nodes, std::vector<double> weights,
             double log_step);

  std::vector<double> nodes_;
  std::vector<double> weights_;
  double log_step_ = 0.0;
};

/// Samples of a radial function on a RadialGrid.
struct RadialFunction {
  RadialGrid grid;
  std::vector<double> values;

  static RadialFunction zeros(const RadialGrid& grid);
  static RadialFunction sample(const RadialGrid& grid,
                               const std::function<double(double)>& f);

  /// \f$\int 4\pi r^2 f\f$.
  double total() const { return grid.integrate(values); }
};

/// D(f,g) = 1/2 \iint f(x) g(y) / |x-y| dx dy, using the radial kernel
/// 1/max(r,s). Symmetric in its arguments at the discrete level.
double coulomb_energy(const RadialFunction& f, const RadialFunction& g);

/// Newton potential rho * |x|^{-1}:
///   phi(r) = (1/r) \int_{s<r} 4 pi s^2 rho + \int_{s>r} 4 pi s rho.
/// Throws InputError on negative density.
RadialFunction newton_potential(const RadialFunction& rho);

/// W(X) = (1 - eps)^{-1} [ -Z/|X| + (rho * |X|^{-1})(X) ].
RadialFunction tf_mean_field(const RadialFunction& rho, double Z,
                             double eps = 0.0);

}  // namespace tfpauli
