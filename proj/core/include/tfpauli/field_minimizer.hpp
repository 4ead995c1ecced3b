// Copyright 2026 The tfpauli Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tfpauli/grid.hpp"
#include "tfpauli/spectral.hpp"

namespace tfpauli {

/// Coefficients of E(A) = Tr[T_h(A) - V]_- + lambda \int B^2.
struct EnergyConfig {
  double h = 0.1;
  /// Exactly one of lambda and alpha must be set; alpha gives
  /// lambda = 1 / (8 pi alpha^2).
  std::optional<double> lambda;
  std::optional<double> alpha;
  bool pauli = false;
  /// Spin factor for the scalar kind (1 or 2); must be 1 for Pauli.
  int multiplicity = 2;
  EigenOptions eigen;

  void validate() const;
  double lambda_value() const;
  /// Warning text when Z alpha^2 > kappa, nothing otherwise. The small
  /// coupling condition is not enforced.
  std::optional<std::string> coupling_warning(double z, double kappa) const;
};

struct EnergyEvaluation {
  double total = 0.0;
  double trace = 0.0;
  double field = 0.0;  // lambda * b_energy
  SpectralResult spectrum;
};

/// Full evaluation; `keep_vectors` retains the filled states.
EnergyEvaluation evaluate_energy(const VectorPotential& a, const ScalarField& v,
                                 const EnergyConfig& cfg,
                                 bool keep_vectors = false,
                                 const Eigen::MatrixXcd* warm_start = nullptr);

/// Tr[T_h(A) - V]_- + lambda b_energy(A). A must be divergence-free.
double total_energy(const VectorPotential& a, const ScalarField& v,
                    const EnergyConfig& cfg);

struct GradientResult {
  VectorPotential gradient;  // L2 gradient, Helmholtz projected
  EnergyEvaluation energy;
  /// The highest filled level is within 1e-8 of the next one; the gradient
  /// is then a subgradient averaged over that block.
  bool degenerate = false;
};

GradientResult field_gradient(const VectorPotential& a, const ScalarField& v,
                              const EnergyConfig& cfg,
                              const Eigen::MatrixXcd* warm_start = nullptr);

struct MinimizeOptions {
  int max_iters = 50;
  double grad_tol = 1e-8;
  /// Armijo constant and the number of step halvings before giving up.
  double armijo = 1e-4;
  int max_backtracks = 30;
  /// A failed line search counts as convergence when some trial energy is
  /// within energy_tol |E| of the current one (flat to rounding).
  double energy_tol = 1e-13;
  /// Keep only Fourier modes |m_d| <= band_limit; 0 keeps all.
  int band_limit = 0;
};

struct MinimizeResult {
  VectorPotential a_star;
  double total_energy = 0.0;
  double baseline_energy = 0.0;  // A = 0
  int iterations = 0;
  std::vector<double> descent_history;
  double grad_norm_final = 0.0;
  double max_divergence_seen = 0.0;  // relative to |A|
  bool converged = false;
  bool stagnated = false;
  bool degenerate_seen = false;
};

/// Preconditioned projected gradient descent with Armijo backtracking. The
/// preconditioner is the inverse Hessian of the field term.
MinimizeResult minimize_field(const VectorPotential& a0, const ScalarField& v,
                              const EnergyConfig& cfg,
                              const MinimizeOptions& opts = {});

struct BoundRecord {
  double h = 0.0;
  double e_nf = 0.0;   // Tr at A = 0
  double e_min = 0.0;  // total_energy(A_star)
  double gap = 0.0;    // e_nf - e_min
  double g = 0.0;      // h^3 gap
  double error_shape = 0.0;  // semiclassical_error_bound with C = 1
  double field_energy = 0.0;
  double boundary_fraction = 0.0;  // box truncation indicator
  int iterations = 0;
  bool bound_holds = false;  // gap <= 1e-6 |e_nf|, i.e. e_min >= e_nf - tol
  bool usable = false;       // every eigensolve certified
};

/// One record per h. The field coefficient follows `cfg`, except that a
/// template without lambda or alpha uses lambda = h^-2. The start for the
/// descent is a random band-limited field of the given amplitude.
std::vector<BoundRecord> verify_bound_sweep(
    const ScalarField& v, const std::vector<double>& h_list,
    const EnergyConfig& cfg, const MinimizeOptions& opts = {},
    double start_amplitude = 0.0, std::uint64_t seed = 1);

struct HydrogenReport {
  double c = 0.0;
  double lowest = 0.0;
  double bound = 0.0;  // -c^2 / 4
  double allowance = 0.03;
  bool holds = false;  // lowest >= bound (1 + allowance)
  bool converged = false;
  Eigen::MatrixXcd state;  // final search block, ground state first; a warm start
};

/// Lowest eigenvalue of (p + A)^2 - c / max(|x - x0|, dx) at h = 1, with x0
/// the box centre.
HydrogenReport hydrogen_bound_check(
    double c, const VectorPotential& a, GridPtr grid,
    const EigenOptions& eig = {}, const Eigen::MatrixXcd* warm_start = nullptr);

/// Cube of side 2 radius with n (odd) nodes per axis, masked to the ball of
/// the given radius about the centre.
GridPtr hydrogen_grid(double radius, int n);

}  // namespace tfpauli
