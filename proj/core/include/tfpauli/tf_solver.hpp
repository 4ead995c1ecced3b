// Copyright 2026 The tfpauli Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <numbers>
#include <vector>

#include "tfpauli/coulomb.hpp"

namespace tfpauli {

/// Weyl constant for two spin states with kinetic operator -Delta.
inline constexpr double kWeylConstant =
    2.0 / (15.0 * std::numbers::pi * std::numbers::pi);

/// Solution of chi'' = chi^{3/2} / sqrt(x), chi(0) = 1, chi(inf) = 0.
///
/// Stored on a uniform grid in t = sqrt(x), where the equation is regular
/// at the origin. Beyond `match_x` the function continues along the
/// Sommerfeld family 144 x^{-3} (1 + (c/x)^lambda)^{-3/lambda}, with c
/// fitted to the integrated value at the match point.
struct TFScreeningFunction {
  double initial_slope = 0.0;
  double t_step = 0.0;
  std::vector<double> chi;    // chi at t_k = k * t_step
  std::vector<double> dchi;   // d chi / dx at the same nodes
  double match_x = 0.0;
  double tail_scale = 0.0;

  double operator()(double x) const;
  double derivative(double x) const;
  /// Grid nodes in x (t_k^2), up to match_x.
  std::vector<double> x_nodes() const;
};

struct TFDensity {
  RadialFunction radial;
  double Z = 0.0;
};

/// Shooting on chi'(0) with adaptive Dormand-Prince integration.
/// `tolerance` in (0, 1e-2] bounds the ODE residual on the stored grid.
/// Throws NumericalError when the slope bracket [-1.7, -1.5] does not
/// enclose the transition between the two failure modes.
TFScreeningFunction solve_tf_ode(double tolerance = 1e-8);

/// Thomas-Fermi length b(Z) = (3 pi / 4)^{2/3} Z^{-1/3}: r = b x.
double tf_length_scale(double Z);

/// rho(r) = (3 pi^2)^{-1} (Z chi(r/b) / r)^{3/2}.
double tf_density_at(const TFScreeningFunction& chi, double Z, double r);

/// TF density sampled on `grid`. The default grid is the standard radial grid
/// scaled by Z^{-1/3}, so densities at different Z are sampled at matching
/// points of the scaled variable.
TFDensity tf_density_from_screening(const TFScreeningFunction& chi, double Z);
TFDensity tf_density_from_screening(const TFScreeningFunction& chi, double Z,
                                    const RadialGrid& grid);

/// Kinetic, nuclear attraction and repulsion pieces of the TF functional.
struct TFEnergyTerms {
  double kinetic = 0.0;     // (3/5)(3 pi^2)^{2/3} \int rho^{5/3}
  double attraction = 0.0;  // Z \int rho / |x|   (positive number)
  double repulsion = 0.0;   // D(rho, rho)
  double total() const { return kinetic - attraction + repulsion; }
};

TFEnergyTerms tf_energy_terms(const TFDensity& rho);

/// E_TF(rho) = (3/5)(3 pi^2)^{2/3} \int rho^{5/3} - Z \int rho/|x| + D(rho,rho).
double tf_functional_energy(const TFDensity& rho);

/// c_TF = D(rho, rho) + C_sc \int [ -1/|X| + rho * |X|^{-1} ]_-^{5/2}
/// for the Z = 1 minimiser.
double compute_c_tf(const TFDensity& rho);

/// The printed closed form 3.678 (3 pi^2)^{p}, for p = +2/3 and p = -2/3.
struct ClosedFormReadings {
  double positive_exponent = 0.0;
  double negative_exponent = 0.0;
};
ClosedFormReadings c_tf_closed_forms();

struct TFMinimizeOptions {
  int max_iters = 4000;
  double energy_tol = 1e-13;
};

struct TFMinimizeResult {
  TFDensity density;
  double energy = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Direct minimisation of E_TF over { rho >= 0, \int rho = Z } on the
/// density's grid, by preconditioned projected gradient with Armijo
/// backtracking, starting from `start`.
TFMinimizeResult minimize_tf_functional(const TFDensity& start,
                                        const TFMinimizeOptions& opts = {});

}  // namespace tfpauli
