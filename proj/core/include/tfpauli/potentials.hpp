// Copyright 2026 The tfpauli Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <vector>

#include "tfpauli/grid.hpp"

namespace tfpauli {

/// A named potential family with numeric parameters. Values are well depths
/// V (the operators apply -V).
///
///   smooth-bump        depth, radius | radius_x/_y/_z, center_x/_y/_z
///                      V = depth exp(1 - 1/(1 - s^2)) for s < 1, with
///                      s^2 = sum_d ((x_d - c_d) / R_d)^2
///   truncated-coulomb  charge, cutoff, core, center_*
///                      V = charge (1/max(r, core) - 1/cutoff)_+
///   tf-mean-field      eps, core, center_*
///                      V = -W for the neutral Z = 1 Thomas-Fermi mean field
///                      W, evaluated at max(r, core)
///   constant-well      depth
///
/// Centres default to the box centre and `core` to the grid spacing.
struct PotentialSpec {
  std::string family;
  std::map<std::string, double> params;
};

const std::vector<std::string>& potential_families();

/// Throws InputError for unknown families, unknown or missing parameters.
void validate_potential(const PotentialSpec& spec);

ScalarField make_potential(const PotentialSpec& spec, GridPtr grid);

}  // namespace tfpauli
