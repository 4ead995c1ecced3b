// Copyright 2026 The tfpauli Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "tfpauli/grid.hpp"

namespace tfpauli {

using FaceField = std::array<std::vector<double>, 3>;

struct FieldEnergy {
  double grad_energy = 0.0;  // \int |grad (x) A|^2, all nine partials
  double b_energy = 0.0;     // \int B^2, B the discrete curl
};

/// Both energies with forward differences on the staggered grid. Periodic
/// potentials are summed over the torus; open ones over the box, with
/// trapezoid weights along directions that are not differentiated.
FieldEnergy field_energy(const VectorPotential& a);

/// Curl on plaquettes: B_x at index idx is the yz-plaquette with lower
/// corner idx, and so on. Wraps periodically.
FaceField curl_faces(const VectorPotential& a);

/// Node-centred B: each component is the mean of the four plaquettes that
/// share the node.
FaceField curl_nodes(const VectorPotential& a);

/// Share of sum |B|^2 on plaquettes touching the outer layer of nodes. The
/// field lives on a periodic box, so a large share flags truncation.
double boundary_field_fraction(const VectorPotential& a);

/// Transpose of curl_nodes with respect to plain sums.
VectorPotential curl_nodes_adjoint(GridPtr grid, const FaceField& node_b);

/// L2 gradient of b_energy: 2 curl^T curl A (with boundary weights).
VectorPotential b_energy_gradient(const VectorPotential& a);

/// Node divergence (backward differences, periodic).
std::vector<double> divergence(const VectorPotential& a);
double max_divergence(const VectorPotential& a);

/// Forward-difference gradient of a node scalar: the edge value times the
/// spacing equals phi(end) - phi(start).
VectorPotential grid_gradient(GridPtr grid, const std::vector<double>& phi);

/// Divergence-free part of A on the periodic torus, by the Fourier
/// projector I - d d^* / |d|^2 with d the forward-difference symbol.
/// The constant mode passes through unchanged.
VectorPotential helmholtz_project(const VectorPotential& a);

/// (2 lambda |d|^2)^{-1} applied mode by mode; the constant mode is dropped.
/// This inverts the Hessian of lambda \int B^2 on divergence-free fields.
VectorPotential inverse_field_hessian(const VectorPotential& a, double lambda);

/// Keeps Fourier modes with |m_d| <= max_mode on every axis.
VectorPotential band_limit(const VectorPotential& a, int max_mode);

/// Random divergence-free periodic field built from modes |m_d| <= max_mode
/// (excluding the constant mode), scaled so max |A| = amplitude.
VectorPotential random_band_limited_field(GridPtr grid, int max_mode,
                                          double amplitude,
                                          std::uint64_t seed);

/// Random smooth node scalar built from the same band.
std::vector<double> random_smooth_scalar(const BoxGrid& grid, int max_mode,
                                         double amplitude, std::uint64_t seed);

}  // namespace tfpauli
