// Copyright 2026 The tfpauli Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "tfpauli/grid.hpp"

namespace tfpauli {

using cplx = std::complex<double>;

enum class OperatorKind { dirichlet, magnetic_schrodinger, pauli };

const char* to_string(OperatorKind kind);

/// Matrix-free Hermitian grid Hamiltonian restricted to the Dirichlet domain.
///
///   dirichlet:             -h^2 Lap - V
///   magnetic_schrodinger:  (h p + A)^2 - V
///   pauli:                 (h p + A)^2 + h sigma.B - V   on 2-spinors
///
/// The magnetic kinetic term uses link variables: the hop from x to x + e_d
/// carries exp(i A_d dx_d / h), where A_d is the edge value of the staggered
/// potential. Unknowns are the masked nodes in increasing linear order; for
/// the Pauli kind the two spin components of a node are adjacent.
class OperatorHandle {
 public:
  OperatorKind kind() const noexcept { return kind_; }
  double h() const noexcept { return h_; }
  int spin_components() const noexcept { return kind_ == OperatorKind::pauli ? 2 : 1; }
  Eigen::Index dim() const noexcept {
    return static_cast<Eigen::Index>(active_.size()) * spin_components();
  }
  bool is_real() const noexcept { return kind_ == OperatorKind::dirichlet; }

  const GridPtr& grid() const noexcept { return grid_; }
  const ScalarField& potential() const noexcept { return potential_; }
  const std::optional<VectorPotential>& vector_potential() const noexcept {
    return vector_potential_;
  }
  /// Node index of the a-th unknown site.
  const std::vector<std::size_t>& active_nodes() const noexcept { return active_; }

  /// Y = H X, column by column. The real overload needs is_real().
  void apply(const Eigen::Ref<const Eigen::MatrixXd>& x,
             Eigen::Ref<Eigen::MatrixXd> y) const;
  void apply(const Eigen::Ref<const Eigen::MatrixXcd>& x,
             Eigen::Ref<Eigen::MatrixXcd> y) const;

  /// Gershgorin enclosure of the spectrum.
  double spectrum_upper_bound() const;
  double spectrum_lower_bound() const;

  Eigen::MatrixXd dense_real() const;
  Eigen::MatrixXcd dense_complex() const;

  /// d/dA_e of sum_n w_n <psi_n, H psi_n> for every grid edge e, returned
  /// as raw per-edge partial derivatives (no volume factor). Only the
  /// magnetic kinds depend on A.
  VectorPotential field_derivative(const Eigen::MatrixXcd& vectors,
                                   const std::vector<double>& weights) const;

  /// <u, K u> with K the assembled kinetic part, (h p + A)^2 or
  /// (h p + A)^2 + h sigma.B.
  double kinetic_expectation(const Eigen::VectorXcd& u) const;
  /// |sigma.(h p + A) u|^2 with central covariant differences, for the
  /// Pauli kind (squared-form discretisation of the same kinetic energy).
  double squared_form_expectation(const Eigen::VectorXcd& u) const;

 private:
  friend OperatorHandle build_dirichlet_hamiltonian(double, const ScalarField&,
                                                    GridPtr);
  friend OperatorHandle build_magnetic_hamiltonian(double,
                                                   const VectorPotential&,
                                                   const ScalarField&, GridPtr,
                                                   bool);
  OperatorHandle(OperatorKind kind, double h, GridPtr grid, ScalarField v);

  template <typename Scalar>
  void apply_column(const Scalar* x, Scalar* y) const;

  OperatorKind kind_;
  double h_;
  GridPtr grid_;
  ScalarField potential_;
  std::optional<VectorPotential> vector_potential_;

  std::vector<std::size_t> active_;
  // +x, -x, +y, -y, +z, -z; -1 outside the domain.
  std::vector<std::array<std::int32_t, 6>> neighbors_;
  std::vector<double> diagonal_;  // 2 h^2 sum 1/dx^2 - V
  std::array<double, 3> hop_{};   // h^2 / dx_d^2
  std::vector<std::array<cplx, 6>> phases_;  // per hop, matches neighbors_
  // h sigma.B per site: (h B_z, h (B_x - i B_y)).
  std::vector<std::array<cplx, 2>> zeeman_;
};

/// -h^2 Lap - V with the 7-point Laplacian; masked nodes are eliminated.
OperatorHandle build_dirichlet_hamiltonian(double h, const ScalarField& v,
                                           GridPtr grid);

/// (h p + A)^2 - V, or the Pauli operator [sigma.(h p + A)]^2 - V when
/// `pauli` is set. Reduces to the Dirichlet operator at A = 0.
OperatorHandle build_magnetic_hamiltonian(double h, const VectorPotential& a,
                                          const ScalarField& v, GridPtr grid,
                                          bool pauli);

}  // namespace tfpauli
