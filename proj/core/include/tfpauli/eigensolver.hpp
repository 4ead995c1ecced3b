// Copyright 2026 The tfpauli Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/Dense>

#include "tfpauli/operators.hpp"

namespace tfpauli {

struct EigenOptions {
  /// Residual tolerance relative to the spectral radius estimate.
  double tol = 1e-10;
  int max_iters = 400;
  /// Initial block size; 0 picks one from a Weyl count estimate.
  int block_size = 0;
  /// Problems with at most this many unknowns are solved densely.
  Eigen::Index dense_threshold = 1728;
  std::uint64_t seed = 0x5eed;
};

template <typename Scalar>
struct EigenResult {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::VectorXd values;     // ascending
  Matrix vectors;             // orthonormal columns (plain l2)
  Eigen::VectorXd residuals;  // ||H v - theta v||
  /// Final search block, wanted vectors first; a warm start for a nearby
  /// operator. Empty after a dense solve.
  Matrix subspace;
  /// Smallest computed eigenvalue above the wanted set and its residual;
  /// NaN when the solve ended before one was available.
  double next_value = 0.0;
  double next_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  bool dense = false;
};

/// All eigenpairs below zero, by Chebyshev-filtered subspace iteration with
/// Rayleigh-Ritz. Stops once every negative Ritz pair has converged and the
/// first non-negative Ritz value stays non-negative after subtracting its
/// residual. Returns with converged = false after max_iters.
template <typename Scalar>
EigenResult<Scalar> negative_eigenpairs(
    const OperatorHandle& op, const EigenOptions& opts,
    const typename EigenResult<Scalar>::Matrix* warm_start = nullptr);

/// The k lowest eigenpairs.
template <typename Scalar>
EigenResult<Scalar> lowest_eigenpairs(
    const OperatorHandle& op, int k, const EigenOptions& opts,
    const typename EigenResult<Scalar>::Matrix* warm_start = nullptr);

/// Rough count of negative eigenvalues, (1/6 pi^2) h^-3 \int V_+^{3/2}
/// per spin component.
double weyl_count_estimate(const OperatorHandle& op);

}  // namespace tfpauli
