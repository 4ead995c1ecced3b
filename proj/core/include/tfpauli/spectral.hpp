// Copyright 2026 The tfpauli Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "tfpauli/eigensolver.hpp"
#include "tfpauli/grid.hpp"
#include "tfpauli/operators.hpp"

namespace tfpauli {

struct SpectralResult {
  std::vector<double> negative_eigenvalues;  // ascending
  double neg_trace = 0.0;                    // multiplicity * sum
  int count = 0;
  int multiplicity = 1;
  bool converged = false;
  double residual_bound = 0.0;  // largest residual over the reported pairs
  double next_eigenvalue = 0.0;
  int iterations = 0;
  /// Eigenvectors as complex columns (real operators are promoted).
  Eigen::MatrixXcd vectors;
  /// Full iterative search block when vectors are kept; see NegTraceOptions.
  Eigen::MatrixXcd subspace;
};

struct NegTraceOptions {
  EigenOptions eigen;
  bool keep_vectors = false;
  /// Warm start for complex operators, e.g. the previous iterate's subspace.
  const Eigen::MatrixXcd* warm_start = nullptr;
};

/// Sum of the negative eigenvalues of op times `multiplicity` (1 or 2; the
/// Pauli kind carries spin explicitly and requires 1). Throws
/// NumericalError when the eigensolver does not certify; the partial
/// result is then available through neg_trace_partial.
SpectralResult neg_trace(const OperatorHandle& op, int multiplicity,
                         const NegTraceOptions& opts = {});

/// As neg_trace but returns non-converged results instead of throwing.
SpectralResult neg_trace_partial(const OperatorHandle& op, int multiplicity,
                                 const NegTraceOptions& opts = {});

/// -(multiplicity / 2) C_sc h^-3 \int V_+^{5/2}, integrating over the domain
/// with trapezoid weights (the box wall counts as part of the domain).
double weyl_estimate(const ScalarField& v, double h, int multiplicity);

/// C h^-3 K^{5/2} vol (h K^{3/2})^{1/2} [1 + (h K^{3/2})^{1/2}]. A trend
/// comparator only: C is not known, and 1 is the conventional choice.
double semiclassical_error_bound(double h, double k, double vol, double c = 1.0);

}  // namespace tfpauli
