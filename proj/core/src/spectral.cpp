// Copyright 2026 The tfpauli Authors
// SPDX-License-Identifier: Apache-2.0

#include "tfpauli/spectral.hpp"

#include <cmath>
#include <sstream>

#include "tfpauli/errors.hpp"
#include "tfpauli/tf_solver.hpp"

namespace tfpauli {

namespace {

template <typename Scalar>
SpectralResult collect(EigenResult<Scalar>&& er, int multiplicity,
                       bool keep_vectors) {
  SpectralResult out;
  out.multiplicity = multiplicity;
  out.converged = er.converged;
  out.iterations = er.iterations;
  out.next_eigenvalue = er.next_value;
  out.residual_bound = er.next_residual;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < er.values.size(); ++i) {
    if (!(er.values[i] < 0.0)) break;
    out.negative_eigenvalues.push_back(er.values[i]);
    sum += er.values[i];
    out.residual_bound = std::max(out.residual_bound, er.residuals[i]);
  }
  out.count = static_cast<int>(out.negative_eigenvalues.size());
  out.neg_trace = multiplicity * sum;
  if (keep_vectors) {
    if constexpr (std::is_same_v<Scalar, double>) {
      out.vectors = er.vectors.leftCols(out.count).template cast<cplx>();
      out.subspace = er.subspace.template cast<cplx>();
    } else {
      out.vectors = er.vectors.leftCols(out.count);
      out.subspace = std::move(er.subspace);
    }
  }
  return out;
}

}  // namespace

SpectralResult neg_trace_partial(const OperatorHandle& op, int multiplicity,
                                 const NegTraceOptions& opts) {
  if (multiplicity != 1 && multiplicity != 2) {
    throw InputError("neg_trace: multiplicity must be 1 or 2");
  }
  if (op.kind() == OperatorKind::pauli && multiplicity != 1) {
    throw InputError("neg_trace: the Pauli kind carries spin explicitly");
  }
  if (op.is_real()) {
    return collect(negative_eigenpairs<double>(op, opts.eigen), multiplicity,
                   opts.keep_vectors);
  }
  return collect(negative_eigenpairs<cplx>(op, opts.eigen, opts.warm_start),
                 multiplicity, opts.keep_vectors);
}

SpectralResult neg_trace(const OperatorHandle& op, int multiplicity,
                         const NegTraceOptions& opts) {
  SpectralResult r = neg_trace_partial(op, multiplicity, opts);
  if (!r.converged) {
    std::ostringstream diag;
    diag << "count=" << r.count << " partial_trace=" << r.neg_trace
         << " residual_bound=" << r.residual_bound
         << " iterations=" << r.iterations;
    throw NumericalError("neg_trace: eigensolver did not certify", diag.str());
  }
  return r;
}

double weyl_estimate(const ScalarField& v, double h, int multiplicity) {
  if (!(h > 0.0)) throw InputError("weyl_estimate: h must be positive");
  v.validate();
  const BoxGrid& g = *v.grid;
  const auto& n = g.n();
  double s = 0.0;
  for (std::size_t idx = 0; idx < g.node_count(); ++idx) {
    const double x = v.values[idx];
    if (!(x > 0.0)) continue;
    // Domain nodes plus the box wall, with trapezoid weights on the wall.
    const auto c = g.coords(idx);
    bool wall = false;
    for (int d = 0; d < 3; ++d) wall |= c[d] == 0 || c[d] == n[d] - 1;
    if (!wall && !g.in_domain(idx)) continue;
    double w = 1.0;
    for (int d = 0; d < 3; ++d) {
      if (c[d] == 0 || c[d] == n[d] - 1) w *= 0.5;
    }
    s += w * x * x * std::sqrt(x);
  }
  return -0.5 * multiplicity * kWeylConstant * s * g.cell_volume() /
         (h * h * h);
}

double semiclassical_error_bound(double h, double k, double vol, double c) {
  if (!(h > 0.0) || !(k > 0.0) || !(vol > 0.0) || !(c > 0.0)) {
    throw InputError("semiclassical_error_bound: inputs must be positive");
  }
  const double s = std::sqrt(h * k * std::sqrt(k));
  return c * std::pow(k, 2.5) * vol / (h * h * h) * s * (1.0 + s);
}

}  // namespace tfpauli
