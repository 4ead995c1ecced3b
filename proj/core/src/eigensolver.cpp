// Copyright 2026 The tfpauli Authors
// SPDX-License-Identifier: Apache-2.0

#include "tfpauli/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>

#include "tfpauli/errors.hpp"

namespace tfpauli {

namespace {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
Scalar draw(std::normal_distribution<double>& nd, std::mt19937_64& rng) {
  if constexpr (std::is_same_v<Scalar, double>) {
    return nd(rng);
  } else {
    const double re = nd(rng);
    return Scalar(re, nd(rng));
  }
}

template <typename Scalar>
void fill_random(Mat<Scalar>& x, Eigen::Index from, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  for (Eigen::Index c = from; c < x.cols(); ++c) {
    for (Eigen::Index r = 0; r < x.rows(); ++r) x(r, c) = draw<Scalar>(nd, rng);
  }
}

template <typename Scalar>
void orthonormalize(Mat<Scalar>& x) {
  Eigen::HouseholderQR<Mat<Scalar>> qr(x);
  Mat<Scalar> q = Mat<Scalar>::Identity(x.rows(), x.cols());
  qr.householderQ().applyThisOnTheLeft(q);
  x = std::move(q);
}

template <typename Scalar>
struct Ritz {
  Eigen::VectorXd theta;
  Eigen::VectorXd res;
};

// Rotates x onto Ritz vectors of op and returns values and residual norms.
template <typename Scalar>
Ritz<Scalar> rayleigh_ritz(const OperatorHandle& op, Mat<Scalar>& x) {
  Mat<Scalar> hx(x.rows(), x.cols());
  op.apply(x, hx);
  Mat<Scalar> s = x.adjoint() * hx;
  s = (0.5 * (s + s.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> es(s);
  if (es.info() != Eigen::Success) {
    throw NumericalError("eigensolver: Rayleigh-Ritz step failed", {});
  }
  x = (x * es.eigenvectors()).eval();
  hx = (hx * es.eigenvectors()).eval();
  Ritz<Scalar> out;
  out.theta = es.eigenvalues();
  out.res.resize(x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    out.res[c] = (hx.col(c) - out.theta[c] * x.col(c)).norm();
  }
  return out;
}

// Chebyshev filter damping [a, b] relative to values below a; `low`
// estimates the bottom of the spectrum and fixes the scaling.
template <typename Scalar>
void chebyshev_filter(const OperatorHandle& op, Mat<Scalar>& x, int degree,
                      double low, double a, double b) {
  const double e = 0.5 * (b - a);
  const double c = 0.5 * (b + a);
  double sigma = e / (low - c);
  const double sigma1 = sigma;
  Mat<Scalar> y(x.rows(), x.cols());
  Mat<Scalar> t(x.rows(), x.cols());
  op.apply(x, y);
  y = (y - c * x) * (sigma1 / e);
  for (int i = 2; i <= degree; ++i) {
    const double sigma2 = 1.0 / (2.0 / sigma1 - sigma);
    op.apply(y, t);
    t = (t - c * y) * (2.0 * sigma2 / e) - (sigma * sigma2) * x;
    x.swap(y);
    y.swap(t);
    sigma = sigma2;
  }
  x.swap(y);
}

template <typename Scalar>
Mat<Scalar> dense_matrix(const OperatorHandle& op) {
  if constexpr (std::is_same_v<Scalar, double>) {
    return op.dense_real();
  } else {
    return op.dense_complex();
  }
}

// `wanted` < 0 selects the negative spectrum, otherwise the lowest `wanted`.
template <typename Scalar>
EigenResult<Scalar> solve_dense(const OperatorHandle& op, int wanted) {
  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> es(dense_matrix<Scalar>(op));
  if (es.info() != Eigen::Success) {
    throw NumericalError("eigensolver: dense solve failed", {});
  }
  const Eigen::VectorXd& ev = es.eigenvalues();
  Eigen::Index k = 0;
  if (wanted < 0) {
    while (k < ev.size() && ev[k] < 0.0) ++k;
  } else {
    k = std::min<Eigen::Index>(wanted, ev.size());
  }
  EigenResult<Scalar> out;
  out.values = ev.head(k);
  out.vectors = es.eigenvectors().leftCols(k);
  out.residuals = Eigen::VectorXd::Zero(k);
  out.next_value =
      k < ev.size() ? ev[k] : std::numeric_limits<double>::infinity();
  out.next_residual = 0.0;
  out.converged = true;
  out.dense = true;
  return out;
}

template <typename Scalar>
EigenResult<Scalar> chefsi(const OperatorHandle& op, int wanted,
                           const EigenOptions& opts,
                           const Mat<Scalar>* warm_start) {
  if constexpr (std::is_same_v<Scalar, double>) {
    if (!op.is_real()) {
      throw InputError("eigensolver: complex operator needs complex vectors");
    }
  }
  if (!(opts.tol > 0.0)) throw InputError("eigensolver: tol must be > 0");
  const Eigen::Index n = op.dim();
  if (n <= opts.dense_threshold) return solve_dense<Scalar>(op, wanted);

  const double hi = op.spectrum_upper_bound();
  const double lo = op.spectrum_lower_bound();
  const double tol_abs = opts.tol * std::max({std::abs(hi), std::abs(lo), 1.0});
  const bool negative_mode = wanted < 0;

  auto guard = [](Eigen::Index m) {
    return std::max<Eigen::Index>(6, m / 8);
  };
  Eigen::Index m = opts.block_size;
  if (m <= 0) {
    const double est = negative_mode ? weyl_count_estimate(op) : wanted;
    m = static_cast<Eigen::Index>(std::ceil(1.3 * est)) + 8;
  }
  if (!negative_mode) m = std::max<Eigen::Index>(m, wanted + guard(wanted));
  if (warm_start != nullptr && warm_start->rows() == n) {
    m = std::max(m, warm_start->cols());
  }
  m = std::min(m, n);

  std::mt19937_64 rng(opts.seed);
  Mat<Scalar> x(n, m);
  Eigen::Index filled = 0;
  if (warm_start != nullptr && warm_start->rows() == n) {
    filled = std::min(warm_start->cols(), m);
    x.leftCols(filled) = warm_start->leftCols(filled);
  }
  fill_random<Scalar>(x, filled, rng);
  orthonormalize<Scalar>(x);
  Ritz<Scalar> rz = rayleigh_ritz<Scalar>(op, x);

  EigenResult<Scalar> out;
  Eigen::Index k = 0;
  for (int it = 1; it <= opts.max_iters; ++it) {
    out.iterations = it;
    if (negative_mode) {
      k = 0;
      while (k < m && rz.theta[k] < 0.0) ++k;
      if (k + guard(m) > m && m < n) {
        const Eigen::Index grown = std::min<Eigen::Index>(
            n, std::max<Eigen::Index>(m + 8, (k * 13) / 10 + guard(k) + 8));
        Mat<Scalar> bigger(n, grown);
        bigger.leftCols(m) = x;
        fill_random<Scalar>(bigger, m, rng);
        x.swap(bigger);
        m = grown;
        orthonormalize<Scalar>(x);
        rz = rayleigh_ritz<Scalar>(op, x);
        continue;
      }
    } else {
      k = wanted;
    }

    bool done = true;
    for (Eigen::Index i = 0; i < k; ++i) {
      if (rz.res[i] > tol_abs) done = false;
    }
    if (negative_mode && k < m) {
      if (rz.res[k] > tol_abs || rz.theta[k] - rz.res[k] < 0.0) done = false;
    }
    if (done || m == n) {
      out.converged = done || m == n;
      break;
    }

    const double a = rz.theta[m - 1];
    const double target = rz.theta[std::min(k, m - 1)];
    if (!(a < hi)) {
      throw NumericalError("eigensolver: subspace reached the spectral top", {});
    }
    const double gamma = std::max((a - target) / (hi - a), 1e-12);
    const int degree =
        std::clamp(static_cast<int>(std::ceil(3.5 / std::sqrt(gamma))), 8, 400);
    chebyshev_filter<Scalar>(op, x, degree, lo, a, hi);
    orthonormalize<Scalar>(x);
    rz = rayleigh_ritz<Scalar>(op, x);
  }

  out.values = rz.theta.head(k);
  out.vectors = x.leftCols(k);
  out.residuals = rz.res.head(k);
  if (k < m) {
    out.next_value = rz.theta[k];
    out.next_residual = rz.res[k];
  } else {
    out.next_value = std::numeric_limits<double>::quiet_NaN();
    out.next_residual = std::numeric_limits<double>::quiet_NaN();
  }
  out.subspace = std::move(x);
  return out;
}

}  // namespace

double weyl_count_estimate(const OperatorHandle& op) {
  const BoxGrid& g = *op.grid();
  double s = 0.0;
  for (std::size_t idx : op.active_nodes()) {
    const double v = op.potential().values[idx];
    if (v > 0.0) s += v * std::sqrt(v);
  }
  const double h = op.h();
  return op.spin_components() * s * g.cell_volume() /
         (6.0 * M_PI * M_PI * h * h * h);
}

template <typename Scalar>
EigenResult<Scalar> negative_eigenpairs(
    const OperatorHandle& op, const EigenOptions& opts,
    const typename EigenResult<Scalar>::Matrix* warm_start) {
  return chefsi<Scalar>(op, -1, opts, warm_start);
}

template <typename Scalar>
EigenResult<Scalar> lowest_eigenpairs(
    const OperatorHandle& op, int k, const EigenOptions& opts,
    const typename EigenResult<Scalar>::Matrix* warm_start) {
  if (k < 1) throw InputError("lowest_eigenpairs: k must be >= 1");
  return chefsi<Scalar>(op, k, opts, warm_start);
}

template EigenResult<double> negative_eigenpairs<double>(
    const OperatorHandle&, const EigenOptions&, const Eigen::MatrixXd*);
template EigenResult<cplx> negative_eigenpairs<cplx>(
    const OperatorHandle&, const EigenOptions&, const Eigen::MatrixXcd*);
template EigenResult<double> lowest_eigenpairs<double>(
    const OperatorHandle&, int, const EigenOptions&, const Eigen::MatrixXd*);
template EigenResult<cplx> lowest_eigenpairs<cplx>(const OperatorHandle&, int,
                                                   const EigenOptions&,
                                                   const Eigen::MatrixXcd*);

}  // namespace tfpauli
