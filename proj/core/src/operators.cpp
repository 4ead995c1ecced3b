// Copyright 2026 The tfpauli Authors
// SPDX-License-Identifier: Apache-2.0

#include "tfpauli/operators.hpp"

#include <algorithm>
#include <cmath>

#include "tfpauli/errors.hpp"
#include "tfpauli/field_ops.hpp"

namespace tfpauli {

namespace {

constexpr int kAxis[6] = {0, 0, 1, 1, 2, 2};
constexpr int kStep[6] = {+1, -1, +1, -1, +1, -1};

inline double conj_if(double v) { return v; }
inline cplx conj_if(cplx v) { return std::conj(v); }

}  // namespace

const char* to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::dirichlet: return "dirichlet";
    case OperatorKind::magnetic_schrodinger: return "magnetic_schrodinger";
    case OperatorKind::pauli: return "pauli";
  }
  return "unknown";
}

OperatorHandle::OperatorHandle(OperatorKind kind, double h, GridPtr grid,
                               ScalarField v)
    : kind_(kind), h_(h), grid_(std::move(grid)), potential_(std::move(v)) {
  if (!(h_ > 0.0)) throw InputError("operator: h must be positive");
  if (!grid_) throw InputError("operator: null grid");
  potential_.validate();
  if (!same_grid(potential_.grid, grid_)) {
    throw InputError("operator: potential lives on a different grid");
  }
  const BoxGrid& g = *grid_;
  if (g.active_count() == 0) throw InputError("operator: empty domain mask");

  std::vector<std::int32_t> site(g.node_count(), -1);
  active_.reserve(g.active_count());
  for (std::size_t idx = 0; idx < g.node_count(); ++idx) {
    if (g.in_domain(idx)) {
      site[idx] = static_cast<std::int32_t>(active_.size());
      active_.push_back(idx);
    }
  }

  double diag_kinetic = 0.0;
  for (int d = 0; d < 3; ++d) {
    hop_[d] = h_ * h_ / (g.spacing()[d] * g.spacing()[d]);
    diag_kinetic += 2.0 * hop_[d];
  }
  neighbors_.resize(active_.size());
  diagonal_.resize(active_.size());
  phases_.assign(active_.size(), {cplx(1.0), cplx(1.0), cplx(1.0), cplx(1.0),
                                  cplx(1.0), cplx(1.0)});
  for (std::size_t a = 0; a < active_.size(); ++a) {
    const std::size_t idx = active_[a];
    // Active nodes are interior, so the wrapped neighbour is the true one.
    for (int s = 0; s < 6; ++s) {
      neighbors_[a][s] = site[g.wrap_neighbor(idx, kAxis[s], kStep[s])];
    }
    diagonal_[a] = diag_kinetic - potential_.values[idx];
  }
}

OperatorHandle build_dirichlet_hamiltonian(double h, const ScalarField& v,
                                           GridPtr grid) {
  return OperatorHandle(OperatorKind::dirichlet, h, std::move(grid), v);
}

OperatorHandle build_magnetic_hamiltonian(double h, const VectorPotential& a,
                                          const ScalarField& v, GridPtr grid,
                                          bool pauli) {
  a.validate();
  if (!same_grid(a.grid, grid)) {
    throw InputError("build_magnetic_hamiltonian: A lives on a different grid");
  }
  OperatorHandle op(pauli ? OperatorKind::pauli
                          : OperatorKind::magnetic_schrodinger,
                    h, std::move(grid), v);
  op.vector_potential_ = a;
  const BoxGrid& g = *op.grid_;
  for (std::size_t s = 0; s < op.active_.size(); ++s) {
    const std::size_t idx = op.active_[s];
    for (int d = 0; d < 3; ++d) {
      const double dx = g.spacing()[d];
      const double fwd = a.components[d][idx] * dx / h;
      const double bwd = a.components[d][g.wrap_neighbor(idx, d, -1)] * dx / h;
      op.phases_[s][2 * d] = std::polar(1.0, fwd);
      op.phases_[s][2 * d + 1] = std::polar(1.0, -bwd);
    }
  }
  if (pauli) {
    const FaceField b = curl_nodes(a);
    op.zeeman_.resize(op.active_.size());
    for (std::size_t s = 0; s < op.active_.size(); ++s) {
      const std::size_t idx = op.active_[s];
      op.zeeman_[s] = {cplx(h * b[2][idx], 0.0),
                       cplx(h * b[0][idx], -h * b[1][idx])};
    }
  }
  return op;
}

template <typename Scalar>
void OperatorHandle::apply_column(const Scalar* x, Scalar* y) const {
  const std::size_t n = active_.size();
  const bool magnetic = kind_ != OperatorKind::dirichlet;
  if (kind_ != OperatorKind::pauli) {
    for (std::size_t a = 0; a < n; ++a) {
      Scalar acc = diagonal_[a] * x[a];
      const auto& nb = neighbors_[a];
      for (int s = 0; s < 6; ++s) {
        if (nb[s] < 0) continue;
        if constexpr (std::is_same_v<Scalar, cplx>) {
          acc -= hop_[kAxis[s]] * (magnetic ? phases_[a][s] : cplx(1.0)) *
                 x[nb[s]];
        } else {
          acc -= hop_[kAxis[s]] * x[nb[s]];
        }
      }
      y[a] = acc;
    }
    return;
  }
  if constexpr (std::is_same_v<Scalar, cplx>) {
    for (std::size_t a = 0; a < n; ++a) {
      const cplx up = x[2 * a], dn = x[2 * a + 1];
      const auto& z = zeeman_[a];
      // sigma.B = [[Bz, Bx - i By], [Bx + i By, -Bz]]
      cplx acc_up = diagonal_[a] * up + z[0] * up + z[1] * dn;
      cplx acc_dn = diagonal_[a] * dn + std::conj(z[1]) * up - z[0] * dn;
      const auto& nb = neighbors_[a];
      for (int s = 0; s < 6; ++s) {
        if (nb[s] < 0) continue;
        const cplx t = hop_[kAxis[s]] * phases_[a][s];
        acc_up -= t * x[2 * nb[s]];
        acc_dn -= t * x[2 * nb[s] + 1];
      }
      y[2 * a] = acc_up;
      y[2 * a + 1] = acc_dn;
    }
  }
}

void OperatorHandle::apply(const Eigen::Ref<const Eigen::MatrixXd>& x,
                           Eigen::Ref<Eigen::MatrixXd> y) const {
  if (!is_real()) {
    throw InputError("OperatorHandle::apply: real vectors need a real operator");
  }
  if (x.rows() != dim() || y.rows() != dim() || x.cols() != y.cols()) {
    throw InputError("OperatorHandle::apply: shape mismatch");
  }
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    apply_column<double>(x.col(c).data(), y.col(c).data());
  }
}

void OperatorHandle::apply(const Eigen::Ref<const Eigen::MatrixXcd>& x,
                           Eigen::Ref<Eigen::MatrixXcd> y) const {
  if (x.rows() != dim() || y.rows() != dim() || x.cols() != y.cols()) {
    throw InputError("OperatorHandle::apply: shape mismatch");
  }
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    apply_column<cplx>(x.col(c).data(), y.col(c).data());
  }
}

double OperatorHandle::spectrum_upper_bound() const {
  double hi = -1e300;
  for (std::size_t a = 0; a < active_.size(); ++a) {
    double off = 0.0;
    for (int s = 0; s < 6; ++s) {
      if (neighbors_[a][s] >= 0) off += hop_[kAxis[s]];
    }
    double z = 0.0;
    if (kind_ == OperatorKind::pauli) {
      z = std::abs(zeeman_[a][0]) + std::abs(zeeman_[a][1]);
    }
    hi = std::max(hi, diagonal_[a] + off + z);
  }
  return hi;
}

double OperatorHandle::spectrum_lower_bound() const {
  double lo = 1e300;
  for (std::size_t a = 0; a < active_.size(); ++a) {
    double off = 0.0;
    for (int s = 0; s < 6; ++s) {
      if (neighbors_[a][s] >= 0) off += hop_[kAxis[s]];
    }
    double z = 0.0;
    if (kind_ == OperatorKind::pauli) {
      z = std::abs(zeeman_[a][0]) + std::abs(zeeman_[a][1]);
    }
    lo = std::min(lo, diagonal_[a] - off - z);
  }
  return lo;
}

Eigen::MatrixXd OperatorHandle::dense_real() const {
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(dim(), dim());
  Eigen::MatrixXd out(dim(), dim());
  apply(id, out);
  return out;
}

Eigen::MatrixXcd OperatorHandle::dense_complex() const {
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim(), dim());
  Eigen::MatrixXcd out(dim(), dim());
  apply(id, out);
  return out;
}

VectorPotential OperatorHandle::field_derivative(
    const Eigen::MatrixXcd& vectors, const std::vector<double>& weights) const {
  if (vectors.rows() != dim() ||
      static_cast<std::size_t>(vectors.cols()) != weights.size()) {
    throw InputError("field_derivative: shape mismatch");
  }
  VectorPotential out = VectorPotential::zeros(grid_);
  out.div_free = false;
  if (kind_ == OperatorKind::dirichlet) return out;

  const BoxGrid& g = *grid_;
  const int ns = spin_components();
  FaceField spin;
  if (kind_ == OperatorKind::pauli) {
    for (auto& c : spin) c.assign(g.node_count(), 0.0);
  }
  for (Eigen::Index n = 0; n < vectors.cols(); ++n) {
    const double w = weights[static_cast<std::size_t>(n)];
    if (w == 0.0) continue;
    const cplx* psi = vectors.col(n).data();
    for (std::size_t a = 0; a < active_.size(); ++a) {
      const std::size_t idx = active_[a];
      for (int d = 0; d < 3; ++d) {
        const std::int32_t b = neighbors_[a][2 * d];
        if (b < 0) continue;
        cplx overlap = 0.0;
        for (int s = 0; s < ns; ++s) {
          overlap += std::conj(psi[ns * a + s]) * psi[ns * b + s];
        }
        // d/dA_e <psi, H psi> = (2 h / dx) Im(e^{i theta} conj(psi_a) psi_b)
        out.components[d][idx] += w * 2.0 * h_ / g.spacing()[d] *
                                  std::imag(phases_[a][2 * d] * overlap);
      }
      if (ns == 2) {
        const cplx up = psi[2 * a], dn = psi[2 * a + 1];
        // spin density psi^dagger sigma psi
        spin[0][idx] += w * 2.0 * std::real(std::conj(up) * dn);
        spin[1][idx] += w * 2.0 * std::imag(std::conj(up) * dn);
        spin[2][idx] += w * (std::norm(up) - std::norm(dn));
      }
    }
  }
  if (ns == 2) {
    for (auto& c : spin) {
      for (auto& v : c) v *= h_;
    }
    const VectorPotential z = curl_nodes_adjoint(grid_, spin);
    for (int d = 0; d < 3; ++d) {
      for (std::size_t i = 0; i < g.node_count(); ++i) {
        out.components[d][i] += z.components[d][i];
      }
    }
  }
  return out;
}

double OperatorHandle::kinetic_expectation(const Eigen::VectorXcd& u) const {
  if (u.size() != dim()) throw InputError("kinetic_expectation: size mismatch");
  Eigen::VectorXcd hu(dim());
  apply(u, hu);
  const int ns = spin_components();
  double pot = 0.0;
  for (std::size_t a = 0; a < active_.size(); ++a) {
    for (int s = 0; s < ns; ++s) {
      pot += potential_.values[active_[a]] * std::norm(u[ns * a + s]);
    }
  }
  // <u, H u> + <u, V u>
  return std::real(u.dot(hu)) + pot;
}

double OperatorHandle::squared_form_expectation(const Eigen::VectorXcd& u) const {
  if (kind_ != OperatorKind::pauli) {
    throw InputError("squared_form_expectation: needs the Pauli kind");
  }
  if (u.size() != dim()) {
    throw InputError("squared_form_expectation: size mismatch");
  }
  const BoxGrid& g = *grid_;
  const VectorPotential& a = *vector_potential_;
  std::vector<std::int32_t> site(g.node_count(), -1);
  for (std::size_t s = 0; s < active_.size(); ++s) {
    site[active_[s]] = static_cast<std::int32_t>(s);
  }
  // Sum over every node, masked ones included: next to the wall the
  // differences are non-zero even though u vanishes there.
  double total = 0.0;
  const cplx I(0.0, 1.0);
  for (std::size_t idx = 0; idx < g.node_count(); ++idx) {
    std::array<std::array<cplx, 2>, 3> pi{};  // (h p + A)_d u at the node
    bool any = false;
    for (int d = 0; d < 3; ++d) {
      const double dx = g.spacing()[d];
      const std::size_t fwd = g.wrap_neighbor(idx, d, 1);
      const std::size_t bwd = g.wrap_neighbor(idx, d, -1);
      const std::int32_t sf = site[fwd], sb = site[bwd];
      if (sf < 0 && sb < 0) continue;
      any = true;
      const cplx pf = std::polar(1.0, a.components[d][idx] * dx / h_);
      const cplx pb = std::polar(1.0, -a.components[d][bwd] * dx / h_);
      for (int s = 0; s < 2; ++s) {
        const cplx uf = sf < 0 ? cplx(0.0) : pf * u[2 * sf + s];
        const cplx ub = sb < 0 ? cplx(0.0) : pb * u[2 * sb + s];
        pi[d][s] = -I * h_ * (uf - ub) / (2.0 * dx);
      }
    }
    if (!any) continue;
    // sigma_x pi_x + sigma_y pi_y + sigma_z pi_z acting on the spinor.
    const cplx w_up = pi[0][1] - I * pi[1][1] + pi[2][0];
    const cplx w_dn = pi[0][0] + I * pi[1][0] - pi[2][1];
    total += std::norm(w_up) + std::norm(w_dn);
  }
  return total;
}

}  // namespace tfpauli
