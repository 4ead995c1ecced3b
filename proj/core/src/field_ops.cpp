// Copyright 2026 The tfpauli Authors
// SPDX-License-Identifier: Apache-2.0

#include "tfpauli/field_ops.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <random>

#include <fftw3.h>

#include "tfpauli/errors.hpp"

namespace tfpauli {

namespace {

using cplx = std::complex<double>;

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// In-place 3D transform of a field laid out as idx = i + nx (j + ny k).
// sign = FFTW_FORWARD or FFTW_BACKWARD; the backward transform is normalised.
void fft3d(const BoxGrid& g, std::vector<cplx>& data, int sign) {
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan = fftw_plan_dft_3d(g.n()[2], g.n()[1], g.n()[0], ptr, ptr, sign,
                            FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  if (sign == FFTW_BACKWARD) {
    const double inv = 1.0 / static_cast<double>(data.size());
    for (auto& v : data) v *= inv;
  }
}

int signed_mode(int idx, int n) { return idx <= n / 2 ? idx : idx - n; }

// Forward-difference symbol (e^{2 pi i m / n} - 1) / h for each axis.
struct Symbols {
  std::array<std::vector<cplx>, 3> f;
  explicit Symbols(const BoxGrid& g) {
    for (int d = 0; d < 3; ++d) {
      const int n = g.n()[d];
      f[d].resize(n);
      for (int m = 0; m < n; ++m) {
        const double theta = 2.0 * std::numbers::pi * m / n;
        f[d][m] = (std::polar(1.0, theta) - 1.0) / g.spacing()[d];
      }
    }
  }
};

template <typename Fn>
void for_each_mode(const BoxGrid& g, Fn&& fn) {
  const auto& n = g.n();
  std::size_t idx = 0;
  for (int k = 0; k < n[2]; ++k) {
    for (int j = 0; j < n[1]; ++j) {
      for (int i = 0; i < n[0]; ++i, ++idx) fn(idx, i, j, k);
    }
  }
}

std::array<std::vector<cplx>, 3> to_fourier(const VectorPotential& a) {
  std::array<std::vector<cplx>, 3> hat;
  for (int d = 0; d < 3; ++d) {
    hat[d].assign(a.components[d].begin(), a.components[d].end());
    fft3d(*a.grid, hat[d], FFTW_FORWARD);
  }
  return hat;
}

VectorPotential from_fourier(GridPtr grid,
                             std::array<std::vector<cplx>, 3>& hat) {
  VectorPotential out = VectorPotential::zeros(grid);
  for (int d = 0; d < 3; ++d) {
    fft3d(*grid, hat[d], FFTW_BACKWARD);
    for (std::size_t i = 0; i < hat[d].size(); ++i) {
      out.components[d][i] = hat[d][i].real();
    }
  }
  return out;
}

void require(const VectorPotential& a, const char* what) {
  try {
    a.validate();
  } catch (const InputError& e) {
    throw InputError(std::string(what) + ": " + e.what());
  }
}

// Weight of a sample in the open-boundary sums: a full cell along the
// differenced axes, trapezoid along the rest; zero where a needed edge
// does not exist inside the box.
double open_weight(const BoxGrid& g, const std::array<int, 3>& c,
                   const std::array<bool, 3>& differenced) {
  double w = g.cell_volume();
  for (int d = 0; d < 3; ++d) {
    const int n = g.n()[d];
    if (differenced[d]) {
      if (c[d] > n - 2) return 0.0;
    } else if (c[d] == 0 || c[d] == n - 1) {
      w *= 0.5;
    }
  }
  return w;
}

// Plaquette orientation: component c is the (p, q) plaquette, B_c =
// d_p A_q - d_q A_p with (c, p, q) cyclic.
constexpr int kP[3] = {1, 2, 0};
constexpr int kQ[3] = {2, 0, 1};

std::vector<double> face_weights(const BoxGrid& g, FieldBoundary b, int c) {
  std::vector<double> w(g.node_count(), g.cell_volume());
  if (b == FieldBoundary::periodic) return w;
  std::array<bool, 3> diff{false, false, false};
  diff[kP[c]] = diff[kQ[c]] = true;
  for (std::size_t idx = 0; idx < w.size(); ++idx) {
    w[idx] = open_weight(g, g.coords(idx), diff);
  }
  return w;
}

}  // namespace

FaceField curl_faces(const VectorPotential& a) {
  require(a, "curl_faces");
  const BoxGrid& g = *a.grid;
  FaceField f;
  for (int c = 0; c < 3; ++c) {
    const int p = kP[c], q = kQ[c];
    const double hp = g.spacing()[p], hq = g.spacing()[q];
    const auto& Aq = a.components[q];
    const auto& Ap = a.components[p];
    f[c].resize(g.node_count());
    for (std::size_t idx = 0; idx < g.node_count(); ++idx) {
      const std::size_t np = g.wrap_neighbor(idx, p, +1);
      const std::size_t nq = g.wrap_neighbor(idx, q, +1);
      f[c][idx] = (Aq[np] - Aq[idx]) / hp - (Ap[nq] - Ap[idx]) / hq;
    }
  }
  return f;
}

FaceField curl_nodes(const VectorPotential& a) {
  const FaceField faces = curl_faces(a);
  const BoxGrid& g = *a.grid;
  FaceField b;
  for (int c = 0; c < 3; ++c) {
    const int p = kP[c], q = kQ[c];
    b[c].resize(g.node_count());
    for (std::size_t idx = 0; idx < g.node_count(); ++idx) {
      const std::size_t mp = g.wrap_neighbor(idx, p, -1);
      const std::size_t mq = g.wrap_neighbor(idx, q, -1);
      const std::size_t mpq = g.wrap_neighbor(mp, q, -1);
      b[c][idx] =
          0.25 * (faces[c][idx] + faces[c][mp] + faces[c][mq] + faces[c][mpq]);
    }
  }
  return b;
}

double boundary_field_fraction(const VectorPotential& a) {
  const FaceField faces = curl_faces(a);
  const BoxGrid& g = *a.grid;
  double edge = 0.0, total = 0.0;
  for (int c = 0; c < 3; ++c) {
    for (std::size_t idx = 0; idx < g.node_count(); ++idx) {
      const double b2 = faces[c][idx] * faces[c][idx];
      total += b2;
      const auto ijk = g.coords(idx);
      // The plaquette spans ijk to ijk + 1 along the two axes other than c.
      bool outer = false;
      for (int d = 0; d < 3; ++d) {
        const int hi = d == c ? ijk[d] : ijk[d] + 1;
        if (ijk[d] == 0 || hi >= g.n()[d] - 1) outer = true;
      }
      if (outer) edge += b2;
    }
  }
  return total > 0.0 ? edge / total : 0.0;
}

namespace {

// Transpose of curl_faces applied to a face field.
VectorPotential curl_faces_adjoint(GridPtr grid, const FaceField& f) {
  const BoxGrid& g = *grid;
  VectorPotential out = VectorPotential::zeros(grid);
  out.div_free = false;
  for (int c = 0; c < 3; ++c) {
    const int p = kP[c], q = kQ[c];
    const double hp = g.spacing()[p], hq = g.spacing()[q];
    auto& Aq = out.components[q];
    auto& Ap = out.components[p];
    for (std::size_t idx = 0; idx < g.node_count(); ++idx) {
      const double v = f[c][idx];
      if (v == 0.0) continue;
      const std::size_t np = g.wrap_neighbor(idx, p, +1);
      const std::size_t nq = g.wrap_neighbor(idx, q, +1);
      Aq[np] += v / hp;
      Aq[idx] -= v / hp;
      Ap[nq] -= v / hq;
      Ap[idx] += v / hq;
    }
  }
  return out;
}

}  // namespace

VectorPotential curl_nodes_adjoint(GridPtr grid, const FaceField& node_b) {
  const BoxGrid& g = *grid;
  FaceField faces;
  for (int c = 0; c < 3; ++c) {
    const int p = kP[c], q = kQ[c];
    faces[c].assign(g.node_count(), 0.0);
    for (std::size_t idx = 0; idx < g.node_count(); ++idx) {
      const double v = 0.25 * node_b[c][idx];
      if (v == 0.0) continue;
      const std::size_t mp = g.wrap_neighbor(idx, p, -1);
      const std::size_t mq = g.wrap_neighbor(idx, q, -1);
      const std::size_t mpq = g.wrap_neighbor(mp, q, -1);
      faces[c][idx] += v;
      faces[c][mp] += v;
      faces[c][mq] += v;
      faces[c][mpq] += v;
    }
  }
  return curl_faces_adjoint(std::move(grid), faces);
}

FieldEnergy field_energy(const VectorPotential& a) {
  require(a, "field_energy");
  const BoxGrid& g = *a.grid;
  FieldEnergy e;

  const FaceField faces = curl_faces(a);
  for (int c = 0; c < 3; ++c) {
    const auto w = face_weights(g, a.boundary, c);
    for (std::size_t idx = 0; idx < g.node_count(); ++idx) {
      e.b_energy += w[idx] * faces[c][idx] * faces[c][idx];
    }
  }

  for (int d = 0; d < 3; ++d) {        // derivative axis
    for (int comp = 0; comp < 3; ++comp) {  // component
      std::array<bool, 3> diff{false, false, false};
      diff[d] = diff[comp] = true;
      const auto& A = a.components[comp];
      const double h = g.spacing()[d];
      for (std::size_t idx = 0; idx < g.node_count(); ++idx) {
        const double w = a.boundary == FieldBoundary::periodic
                             ? g.cell_volume()
                             : open_weight(g, g.coords(idx), diff);
        if (w == 0.0) continue;
        const double dA = (A[g.wrap_neighbor(idx, d, +1)] - A[idx]) / h;
        e.grad_energy += w * dA * dA;
      }
    }
  }
  return e;
}

VectorPotential b_energy_gradient(const VectorPotential& a) {
  require(a, "b_energy_gradient");
  const BoxGrid& g = *a.grid;
  FaceField faces = curl_faces(a);
  for (int c = 0; c < 3; ++c) {
    const auto w = face_weights(g, a.boundary, c);
    for (std::size_t idx = 0; idx < g.node_count(); ++idx) {
      faces[c][idx] *= 2.0 * w[idx] / g.cell_volume();
    }
  }
  VectorPotential out = curl_faces_adjoint(a.grid, faces);
  out.boundary = a.boundary;
  return out;
}

std::vector<double> divergence(const VectorPotential& a) {
  require(a, "divergence");
  const BoxGrid& g = *a.grid;
  std::vector<double> div(g.node_count(), 0.0);
  for (int d = 0; d < 3; ++d) {
    const auto& A = a.components[d];
    const double h = g.spacing()[d];
    for (std::size_t idx = 0; idx < g.node_count(); ++idx) {
      div[idx] += (A[idx] - A[g.wrap_neighbor(idx, d, -1)]) / h;
    }
  }
  return div;
}

double max_divergence(const VectorPotential& a) {
  double m = 0.0;
  for (double v : divergence(a)) m = std::max(m, std::abs(v));
  return m;
}

VectorPotential grid_gradient(GridPtr grid, const std::vector<double>& phi) {
  if (!grid || phi.size() != grid->node_count()) {
    throw InputError("grid_gradient: scalar does not match grid");
  }
  VectorPotential out = VectorPotential::zeros(grid);
  out.div_free = false;
  for (int d = 0; d < 3; ++d) {
    const double h = grid->spacing()[d];
    for (std::size_t idx = 0; idx < grid->node_count(); ++idx) {
      out.components[d][idx] = (phi[grid->wrap_neighbor(idx, d, +1)] - phi[idx]) / h;
    }
  }
  return out;
}

VectorPotential helmholtz_project(const VectorPotential& a) {
  require(a, "helmholtz_project");
  const BoxGrid& g = *a.grid;
  const Symbols sym(g);
  auto hat = to_fourier(a);
  for_each_mode(g, [&](std::size_t idx, int i, int j, int k) {
    const cplx f[3] = {sym.f[0][i], sym.f[1][j], sym.f[2][k]};
    const double norm2 = std::norm(f[0]) + std::norm(f[1]) + std::norm(f[2]);
    if (norm2 == 0.0) return;
    cplx s = 0.0;
    for (int d = 0; d < 3; ++d) s += std::conj(f[d]) * hat[d][idx];
    for (int d = 0; d < 3; ++d) hat[d][idx] -= f[d] * s / norm2;
  });
  VectorPotential out = from_fourier(a.grid, hat);
  out.div_free = true;
  out.boundary = FieldBoundary::periodic;
  return out;
}

VectorPotential inverse_field_hessian(const VectorPotential& a, double lambda) {
  require(a, "inverse_field_hessian");
  if (!(lambda > 0.0)) throw InputError("inverse_field_hessian: lambda <= 0");
  const BoxGrid& g = *a.grid;
  const Symbols sym(g);
  auto hat = to_fourier(a);
  for_each_mode(g, [&](std::size_t idx, int i, int j, int k) {
    const double norm2 = std::norm(sym.f[0][i]) + std::norm(sym.f[1][j]) +
                         std::norm(sym.f[2][k]);
    const double m = norm2 == 0.0 ? 0.0 : 1.0 / (2.0 * lambda * norm2);
    for (int d = 0; d < 3; ++d) hat[d][idx] *= m;
  });
  VectorPotential out = from_fourier(a.grid, hat);
  out.div_free = a.div_free;
  out.boundary = FieldBoundary::periodic;
  return out;
}

VectorPotential band_limit(const VectorPotential& a, int max_mode) {
  require(a, "band_limit");
  const BoxGrid& g = *a.grid;
  auto hat = to_fourier(a);
  for_each_mode(g, [&](std::size_t idx, int i, int j, int k) {
    if (std::abs(signed_mode(i, g.n()[0])) > max_mode ||
        std::abs(signed_mode(j, g.n()[1])) > max_mode ||
        std::abs(signed_mode(k, g.n()[2])) > max_mode) {
      for (int d = 0; d < 3; ++d) hat[d][idx] = 0.0;
    }
  });
  VectorPotential out = from_fourier(a.grid, hat);
  out.div_free = a.div_free;
  out.boundary = FieldBoundary::periodic;
  return out;
}

namespace {

std::vector<double> random_band(const BoxGrid& g, int max_mode,
                                std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<cplx> hat(g.node_count(), 0.0);
  for_each_mode(g, [&](std::size_t idx, int i, int j, int k) {
    const int mi = signed_mode(i, g.n()[0]);
    const int mj = signed_mode(j, g.n()[1]);
    const int mk = signed_mode(k, g.n()[2]);
    if (std::abs(mi) > max_mode || std::abs(mj) > max_mode ||
        std::abs(mk) > max_mode || (mi == 0 && mj == 0 && mk == 0)) {
      return;
    }
    const double re = normal(rng);
    const double im = normal(rng);
    hat[idx] = cplx(re, im);
  });
  fft3d(g, hat, FFTW_BACKWARD);
  std::vector<double> out(hat.size());
  for (std::size_t i = 0; i < hat.size(); ++i) out[i] = hat[i].real();
  return out;
}

}  // namespace

VectorPotential random_band_limited_field(GridPtr grid, int max_mode,
                                          double amplitude,
                                          std::uint64_t seed) {
  if (!grid) throw InputError("random_band_limited_field: null grid");
  if (max_mode < 1) throw InputError("random_band_limited_field: max_mode < 1");
  std::mt19937_64 rng(seed);
  VectorPotential a = VectorPotential::zeros(grid);
  for (int d = 0; d < 3; ++d) a.components[d] = random_band(*grid, max_mode, rng);
  a = helmholtz_project(a);
  const double m = a.max_abs();
  if (m > 0.0) {
    for (auto& c : a.components) {
      for (auto& v : c) v *= amplitude / m;
    }
  }
  return a;
}

std::vector<double> random_smooth_scalar(const BoxGrid& grid, int max_mode,
                                         double amplitude, std::uint64_t seed) {
  if (max_mode < 1) throw InputError("random_smooth_scalar: max_mode < 1");
  std::mt19937_64 rng(seed);
  auto phi = random_band(grid, max_mode, rng);
  double m = 0.0;
  for (double v : phi) m = std::max(m, std::abs(v));
  if (m > 0.0) {
    for (auto& v : phi) v *= amplitude / m;
  }
  return phi;
}

}  // namespace tfpauli
