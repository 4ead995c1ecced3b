// Copyright 2026 The tfpauli Authors
// SPDX-License-Identifier: Apache-2.0

#include "tfpauli/grid.hpp"

#include <algorithm>
#include <cmath>

#include "tfpauli/errors.hpp"

namespace tfpauli {

BoxGrid::BoxGrid(Vec3 extent, std::array<int, 3> n)
    : BoxGrid(extent, n, [](const Vec3&) { return true; }) {}

BoxGrid::BoxGrid(Vec3 extent, std::array<int, 3> n,
                 const std::function<bool(const Vec3&)>& inside)
    : extent_(extent), n_(n) {
  for (int d = 0; d < 3; ++d) {
    if (!(extent_[d] > 0.0)) throw InputError("BoxGrid: extent must be > 0");
    if (n_[d] < 3) throw InputError("BoxGrid: need at least 3 nodes per axis");
    spacing_[d] = extent_[d] / static_cast<double>(n_[d] - 1);
  }
  init_mask(inside);
}

void BoxGrid::init_mask(const std::function<bool(const Vec3&)>& inside) {
  mask_.assign(static_cast<std::size_t>(n_[0]) * n_[1] * n_[2], 0);
  active_ = 0;
  for (int k = 1; k + 1 < n_[2]; ++k) {
    for (int j = 1; j + 1 < n_[1]; ++j) {
      for (int i = 1; i + 1 < n_[0]; ++i) {
        const std::size_t idx = index(i, j, k);
        if (inside(position(idx))) {
          mask_[idx] = 1;
          ++active_;
        }
      }
    }
  }
  if (active_ == 0) throw InputError("BoxGrid: empty domain mask");
}

std::shared_ptr<const BoxGrid> BoxGrid::cube(double side, int n) {
  return std::make_shared<const BoxGrid>(Vec3{side, side, side},
                                         std::array<int, 3>{n, n, n});
}

std::array<int, 3> BoxGrid::coords(std::size_t idx) const noexcept {
  const auto nx = static_cast<std::size_t>(n_[0]);
  const auto ny = static_cast<std::size_t>(n_[1]);
  return {static_cast<int>(idx % nx), static_cast<int>((idx / nx) % ny),
          static_cast<int>(idx / (nx * ny))};
}

Vec3 BoxGrid::position(std::size_t idx) const noexcept {
  const auto c = coords(idx);
  return {c[0] * spacing_[0], c[1] * spacing_[1], c[2] * spacing_[2]};
}

std::size_t BoxGrid::wrap_neighbor(std::size_t idx, int axis,
                                   int step) const noexcept {
  auto c = coords(idx);
  c[axis] = (c[axis] + step + n_[axis]) % n_[axis];
  return index(c[0], c[1], c[2]);
}

bool BoxGrid::operator==(const BoxGrid& other) const noexcept {
  return extent_ == other.extent_ && n_ == other.n_ && mask_ == other.mask_;
}

bool same_grid(const GridPtr& a, const GridPtr& b) noexcept {
  if (!a || !b) return false;
  return a == b || *a == *b;
}

ScalarField ScalarField::zeros(GridPtr grid) {
  return constant(std::move(grid), 0.0);
}

ScalarField ScalarField::constant(GridPtr grid, double value) {
  if (!grid) throw InputError("ScalarField: null grid");
  const std::size_t n = grid->node_count();
  return {std::move(grid), std::vector<double>(n, value)};
}

ScalarField ScalarField::sample(GridPtr grid,
                                const std::function<double(const Vec3&)>& f) {
  ScalarField out = zeros(std::move(grid));
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] = f(out.grid->position(i));
  }
  return out;
}

double ScalarField::sup_bound() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

void ScalarField::validate() const {
  if (!grid) throw InputError("ScalarField: null grid");
  if (values.size() != grid->node_count()) {
    throw InputError("ScalarField: sample count does not match grid");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw InputError("ScalarField: non-finite sample");
  }
}

VectorPotential VectorPotential::zeros(GridPtr grid) {
  if (!grid) throw InputError("VectorPotential: null grid");
  VectorPotential a;
  const std::size_t n = grid->node_count();
  for (auto& c : a.components) c.assign(n, 0.0);
  a.grid = std::move(grid);
  a.div_free = true;
  return a;
}

VectorPotential VectorPotential::sample(
    GridPtr grid, const std::function<Vec3(const Vec3&)>& f,
    FieldBoundary boundary) {
  VectorPotential a = zeros(grid);
  a.div_free = false;
  a.boundary = boundary;
  const Vec3& h = grid->spacing();
  for (std::size_t idx = 0; idx < grid->node_count(); ++idx) {
    const Vec3 p = grid->position(idx);
    for (int d = 0; d < 3; ++d) {
      Vec3 mid = p;
      mid[d] += 0.5 * h[d];
      a.components[d][idx] = f(mid)[d];
    }
  }
  return a;
}

double VectorPotential::max_abs() const {
  double m = 0.0;
  for (const auto& c : components) {
    for (double v : c) m = std::max(m, std::abs(v));
  }
  return m;
}

double VectorPotential::norm() const {
  double s = 0.0;
  for (const auto& c : components) {
    for (double v : c) s += v * v;
  }
  return std::sqrt(s);
}

void VectorPotential::validate() const {
  if (!grid) throw InputError("VectorPotential: null grid");
  for (const auto& c : components) {
    if (c.size() != grid->node_count()) {
      throw InputError("VectorPotential: component size does not match grid");
    }
    for (double v : c) {
      if (!std::isfinite(v)) {
        throw InputError("VectorPotential: non-finite component");
      }
    }
  }
}

double inner_product(const VectorPotential& a, const VectorPotential& b) {
  if (!same_grid(a.grid, b.grid)) {
    throw InputError("inner_product: vector potentials on different grids");
  }
  double s = 0.0;
  for (int d = 0; d < 3; ++d) {
    const auto& x = a.components[d];
    const auto& y = b.components[d];
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  }
  return s * a.grid->cell_volume();
}

VectorPotential axpy(const VectorPotential& a, double s,
                     const VectorPotential& b) {
  if (!same_grid(a.grid, b.grid)) {
    throw InputError("axpy: vector potentials on different grids");
  }
  VectorPotential out = a;
  out.div_free = false;
  for (int d = 0; d < 3; ++d) {
    for (std::size_t i = 0; i < out.components[d].size(); ++i) {
      out.components[d][i] += s * b.components[d][i];
    }
  }
  return out;
}

}  // namespace tfpauli
