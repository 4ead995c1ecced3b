// Copyright 2026 The tfpauli Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

namespace tfpauli {

using Vec3 = std::array<double, 3>;

/// Uniform 3D grid on [0, L_x] x [0, L_y] x [0, L_z].
///
/// Node (i, j, k) sits at (i dx, j dy, k dz) with d = L / (n - 1), so the box
/// faces carry nodes. The mask marks the Dirichlet domain; the outer layer of
/// nodes is never part of it. Linear index is i + n_x (j + n_y k).
class BoxGrid {
 public:
  /// Mask = every interior node.
  BoxGrid(Vec3 extent, std::array<int, 3> n);
  /// Mask given by `inside(x)`, intersected with the interior.
  BoxGrid(Vec3 extent, std::array<int, 3> n,
          const std::function<bool(const Vec3&)>& inside);

  static std::shared_ptr<const BoxGrid> cube(double side, int n);

  const Vec3& extent() const noexcept { return extent_; }
  const std::array<int, 3>& n() const noexcept { return n_; }
  const Vec3& spacing() const noexcept { return spacing_; }
  double cell_volume() const noexcept {
    return spacing_[0] * spacing_[1] * spacing_[2];
  }

  std::size_t node_count() const noexcept { return mask_.size(); }
  std::size_t active_count() const noexcept { return active_; }
  bool in_domain(std::size_t idx) const noexcept { return mask_[idx] != 0; }
  const std::vector<std::uint8_t>& mask() const noexcept { return mask_; }

  std::size_t index(int i, int j, int k) const noexcept {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(n_[0]) *
               (static_cast<std::size_t>(j) +
                static_cast<std::size_t>(n_[1]) * static_cast<std::size_t>(k));
  }
  std::array<int, 3> coords(std::size_t idx) const noexcept;
  Vec3 position(std::size_t idx) const noexcept;
  Vec3 center() const noexcept {
    return {0.5 * extent_[0], 0.5 * extent_[1], 0.5 * extent_[2]};
  }

  /// Neighbour index along `axis` with periodic wrap; `step` is +1 or -1.
  std::size_t wrap_neighbor(std::size_t idx, int axis, int step) const noexcept;

  bool operator==(const BoxGrid& other) const noexcept;

 private:
  void init_mask(const std::function<bool(const Vec3&)>& inside);

  Vec3 extent_{};
  std::array<int, 3> n_{};
  Vec3 spacing_{};
  std::vector<std::uint8_t> mask_;
  std::size_t active_ = 0;
};

using GridPtr = std::shared_ptr<const BoxGrid>;

/// One scalar per grid node. For potentials the sample is the well depth V:
/// operators apply -V, so V > 0 binds.
struct ScalarField {
  GridPtr grid;
  std::vector<double> values;

  static ScalarField zeros(GridPtr grid);
  static ScalarField constant(GridPtr grid, double value);
  static ScalarField sample(GridPtr grid,
                            const std::function<double(const Vec3&)>& f);

  /// K = max |value|.
  double sup_bound() const;
  void validate() const;
};

/// Boundary convention used by derivative-based field quantities.
///  - periodic: the grid is a torus of n nodes per axis (wrap-around edges).
///  - open: differences only between nodes inside the box.
enum class FieldBoundary { periodic, open };

/// Vector potential on grid edges (staggered).
///
/// components[d][idx] is the mean of A_d along the edge from node idx to its
/// +d neighbour, so the link integral of A over that edge is
/// components[d][idx] * spacing[d].
struct VectorPotential {
  GridPtr grid;
  std::array<std::vector<double>, 3> components;
  bool div_free = false;
  FieldBoundary boundary = FieldBoundary::periodic;

  static VectorPotential zeros(GridPtr grid);
  /// Samples a continuum field at the edge midpoints.
  static VectorPotential sample(GridPtr grid,
                                const std::function<Vec3(const Vec3&)>& f,
                                FieldBoundary boundary);

  double max_abs() const;
  /// Euclidean norm of all edge values (no volume factor).
  double norm() const;
  void validate() const;
};

/// <a, b> = sum over edges of a * b * cell_volume.
double inner_product(const VectorPotential& a, const VectorPotential& b);

/// a + s * b (same grid); the result is not marked divergence-free.
VectorPotential axpy(const VectorPotential& a, double s,
                     const VectorPotential& b);

bool same_grid(const GridPtr& a, const GridPtr& b) noexcept;

}  // namespace tfpauli
