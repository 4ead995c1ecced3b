// Copyright 2026 The tfpauli Authors
// SPDX-License-Identifier: Apache-2.0

// Reference computations used by the tests. They share no code with the
// library: fixed-step integrators, closed forms and plain loops only.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace tfpauli::oracle {

constexpr double kPi = std::numbers::pi;

// Seeded generator for property tests (splitmix64 stream).
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : s_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (s_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform(double lo = 0.0, double hi = 1.0) {
    return lo + (hi - lo) * static_cast<double>(next() >> 11) * 0x1.0p-53;
  }
  int integer(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::uint64_t s_;
};

// Screening equation chi'' = chi^{3/2} / sqrt(x) in t = sqrt(x), classical
// RK4 with a fixed step. Returns +1 when chi turns up, -1 when it crosses
// zero, 0 when neither happens before t_max.
struct ShotResult {
  int outcome = 0;
  double chi_at = 0.0;  // chi at the requested x, when reached
};

inline ShotResult rk4_shot(double slope, double dt, double t_max,
                           double x_probe = -1.0) {
  auto f = [](double t, double c, double u, double& dc, double& du) {
    dc = 2.0 * t * u;
    du = 2.0 * std::pow(c > 0.0 ? c : 0.0, 1.5);
  };
  double t = 0.0, c = 1.0, u = slope;
  ShotResult res;
  const double t_probe = x_probe > 0.0 ? std::sqrt(x_probe) : -1.0;
  const long steps = static_cast<long>(std::llround(t_max / dt));
  for (long s = 0; s < steps; ++s) {
    double k1c, k1u, k2c, k2u, k3c, k3u, k4c, k4u;
    f(t, c, u, k1c, k1u);
    f(t + 0.5 * dt, c + 0.5 * dt * k1c, u + 0.5 * dt * k1u, k2c, k2u);
    f(t + 0.5 * dt, c + 0.5 * dt * k2c, u + 0.5 * dt * k2u, k3c, k3u);
    f(t + dt, c + dt * k3c, u + dt * k3u, k4c, k4u);
    c += dt / 6.0 * (k1c + 2.0 * k2c + 2.0 * k3c + k4c);
    u += dt / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    t += dt;
    if (t_probe > 0.0 && std::abs(t - t_probe) < 0.5 * dt) res.chi_at = c;
    if (c < 0.0) {
      res.outcome = -1;
      return res;
    }
    if (u > 0.0) {
      res.outcome = 1;
      return res;
    }
  }
  return res;
}

inline double rk4_slope(double dt) {
  double lo = -1.7, hi = -1.5;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    const int o = rk4_shot(mid, dt, 16.0).outcome;
    if (o < 0) {
      lo = mid;
    } else if (o > 0) {
      hi = mid;
    } else {
      return mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Richardson extrapolation of the fourth-order shooting slope.
inline double screening_slope() {
  const double coarse = rk4_slope(0.004);
  const double fine = rk4_slope(0.002);
  return fine + (fine - coarse) / 15.0;
}

inline double screening_value(double slope, double x) {
  return rk4_shot(slope, 0.001, std::sqrt(x) + 0.01, x).chi_at;
}

// Energy of the neutral Z = 1 atom in units with kinetic operator -Delta:
// E = (3/14) chi'(0) / b, with b = (3 pi / 4)^{2/3} / 2 the length in which
// the screening equation is dimensionless.
inline double tf_energy_from_slope(double slope) {
  const double b = 0.5 * std::pow(3.0 * kPi / 4.0, 2.0 / 3.0);
  return 3.0 / 14.0 * slope / b;
}

// Self energy (1/2) \int\int f f / |x-y| of a radial density, via the field
// route (1/8 pi) \int |E|^2 with E(r) = Q(r) / r^2 on a uniform midpoint grid.
template <typename F>
double field_route_self_energy(F density, double r_max, int cells) {
  const double dr = r_max / cells;
  double q = 0.0, energy = 0.0;
  for (int i = 0; i < cells; ++i) {
    const double r0 = i * dr, r1 = r0 + dr, rm = r0 + 0.5 * dr;
    // Simpson for the enclosed charge on [r0, r1].
    q += dr / 6.0 *
         (4 * kPi * r0 * r0 * density(r0) + 16 * kPi * rm * rm * density(rm) +
          4 * kPi * r1 * r1 * density(r1));
    energy += 0.5 * q * q / (r1 * r1) * dr;  // (1/8pi) E^2 4 pi r^2 dr
  }
  return energy + 0.5 * q * q / r_max;  // field outside r_max
}

// Uniform unit-charge ball of radius R on a log-spaced radial grid, sampled
// by cell averages: each node carries the fraction of its quadrature cell
// [r e^{-ds/2}, r e^{ds/2}] inside the ball. Point sampling of the jump
// loses O(ds) of the charge.
inline std::vector<double> cell_averaged_ball(const std::vector<double>& r,
                                              double log_step, double radius) {
  const double rho = 3.0 / (4.0 * kPi * radius * radius * radius);
  std::vector<double> out(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double lo = r[i] * std::exp(-0.5 * log_step);
    const double hi = r[i] * std::exp(0.5 * log_step);
    const double top = std::min(hi, radius);
    const double frac =
        top <= lo ? 0.0 : (top * top * top - lo * lo * lo) / (hi * hi * hi - lo * lo * lo);
    out[i] = rho * frac;
  }
  return out;
}

// Eigenvalues of the 1D Dirichlet second difference on m interior points
// of [0, L] with spacing L / (m + 1): (2 - 2 cos(k pi / (m + 1))) / dx^2.
inline double dirichlet_mode(int k, int m, double length) {
  const double dx = length / (m + 1);
  return (2.0 - 2.0 * std::cos(k * kPi / (m + 1))) / (dx * dx);
}

}  // namespace tfpauli::oracle
