// Copyright 2026 The tfpauli Authors
// SPDX-License-Identifier: Apache-2.0

#include "tfpauli/tf_solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "tfpauli/errors.hpp"

namespace tfpauli {

namespace {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 2>;  // {chi, d chi/dx} as functions of t

constexpr double kPi = std::numbers::pi;
const double kThreePiSq = 3.0 * kPi * kPi;

// With x = t^2: d chi/dt = 2 t u, du/dt = 2 chi^{3/2}, u = d chi/dx.
struct ScreeningRhs {
  void operator()(const State& y, State& dydt, double t) const {
    dydt[0] = 2.0 * t * y[1];
    dydt[1] = 2.0 * std::pow(std::max(y[0], 0.0), 1.5);
  }
};

enum class Outcome { crosses_zero, turns_up, unresolved };

struct Trajectory {
  Outcome outcome = Outcome::unresolved;
  std::vector<double> chi;
  std::vector<double> u;
};

constexpr double kMaxT = 20.0;  // x up to 400

// Integrates with slope `slope` and samples on t_k = k * dt until the
// solution leaves the physical branch.
Trajectory shoot(double slope, double eps, double dt, bool record) {
  auto stepper =
      odeint::make_dense_output(eps, eps, odeint::runge_kutta_dopri5<State>());
  State y{1.0, slope};
  stepper.initialize(y, 0.0, dt);
  Trajectory traj;
  std::size_t next = 0;
  const ScreeningRhs rhs;
  while (stepper.current_time() < kMaxT) {
    stepper.do_step(rhs);
    if (record) {
      while (static_cast<double>(next) * dt <= stepper.current_time()) {
        State s;
        stepper.calc_state(static_cast<double>(next) * dt, s);
        traj.chi.push_back(s[0]);
        traj.u.push_back(s[1]);
        ++next;
      }
    }
    const State& cur = stepper.current_state();
    if (cur[0] < 0.0) {
      traj.outcome = Outcome::crosses_zero;
      return traj;
    }
    if (cur[1] > 0.0) {
      traj.outcome = Outcome::turns_up;
      return traj;
    }
  }
  return traj;
}

// chi ~ 144 x^{-3} (1 + (c/x)^lambda)^{-3/lambda}, lambda = (sqrt(73) - 7)/2.
const double kSommerfeldExponent = 0.5 * (std::sqrt(73.0) - 7.0);

double sommerfeld(double x, double c) {
  const double q = std::pow(c / x, kSommerfeldExponent);
  return 144.0 / (x * x * x) * std::pow(1.0 + q, -3.0 / kSommerfeldExponent);
}

double hermite(double y0, double d0, double y1, double d1, double h,
               double s) {
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * d0 +
         (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * h * d1;
}

void require_density(const TFDensity& rho) {
  if (!(rho.Z > 0.0)) throw InputError("TFDensity: Z must be positive");
  if (rho.radial.values.size() != rho.radial.grid.size()) {
    throw InputError("TFDensity: sample count does not match grid");
  }
  for (double v : rho.radial.values) {
    if (!std::isfinite(v) || v < 0.0) {
      throw InputError("TFDensity: density must be finite and non-negative");
    }
  }
}

}  // namespace

double TFScreeningFunction::operator()(double x) const {
  if (x < 0.0) throw InputError("TFScreeningFunction: x < 0");
  if (x >= match_x) return sommerfeld(x, tail_scale);
  const double t = std::sqrt(x);
  const std::size_t k =
      std::min(static_cast<std::size_t>(t / t_step), chi.size() - 2);
  const double t0 = static_cast<double>(k) * t_step;
  const double s = (t - t0) / t_step;
  // d chi / dt = 2 t u
  return hermite(chi[k], 2.0 * t0 * dchi[k], chi[k + 1],
                 2.0 * (t0 + t_step) * dchi[k + 1], t_step, s);
}

double TFScreeningFunction::derivative(double x) const {
  if (x < 0.0) throw InputError("TFScreeningFunction: x < 0");
  if (x >= match_x) {
    const double q = std::pow(tail_scale / x, kSommerfeldExponent);
    return -3.0 * sommerfeld(x, tail_scale) / (x * (1.0 + q));
  }
  const double t = std::sqrt(x);
  const std::size_t k =
      std::min(static_cast<std::size_t>(t / t_step), chi.size() - 2);
  const double s = (t - static_cast<double>(k) * t_step) / t_step;
  // du/dt = 2 chi^{3/2}
  return hermite(dchi[k], 2.0 * std::pow(std::max(chi[k], 0.0), 1.5),
                 dchi[k + 1], 2.0 * std::pow(std::max(chi[k + 1], 0.0), 1.5),
                 t_step, s);
}

std::vector<double> TFScreeningFunction::x_nodes() const {
  std::vector<double> xs(chi.size());
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double t = static_cast<double>(k) * t_step;
    xs[k] = t * t;
  }
  return xs;
}

TFScreeningFunction solve_tf_ode(double tolerance) {
  if (!(tolerance > 0.0) || tolerance > 1e-2) {
    throw InputError("solve_tf_ode: tolerance must lie in (0, 1e-2]");
  }
  const double eps = std::clamp(tolerance * 1e-3, 1e-14, 1e-10);
  const double dt = 2e-3;

  double lo = -1.7;  // too steep: chi crosses zero
  double hi = -1.5;  // too shallow: chi turns up
  const Outcome at_lo = shoot(lo, eps, dt, false).outcome;
  const Outcome at_hi = shoot(hi, eps, dt, false).outcome;
  if (at_lo != Outcome::crosses_zero || at_hi != Outcome::turns_up) {
    std::ostringstream diag;
    diag << "slope " << lo << " -> outcome " << static_cast<int>(at_lo)
         << ", slope " << hi << " -> outcome " << static_cast<int>(at_hi)
         << " (expected 0 and 1)";
    throw NumericalError("solve_tf_ode: shooting bracket has no sign change",
                         diag.str());
  }
  for (int it = 0; it < 200 && hi - lo > 4e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const Outcome o = shoot(mid, eps, dt, false).outcome;
    if (o == Outcome::crosses_zero) {
      lo = mid;
    } else if (o == Outcome::turns_up) {
      hi = mid;
    } else {
      lo = hi = mid;
    }
  }

  // Trajectories a hair outside the bracket bound where the stored
  // solution is still insensitive to the slope.
  const double spread = 1e-13;
  const Trajectory a = shoot(lo - spread, eps, dt, true);
  const Trajectory b = shoot(hi + spread, eps, dt, true);
  const std::size_t n = std::min(a.chi.size(), b.chi.size());

  // The two trajectories agree until the unstable mode takes over; keep
  // the prefix where they are indistinguishable.
  std::size_t last = 0;
  for (std::size_t k = 1; k < n; ++k) {
    const double mid = 0.5 * (a.chi[k] + b.chi[k]);
    const double du = 0.5 * (a.u[k] + b.u[k]);
    if (!(mid > 0.0) || !(du < 0.0)) break;
    if (std::abs(a.chi[k] - b.chi[k]) > 1e-7 * mid) break;
    last = k;
  }
  if (last < 100) {
    throw NumericalError("solve_tf_ode: trajectories diverge too early",
                         "matched prefix has " + std::to_string(last) +
                             " nodes");
  }

  TFScreeningFunction out;
  out.initial_slope = 0.5 * (lo + hi);
  out.t_step = dt;
  const Trajectory c = shoot(out.initial_slope, eps, dt, true);
  last = std::min(last, c.chi.size() - 1);
  out.chi.resize(last + 1);
  out.dchi.resize(last + 1);
  for (std::size_t k = 0; k <= last; ++k) {
    out.chi[k] = c.chi[k];
    out.dchi[k] = c.u[k];
  }
  const double tm = static_cast<double>(last) * dt;
  out.match_x = tm * tm;
  const double chi_m = out.chi[last];
  const double xm = out.match_x;
  const double ratio = 144.0 / (xm * xm * xm * chi_m);
  if (!(ratio > 1.0)) {
    throw NumericalError("solve_tf_ode: solution above the 144/x^3 asymptote",
                         "x = " + std::to_string(xm));
  }
  out.tail_scale =
      xm * std::pow(std::pow(ratio, kSommerfeldExponent / 3.0) - 1.0,
                    1.0 / kSommerfeldExponent);
  return out;
}

double tf_length_scale(double Z) {
  if (!(Z > 0.0)) throw InputError("tf_length_scale: Z must be positive");
  return std::pow(3.0 * kPi / 4.0, 2.0 / 3.0) * std::cbrt(1.0 / Z);
}

double tf_density_at(const TFScreeningFunction& chi, double Z, double r) {
  const double b = tf_length_scale(Z);
  const double phi = Z * chi(r / b) / r;
  return std::pow(std::max(phi, 0.0), 1.5) / kThreePiSq;
}

TFDensity tf_density_from_screening(const TFScreeningFunction& chi, double Z) {
  if (!(Z > 0.0)) throw InputError("tf_density_from_screening: Z <= 0");
  return tf_density_from_screening(
      chi, Z, RadialGrid::default_grid().scaled(std::cbrt(1.0 / Z)));
}

TFDensity tf_density_from_screening(const TFScreeningFunction& chi, double Z,
                                    const RadialGrid& grid) {
  if (!(Z > 0.0)) throw InputError("tf_density_from_screening: Z <= 0");
  if (chi.chi.size() < 2) throw InputError("tf_density_from_screening: empty");
  TFDensity out{RadialFunction::sample(
                    grid, [&](double r) { return tf_density_at(chi, Z, r); }),
                Z};
  return out;
}

TFEnergyTerms tf_energy_terms(const TFDensity& rho) {
  require_density(rho);
  const auto& grid = rho.radial.grid;
  const auto& r = grid.nodes();
  const double kinetic_const = 0.6 * std::pow(kThreePiSq, 2.0 / 3.0);
  TFEnergyTerms terms;
  std::vector<double> k(grid.size()), a(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double p = rho.radial.values[i];
    k[i] = std::pow(p, 5.0 / 3.0);
    a[i] = p / r[i];
  }
  terms.kinetic = kinetic_const * grid.integrate(k);
  terms.attraction = rho.Z * grid.integrate(a);
  terms.repulsion = coulomb_energy(rho.radial, rho.radial);
  return terms;
}

double tf_functional_energy(const TFDensity& rho) {
  return tf_energy_terms(rho).total();
}

double compute_c_tf(const TFDensity& rho) {
  require_density(rho);
  if (std::abs(rho.Z - 1.0) > 1e-12) {
    throw InputError("compute_c_tf: defined for the Z = 1 density only");
  }
  const RadialFunction w = tf_mean_field(rho.radial, 1.0, 0.0);
  std::vector<double> neg(w.values.size());
  for (std::size_t i = 0; i < neg.size(); ++i) {
    neg[i] = std::pow(std::max(-w.values[i], 0.0), 2.5);
  }
  return coulomb_energy(rho.radial, rho.radial) +
         kWeylConstant * rho.radial.grid.integrate(neg);
}

ClosedFormReadings c_tf_closed_forms() {
  return {3.678 * std::pow(kThreePiSq, 2.0 / 3.0),
          3.678 * std::pow(kThreePiSq, -2.0 / 3.0)};
}

TFMinimizeResult minimize_tf_functional(const TFDensity& start,
                                        const TFMinimizeOptions& opts) {
  require_density(start);
  const auto& grid = start.radial.grid;
  const auto& r = grid.nodes();
  const auto& w = grid.weights();
  const std::size_t n = grid.size();
  const double Z = start.Z;
  const double grad_kinetic = std::pow(kThreePiSq, 2.0 / 3.0);

  TFDensity cur = start;
  {
    // Put the starting point on the constraint set.
    const double q = cur.radial.total();
    if (!(q > 0.0)) throw InputError("minimize_tf_functional: zero start");
    for (auto& v : cur.radial.values) v *= Z / q;
  }
  double energy = tf_functional_energy(cur);

  std::vector<double> g(n), precond(n), trial(n);
  double step = 1.0;
  TFMinimizeResult res;
  for (int it = 0; it < opts.max_iters; ++it) {
    const auto phi = newton_potential(cur.radial).values;
    for (std::size_t i = 0; i < n; ++i) {
      const double p = cur.radial.values[i];
      g[i] = grad_kinetic * std::cbrt(p * p) - Z / r[i] + phi[i];
      precond[i] = 1.5 / grad_kinetic * std::cbrt(std::max(p, 1e-30));
    }

    bool accepted = false;
    double new_energy = energy;
    for (int bt = 0; bt < 40; ++bt) {
      // rho'_i = max(0, rho_i - step * M_i (g_i - mu)), mu fixing the charge.
      auto charge_at = [&](double mu) {
        double q = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          trial[i] = std::max(
              0.0, cur.radial.values[i] - step * precond[i] * (g[i] - mu));
          q += w[i] * trial[i];
        }
        return q;
      };
      double mu_lo = -1.0, mu_hi = 1.0;
      while (charge_at(mu_lo) > Z) mu_lo *= 2.0;
      while (charge_at(mu_hi) < Z) mu_hi *= 2.0;
      for (int k = 0; k < 200; ++k) {
        const double mid = 0.5 * (mu_lo + mu_hi);
        if (mid <= mu_lo || mid >= mu_hi) break;
        (charge_at(mid) < Z ? mu_lo : mu_hi) = mid;
      }
      charge_at(0.5 * (mu_lo + mu_hi));

      double decrease = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        decrease += w[i] * g[i] * (trial[i] - cur.radial.values[i]);
      }
      TFDensity cand{{grid, trial}, Z};
      const double e = tf_functional_energy(cand);
      if (e <= energy + 1e-4 * decrease || std::abs(decrease) < 1e-300) {
        cur = std::move(cand);
        new_energy = e;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    res.iterations = it + 1;
    if (!accepted) break;
    const double change = energy - new_energy;
    energy = new_energy;
    if (std::abs(change) <= opts.energy_tol * std::abs(energy)) {
      res.converged = true;
      break;
    }
    step = std::min(2.0 * step, 1.0);
  }
  res.energy = energy;
  res.density = std::move(cur);
  return res;
}

}  // namespace tfpauli
