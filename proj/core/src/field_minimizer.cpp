// Copyright 2026 The tfpauli Authors
// SPDX-License-Identifier: Apache-2.0

#include "tfpauli/field_minimizer.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "tfpauli/errors.hpp"
#include "tfpauli/field_ops.hpp"
#include "tfpauli/operators.hpp"

namespace tfpauli {

namespace {

constexpr double kDegeneracyGap = 1e-8;

void require_div_free(const VectorPotential& a, const char* what) {
  a.validate();
  if (a.div_free) return;
  if (max_divergence(a) > 1e-10 * a.norm()) {
    throw InputError(std::string(what) +
                     ": A is not divergence-free; project it first");
  }
}

bool is_zero(const VectorPotential& a) { return a.max_abs() == 0.0; }

// Spin-up and spin-down copies of scalar states, for the Pauli kind at A = 0.
Eigen::MatrixXcd spinor_copies(const Eigen::MatrixXcd& scalar) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(2 * scalar.rows(), 2 * scalar.cols());
  for (Eigen::Index c = 0; c < scalar.cols(); ++c) {
    for (Eigen::Index r = 0; r < scalar.rows(); ++r) {
      out(2 * r, 2 * c) = scalar(r, c);
      out(2 * r + 1, 2 * c + 1) = scalar(r, c);
    }
  }
  return out;
}

}  // namespace

void EnergyConfig::validate() const {
  if (!(h > 0.0)) throw InputError("EnergyConfig: h must be positive");
  if (lambda.has_value() == alpha.has_value()) {
    throw InputError("EnergyConfig: set exactly one of lambda and alpha");
  }
  if (lambda && !(*lambda > 0.0)) {
    throw InputError("EnergyConfig: lambda must be positive");
  }
  if (alpha && !(*alpha > 0.0)) {
    throw InputError("EnergyConfig: alpha must be positive");
  }
  if (multiplicity != 1 && multiplicity != 2) {
    throw InputError("EnergyConfig: multiplicity must be 1 or 2");
  }
  if (pauli && multiplicity != 1) {
    throw InputError("EnergyConfig: the Pauli kind needs multiplicity 1");
  }
}

double EnergyConfig::lambda_value() const {
  validate();
  if (lambda) return *lambda;
  return 1.0 / (8.0 * M_PI * *alpha * *alpha);
}

std::optional<std::string> EnergyConfig::coupling_warning(double z,
                                                          double kappa) const {
  if (!alpha) return std::nullopt;
  const double za2 = z * *alpha * *alpha;
  if (za2 <= kappa) return std::nullopt;
  std::ostringstream os;
  os << "Z alpha^2 = " << za2 << " exceeds kappa = " << kappa
     << "; outside the small-coupling regime";
  return os.str();
}

EnergyEvaluation evaluate_energy(const VectorPotential& a, const ScalarField& v,
                                 const EnergyConfig& cfg, bool keep_vectors,
                                 const Eigen::MatrixXcd* warm_start) {
  const double lambda = cfg.lambda_value();
  require_div_free(a, "total_energy");
  if (!same_grid(a.grid, v.grid)) {
    throw InputError("total_energy: A and V live on different grids");
  }
  NegTraceOptions nt;
  nt.eigen = cfg.eigen;
  nt.keep_vectors = keep_vectors;
  nt.warm_start = warm_start;

  EnergyEvaluation out;
  if (is_zero(a)) {
    // Exactly the non-magnetic operator; the Pauli kind is two copies of it.
    const OperatorHandle op = build_dirichlet_hamiltonian(cfg.h, v, v.grid);
    out.spectrum = neg_trace(op, cfg.pauli ? 2 : cfg.multiplicity, nt);
    if (keep_vectors && cfg.pauli) {
      out.spectrum.vectors = spinor_copies(out.spectrum.vectors);
      out.spectrum.subspace = spinor_copies(out.spectrum.subspace);
    }
  } else {
    const OperatorHandle op =
        build_magnetic_hamiltonian(cfg.h, a, v, v.grid, cfg.pauli);
    if (warm_start != nullptr && warm_start->rows() != op.dim()) {
      nt.warm_start = nullptr;
    }
    out.spectrum = neg_trace(op, cfg.pauli ? 1 : cfg.multiplicity, nt);
  }
  out.trace = out.spectrum.neg_trace;
  out.field = is_zero(a) ? 0.0 : lambda * field_energy(a).b_energy;
  out.total = out.trace + out.field;
  return out;
}

double total_energy(const VectorPotential& a, const ScalarField& v,
                    const EnergyConfig& cfg) {
  return evaluate_energy(a, v, cfg).total;
}

GradientResult field_gradient(const VectorPotential& a, const ScalarField& v,
                              const EnergyConfig& cfg,
                              const Eigen::MatrixXcd* warm_start) {
  GradientResult out;
  out.energy = evaluate_energy(a, v, cfg, true, warm_start);
  const SpectralResult& sp = out.energy.spectrum;
  const double lambda = cfg.lambda_value();

  // One weight per stored state.
  const Eigen::Index nvec = sp.vectors.cols();
  const bool spinor_pairs = cfg.pauli && is_zero(a);
  const double base = cfg.pauli ? 1.0 : cfg.multiplicity;
  std::vector<double> levels(static_cast<std::size_t>(nvec));
  for (Eigen::Index i = 0; i < nvec; ++i) {
    levels[i] = sp.negative_eigenvalues[spinor_pairs ? i / 2 : i];
  }
  std::vector<double> weights(static_cast<std::size_t>(nvec), base);
  if (nvec > 0 && sp.next_eigenvalue - levels.back() < kDegeneracyGap) {
    out.degenerate = true;
    // The block straddles the Fermi level: average it with the first empty
    // level, counted once.
    Eigen::Index filled = 0;
    for (Eigen::Index i = 0; i < nvec; ++i) {
      if (sp.next_eigenvalue - levels[i] < kDegeneracyGap) ++filled;
    }
    const double share = static_cast<double>(filled) / (filled + 1);
    for (Eigen::Index i = 0; i < nvec; ++i) {
      if (sp.next_eigenvalue - levels[i] < kDegeneracyGap) weights[i] *= share;
    }
  }

  const OperatorHandle mop =
      build_magnetic_hamiltonian(cfg.h, a, v, v.grid, cfg.pauli);
  VectorPotential g = mop.field_derivative(sp.vectors, weights);
  const double inv_dv = 1.0 / a.grid->cell_volume();
  const VectorPotential fg = b_energy_gradient(a);
  for (int d = 0; d < 3; ++d) {
    for (std::size_t i = 0; i < g.components[d].size(); ++i) {
      g.components[d][i] = g.components[d][i] * inv_dv + lambda * fg.components[d][i];
    }
  }
  out.gradient = helmholtz_project(g);
  return out;
}

MinimizeResult minimize_field(const VectorPotential& a0, const ScalarField& v,
                              const EnergyConfig& cfg,
                              const MinimizeOptions& opts) {
  const double lambda = cfg.lambda_value();
  if (opts.max_iters < 0 || !(opts.grad_tol >= 0.0)) {
    throw InputError("minimize_field: invalid options");
  }
  auto restrict_field = [&](const VectorPotential& x) {
    VectorPotential y = helmholtz_project(x);
    if (opts.band_limit > 0) y = band_limit(y, opts.band_limit);
    return y;
  };
  auto track_divergence = [](MinimizeResult& r, const VectorPotential& x) {
    const double n = x.norm();
    if (n > 0.0) {
      r.max_divergence_seen = std::max(r.max_divergence_seen, max_divergence(x) / n);
    }
  };

  MinimizeResult res;
  res.baseline_energy =
      evaluate_energy(VectorPotential::zeros(v.grid), v, cfg).total;

  VectorPotential a = restrict_field(a0);
  track_divergence(res, a);
  GradientResult cur = field_gradient(a, v, cfg);
  res.descent_history.push_back(cur.energy.total);
  res.degenerate_seen = cur.degenerate;

  for (int it = 0; it < opts.max_iters; ++it) {
    const double gnorm = std::sqrt(inner_product(cur.gradient, cur.gradient));
    res.grad_norm_final = gnorm;
    if (gnorm <= opts.grad_tol) {
      res.converged = true;
      break;
    }
    VectorPotential dir = inverse_field_hessian(cur.gradient, lambda);
    if (opts.band_limit > 0) dir = band_limit(dir, opts.band_limit);
    for (auto& c : dir.components) {
      for (auto& x : c) x = -x;
    }
    double slope = inner_product(cur.gradient, dir);
    if (!(slope < 0.0)) {
      dir = cur.gradient;
      for (auto& c : dir.components) {
        for (auto& x : c) x = -x;
      }
      slope = -gnorm * gnorm;
    }

    bool accepted = false;
    double step = 1.0;
    double closest = std::numeric_limits<double>::infinity();
    for (int bt = 0; bt <= opts.max_backtracks; ++bt, step *= 0.5) {
      VectorPotential trial = restrict_field(axpy(a, step, dir));
      const SpectralResult& sp = cur.energy.spectrum;
      GradientResult next = field_gradient(
          trial, v, cfg, sp.subspace.size() > 0 ? &sp.subspace : &sp.vectors);
      closest = std::min(closest, std::abs(next.energy.total - cur.energy.total));
      if (next.energy.total <= cur.energy.total + opts.armijo * step * slope) {
        a = std::move(trial);
        cur = std::move(next);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // No decrease is resolvable when the energy is flat to rounding.
      if (closest <= opts.energy_tol * std::abs(cur.energy.total)) {
        res.converged = true;
      } else {
        res.stagnated = true;
      }
      break;
    }
    res.iterations = it + 1;
    res.descent_history.push_back(cur.energy.total);
    res.degenerate_seen = res.degenerate_seen || cur.degenerate;
    track_divergence(res, a);
  }
  if (!res.converged && !res.stagnated) {
    res.grad_norm_final = std::sqrt(inner_product(cur.gradient, cur.gradient));
    res.converged = res.grad_norm_final <= opts.grad_tol;
  }
  res.a_star = std::move(a);
  res.total_energy = cur.energy.total;
  return res;
}

std::vector<BoundRecord> verify_bound_sweep(const ScalarField& v,
                                            const std::vector<double>& h_list,
                                            const EnergyConfig& cfg,
                                            const MinimizeOptions& opts,
                                            double start_amplitude,
                                            std::uint64_t seed) {
  for (std::size_t i = 0; i < h_list.size(); ++i) {
    if (!(h_list[i] > 0.0)) throw InputError("verify_bound_sweep: h must be > 0");
    if (i > 0 && !(h_list[i] < h_list[i - 1])) {
      throw InputError("verify_bound_sweep: h_list must be descending");
    }
  }
  const BoxGrid& g = *v.grid;
  const double k = std::max(1.0, v.sup_bound());
  const double vol = g.active_count() * g.cell_volume();

  std::vector<BoundRecord> out;
  for (std::size_t i = 0; i < h_list.size(); ++i) {
    BoundRecord rec;
    rec.h = h_list[i];
    EnergyConfig c = cfg;
    c.h = rec.h;
    if (!c.lambda && !c.alpha) c.lambda = 1.0 / (rec.h * rec.h);
    try {
      rec.e_nf = evaluate_energy(VectorPotential::zeros(v.grid), v, c).trace;
      VectorPotential a0 = start_amplitude > 0.0
                               ? random_band_limited_field(v.grid, 2, start_amplitude,
                                                           seed + i)
                               : VectorPotential::zeros(v.grid);
      const MinimizeResult m = minimize_field(a0, v, c, opts);
      rec.e_min = m.total_energy;
      rec.iterations = m.iterations;
      rec.field_energy = field_energy(m.a_star).b_energy;
      rec.boundary_fraction = boundary_field_fraction(m.a_star);
      rec.usable = true;
    } catch (const NumericalError&) {
      rec.usable = false;
    }
    rec.gap = rec.e_nf - rec.e_min;
    rec.g = rec.h * rec.h * rec.h * rec.gap;
    rec.error_shape = semiclassical_error_bound(rec.h, k, vol, 1.0);
    rec.bound_holds = rec.usable && rec.gap <= 1e-6 * std::abs(rec.e_nf);
    out.push_back(rec);
  }
  return out;
}

GridPtr hydrogen_grid(double radius, int n) {
  if (!(radius > 0.0)) throw InputError("hydrogen_grid: radius must be > 0");
  if (n < 5 || n % 2 == 0) throw InputError("hydrogen_grid: n must be odd, >= 5");
  const double side = 2.0 * radius;
  return std::make_shared<const BoxGrid>(
      Vec3{side, side, side}, std::array<int, 3>{n, n, n}, [=](const Vec3& p) {
        const double x = p[0] - radius, y = p[1] - radius, z = p[2] - radius;
        return x * x + y * y + z * z < radius * radius;
      });
}

HydrogenReport hydrogen_bound_check(double c, const VectorPotential& a,
                                    GridPtr grid, const EigenOptions& eig,
                                    const Eigen::MatrixXcd* warm_start) {
  if (!(c > 0.0)) throw InputError("hydrogen_bound_check: c must be > 0");
  if (!same_grid(a.grid, grid)) {
    throw InputError("hydrogen_bound_check: A lives on a different grid");
  }
  const Vec3 x0 = grid->center();
  const double core = grid->spacing()[0];
  const ScalarField v = ScalarField::sample(grid, [&](const Vec3& p) {
    const double r = std::sqrt((p[0] - x0[0]) * (p[0] - x0[0]) +
                               (p[1] - x0[1]) * (p[1] - x0[1]) +
                               (p[2] - x0[2]) * (p[2] - x0[2]));
    return c / std::max(r, core);
  });
  HydrogenReport rep;
  rep.c = c;
  rep.bound = -0.25 * c * c;
  if (is_zero(a)) {
    const auto r = lowest_eigenpairs<double>(
        build_dirichlet_hamiltonian(1.0, v, grid), 1, eig);
    rep.lowest = r.values[0];
    rep.converged = r.converged;
    rep.state = (r.subspace.size() > 0 ? r.subspace : r.vectors).cast<cplx>();
  } else {
    const auto r = lowest_eigenpairs<cplx>(
        build_magnetic_hamiltonian(1.0, a, v, grid, false), 1, eig, warm_start);
    rep.lowest = r.values[0];
    rep.converged = r.converged;
    rep.state = r.subspace.size() > 0 ? r.subspace : r.vectors;
  }
  rep.holds = rep.converged && rep.lowest >= rep.bound * (1.0 + rep.allowance);
  return rep;
}

}  // namespace tfpauli
