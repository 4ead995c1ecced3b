// Copyright 2026 The tfpauli Authors
// SPDX-License-Identifier: Apache-2.0

#include "tfpauli/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "tfpauli/coulomb.hpp"
#include "tfpauli/errors.hpp"
#include "tfpauli/tf_solver.hpp"

namespace tfpauli {

namespace {

const std::map<std::string, std::set<std::string>>& allowed_params() {
  static const std::map<std::string, std::set<std::string>> table = {
      {"smooth-bump",
       {"depth", "radius", "radius_x", "radius_y", "radius_z", "center_x",
        "center_y", "center_z"}},
      {"truncated-coulomb",
       {"charge", "cutoff", "core", "center_x", "center_y", "center_z"}},
      {"tf-mean-field", {"eps", "core", "center_x", "center_y", "center_z"}},
      {"constant-well", {"depth"}},
  };
  return table;
}

double param(const PotentialSpec& s, const std::string& key, double fallback) {
  const auto it = s.params.find(key);
  return it == s.params.end() ? fallback : it->second;
}

double required(const PotentialSpec& s, const std::string& key) {
  const auto it = s.params.find(key);
  if (it == s.params.end()) {
    throw InputError("potential " + s.family + ": missing parameter '" + key + "'");
  }
  return it->second;
}

Vec3 center_of(const PotentialSpec& s, const BoxGrid& g) {
  const Vec3 c = g.center();
  return {param(s, "center_x", c[0]), param(s, "center_y", c[1]),
          param(s, "center_z", c[2])};
}

double distance(const Vec3& p, const Vec3& c) {
  return std::sqrt((p[0] - c[0]) * (p[0] - c[0]) + (p[1] - c[1]) * (p[1] - c[1]) +
                   (p[2] - c[2]) * (p[2] - c[2]));
}

// -W for the Z = 1 TF atom on the log radial grid, interpolated linearly in
// log r; the Sommerfeld tail makes the far field tiny, so it is cut to zero
// past the last node.
class TFWell {
 public:
  explicit TFWell(double eps) {
    const TFScreeningFunction chi = solve_tf_ode();
    const TFDensity rho = tf_density_from_screening(chi, 1.0);
    const RadialFunction w = tf_mean_field(rho.radial, 1.0, eps);
    r_ = rho.radial.grid.nodes();
    v_.resize(w.values.size());
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] = -w.values[i];
  }

  double operator()(double r) const {
    if (r <= r_.front()) return v_.front();
    if (r >= r_.back()) return 0.0;
    const auto it = std::upper_bound(r_.begin(), r_.end(), r);
    const std::size_t i = static_cast<std::size_t>(it - r_.begin()) - 1;
    const double t = std::log(r / r_[i]) / std::log(r_[i + 1] / r_[i]);
    return (1.0 - t) * v_[i] + t * v_[i + 1];
  }

 private:
  std::vector<double> r_;
  std::vector<double> v_;
};

}  // namespace

const std::vector<std::string>& potential_families() {
  static const std::vector<std::string> names = {
      "smooth-bump", "truncated-coulomb", "tf-mean-field", "constant-well"};
  return names;
}

void validate_potential(const PotentialSpec& spec) {
  const auto& table = allowed_params();
  const auto fam = table.find(spec.family);
  if (fam == table.end()) {
    std::string known;
    for (const auto& n : potential_families()) known += " " + n;
    throw InputError("unknown potential family '" + spec.family +
                     "'; known:" + known);
  }
  for (const auto& [key, value] : spec.params) {
    if (!fam->second.count(key)) {
      throw InputError("potential " + spec.family + ": unknown parameter '" +
                       key + "'");
    }
    if (!std::isfinite(value)) {
      throw InputError("potential " + spec.family + ": non-finite '" + key + "'");
    }
  }
  if (spec.family == "smooth-bump") {
    required(spec, "depth");
    for (const char* axis : {"radius_x", "radius_y", "radius_z"}) {
      const double r = param(spec, axis, param(spec, "radius", -1.0));
      if (!(r > 0.0)) {
        throw InputError("potential smooth-bump: radius must be positive");
      }
    }
  } else if (spec.family == "truncated-coulomb") {
    if (!(required(spec, "charge") > 0.0) || !(required(spec, "cutoff") > 0.0)) {
      throw InputError("potential truncated-coulomb: charge and cutoff must be > 0");
    }
  } else if (spec.family == "tf-mean-field") {
    const double eps = param(spec, "eps", 0.0);
    if (!(eps >= 0.0 && eps < 1.0)) {
      throw InputError("potential tf-mean-field: eps must lie in [0, 1)");
    }
  } else if (spec.family == "constant-well") {
    required(spec, "depth");
  }
  if (spec.params.count("core") && !(spec.params.at("core") > 0.0)) {
    throw InputError("potential " + spec.family + ": core must be > 0");
  }
}

ScalarField make_potential(const PotentialSpec& spec, GridPtr grid) {
  validate_potential(spec);
  if (!grid) throw InputError("make_potential: null grid");
  const BoxGrid& g = *grid;
  const Vec3 c = center_of(spec, g);
  const double core = param(spec, "core", g.spacing()[0]);

  if (spec.family == "smooth-bump") {
    const double depth = required(spec, "depth");
    const double r0 = param(spec, "radius", -1.0);
    const Vec3 radius = {param(spec, "radius_x", r0), param(spec, "radius_y", r0),
                         param(spec, "radius_z", r0)};
    return ScalarField::sample(grid, [&](const Vec3& p) {
      double s2 = 0.0;
      for (int d = 0; d < 3; ++d) {
        const double u = (p[d] - c[d]) / radius[d];
        s2 += u * u;
      }
      return s2 < 1.0 ? depth * std::exp(1.0 - 1.0 / (1.0 - s2)) : 0.0;
    });
  }
  if (spec.family == "truncated-coulomb") {
    const double q = required(spec, "charge");
    const double cutoff = required(spec, "cutoff");
    return ScalarField::sample(grid, [&](const Vec3& p) {
      return std::max(0.0, q * (1.0 / std::max(distance(p, c), core) - 1.0 / cutoff));
    });
  }
  if (spec.family == "tf-mean-field") {
    const TFWell well(param(spec, "eps", 0.0));
    return ScalarField::sample(grid, [&](const Vec3& p) {
      return well(std::max(distance(p, c), core));
    });
  }
  return ScalarField::constant(grid, required(spec, "depth"));
}

}  // namespace tfpauli
