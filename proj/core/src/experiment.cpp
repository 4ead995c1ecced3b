// Copyright 2026 The tfpauli Authors
// SPDX-License-Identifier: Apache-2.0

#include "tfpauli/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "tfpauli/field_ops.hpp"
#include "tfpauli/spectral.hpp"
#include "tfpauli/tf_solver.hpp"

namespace tfpauli {

using json = nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, int line, const std::string& key) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size() || !std::isfinite(x)) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(line, key + ": expected a number, got '" + v + "'");
  }
}

long long to_int(const std::string& v, int line, const std::string& key) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(line, key + ": expected an integer, got '" + v + "'");
  }
}

bool to_bool(const std::string& v, int line, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(line, key + ": expected true or false, got '" + v + "'");
}

std::vector<double> to_list(const std::string& v, int line,
                            const std::string& key) {
  std::vector<double> out;
  std::string item;
  std::istringstream is(v);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError(line, key + ": empty list entry");
    out.push_back(to_double(item, line, key));
  }
  if (out.empty()) throw ConfigError(line, key + ": empty list");
  return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(0, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, int,
                                  const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"experiment", [](auto& c, auto& v, int, auto&) { c.experiment = v; }},
      {"output", [](auto& c, auto& v, int, auto&) { c.output_path = v; }},
      {"seed",
       [](auto& c, auto& v, int l, auto& k) {
         const long long s = to_int(v, l, k);
         if (s < 0) throw ConfigError(l, k + ": must be >= 0");
         c.seed = static_cast<std::uint64_t>(s);
       }},
      {"grid.extent",
       [](auto& c, auto& v, int l, auto& k) {
         c.grid_extent = to_double(v, l, k);
         if (!(c.grid_extent > 0.0)) throw ConfigError(l, k + ": must be > 0");
       }},
      {"grid.n",
       [](auto& c, auto& v, int l, auto& k) {
         const long long n = to_int(v, l, k);
         if (n < 3 || n > 1024) throw ConfigError(l, k + ": must lie in [3, 1024]");
         c.grid_n = static_cast<int>(n);
       }},
      {"sweep.h_list",
       [](auto& c, auto& v, int l, auto& k) {
         c.h_list = to_list(v, l, k);
         for (double h : c.h_list) {
           if (!(h > 0.0)) throw ConfigError(l, k + ": entries must be > 0");
         }
       }},
      {"energy.lambda",
       [](auto& c, auto& v, int l, auto& k) {
         c.energy.lambda = to_double(v, l, k);
         if (!(*c.energy.lambda > 0.0)) throw ConfigError(l, k + ": must be > 0");
       }},
      {"energy.alpha",
       [](auto& c, auto& v, int l, auto& k) {
         c.energy.alpha = to_double(v, l, k);
         if (!(*c.energy.alpha > 0.0)) throw ConfigError(l, k + ": must be > 0");
       }},
      {"energy.pauli",
       [](auto& c, auto& v, int l, auto& k) { c.energy.pauli = to_bool(v, l, k); }},
      {"energy.multiplicity",
       [](auto& c, auto& v, int l, auto& k) {
         const long long m = to_int(v, l, k);
         if (m != 1 && m != 2) throw ConfigError(l, k + ": must be 1 or 2");
         c.energy.multiplicity = static_cast<int>(m);
       }},
      {"energy.z",
       [](auto& c, auto& v, int l, auto& k) { c.coupling_z = to_double(v, l, k); }},
      {"energy.kappa",
       [](auto& c, auto& v, int l, auto& k) {
         c.coupling_kappa = to_double(v, l, k);
       }},
      {"eigen.tol",
       [](auto& c, auto& v, int l, auto& k) {
         c.energy.eigen.tol = to_double(v, l, k);
         if (!(c.energy.eigen.tol > 0.0)) throw ConfigError(l, k + ": must be > 0");
       }},
      {"eigen.max_iters",
       [](auto& c, auto& v, int l, auto& k) {
         c.energy.eigen.max_iters = static_cast<int>(to_int(v, l, k));
       }},
      {"minimize.max_iters",
       [](auto& c, auto& v, int l, auto& k) {
         c.minimize.max_iters = static_cast<int>(to_int(v, l, k));
         if (c.minimize.max_iters < 0) throw ConfigError(l, k + ": must be >= 0");
       }},
      {"minimize.grad_tol",
       [](auto& c, auto& v, int l, auto& k) {
         c.minimize.grad_tol = to_double(v, l, k);
       }},
      {"minimize.band_limit",
       [](auto& c, auto& v, int l, auto& k) {
         c.minimize.band_limit = static_cast<int>(to_int(v, l, k));
       }},
      {"minimize.start_amplitude",
       [](auto& c, auto& v, int l, auto& k) {
         c.start_amplitude = to_double(v, l, k);
         if (c.start_amplitude < 0.0) throw ConfigError(l, k + ": must be >= 0");
       }},
      {"minimize.start_max_mode",
       [](auto& c, auto& v, int l, auto& k) {
         c.start_max_mode = static_cast<int>(to_int(v, l, k));
         if (c.start_max_mode < 1) throw ConfigError(l, k + ": must be >= 1");
       }},
      {"hydrogen.c_list",
       [](auto& c, auto& v, int l, auto& k) {
         c.hydrogen_c = to_list(v, l, k);
         for (double x : c.hydrogen_c) {
           if (!(x > 0.0)) throw ConfigError(l, k + ": entries must be > 0");
         }
       }},
      {"hydrogen.radius",
       [](auto& c, auto& v, int l, auto& k) {
         c.hydrogen_radius = to_double(v, l, k);
         if (!(c.hydrogen_radius > 0.0)) throw ConfigError(l, k + ": must be > 0");
       }},
      {"hydrogen.samples",
       [](auto& c, auto& v, int l, auto& k) {
         c.hydrogen_samples = static_cast<int>(to_int(v, l, k));
         if (c.hydrogen_samples < 0) throw ConfigError(l, k + ": must be >= 0");
       }},
      {"hydrogen.amplitude",
       [](auto& c, auto& v, int l, auto& k) {
         c.hydrogen_amplitude = to_double(v, l, k);
       }},
      {"hydrogen.max_mode",
       [](auto& c, auto& v, int l, auto& k) {
         c.hydrogen_max_mode = static_cast<int>(to_int(v, l, k));
         if (c.hydrogen_max_mode < 1) throw ConfigError(l, k + ": must be >= 1");
       }},
      {"tf.tolerance",
       [](auto& c, auto& v, int l, auto& k) {
         c.tf_tolerance = to_double(v, l, k);
         if (!(c.tf_tolerance > 0.0 && c.tf_tolerance <= 1e-2)) {
           throw ConfigError(l, k + ": must lie in (0, 1e-2]");
         }
       }},
      {"run.wall_clock",
       [](auto& c, auto& v, int l, auto& k) { c.wall_clock = to_bool(v, l, k); }},
  };
  return table;
}

bool needs_potential(const std::string& e) {
  return e == "weyl-sweep" || e == "field-min" || e == "bound-sweep";
}

bool needs_h(const std::string& e) { return needs_potential(e); }

EnergyConfig energy_at(const ExperimentConfig& cfg, double h) {
  EnergyConfig e = cfg.energy;
  e.h = h;
  if (!e.lambda && !e.alpha) e.lambda = 1.0 / (h * h);
  if (e.pauli) e.multiplicity = 1;
  return e;
}

GridPtr box_grid(const ExperimentConfig& cfg) {
  return BoxGrid::cube(cfg.grid_extent, cfg.grid_n);
}

// One unit of work produces the metric fields of a record. A unit reports
// non-convergence through the "status" field it sets.
using Unit = std::function<json()>;

std::vector<Unit> plan_units(const ExperimentConfig& cfg) {
  std::vector<Unit> units;
  const std::string& e = cfg.experiment;
  auto unit_seed = [&](std::size_t i) { return splitmix64(cfg.seed + i); };

  if (e == "tf-constant") {
    units.push_back([cfg] {
      const TFScreeningFunction chi = solve_tf_ode(cfg.tf_tolerance);
      const TFDensity rho = tf_density_from_screening(chi, 1.0);
      const double e_tf = tf_functional_energy(rho);
      const double c_tf = compute_c_tf(rho);
      const TFMinimizeResult m = minimize_tf_functional(rho);
      const ClosedFormReadings cf = c_tf_closed_forms();
      json r;
      r["slope"] = chi.initial_slope;
      r["chi_10"] = chi(10.0);
      r["e_tf"] = e_tf;
      r["e_tf_minimized"] = m.energy;
      r["c_tf"] = c_tf;
      r["charge_residual"] = std::abs(rho.radial.total() - 1.0);
      r["closed_form_negative_exponent"] = cf.negative_exponent;
      r["closed_form_positive_exponent"] = cf.positive_exponent;
      r["status"] = m.converged ? "ok" : "not_converged";
      return r;
    });
    return units;
  }

  if (e == "hydrogen-check") {
    for (double c : cfg.hydrogen_c) {
      for (int s = 0; s <= cfg.hydrogen_samples; ++s) {
        const std::uint64_t seed = unit_seed(units.size());
        units.push_back([cfg, c, s, seed] {
          const double radius = cfg.hydrogen_radius / c;
          int n = cfg.grid_n;
          if (n % 2 == 0) ++n;
          const GridPtr g = hydrogen_grid(radius, n);
          const VectorPotential a =
              s == 0 ? VectorPotential::zeros(g)
                     : random_band_limited_field(g, cfg.hydrogen_max_mode,
                                                 c * cfg.hydrogen_amplitude, seed);
          const HydrogenReport rep = hydrogen_bound_check(c, a, g, cfg.energy.eigen);
          json r;
          r["c"] = c;
          r["sample"] = s;
          r["radius"] = radius;
          r["n"] = n;
          r["a_max"] = a.max_abs();
          r["lowest"] = rep.lowest;
          r["bound"] = rep.bound;
          r["rel_err"] = rep.lowest / rep.bound - 1.0;
          r["holds"] = rep.holds;
          r["status"] = rep.converged ? "ok" : "not_converged";
          return r;
        });
      }
    }
    return units;
  }

  for (std::size_t i = 0; i < cfg.h_list.size(); ++i) {
    const double h = cfg.h_list[i];
    const std::uint64_t seed = unit_seed(i);
    if (e == "weyl-sweep") {
      units.push_back([cfg, h] {
        const GridPtr g = box_grid(cfg);
        const ScalarField v = make_potential(*cfg.potential, g);
        const EnergyConfig ec = energy_at(cfg, h);
        const OperatorHandle op = build_dirichlet_hamiltonian(h, v, g);
        NegTraceOptions nt;
        nt.eigen = ec.eigen;
        const SpectralResult sr = neg_trace_partial(op, ec.multiplicity, nt);
        const double weyl = weyl_estimate(v, h, ec.multiplicity);
        json r;
        r["h"] = h;
        r["neg_trace"] = sr.neg_trace;
        r["weyl"] = weyl;
        r["rel_err"] = weyl != 0.0 ? std::abs(sr.neg_trace - weyl) / std::abs(weyl)
                                   : 0.0;
        r["count"] = sr.count;
        r["residual_bound"] = sr.residual_bound;
        r["next_eigenvalue"] = sr.next_eigenvalue;
        r["error_shape"] = semiclassical_error_bound(
            h, std::max(1.0, v.sup_bound()), g->active_count() * g->cell_volume());
        r["status"] = sr.converged ? "ok" : "not_converged";
        return r;
      });
    } else if (e == "field-min") {
      units.push_back([cfg, h, seed] {
        const GridPtr g = box_grid(cfg);
        const ScalarField v = make_potential(*cfg.potential, g);
        const EnergyConfig ec = energy_at(cfg, h);
        const VectorPotential a0 =
            cfg.start_amplitude > 0.0
                ? random_band_limited_field(g, cfg.start_max_mode,
                                            cfg.start_amplitude, seed)
                : VectorPotential::zeros(g);
        const MinimizeResult m = minimize_field(a0, v, ec, cfg.minimize);
        json r;
        r["h"] = h;
        r["lambda"] = ec.lambda_value();
        r["baseline_energy"] = m.baseline_energy;
        r["initial_energy"] = m.descent_history.front();
        r["total_energy"] = m.total_energy;
        r["delta"] = m.total_energy - m.baseline_energy;
        r["field_energy"] = field_energy(m.a_star).b_energy;
        r["boundary_fraction"] = boundary_field_fraction(m.a_star);
        r["iterations"] = m.iterations;
        r["grad_norm"] = m.grad_norm_final;
        r["max_divergence"] = m.max_divergence_seen;
        r["stagnated"] = m.stagnated;
        r["degenerate"] = m.degenerate_seen;
        r["status"] = m.converged ? "ok" : "not_converged";
        return r;
      });
    } else if (e == "bound-sweep") {
      units.push_back([cfg, h, seed] {
        const GridPtr g = box_grid(cfg);
        const ScalarField v = make_potential(*cfg.potential, g);
        EnergyConfig ec = cfg.energy;
        if (ec.pauli) ec.multiplicity = 1;
        const auto recs = verify_bound_sweep(v, {h}, ec, cfg.minimize,
                                             cfg.start_amplitude, seed);
        const BoundRecord& b = recs.front();
        json r;
        r["h"] = h;
        r["e_nf"] = b.e_nf;
        r["e_min"] = b.e_min;
        r["gap"] = b.gap;
        r["g"] = b.g;
        r["error_shape"] = b.error_shape;
        r["field_energy"] = b.field_energy;
        r["boundary_fraction"] = b.boundary_fraction;
        r["iterations"] = b.iterations;
        r["bound_holds"] = b.bound_holds;
        r["status"] = b.usable ? "ok" : "not_converged";
        return r;
      });
    }
  }
  return units;
}

// Everything that can be checked without heavy computation.
void check_semantics(ExperimentConfig& cfg, const std::map<std::string, int>& lines) {
  auto line_of = [&](const std::string& key) {
    const auto it = lines.find(key);
    return it == lines.end() ? 0 : it->second;
  };
  const auto& names = experiment_names();
  if (cfg.experiment.empty()) throw ConfigError(0, "missing key 'experiment'");
  if (std::find(names.begin(), names.end(), cfg.experiment) == names.end()) {
    std::string known;
    for (const auto& n : names) known += " " + n;
    throw ConfigError(line_of("experiment"),
                      "unknown experiment '" + cfg.experiment + "'; known:" + known);
  }
  if (cfg.output_path.empty()) throw ConfigError(0, "missing key 'output'");
  if (needs_potential(cfg.experiment)) {
    if (!cfg.potential) throw ConfigError(0, "missing key 'potential.family'");
    try {
      validate_potential(*cfg.potential);
    } catch (const InputError& err) {
      throw ConfigError(line_of("potential.family"), err.what());
    }
  }
  if (needs_h(cfg.experiment) && cfg.h_list.empty()) {
    throw ConfigError(0, "missing key 'sweep.h_list'");
  }
  if (cfg.experiment == "bound-sweep") {
    for (std::size_t i = 1; i < cfg.h_list.size(); ++i) {
      if (!(cfg.h_list[i] < cfg.h_list[i - 1])) {
        throw ConfigError(line_of("sweep.h_list"),
                          "sweep.h_list: bound-sweep needs descending h");
      }
    }
  }
  if (cfg.energy.lambda && cfg.energy.alpha) {
    throw ConfigError(line_of("energy.alpha"),
                      "set at most one of energy.lambda and energy.alpha");
  }
  if (cfg.energy.pauli && lines.count("energy.multiplicity") &&
      cfg.energy.multiplicity != 1) {
    throw ConfigError(line_of("energy.multiplicity"),
                      "energy.multiplicity: the Pauli kind needs 1");
  }
  if (cfg.coupling_z) {
    EnergyConfig probe = cfg.energy;
    if (!probe.lambda && !probe.alpha) probe.lambda = 1.0;
    if (auto w = probe.coupling_warning(*cfg.coupling_z, cfg.coupling_kappa)) {
      cfg.warnings.push_back(*w);
    }
  }
}

std::string csv_cell(const json& v) {
  if (v.is_null()) return {};
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  }
  return s;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {
      "tf-constant", "weyl-sweep", "field-min", "hydrogen-check", "bound-sweep"};
  return names;
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::map<std::string, int> seen;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty() || s[0] == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(line, "expected 'key = value', got '" + s + "'");
    }
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) throw ConfigError(line, "empty key");
    if (value.empty()) throw ConfigError(line, key + ": empty value");
    if (seen.count(key)) {
      throw ConfigError(line, "duplicate key '" + key + "' (first on line " +
                                  std::to_string(seen[key]) + ")");
    }
    seen[key] = line;

    if (key.rfind("potential.", 0) == 0) {
      const std::string sub = key.substr(10);
      if (!cfg.potential) cfg.potential = PotentialSpec{};
      if (sub == "family") {
        cfg.potential->family = value;
      } else {
        cfg.potential->params[sub] = to_double(value, line, key);
      }
      continue;
    }
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(line, "unknown key '" + key + "'");
    it->second(cfg, value, line, key);
  }
  if (cfg.potential && cfg.potential->family.empty()) {
    throw ConfigError(0, "potential parameters given without potential.family");
  }
  check_semantics(cfg, seen);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  return parse_config(read_file(path));
}

std::string config_hash(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

int worker_count() {
  if (const char* env = std::getenv("TFPAULI_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int validate_config(const std::string& config_path, std::ostream& log) {
  try {
    const ExperimentConfig cfg = load_config(config_path);
    for (const auto& w : cfg.warnings) log << "warning: " << w << "\n";
    log << "ok: experiment=" << cfg.experiment
        << " units=" << plan_units(cfg).size() << " output=" << cfg.output_path
        << "\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    log << config_path << ": " << e.what() << "\n";
    return kExitConfig;
  }
}

int run_experiment(const std::string& config_path, std::ostream& log) {
  ExperimentConfig cfg;
  std::string bytes;
  try {
    bytes = read_file(config_path);
    cfg = parse_config(bytes);
  } catch (const ConfigError& e) {
    log << config_path << ": " << e.what() << "\n";
    return kExitConfig;
  }
  for (const auto& w : cfg.warnings) log << "warning: " << w << "\n";

  const std::vector<Unit> units = plan_units(cfg);
  std::filesystem::path out_path(cfg.output_path);
  if (out_path.is_relative()) {
    out_path = std::filesystem::path(config_path).parent_path() / out_path;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) {
    log << config_path << ": cannot write output '" << out_path.string() << "'\n";
    return kExitConfig;
  }
  const std::string hash = config_hash(bytes);

  std::vector<std::optional<json>> done(units.size());
  std::mutex mu;
  std::condition_variable cv;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= units.size()) return;
      json r;
      try {
        r = units[i]();
      } catch (const NumericalError& e) {
        r = json::object();
        r["status"] = "failed";
        r["error"] = e.what();
        r["diagnostics"] = e.diagnostics();
      } catch (const std::exception& e) {
        r = json::object();
        r["status"] = "failed";
        r["error"] = e.what();
      }
      {
        std::lock_guard<std::mutex> lock(mu);
        done[i] = std::move(r);
      }
      cv.notify_all();
    }
  };
  const int nthreads =
      static_cast<int>(std::min<std::size_t>(worker_count(), units.size()));
  std::vector<std::thread> pool;
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);

  bool all_ok = true;
  for (std::size_t i = 0; i < units.size(); ++i) {
    json metrics;
    {
      std::unique_lock<std::mutex> lock(mu);
      cv.wait(lock, [&] { return done[i].has_value(); });
      metrics = std::move(*done[i]);
    }
    json rec;
    rec["experiment"] = cfg.experiment;
    rec["unit"] = i;
    rec["timestamp"] = cfg.wall_clock ? utc_now() : "logical:" + std::to_string(i);
    rec["config_hash"] = hash;
    rec["seed"] = cfg.seed;
    for (auto it = metrics.begin(); it != metrics.end(); ++it) rec[it.key()] = it.value();
    if (rec.value("status", "") != "ok") all_ok = false;
    out << rec.dump() << "\n";
    out.flush();
    log << cfg.experiment << " unit " << i + 1 << "/" << units.size() << ": "
        << rec.value("status", "") << "\n";
  }
  for (auto& t : pool) t.join();
  if (!out) {
    log << "error writing records\n";
    return kExitNumerical;
  }
  return all_ok ? kExitOk : kExitNumerical;
}

int emit_plot_data(const std::string& records_path,
                   const std::vector<std::string>& columns,
                   const std::string& out_path, std::ostream& log) {
  if (columns.empty()) {
    log << "no columns requested\n";
    return kExitConfig;
  }
  std::ifstream in(records_path, std::ios::binary);
  if (!in) {
    log << "cannot read '" << records_path << "'\n";
    return kExitConfig;
  }
  std::vector<json> recs;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (trim(raw).empty()) continue;
    try {
      json r = json::parse(raw);
      if (!r.is_object()) throw std::runtime_error("not an object");
      recs.push_back(std::move(r));
    } catch (const std::exception&) {
      log << records_path << ": line " << line << ": malformed record\n";
      return kExitConfig;
    }
  }
  if (!recs.empty()) {
    std::set<std::string> common;
    for (auto it = recs.front().begin(); it != recs.front().end(); ++it) {
      common.insert(it.key());
    }
    for (const auto& r : recs) {
      for (auto it = common.begin(); it != common.end();) {
        it = r.contains(*it) ? std::next(it) : common.erase(it);
      }
    }
    for (const auto& c : columns) {
      if (!common.count(c)) {
        log << "missing column '" << c << "'; available:";
        for (const auto& k : common) log << " " << k;
        log << "\n";
        return kExitConfig;
      }
    }
  }
  std::stable_sort(recs.begin(), recs.end(), [](const json& a, const json& b) {
    const std::string ea = a.value("experiment", ""), eb = b.value("experiment", "");
    if (ea != eb) return ea < eb;
    const bool ha = a.contains("h") && a["h"].is_number();
    const bool hb = b.contains("h") && b["h"].is_number();
    if (ha && hb) return a["h"].get<double>() > b["h"].get<double>();
    return false;
  });

  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) {
    log << "cannot write '" << out_path << "'\n";
    return kExitConfig;
  }
  for (std::size_t i = 0; i < columns.size(); ++i) {
    out << (i ? "," : "") << csv_cell(json(columns[i]));
  }
  out << "\n";
  for (const auto& r : recs) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      out << (i ? "," : "") << csv_cell(r[columns[i]]);
    }
    out << "\n";
  }
  return out ? kExitOk : kExitConfig;
}

}  // namespace tfpauli
