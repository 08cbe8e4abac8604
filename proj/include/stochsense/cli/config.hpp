// Copyright 2026 The stochsense Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

// Experiment configuration: JSON parsing, validation with field paths, and
// the task catalog.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "stochsense/cli/report.hpp"
#include "stochsense/common.hpp"
#include "stochsense/featmat.hpp"
#include "stochsense/inference.hpp"
#include "stochsense/protocols.hpp"
#include "stochsense/xxz.hpp"

namespace stochsense::cli {

using Json = nlohmann::json;

/// Documented resource limits. Exceeding one is a resource-cap error (exit 3),
/// not a schema error.
struct Limits {
  static constexpr int kMaxProtocolQubits = 10;
  static constexpr int kMaxSearchQubits = 6;
  static constexpr int kMaxXxzSpins = 8;
  static constexpr int kMaxQuadraticVars = 1024;
  static constexpr std::int64_t kMaxShots = std::int64_t(1) << 40;
  static constexpr long long kMaxTrials = 10'000'000;
  static constexpr long long kMaxEnsemble = 1'000'000;
  static constexpr int kMaxThreads = 256;
};

struct Diagnostic {
  enum class Kind { kSchema, kResource };
  Kind kind = Kind::kSchema;
  std::string path;
  std::string message;
};

struct Diagnostics {
  std::vector<Diagnostic> items;

  void schema(std::string path, std::string message) {
    items.push_back({Diagnostic::Kind::kSchema, std::move(path), std::move(message)});
  }
  void resource(std::string path, std::string message) {
    items.push_back({Diagnostic::Kind::kResource, std::move(path), std::move(message)});
  }
  bool empty() const { return items.empty(); }
  bool has_schema_error() const {
    for (const auto& d : items)
      if (d.kind == Diagnostic::Kind::kSchema) return true;
    return false;
  }
  std::string to_string() const {
    std::ostringstream os;
    for (const auto& d : items)
      os << (d.kind == Diagnostic::Kind::kSchema ? "config error" : "resource cap") << ": "
         << (d.path.empty() ? "<root>" : d.path) << ": " << d.message << '\n';
    return os.str();
  }
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(Diagnostics d)
      : std::runtime_error(d.to_string()), diagnostics_(std::move(d)) {}
  const Diagnostics& diagnostics() const { return diagnostics_; }

 private:
  Diagnostics diagnostics_;
};

/// Reads typed fields from one JSON object, recording problems against their
/// dotted path. Fields never read are reported as unknown by finish().
class ObjectReader {
 public:
  ObjectReader(const Json* obj, std::string path, Diagnostics& diag)
      : obj_(obj), path_(std::move(path)), diag_(&diag) {
    if (obj_ && !obj_->is_object()) {
      diag_->schema(path_, "expected an object");
      obj_ = nullptr;
    }
  }

  std::string path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const std::string& key) const { return obj_ && obj_->contains(key); }
  Diagnostics& diagnostics() const { return *diag_; }

  void fail(const std::string& key, const std::string& msg) const { diag_->schema(path(key), msg); }
  void cap(const std::string& key, const std::string& msg) const { diag_->resource(path(key), msg); }

  double real(const std::string& key, double def) {
    const Json* v = find(key);
    if (!v) return def;
    if (!v->is_number()) return fail(key, "expected a number"), def;
    const double x = v->get<double>();
    if (!std::isfinite(x)) return fail(key, "must be finite"), def;
    return x;
  }

  long long integer(const std::string& key, long long def) {
    const Json* v = find(key);
    if (!v) return def;
    if (v->is_number_integer()) return v->get<long long>();
    if (v->is_number_float()) {
      const double x = v->get<double>();
      if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 9.0e18) return static_cast<long long>(x);
    }
    fail(key, "expected an integer");
    return def;
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t def) {
    const Json* v = find(key);
    if (!v) return def;
    if (v->is_number_unsigned()) return v->get<std::uint64_t>();
    if (v->is_number_integer() && v->get<long long>() >= 0) return static_cast<std::uint64_t>(v->get<long long>());
    fail(key, "expected a non-negative 64-bit integer");
    return def;
  }

  bool boolean(const std::string& key, bool def) {
    const Json* v = find(key);
    if (!v) return def;
    if (!v->is_boolean()) return fail(key, "expected true or false"), def;
    return v->get<bool>();
  }

  std::string text(const std::string& key, const std::string& def) {
    const Json* v = find(key);
    if (!v) return def;
    if (!v->is_string()) return fail(key, "expected a string"), def;
    return v->get<std::string>();
  }

  std::string choice(const std::string& key, const std::string& def, const std::vector<std::string>& allowed) {
    std::string s = text(key, def);
    for (const auto& a : allowed)
      if (a == s) return s;
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
    fail(key, "unknown value '" + s + "'; valid values: " + list);
    return def;
  }

  std::vector<double> reals(const std::string& key, std::vector<double> def) {
    const Json* v = find(key);
    if (!v) return def;
    if (!v->is_array() || v->empty()) return fail(key, "expected a nonempty array of numbers"), def;
    std::vector<double> out;
    for (std::size_t i = 0; i < v->size(); ++i) {
      const Json& e = (*v)[i];
      if (!e.is_number() || !std::isfinite(e.get<double>())) {
        fail(key + "[" + std::to_string(i) + "]", "expected a finite number");
        return def;
      }
      out.push_back(e.get<double>());
    }
    return out;
  }

  std::vector<int> ints(const std::string& key, std::vector<int> def) {
    const Json* v = find(key);
    if (!v) return def;
    if (!v->is_array() || v->empty()) return fail(key, "expected a nonempty array of integers"), def;
    std::vector<int> out;
    for (std::size_t i = 0; i < v->size(); ++i) {
      const Json& e = (*v)[i];
      if (!e.is_number_integer() || std::abs(e.get<long long>()) > 1'000'000'000) {
        fail(key + "[" + std::to_string(i) + "]", "expected an integer");
        return def;
      }
      out.push_back(static_cast<int>(e.get<long long>()));
    }
    return out;
  }

  /// Raw access for fields with several accepted shapes.
  const Json* raw(const std::string& key) { return find(key); }

  ObjectReader child(const std::string& key) {
    const Json* v = find(key);
    return ObjectReader(v, path(key), *diag_);
  }

  void finish() const {
    if (!obj_) return;
    for (auto it = obj_->begin(); it != obj_->end(); ++it)
      if (!seen_.count(it.key())) diag_->schema(path(it.key()), "unknown field");
  }

 private:
  const Json* find(const std::string& key) {
    seen_.insert(key);
    if (!obj_) return nullptr;
    auto it = obj_->find(key);
    if (it == obj_->end() || it->is_null()) return nullptr;
    return &*it;
  }

  const Json* obj_;
  std::string path_;
  Diagnostics* diag_;
  std::set<std::string> seen_;
};

// Task parameter blocks ------------------------------------------------------

struct BellGaussianParams {
  double sigma = 1.5;
  double sigma_corr2 = 0.99 * 1.5 * 1.5;
  double c = -0.25;
  std::vector<std::int64_t> shots = log2_shots_grid(0.0, std::log2(200.0), 4);
  long long trials = 2000;
  std::string classifier = "mle";
  std::string shot_model = "per_shot";
  std::vector<double> nu_entangled = {0.0, kPi / 2};
  std::vector<double> nu_unentangled = {0.0, kPi / 2};
  std::int64_t report_shots = 50;
  double target_accuracy = 0.95;
};

struct GhzClassifyParams {
  std::vector<int> n_qubits = {2, 3, 4, 5, 6};
  double c = 0.3;
  std::vector<std::int64_t> shots = log2_shots_grid(0.0, 24.0, 4);
  long long trials = 2000;
  std::string classifier = "tvd";
  AveragingOptions averaging = [] {
    AveragingOptions o;
    o.method = AveragingOptions::Method::kExactGrid;
    return o;
  }();
  double target_accuracy = 0.95;
  int anchor_grid = 64;
};

struct Range {
  double min = 0.0, max = 0.0;
  int points = 1;

  std::vector<double> values() const {
    std::vector<double> out;
    for (int i = 0; i < points; ++i)
      out.push_back(points == 1 ? min : min + (max - min) * i / (points - 1));
    return out;
  }
};

struct GhzEstimateParams {
  std::vector<int> n_qubits = {2, 3, 4, 5, 6};
  Range train_c{-0.1, 0.1, 21};
  Range test_c{-0.05, 0.05, 11};
  std::vector<std::int64_t> shots = log2_shots_grid(4.0, 26.0, 4);
  long long trials = 1000;
  double target_mse = 1e-4;
  AveragingOptions averaging = [] {
    AveragingOptions o;
    o.method = AveragingOptions::Method::kExactGrid;
    return o;
  }();
};

struct XxzParamsBlock {
  std::vector<int> n_qubits = {2, 3, 4, 5};
  std::vector<double> temperatures = {0.5, 2.0};
  double J = 1.0;
  double delta = 0.75;
  double M = 0.1;
  double coupling = kPi;
  MetropolisSettings metropolis;
  long long train_samples = 4000;
  long long test_samples = 4000;
  int chains = 8;
  std::vector<std::int64_t> shots = log2_shots_grid(0.0, 20.0, 4);
  long long trials = 2000;
  std::string classifier = "tvd";
  double target_accuracy = 0.95;
  long long conservation_steps = 0;
};

struct FeatmatParams {
  std::string family = "constrained_uniform";
  double c = 0.3;
  std::vector<double> mean_a = {0.0, 0.0}, mean_b = {0.0, 0.0};
  std::vector<double> cov_a = {1.0, 0.5, 0.5, 1.0}, cov_b = {1.0, 0.6, 0.6, 1.0};
  std::vector<int> n_qubits = {2, 3, 4, 5, 6, 7, 8};
  std::string map = "local";
  int product_max_qubits = 4;
  ProductSearchSettings search;
  int matrix_max_qubits = 4;
};

struct QuadraticParams {
  std::vector<int> n_var = {2, 4, 8};
  double c = 0.5;
  int samples = 50;
  double epsilon = 1e-3;
};

struct MulticopyParams {
  int phi_points = 16;
  std::vector<double> t_values = {0.0, 0.37, 1.1};
  int single_copy_grid = 16;
};

using TaskParams = std::variant<BellGaussianParams, GhzClassifyParams, GhzEstimateParams,
                                XxzParamsBlock, FeatmatParams, QuadraticParams, MulticopyParams>;

struct ExperimentConfig {
  std::string task;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string out_dir = "runs";
  bool svg = true;
  TaskParams params;
  /// Input document with the effective seed, minus fields that do not change
  /// results (threads, output). Its dump is what the run hash covers.
  Json canonical;
};

struct TaskInfo {
  std::string name;
  std::string summary;
  std::vector<std::string> params;  ///< "key (default): meaning"
};

inline const std::vector<TaskInfo>& task_catalog() {
  static const std::vector<TaskInfo> catalog = {
      {"bell-gaussian",
       "Two-qubit correlated-Gaussian classification: Bell probe vs product probe, accuracy vs shots.",
       {"sigma (1.5): marginal standard deviation [rad]",
        "sigma_corr2 | sigma_corr2_ratio (0.99): covariance [rad^2] or its ratio to sigma^2",
        "C (-0.25): class A mean difference theta1 - theta2 [rad]; class B uses -C",
        "shots (log2 grid 1..200, 4/octave): array or {min_exp, max_exp, per_octave}",
        "trials (2000): balanced trials per grid point",
        "classifier (mle): mle | tvd", "shot_model (per_shot): per_shot | table",
        "nu_entangled ([0, pi/2]) and nu_unentangled ([0, pi/2]): phase offsets [rad]",
        "report_shots (50): shot count reported in the summary",
        "target_accuracy (0.95)"}},
      {"ghz-classify",
       "N-qubit constrained-uniform classification (sum = +-C): GHZ vs product probe, shots to target accuracy.",
       {"n_qubits ([2..6])", "C (0.3) [rad]", "shots (2^0..2^24, 4/octave)", "trials (2000)",
        "classifier (tvd): tvd | mle",
        "averaging ({method: exact_grid}): exact_grid | monte_carlo with convergence_ratio (5000), batch_size (1e4), max_batches (2e4)",
        "target_accuracy (0.95)", "anchor_grid (64): grid points per angle for the two-qubit p11 check"}},
      {"ghz-estimate",
       "N-qubit estimation of the constrained sum with a trained linear estimator, shots to target MSE.",
       {"n_qubits ([2..6])", "train_c ({min -0.1, max 0.1, points 21}) [rad]",
        "test_c ({min -0.05, max 0.05, points 11}) [rad]", "shots (2^4..2^26, 4/octave)",
        "trials (1000)", "target_mse (1e-4) [rad^2]", "averaging (as ghz-classify)"}},
      {"xxz",
       "Classical XXZ chain Gibbs ensembles with conserved total magnetization +-M, GHZ vs best product probe.",
       {"n_qubits ([2,3,4,5])", "temperatures ([0.5, 2.0]) [J]", "J (1) [energy]", "delta (0.75)",
        "M (0.1): class A total magnetization; class B uses -M", "coupling (pi) [rad]",
        "metropolis ({tau_therm 10000, tau_sweep 500, delta_s 0.2, delta_phi pi/4})",
        "train_samples (4000) and test_samples (4000): ensemble sizes per class", "chains (8)",
        "shots (2^0..2^20, 4/octave)", "trials (2000)", "classifier (tvd)",
        "target_accuracy (0.95)", "conservation_steps (0): extra chain length for the drift check"}},
      {"featmat",
       "Feature matrices, optimal entangled separation, best product separation and shot bounds.",
       {"family (constrained_uniform): constrained_uniform | gaussian", "C (0.3) [rad]",
        "mean_a, mean_b, cov_a, cov_b: gaussian family moments (row-major covariance) [rad, rad^2]",
        "n_qubits ([2..8])", "map (local): local | halved | entangling_zz",
        "product_max_qubits (4): largest N for the product search",
        "search ({coarse_candidates 256, starts 12, max_evals 4000, restarts 2})",
        "matrix_max_qubits (4): largest N whose matrix is written as CSV"}},
      {"quadratic",
       "Quadratic constraint sensing with signed Pauli strings: overlap against cos(sqrt C).",
       {"n_var ([2,4,8]): even variable counts", "C (0.5) [rad^2]", "samples (50)",
        "epsilon (1e-3): constraint perturbation [rad^2]"}},
      {"multicopy",
       "Single-copy averaged density and the two multicopy protocols on a phase grid.",
       {"phi_points (16)", "t_values ([0, 0.37, 1.1]) [rad]", "single_copy_grid (16)"}},
  };
  return catalog;
}

namespace config_detail {

inline std::vector<std::int64_t> read_shots(ObjectReader& r, const std::string& key,
                                            std::vector<std::int64_t> def) {
  const Json* v = r.raw(key);
  if (!v) return def;
  std::vector<std::int64_t> out;
  if (v->is_array()) {
    if (v->empty()) return r.fail(key, "expected a nonempty array"), def;
    for (std::size_t i = 0; i < v->size(); ++i) {
      const Json& e = (*v)[i];
      if (!e.is_number_integer() || e.get<long long>() < 1) {
        r.fail(key + "[" + std::to_string(i) + "]", "shots must be integers >= 1");
        return def;
      }
      const auto s = e.get<std::int64_t>();
      if (!out.empty() && s <= out.back()) {
        r.fail(key, "shots must be strictly increasing");
        return def;
      }
      out.push_back(s);
    }
  } else if (v->is_object()) {
    ObjectReader g(v, r.path(key), r.diagnostics());
    const double lo = g.real("min_exp", 0.0), hi = g.real("max_exp", 10.0);
    const long long per = g.integer("per_octave", 1);
    g.finish();
    if (lo < 0.0 || hi < lo || per < 1 || per > 64) {
      r.fail(key, "need 0 <= min_exp <= max_exp and 1 <= per_octave <= 64");
      return def;
    }
    if (hi > 40.0) {
      r.cap(key, "max_exp above 40 exceeds the shot limit 2^40");
      return def;
    }
    out = log2_shots_grid(lo, hi, static_cast<int>(per));
  } else {
    r.fail(key, "expected an array of shot counts or {min_exp, max_exp, per_octave}");
    return def;
  }
  if (out.back() > Limits::kMaxShots) r.cap(key, "shot counts above 2^40 exceed the limit");
  return out;
}

inline long long read_trials(ObjectReader& r, long long def) {
  const long long t = r.integer("trials", def);
  if (t < 100) r.fail("trials", "must be >= 100");
  if (t > Limits::kMaxTrials) r.cap("trials", "more than 1e7 trials per point exceeds the limit");
  return t;
}

inline void read_qubits(ObjectReader& r, const std::string& key, std::vector<int>& n, int lo, int cap) {
  n = r.ints(key, n);
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i] < lo) r.fail(key + "[" + std::to_string(i) + "]", "must be >= " + std::to_string(lo));
    if (n[i] > cap)
      r.cap(key + "[" + std::to_string(i) + "]", "exceeds the limit of " + std::to_string(cap));
  }
}

inline double read_probability_target(ObjectReader& r, const std::string& key, double def) {
  const double t = r.real(key, def);
  if (!(t > 0.5 && t < 1.0)) r.fail(key, "must lie in (0.5, 1)");
  return t;
}

inline AveragingOptions read_averaging(ObjectReader& parent, AveragingOptions def) {
  ObjectReader r = parent.child("averaging");
  const std::string m = r.choice("method", def.method == AveragingOptions::Method::kExactGrid
                                               ? "exact_grid" : "monte_carlo",
                                 {"exact_grid", "monte_carlo"});
  def.method = m == "exact_grid" ? AveragingOptions::Method::kExactGrid
                                 : AveragingOptions::Method::kMonteCarlo;
  def.convergence_ratio = r.real("convergence_ratio", def.convergence_ratio);
  def.batch_size = r.integer("batch_size", def.batch_size);
  def.max_batches = r.integer("max_batches", def.max_batches);
  if (!(def.convergence_ratio > 1.0)) r.fail("convergence_ratio", "must exceed 1");
  if (def.batch_size < 1) r.fail("batch_size", "must be >= 1");
  if (def.max_batches < 2) r.fail("max_batches", "must be >= 2");
  if (static_cast<double>(def.batch_size) * static_cast<double>(def.max_batches) > 1e12)
    r.cap("max_batches", "batch_size * max_batches above 1e12 exceeds the limit");
  r.finish();
  return def;
}

inline Range read_range(ObjectReader& parent, const std::string& key, Range def) {
  ObjectReader r = parent.child(key);
  def.min = r.real("min", def.min);
  def.max = r.real("max", def.max);
  def.points = static_cast<int>(r.integer("points", def.points));
  if (def.points < 1 || def.points > 100000) r.fail("points", "must lie in [1, 100000]");
  if (def.max < def.min) r.fail("max", "must be >= min");
  r.finish();
  return def;
}

inline BellGaussianParams read_bell(ObjectReader& r) {
  BellGaussianParams p;
  p.sigma = r.real("sigma", p.sigma);
  if (!(p.sigma > 0.0)) r.fail("sigma", "must be > 0");
  if (r.has("sigma_corr2") && r.has("sigma_corr2_ratio"))
    r.fail("sigma_corr2", "give either sigma_corr2 or sigma_corr2_ratio, not both");
  const double s2 = p.sigma * p.sigma;
  if (r.has("sigma_corr2")) {
    p.sigma_corr2 = r.real("sigma_corr2", 0.0);
    if (std::abs(p.sigma_corr2) > s2)
      r.fail("sigma_corr2", "PSD violation: |sigma_corr2| must not exceed sigma^2 = " +
                                std::to_string(s2));
  } else {
    const double ratio = r.real("sigma_corr2_ratio", 0.99);
    if (std::abs(ratio) > 1.0)
      r.fail("sigma_corr2_ratio", "PSD violation: |sigma_corr2_ratio| must not exceed 1");
    p.sigma_corr2 = ratio * s2;
  }
  p.c = r.real("C", p.c);
  p.shots = read_shots(r, "shots", p.shots);
  p.trials = read_trials(r, p.trials);
  p.classifier = r.choice("classifier", p.classifier, {"mle", "tvd"});
  p.shot_model = r.choice("shot_model", p.shot_model, {"per_shot", "table"});
  p.nu_entangled = r.reals("nu_entangled", p.nu_entangled);
  p.nu_unentangled = r.reals("nu_unentangled", p.nu_unentangled);
  if (p.nu_entangled.size() != 2) r.fail("nu_entangled", "expected two offsets");
  if (p.nu_unentangled.size() != 2) r.fail("nu_unentangled", "expected two offsets");
  p.report_shots = r.integer("report_shots", p.report_shots);
  if (p.report_shots < 1) r.fail("report_shots", "must be >= 1");
  if (p.report_shots > Limits::kMaxShots) r.cap("report_shots", "exceeds the shot limit 2^40");
  p.target_accuracy = read_probability_target(r, "target_accuracy", p.target_accuracy);
  return p;
}

inline GhzClassifyParams read_ghz_classify(ObjectReader& r) {
  GhzClassifyParams p;
  read_qubits(r, "n_qubits", p.n_qubits, 1, Limits::kMaxProtocolQubits);
  p.c = r.real("C", p.c);
  p.shots = read_shots(r, "shots", p.shots);
  p.trials = read_trials(r, p.trials);
  p.classifier = r.choice("classifier", p.classifier, {"tvd", "mle"});
  p.averaging = read_averaging(r, p.averaging);
  p.target_accuracy = read_probability_target(r, "target_accuracy", p.target_accuracy);
  p.anchor_grid = static_cast<int>(r.integer("anchor_grid", p.anchor_grid));
  if (p.anchor_grid < 3 || p.anchor_grid > 100000) r.fail("anchor_grid", "must lie in [3, 100000]");
  return p;
}

inline GhzEstimateParams read_ghz_estimate(ObjectReader& r) {
  GhzEstimateParams p;
  read_qubits(r, "n_qubits", p.n_qubits, 1, Limits::kMaxProtocolQubits);
  p.train_c = read_range(r, "train_c", p.train_c);
  p.test_c = read_range(r, "test_c", p.test_c);
  if (p.train_c.points < 2 || p.train_c.max == p.train_c.min)
    r.fail("train_c", "need at least two distinct training values");
  p.shots = read_shots(r, "shots", p.shots);
  p.trials = read_trials(r, p.trials);
  p.target_mse = r.real("target_mse", p.target_mse);
  if (!(p.target_mse > 0.0)) r.fail("target_mse", "must be > 0");
  p.averaging = read_averaging(r, p.averaging);
  return p;
}

inline XxzParamsBlock read_xxz(ObjectReader& r) {
  XxzParamsBlock p;
  read_qubits(r, "n_qubits", p.n_qubits, 2, Limits::kMaxXxzSpins);
  p.temperatures = r.reals("temperatures", p.temperatures);
  for (std::size_t i = 0; i < p.temperatures.size(); ++i)
    if (!(p.temperatures[i] > 0.0))
      r.fail("temperatures[" + std::to_string(i) + "]", "temperatures must be > 0");
  p.J = r.real("J", p.J);
  p.delta = r.real("delta", p.delta);
  p.M = r.real("M", p.M);
  for (int n : p.n_qubits)
    if (std::abs(p.M) > n) r.fail("M", "|M| must not exceed every n in n_qubits");
  p.coupling = r.real("coupling", p.coupling);
  {
    ObjectReader m = r.child("metropolis");
    p.metropolis.tau_therm = m.integer("tau_therm", p.metropolis.tau_therm);
    p.metropolis.tau_sweep = m.integer("tau_sweep", p.metropolis.tau_sweep);
    p.metropolis.delta_s = m.real("delta_s", p.metropolis.delta_s);
    p.metropolis.delta_phi = m.real("delta_phi", p.metropolis.delta_phi);
    if (p.metropolis.tau_therm < 0) m.fail("tau_therm", "must be >= 0");
    if (p.metropolis.tau_sweep < 1) m.fail("tau_sweep", "must be >= 1");
    if (!(p.metropolis.delta_s > 0.0)) m.fail("delta_s", "must be > 0");
    if (!(p.metropolis.delta_phi > 0.0)) m.fail("delta_phi", "must be > 0");
    m.finish();
  }
  p.train_samples = r.integer("train_samples", p.train_samples);
  p.test_samples = r.integer("test_samples", p.test_samples);
  for (const char* k : {"train_samples", "test_samples"}) {
    const long long v = std::string(k) == "train_samples" ? p.train_samples : p.test_samples;
    if (v < 1) r.fail(k, "must be >= 1");
    if (v > Limits::kMaxEnsemble) r.cap(k, "ensembles above 1e6 samples exceed the limit");
  }
  p.chains = static_cast<int>(r.integer("chains", p.chains));
  if (p.chains < 1 || p.chains > 4096) r.fail("chains", "must lie in [1, 4096]");
  p.shots = read_shots(r, "shots", p.shots);
  p.trials = read_trials(r, p.trials);
  p.classifier = r.choice("classifier", p.classifier, {"tvd", "mle"});
  p.target_accuracy = read_probability_target(r, "target_accuracy", p.target_accuracy);
  p.conservation_steps = r.integer("conservation_steps", p.conservation_steps);
  if (p.conservation_steps < 0) r.fail("conservation_steps", "must be >= 0");
  if (p.conservation_steps > 1'000'000'000) r.cap("conservation_steps", "exceeds 1e9 steps");
  return p;
}

inline FeatmatParams read_featmat(ObjectReader& r) {
  FeatmatParams p;
  p.family = r.choice("family", p.family, {"constrained_uniform", "gaussian"});
  p.c = r.real("C", p.c);
  p.mean_a = r.reals("mean_a", p.mean_a);
  p.mean_b = r.reals("mean_b", p.mean_b);
  p.cov_a = r.reals("cov_a", p.cov_a);
  p.cov_b = r.reals("cov_b", p.cov_b);
  p.map = r.choice("map", p.map, {"local", "halved", "entangling_zz"});
  if (p.family == "gaussian") {
    const std::size_t d = p.mean_a.size();
    if (p.mean_b.size() != d) r.fail("mean_b", "must have the same length as mean_a");
    if (p.cov_a.size() != d * d) r.fail("cov_a", "must be a row-major d x d matrix");
    if (p.cov_b.size() != d * d) r.fail("cov_b", "must be a row-major d x d matrix");
    if (!r.has("n_qubits")) p.n_qubits = {static_cast<int>(d)};
  }
  read_qubits(r, "n_qubits", p.n_qubits, 1, kMaxFeatureQubits);
  for (int n : p.n_qubits) {
    if (p.family == "gaussian" && n != static_cast<int>(p.mean_a.size()))
      r.fail("n_qubits", "gaussian family needs n_qubits equal to the mean length");
    if (p.map == "entangling_zz" && n < 2) r.fail("n_qubits", "entangling_zz needs n >= 2");
  }
  p.product_max_qubits = static_cast<int>(r.integer("product_max_qubits", p.product_max_qubits));
  if (p.product_max_qubits < 0) r.fail("product_max_qubits", "must be >= 0");
  if (p.product_max_qubits > Limits::kMaxSearchQubits)
    r.cap("product_max_qubits", "the product search is limited to 6 qubits");
  {
    ObjectReader s = r.child("search");
    p.search.coarse_candidates = static_cast<int>(s.integer("coarse_candidates", p.search.coarse_candidates));
    p.search.starts = static_cast<int>(s.integer("starts", p.search.starts));
    p.search.max_evals = static_cast<int>(s.integer("max_evals", p.search.max_evals));
    p.search.restarts = static_cast<int>(s.integer("restarts", p.search.restarts));
    if (p.search.coarse_candidates < 1) s.fail("coarse_candidates", "must be >= 1");
    if (p.search.starts < 1) s.fail("starts", "must be >= 1");
    if (p.search.max_evals < 10) s.fail("max_evals", "must be >= 10");
    if (p.search.restarts < 0) s.fail("restarts", "must be >= 0");
    s.finish();
  }
  p.matrix_max_qubits = static_cast<int>(r.integer("matrix_max_qubits", p.matrix_max_qubits));
  if (p.matrix_max_qubits < 0 || p.matrix_max_qubits > kMaxFeatureQubits)
    r.fail("matrix_max_qubits", "must lie in [0, 10]");
  return p;
}

inline QuadraticParams read_quadratic(ObjectReader& r) {
  QuadraticParams p;
  p.n_var = r.ints("n_var", p.n_var);
  for (std::size_t i = 0; i < p.n_var.size(); ++i) {
    const std::string k = "n_var[" + std::to_string(i) + "]";
    if (p.n_var[i] < 2 || p.n_var[i] % 2) r.fail(k, "must be even and >= 2");
    if (p.n_var[i] > Limits::kMaxQuadraticVars) r.cap(k, "exceeds the limit of 1024 variables");
  }
  p.c = r.real("C", p.c);
  if (!(p.c > 0.0)) r.fail("C", "must be > 0");
  p.samples = static_cast<int>(r.integer("samples", p.samples));
  if (p.samples < 1 || p.samples > 1000000) r.fail("samples", "must lie in [1, 1e6]");
  p.epsilon = r.real("epsilon", p.epsilon);
  if (!(p.epsilon > 0.0) || !(p.epsilon < p.c)) r.fail("epsilon", "must lie in (0, C)");
  return p;
}

inline MulticopyParams read_multicopy(ObjectReader& r) {
  MulticopyParams p;
  p.phi_points = static_cast<int>(r.integer("phi_points", p.phi_points));
  if (p.phi_points < 1 || p.phi_points > 100000) r.fail("phi_points", "must lie in [1, 1e5]");
  p.t_values = r.reals("t_values", p.t_values);
  p.single_copy_grid = static_cast<int>(r.integer("single_copy_grid", p.single_copy_grid));
  if (p.single_copy_grid < 3 || p.single_copy_grid > 100000)
    r.fail("single_copy_grid", "must lie in [3, 1e5]");
  return p;
}

}  // namespace config_detail

/// Parses and validates a config document. Overrides (when set) replace the
/// document's seed and thread count. Throws ConfigError listing every problem.
inline ExperimentConfig parse_config(const Json& doc, std::optional<std::uint64_t> seed_override = {},
                                     std::optional<int> threads_override = {}) {
  using namespace config_detail;
  Diagnostics diag;
  ExperimentConfig cfg;
  ObjectReader root(&doc, "", diag);
  if (!doc.is_object()) {
    diag.schema("", "document root must be a JSON object");
    throw ConfigError(diag);
  }
  cfg.task = root.text("task", "");
  cfg.seed = root.unsigned_integer("seed", cfg.seed);
  if (seed_override) cfg.seed = *seed_override;
  const long long threads = threads_override ? *threads_override : root.integer("threads", 1);
  if (threads < 1) diag.schema("threads", "must be >= 1");
  if (threads > Limits::kMaxThreads) diag.resource("threads", "more than 256 threads exceeds the limit");
  cfg.threads = static_cast<int>(std::clamp<long long>(threads, 1, Limits::kMaxThreads));
  {
    ObjectReader out = root.child("output");
    cfg.out_dir = out.text("dir", cfg.out_dir);
    cfg.svg = out.boolean("svg", cfg.svg);
    out.finish();
  }
  ObjectReader params = root.child("params");
  if (cfg.task == "bell-gaussian") cfg.params = read_bell(params);
  else if (cfg.task == "ghz-classify") cfg.params = read_ghz_classify(params);
  else if (cfg.task == "ghz-estimate") cfg.params = read_ghz_estimate(params);
  else if (cfg.task == "xxz") cfg.params = read_xxz(params);
  else if (cfg.task == "featmat") cfg.params = read_featmat(params);
  else if (cfg.task == "quadratic") cfg.params = read_quadratic(params);
  else if (cfg.task == "multicopy") cfg.params = read_multicopy(params);
  else {
    std::string list;
    for (const auto& t : task_catalog()) list += (list.empty() ? "" : ", ") + t.name;
    diag.schema("task", (cfg.task.empty() ? std::string("missing task") : "unknown task '" + cfg.task + "'") +
                            "; valid tasks: " + list);
  }
  params.finish();
  root.finish();
  if (!diag.empty()) throw ConfigError(diag);
  cfg.canonical = doc;
  cfg.canonical["seed"] = cfg.seed;
  cfg.canonical.erase("threads");
  cfg.canonical.erase("output");
  return cfg;
}

/// Twelve hex digits of FNV-1a over the canonical document.
inline std::string config_hash(const ExperimentConfig& cfg) {
  return hex64(fnv1a64(cfg.canonical.dump())).substr(0, 12);
}

}  // namespace stochsense::cli
