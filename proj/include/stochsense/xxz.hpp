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

// Classical XXZ ring with conserved total Z magnetization.
//
// Spins are unit vectors written as (f(s) cos phi, f(s) sin phi, s) with
// f(s) = sqrt(1 - s^2). The sampler moves pairs of spins, transferring Z
// magnetization between them so that sum_j s_j never changes.

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "stochsense/common.hpp"
#include "stochsense/rng.hpp"

namespace stochsense {

struct XXZParams {
  int n = 2;
  double J = 1.0;
  double delta = 0.75;
  double beta = 1.0;
  double M = 0.0;

  void validate() const {
    if (n < 2) throw std::invalid_argument("xxz: n must be >= 2");
    if (!std::isfinite(J) || !std::isfinite(delta))
      throw std::invalid_argument("xxz: J and delta must be finite");
    if (!(beta >= 0.0) || !std::isfinite(beta))
      throw std::invalid_argument("xxz: beta must be finite and >= 0");
    if (!(std::abs(M) <= n)) throw std::invalid_argument("xxz: |M| must not exceed n");
  }
};

struct SpinConfig {
  std::vector<double> s;
  std::vector<double> phi;

  double total_z() const {
    double t = 0.0;
    for (double v : s) t += v;
    return t;
  }
};

struct MetropolisSettings {
  long long tau_therm = 10000;
  long long tau_sweep = 500;
  double delta_s = 0.2;
  double delta_phi = kPi / 4;
  long long n_samples = 1000;

  void validate() const {
    if (tau_therm < 0 || tau_sweep < 1 || n_samples < 1)
      throw std::invalid_argument("metropolis: step counts must be positive");
    if (!(delta_s > 0.0) || !(delta_phi > 0.0))
      throw std::invalid_argument("metropolis: step sizes must be positive");
  }
};

namespace xxz_detail {

inline double f(double s) { return std::sqrt(std::max(0.0, 1.0 - s * s)); }

/// Energy of bond (j, j+1 mod n).
inline double bond(const SpinConfig& c, const XXZParams& p, int j) {
  int k = (j + 1) % p.n;
  return -p.J * (f(c.s[j]) * f(c.s[k]) * std::cos(c.phi[k] - c.phi[j]) +
                 p.delta * c.s[j] * c.s[k]);
}

inline double wrap_angle(double x) {
  x = std::fmod(x, kTwoPi);
  return x < 0.0 ? x + kTwoPi : x;
}

}  // namespace xxz_detail

inline double energy(const SpinConfig& config, const XXZParams& params) {
  if (static_cast<int>(config.s.size()) != params.n ||
      static_cast<int>(config.phi.size()) != params.n)
    throw std::invalid_argument("xxz: config size does not match n");
  double e = 0.0;
  for (int j = 0; j < params.n; ++j) e += xxz_detail::bond(config, params, j);
  return e;
}

struct MetropolisResult {
  std::vector<SpinConfig> samples;
  std::vector<double> energies;
  std::vector<long long> steps;
  long long proposed = 0;
  long long accepted = 0;
  long long out_of_range = 0;
  double min_energy = 0.0;
  double max_abs_drift = 0.0;  ///< largest |sum_j s_j - M| over every step

  double acceptance_rate() const {
    return proposed ? static_cast<double>(accepted) / static_cast<double>(proposed) : 0.0;
  }
};

/// One constrained Metropolis chain. A configuration is emitted after step i
/// whenever i > tau_therm and (i - tau_therm) is a multiple of tau_sweep, so
/// the chain runs tau_therm + tau_sweep * n_samples steps in total.
inline MetropolisResult metropolis_sample(const XXZParams& params,
                                          const MetropolisSettings& settings,
                                          RandomStream& rng) {
  params.validate();
  settings.validate();
  const int n = params.n;
  SpinConfig c;
  c.s.assign(static_cast<std::size_t>(n), params.M / n);
  c.phi.resize(static_cast<std::size_t>(n));
  for (double& v : c.phi) v = rng.uniform(0.0, kTwoPi);

  MetropolisResult out;
  out.samples.reserve(static_cast<std::size_t>(settings.n_samples));
  double e = energy(c, params);
  out.min_energy = e;
  const long long total = settings.tau_therm + settings.tau_sweep * settings.n_samples;

  int bonds[4];
  for (long long step = 1; step <= total; ++step) {
    ++out.proposed;
    int j = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    int k = static_cast<int>(rng() % static_cast<std::uint64_t>(n - 1));
    if (k >= j) ++k;
    const double dphi_j = rng.uniform(-settings.delta_phi, settings.delta_phi);
    const double dphi_k = rng.uniform(-settings.delta_phi, settings.delta_phi);
    const double ds = rng.uniform(-settings.delta_s, settings.delta_s);
    const double sj = c.s[j] + ds;
    const double sk = c.s[k] - ds;
    if (sj < -1.0 || sj > 1.0 || sk < -1.0 || sk > 1.0) {
      ++out.out_of_range;
    } else {
      int nb = 0;
      for (int b : {(j + n - 1) % n, j, (k + n - 1) % n, k}) {
        bool seen = false;
        for (int t = 0; t < nb; ++t) seen = seen || bonds[t] == b;
        if (!seen) bonds[nb++] = b;
      }
      double before = 0.0;
      for (int t = 0; t < nb; ++t) before += xxz_detail::bond(c, params, bonds[t]);
      const double old_sj = c.s[j], old_sk = c.s[k];
      const double old_pj = c.phi[j], old_pk = c.phi[k];
      c.s[j] = sj;
      c.s[k] = sk;
      c.phi[j] = xxz_detail::wrap_angle(old_pj + dphi_j);
      c.phi[k] = xxz_detail::wrap_angle(old_pk + dphi_k);
      double after = 0.0;
      for (int t = 0; t < nb; ++t) after += xxz_detail::bond(c, params, bonds[t]);
      const double de = after - before;
      bool accept = de < 0.0;
      if (!accept) accept = rng.uniform() <= std::exp(-params.beta * de);
      if (accept) {
        ++out.accepted;
        e += de;
        out.min_energy = std::min(out.min_energy, e);
      } else {
        c.s[j] = old_sj;
        c.s[k] = old_sk;
        c.phi[j] = old_pj;
        c.phi[k] = old_pk;
      }
    }
    out.max_abs_drift = std::max(out.max_abs_drift, std::abs(c.total_z() - params.M));
    if (step > settings.tau_therm && (step - settings.tau_therm) % settings.tau_sweep == 0) {
      // Re-evaluate the energy so accumulated rounding in `e` never leaks out.
      e = energy(c, params);
      out.samples.push_back(c);
      out.energies.push_back(e);
      out.steps.push_back(step);
    }
  }
  return out;
}

/// theta_j = coupling * s_j.
inline std::vector<double> spins_to_phases(const SpinConfig& config, double coupling = kPi) {
  std::vector<double> theta(config.s.size());
  for (std::size_t j = 0; j < theta.size(); ++j) theta[j] = coupling * config.s[j];
  return theta;
}

/// A Gibbs ensemble frozen into sensing phases. Sampling draws members
/// uniformly, so the spec is a finite empirical distribution.
struct XXZGibbsSpec {
  XXZParams params;
  double coupling = kPi;
  std::shared_ptr<const std::vector<std::vector<double>>> thetas;

  int n_params() const { return params.n; }
  std::size_t size() const { return thetas ? thetas->size() : 0; }
};

/// Runs `chains` independent chains (child streams of `rng`) and pools their
/// samples in chain order. Chain c contributes n_samples / chains samples plus
/// one if c < n_samples % chains.
inline XXZGibbsSpec make_xxz_gibbs(const XXZParams& params, const MetropolisSettings& settings,
                                   double coupling, const RandomStream& rng, int chains = 1,
                                   int threads = 1) {
  params.validate();
  settings.validate();
  if (chains < 1) throw std::invalid_argument("xxz: chains must be >= 1");
  std::vector<std::vector<std::vector<double>>> parts(static_cast<std::size_t>(chains));
  parallel_for(static_cast<std::size_t>(chains), threads, [&](std::size_t c) {
    MetropolisSettings s = settings;
    s.n_samples = settings.n_samples / chains +
                  (static_cast<long long>(c) < settings.n_samples % chains ? 1 : 0);
    if (s.n_samples == 0) return;
    RandomStream stream = rng.child(c);
    MetropolisResult r = metropolis_sample(params, s, stream);
    for (const auto& cfg : r.samples) parts[c].push_back(spins_to_phases(cfg, coupling));
  });
  auto all = std::make_shared<std::vector<std::vector<double>>>();
  for (auto& p : parts)
    for (auto& t : p) all->push_back(std::move(t));
  return XXZGibbsSpec{params, coupling, std::move(all)};
}

/// CSV with columns step, s_1..s_n, phi_1..phi_n, energy.
inline void write_ensemble_csv(std::ostream& os, const MetropolisResult& result) {
  if (result.samples.empty()) return;
  const std::size_t n = result.samples.front().s.size();
  os << "step";
  for (std::size_t j = 1; j <= n; ++j) os << ",s_" << j;
  for (std::size_t j = 1; j <= n; ++j) os << ",phi_" << j << "_rad";
  os << ",energy_J\n";
  char buf[32];
  for (std::size_t i = 0; i < result.samples.size(); ++i) {
    os << result.steps[i];
    for (double v : result.samples[i].s) {
      std::snprintf(buf, sizeof buf, ",%.12g", v);
      os << buf;
    }
    for (double v : result.samples[i].phi) {
      std::snprintf(buf, sizeof buf, ",%.12g", v);
      os << buf;
    }
    std::snprintf(buf, sizeof buf, ",%.12g\n", result.energies[i]);
    os << buf;
  }
}

}  // namespace stochsense
