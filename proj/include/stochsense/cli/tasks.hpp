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

// Experiment drivers behind `stochsense run`. Each driver is a pure function
// of its parameters and a random stream, returning tables, a JSON summary
// and charts. Stream indices are fixed per sub-experiment so results do not
// depend on the thread count.

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "stochsense/cli/config.hpp"
#include "stochsense/cli/report.hpp"
#include "stochsense/distributions.hpp"
#include "stochsense/featmat.hpp"
#include "stochsense/inference.hpp"
#include "stochsense/protocols.hpp"
#include "stochsense/qsim.hpp"
#include "stochsense/xxz.hpp"

namespace stochsense::cli {

struct TaskOutput {
  Table results{{}};
  std::vector<std::pair<std::string, Table>> extra_tables;
  Json summary = Json::object();
  std::vector<std::pair<std::string, Chart>> charts;
};

namespace task_detail {

inline Classifier classifier_by_name(const std::string& name) {
  if (name == "tvd") return tvd_classify;
  return mle_classify;
}

inline Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline Json target_json(const ShotsToTarget& t) {
  return {{"shots", number_or_null(t.shots)},
          {"lower", number_or_null(t.lower)},
          {"upper", number_or_null(t.upper)},
          {"censored", t.censored}};
}

inline void add_sweep_rows(Table& t, const std::string& protocol, const std::vector<Cell>& axes,
                           const SweepResult& r) {
  for (const auto& p : r.points) {
    std::vector<Cell> row{protocol};
    row.insert(row.end(), axes.begin(), axes.end());
    row.insert(row.end(), {static_cast<long long>(p.shots), p.metric, p.standard_error,
                           static_cast<long long>(p.trials)});
    t.add(std::move(row));
  }
}

inline Series sweep_series(const std::string& name, const SweepResult& r) {
  Series s{name, {}, {}};
  for (const auto& p : r.points) {
    s.x.push_back(static_cast<double>(p.shots));
    s.y.push_back(p.metric);
  }
  return s;
}

inline std::vector<double> ensemble_table(const Protocol& p,
                                          const std::vector<std::vector<double>>& thetas) {
  std::vector<double> acc(p.n_outcomes(), 0.0);
  for (const auto& t : thetas) {
    const std::vector<double> pr = per_shot_probs(p, t);
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += pr[k];
  }
  for (double& v : acc) v /= static_cast<double>(thetas.size());
  return acc;
}

inline double bhattacharyya(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += std::sqrt(a[k] * b[k]);
  return s;
}

/// theta with (sum of the first half)^2 + (sum of the second half)^2 = c.
inline std::vector<double> quadratic_constraint_sample(int n_var, double c, RandomStream& rng) {
  for (;;) {
    std::vector<double> t(static_cast<std::size_t>(n_var));
    for (double& v : t) v = rng.uniform(-1.0, 1.0);
    double a = 0.0, b = 0.0;
    for (int j = 0; j < n_var; ++j) (j < n_var / 2 ? a : b) += t[j];
    const double r2 = a * a + b * b;
    if (r2 < 1e-12) continue;
    const double scale = std::sqrt(c / r2);
    for (double& v : t) v *= scale;
    return t;
  }
}

inline std::vector<std::int64_t> with_point(std::vector<std::int64_t> grid, std::int64_t s) {
  grid.push_back(s);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

inline Json vector_json(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

}  // namespace task_detail

// bell-gaussian ---------------------------------------------------------------

inline TaskOutput run_bell_gaussian(const BellGaussianParams& p, const RandomStream& rng,
                                    int threads = 1) {
  using namespace task_detail;
  namespace cf = closed_form;
  const double s2 = p.sigma * p.sigma;
  const cf::GaussianPair ga{p.c / 2, -p.c / 2, s2, p.sigma_corr2};
  const cf::GaussianPair gb{-p.c / 2, p.c / 2, s2, p.sigma_corr2};
  const DistributionSpec da = CorrelatedGaussianSpec::pair(ga.mean1, ga.mean2, s2, p.sigma_corr2);
  const DistributionSpec db = CorrelatedGaussianSpec::pair(gb.mean1, gb.mean2, s2, p.sigma_corr2);
  const auto& ne = p.nu_entangled;
  const auto& nu = p.nu_unentangled;

  const Protocol entangled = Protocol::bell(ne[0], ne[1]);
  const Protocol product = Protocol::product(2, nu);
  const double pa = cf::bell_p1(ga, ne[0], ne[1]), pb = cf::bell_p1(gb, ne[0], ne[1]);
  const ClassModel ent_model{{1 - pa, pa}, {1 - pb, pb}};
  const auto ta = cf::product_probs(ga, nu[0], nu[1]), tb = cf::product_probs(gb, nu[0], nu[1]);
  const ClassModel prod_model{{ta.begin(), ta.end()}, {tb.begin(), tb.end()}};

  const auto grid = with_point(p.shots, p.report_shots);
  const Classifier classify = classifier_by_name(p.classifier);
  auto source = [&](const Protocol& pr, const ClassModel& m) {
    return p.shot_model == "table" ? table_source(m) : per_shot_source(pr, da, db);
  };
  const SweepResult ent = run_classification_sweep(source(entangled, ent_model), ent_model, classify,
                                                   grid, p.trials, rng.child(0), threads);
  const SweepResult prod = run_classification_sweep(source(product, prod_model), prod_model, classify,
                                                    grid, p.trials, rng.child(1), threads);

  TaskOutput out;
  out.results = Table({"protocol", "shots_count", "accuracy_frac", "std_err_frac", "trials_count"});
  add_sweep_rows(out.results, "entangled", {}, ent);
  add_sweep_rows(out.results, "unentangled", {}, prod);

  auto at = [&](const SweepResult& r) {
    for (const auto& pt : r.points)
      if (pt.shots == p.report_shots) return Json{{"accuracy", pt.metric}, {"std_err", pt.standard_error}};
    return Json();
  };
  const double s = static_cast<double>(p.report_shots);
  auto fisher = [&](const cf::Moments& a, const cf::Moments& b) {
    return fisher_discriminant(a.mean, b.mean, a.variance, b.variance);
  };
  out.summary = {
      {"task", "bell-gaussian"},
      {"sigma_rad", p.sigma},
      {"sigma_corr2_rad2", p.sigma_corr2},
      {"C_rad", p.c},
      {"report_shots", p.report_shots},
      {"shot_model", p.shot_model},
      {"classifier", p.classifier},
      {"entangled",
       {{"at_report_shots", at(ent)},
        {"shots_to_target", target_json(shots_to_target(ent, p.target_accuracy))},
        {"table_a", vector_json(ent_model.a)},
        {"table_b", vector_json(ent_model.b)},
        {"fisher_exact", fisher(cf::entangled_estimator(ga, ne[0], ne[1], s),
                                cf::entangled_estimator(gb, ne[0], ne[1], s))},
        {"fisher_approx", cf::fisher_entangled_approx(ga, p.c, s)}}},
      {"unentangled",
       {{"at_report_shots", at(prod)},
        {"shots_to_target", target_json(shots_to_target(prod, p.target_accuracy))},
        {"table_a", vector_json(prod_model.a)},
        {"table_b", vector_json(prod_model.b)},
        // The difference estimator x10 - x01 is read with both offsets at -pi/2.
        {"local_estimator_nu_rad", vector_json({-kPi / 2, -kPi / 2})},
        {"fisher_local_exact", fisher(cf::unentangled_local_estimator(ga, -kPi / 2, -kPi / 2, s),
                                      cf::unentangled_local_estimator(gb, -kPi / 2, -kPi / 2, s))},
        {"fisher_local_approx", cf::fisher_local_approx(ga, p.c, s)}}},
      {"target_accuracy", p.target_accuracy},
  };
  Chart chart{"Accuracy vs shots (correlated Gaussian)", "shots", "accuracy", true, false,
              {sweep_series("entangled", ent), sweep_series("unentangled", prod)}};
  out.charts.push_back({"accuracy.svg", std::move(chart)});
  return out;
}

// ghz-classify ----------------------------------------------------------------

inline std::vector<double> averaged_table(const Protocol& p, const ConstrainedUniformSpec& spec,
                                          const AveragingOptions& opt, const RandomStream& rng,
                                          Json* info = nullptr) {
  const AveragedProbs r = averaged_probs(p, spec, opt, rng);
  if (info) *info = {{"samples", r.samples}, {"batches", r.batches}, {"converged", r.converged}};
  return r.probs;
}

inline TaskOutput run_ghz_classify(const GhzClassifyParams& p, const RandomStream& rng,
                                   int threads = 1) {
  using namespace task_detail;
  const Classifier classify = classifier_by_name(p.classifier);
  AveragingOptions avg = p.averaging;
  avg.threads = threads;
  TaskOutput out;
  out.results = Table({"protocol", "n_qubits", "shots_count", "accuracy_frac", "std_err_frac",
                       "trials_count"});
  Json per_n = Json::array();
  Series ent_s{"entangled", {}, {}}, prod_s{"unentangled", {}, {}};
  for (std::size_t i = 0; i < p.n_qubits.size(); ++i) {
    const int n = p.n_qubits[i];
    const RandomStream base = rng.child(i);
    const auto sa = ConstrainedUniformSpec::uniform_sum(n, p.c);
    const auto sb = ConstrainedUniformSpec::uniform_sum(n, -p.c);
    const OffsetChoice offsets = ghz_offset_and_product_offsets(n);
    Json entry = {{"n_qubits", n}, {"product_nu_rad", vector_json(offsets.product_nu)},
                  {"last_qubit_offset", offsets.last_qubit_offset}};
    const std::pair<const char*, Protocol> protocols[] = {
        {"entangled", Protocol::ghz(n)}, {"unentangled", Protocol::product(n, offsets.product_nu)}};
    for (std::size_t k = 0; k < 2; ++k) {
      const auto& [name, proto] = protocols[k];
      Json ia, ib;
      const ClassModel model{averaged_table(proto, sa, avg, base.child(10 * k + 1), &ia),
                             averaged_table(proto, sb, avg, base.child(10 * k + 2), &ib)};
      const SweepResult r = run_classification_sweep(table_source(model), model, classify, p.shots,
                                                     p.trials, base.child(10 * k + 3), threads);
      add_sweep_rows(out.results, name, {static_cast<long long>(n)}, r);
      const ShotsToTarget t = shots_to_target(r, p.target_accuracy);
      entry[name] = {{"shots_to_target", target_json(t)},
                     {"total_variation", total_variation(model.a, model.b)},
                     {"averaging_a", ia},
                     {"averaging_b", ib}};
      (k == 0 ? ent_s : prod_s).x.push_back(n);
      (k == 0 ? ent_s : prod_s).y.push_back(t.censored ? std::nan("") : t.shots);
    }
    per_n.push_back(std::move(entry));
  }
  // Two-qubit product table at +C on an equally spaced grid over theta_1.
  const OffsetChoice two = ghz_offset_and_product_offsets(2);
  const auto grid = grid_averaged_probs(Protocol::product(2, two.product_nu),
                                        ConstrainedUniformSpec::uniform_sum(2, p.c), p.anchor_grid);
  out.summary = {
      {"task", "ghz-classify"},
      {"C_rad", p.c},
      {"classifier", p.classifier},
      {"target_accuracy", p.target_accuracy},
      {"averaging", avg.method == AveragingOptions::Method::kExactGrid ? "exact_grid" : "monte_carlo"},
      {"per_n", per_n},
      {"two_qubit_anchor",
       {{"p11_numeric", grid[3]},
        {"p11_reference", 0.125 + std::sin(p.c) / 8},
        {"p11_closed_form", 0.25 + std::sin(p.c) / 8},
        {"grid_points", p.anchor_grid}}},
  };
  out.charts.push_back({"shots_to_target.svg",
                        Chart{"Shots to target accuracy (constrained uniform)", "qubits", "shots",
                              false, true, {ent_s, prod_s}}});
  return out;
}

// ghz-estimate ----------------------------------------------------------------

inline TaskOutput run_ghz_estimate(const GhzEstimateParams& p, const RandomStream& rng,
                                   int threads = 1) {
  using namespace task_detail;
  AveragingOptions avg = p.averaging;
  avg.threads = threads;
  TaskOutput out;
  out.results = Table({"protocol", "n_qubits", "shots_count", "mse_rad2", "std_err_rad2", "trials_count"});
  Json per_n = Json::array();
  Series ent_s{"entangled", {}, {}}, prod_s{"unentangled", {}, {}};
  const auto train_c = p.train_c.values(), test_c = p.test_c.values();
  for (std::size_t i = 0; i < p.n_qubits.size(); ++i) {
    const int n = p.n_qubits[i];
    const RandomStream base = rng.child(i);
    const OffsetChoice offsets = ghz_offset_and_product_offsets(n);
    Json entry = {{"n_qubits", n}, {"product_nu_rad", vector_json(offsets.product_nu)}};
    const std::pair<const char*, Protocol> protocols[] = {
        {"entangled", Protocol::ghz(n)}, {"unentangled", Protocol::product(n, offsets.product_nu)}};
    for (std::size_t k = 0; k < 2; ++k) {
      const auto& [name, proto] = protocols[k];
      const RandomStream pb = base.child(k);
      std::vector<std::vector<double>> features;
      for (std::size_t j = 0; j < train_c.size(); ++j)
        features.push_back(averaged_table(proto, ConstrainedUniformSpec::uniform_sum(n, train_c[j]), avg,
                                          pb.child(j)));
      const LinearEstimator est = train_linear_estimator(features, train_c);
      double floor = 0.0;
      for (std::size_t j = 0; j < train_c.size(); ++j) {
        const double e = est.predict(features[j]) - train_c[j];
        floor += e * e;
      }
      floor /= static_cast<double>(train_c.size());
      std::vector<EstimationCase> cases;
      for (std::size_t j = 0; j < test_c.size(); ++j)
        cases.push_back({test_c[j], averaged_table(proto, ConstrainedUniformSpec::uniform_sum(n, test_c[j]),
                                                   avg, pb.child(100000 + j))});
      const SweepResult r = run_estimation_sweep(cases, est, p.shots, p.trials, pb.child(900000), threads);
      add_sweep_rows(out.results, name, {static_cast<long long>(n)}, r);
      const ShotsToTarget t = shots_to_target(r, p.target_mse);
      entry[name] = {{"shots_to_target", target_json(t)},
                     {"training_mse_floor_rad2", floor},
                     {"rank_deficient", est.rank_deficient}};
      (k == 0 ? ent_s : prod_s).x.push_back(n);
      (k == 0 ? ent_s : prod_s).y.push_back(t.censored ? std::nan("") : t.shots);
    }
    per_n.push_back(std::move(entry));
  }
  out.summary = {{"task", "ghz-estimate"}, {"target_mse_rad2", p.target_mse}, {"per_n", per_n}};
  out.charts.push_back({"shots_to_target.svg",
                        Chart{"Shots to target MSE (constrained sum)", "qubits", "shots", false, true,
                              {ent_s, prod_s}}});
  return out;
}

// xxz -------------------------------------------------------------------------

/// Product offsets from {0, pi/2}^n minimising the Bhattacharyya coefficient
/// between the two training tables. Ties keep the earlier candidate.
struct ProductOffsetSearch {
  std::vector<double> nu;
  double bhattacharyya = 1.0;
  ClassModel model;
};

inline ProductOffsetSearch best_product_offsets(int n, const std::vector<std::vector<double>>& train_a,
                                                const std::vector<std::vector<double>>& train_b,
                                                int threads = 1) {
  const std::size_t combos = std::size_t(1) << n;
  std::vector<ProductOffsetSearch> all(combos);
  parallel_for(combos, threads, [&](std::size_t m) {
    std::vector<double> nu(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) nu[j] = qubit_bit(m, j, n) ? kPi / 2 : 0.0;
    const Protocol p = Protocol::product(n, nu);
    ClassModel model{task_detail::ensemble_table(p, train_a), task_detail::ensemble_table(p, train_b)};
    const double bc = task_detail::bhattacharyya(model.a, model.b);
    all[m] = {std::move(nu), bc, std::move(model)};
  });
  std::size_t best = 0;
  for (std::size_t m = 1; m < combos; ++m)
    if (all[m].bhattacharyya < all[best].bhattacharyya) best = m;
  return std::move(all[best]);
}

inline TaskOutput run_xxz(const XxzParamsBlock& p, const RandomStream& rng, int threads = 1) {
  using namespace task_detail;
  const Classifier classify = classifier_by_name(p.classifier);
  TaskOutput out;
  out.results = Table({"protocol", "n_qubits", "temperature_J", "shots_count", "accuracy_frac",
                       "std_err_frac", "trials_count"});
  Json cells = Json::array();
  std::vector<Series> series;
  for (std::size_t ti = 0; ti < p.temperatures.size(); ++ti) {
    const double temp = p.temperatures[ti];
    Series ent_s{"entangled T=" + format_double(temp), {}, {}};
    Series prod_s{"unentangled T=" + format_double(temp), {}, {}};
    for (std::size_t ni = 0; ni < p.n_qubits.size(); ++ni) {
      const int n = p.n_qubits[ni];
      const RandomStream base = rng.child(ti * 1000 + ni);
      XXZParams xa{n, p.J, p.delta, 1.0 / temp, p.M}, xb = xa;
      xb.M = -p.M;
      MetropolisSettings train = p.metropolis, test = p.metropolis;
      train.n_samples = p.train_samples;
      test.n_samples = p.test_samples;
      const XXZGibbsSpec ea = make_xxz_gibbs(xa, train, p.coupling, base.child(1), p.chains, threads);
      const XXZGibbsSpec eb = make_xxz_gibbs(xb, train, p.coupling, base.child(2), p.chains, threads);
      const XXZGibbsSpec fa = make_xxz_gibbs(xa, test, p.coupling, base.child(3), p.chains, threads);
      const XXZGibbsSpec fb = make_xxz_gibbs(xb, test, p.coupling, base.child(4), p.chains, threads);

      Json cell = {{"n_qubits", n}, {"temperature_J", temp}};
      const Protocol ghz = Protocol::ghz(n);
      const ClassModel ent_model{ensemble_table(ghz, *ea.thetas), ensemble_table(ghz, *eb.thetas)};
      const ClassModel ent_truth{ensemble_table(ghz, *fa.thetas), ensemble_table(ghz, *fb.thetas)};
      const ProductOffsetSearch ps = best_product_offsets(n, *ea.thetas, *eb.thetas, threads);
      const Protocol prod = Protocol::product(n, ps.nu);
      const ClassModel prod_truth{ensemble_table(prod, *fa.thetas), ensemble_table(prod, *fb.thetas)};

      const SweepResult re = run_classification_sweep(table_source(ent_truth), ent_model, classify,
                                                      p.shots, p.trials, base.child(5), threads);
      const SweepResult rp = run_classification_sweep(table_source(prod_truth), ps.model, classify,
                                                      p.shots, p.trials, base.child(6), threads);
      add_sweep_rows(out.results, "entangled", {static_cast<long long>(n), temp}, re);
      add_sweep_rows(out.results, "unentangled", {static_cast<long long>(n), temp}, rp);
      const ShotsToTarget te = shots_to_target(re, p.target_accuracy);
      const ShotsToTarget tp = shots_to_target(rp, p.target_accuracy);
      cell["entangled"] = {{"shots_to_target", target_json(te)},
                           {"bhattacharyya", bhattacharyya(ent_model.a, ent_model.b)}};
      cell["unentangled"] = {{"shots_to_target", target_json(tp)},
                             {"nu_rad", vector_json(ps.nu)},
                             {"bhattacharyya", ps.bhattacharyya}};
      cell["shots_ratio"] = !te.censored && !tp.censored ? Json(tp.shots / te.shots) : Json(nullptr);
      ent_s.x.push_back(n);
      ent_s.y.push_back(te.censored ? std::nan("") : te.shots);
      prod_s.x.push_back(n);
      prod_s.y.push_back(tp.censored ? std::nan("") : tp.shots);
      cells.push_back(std::move(cell));
    }
    series.push_back(std::move(ent_s));
    series.push_back(std::move(prod_s));
  }
  out.summary = {{"task", "xxz"},     {"J", p.J},         {"delta", p.delta},
                 {"M", p.M},          {"coupling_rad", p.coupling},
                 {"target_accuracy", p.target_accuracy}, {"cells", cells}};
  if (p.conservation_steps > 0) {
    // One long chain at the largest size and highest temperature.
    int n = 0;
    for (int v : p.n_qubits) n = std::max(n, v);
    double temp = 0.0;
    for (double v : p.temperatures) temp = std::max(temp, v);
    MetropolisSettings s = p.metropolis;
    s.tau_therm = 0;
    s.tau_sweep = std::max<long long>(1, p.conservation_steps / 1000);
    s.n_samples = p.conservation_steps / s.tau_sweep;
    RandomStream chain = rng.child(999999);
    const MetropolisResult r = metropolis_sample({n, p.J, p.delta, 1.0 / temp, p.M}, s, chain);
    out.summary["conservation"] = {{"n_qubits", n},
                                   {"temperature_J", temp},
                                   {"steps", r.proposed},
                                   {"max_abs_drift", r.max_abs_drift},
                                   {"acceptance_rate", r.acceptance_rate()}};
  }
  out.charts.push_back({"shots_to_target.svg",
                        Chart{"Shots to target accuracy (XXZ ensembles)", "spins", "shots", false, true,
                              std::move(series)}});
  return out;
}

// featmat ---------------------------------------------------------------------

inline TaskOutput run_featmat(const FeatmatParams& p, const RandomStream& rng, int threads = 1) {
  using namespace task_detail;
  TaskOutput out;
  out.results = Table({"n_qubits", "entangled_separation_prob", "product_separation_prob",
                       "product_reference_prob", "hadamard_parity_prob", "max_abs_F", "rms_bound_prob",
                       "mean_bound_prob", "shots90_entangled_count", "shots90_product_count"});
  const bool uniform = p.family == "constrained_uniform";
  Json per_n = Json::array();
  Series ent_s{"entangled", {}, {}}, prod_s{"product search", {}, {}}, ref_s{"sin C / 2^(N-1)", {}, {}};
  for (std::size_t i = 0; i < p.n_qubits.size(); ++i) {
    const int n = p.n_qubits[i];
    auto make = [&](bool first) -> DistributionSpec {
      if (uniform) return ConstrainedUniformSpec::uniform_sum(n, first ? p.c : -p.c);
      const auto d = static_cast<Eigen::Index>(p.mean_a.size());
      const auto& mean = first ? p.mean_a : p.mean_b;
      const auto& cov = first ? p.cov_a : p.cov_b;
      using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
      return CorrelatedGaussianSpec(Eigen::Map<const Eigen::VectorXd>(mean.data(), d),
                                    Eigen::Map<const RowMajor>(cov.data(), d, d));
    };
    const DistributionSpec a = make(true), b = make(false);
    const EigenvalueMap map = p.map == "halved" ? EigenvalueMap::halved_z(n)
                              : p.map == "entangling_zz" ? EigenvalueMap::entangling_zz(n)
                                                         : EigenvalueMap::local_z(n);
    const FeatureMatrix f = build_feature_matrix(analytic_chi(a), analytic_chi(b), map);
    const double max_f = f.entries.cwiseAbs().maxCoeff();
    double ent = max_f / 2;
    bool ambiguous = false;
    try {
      ent = std::abs(separation_value(optimal_sparse_pair(f), f));
    } catch (const AmbiguousPairError&) {
      ambiguous = true;
    }
    const double had = std::abs(separation_value(hadamard_parity_pair(f), f));
    double prod = std::nan("");
    if (n <= p.product_max_qubits) {
      ProductSearchSettings s = p.search;
      RandomStream seed_stream = rng.child(i);
      s.seed = seed_stream();
      s.threads = threads;
      prod = best_product_separation(f, s).value;
    }
    const double ref = uniform ? std::abs(std::sin(p.c)) / std::exp2(n - 1) : std::nan("");
    const BoundReport br = theorem_bound_report(f, ent);
    const double shots_prod = std::isnan(prod) ? std::nan("") : theorem_bound_report(f, prod).shots_90;
    out.results.add({static_cast<long long>(n), ent, prod, ref, had, max_f, br.product_bound,
                     br.mean_bound_total, br.shots_90, shots_prod});
    Json rms = Json::array();
    for (double v : br.rms) rms.push_back(v);
    per_n.push_back({{"n_qubits", n},
                     {"entangled_separation", ent},
                     {"entangled_pair_ambiguous", ambiguous},
                     {"product_separation", number_or_null(prod)},
                     {"product_reference", number_or_null(ref)},
                     {"hadamard_parity_separation", had},
                     {"rms_by_hamming_distance", rms},
                     {"rms_bound", br.product_bound},
                     {"mean_bound", br.mean_bound_total}});
    ent_s.x.push_back(n);
    ent_s.y.push_back(ent);
    prod_s.x.push_back(n);
    prod_s.y.push_back(prod);
    ref_s.x.push_back(n);
    ref_s.y.push_back(ref);
    if (n <= p.matrix_max_qubits) {
      Table t({"a_index", "b_index", "re_F", "im_F"});
      for (Eigen::Index r = 0; r < f.entries.rows(); ++r)
        for (Eigen::Index c = 0; c < f.entries.cols(); ++c)
          t.add({static_cast<long long>(r), static_cast<long long>(c), f.entries(r, c).real(),
                 f.entries(r, c).imag()});
      out.extra_tables.push_back({"feature_matrix_N" + std::to_string(n) + ".csv", std::move(t)});
    }
  }
  out.summary = {{"task", "featmat"}, {"family", p.family}, {"map", p.map}, {"per_n", per_n}};
  if (uniform) out.summary["C_rad"] = p.c;
  std::vector<Series> series{ent_s, prod_s};
  if (uniform) series.push_back(ref_s);
  out.charts.push_back({"separation.svg", Chart{"Separation value vs qubits", "qubits", "separation",
                                                false, true, std::move(series)}});
  return out;
}

// quadratic -------------------------------------------------------------------

inline TaskOutput run_quadratic(const QuadraticParams& p, const RandomStream& rng, int threads = 1) {
  using namespace task_detail;
  TaskOutput out;
  out.results = Table({"n_var", "sample", "C_rad2", "overlap_re", "overlap_im", "expected",
                       "abs_error", "slope_ratio"});
  const double expected = std::cos(std::sqrt(p.c));
  const double x = 2.0 * std::sqrt(p.c);
  const double slope = -std::sin(x) / x;
  Json per_var = Json::array();
  for (std::size_t i = 0; i < p.n_var.size(); ++i) {
    const int nv = p.n_var[i];
    const PauliStringAssignment assign = PauliStringAssignment::make(nv);
    std::vector<std::vector<Cell>> rows(static_cast<std::size_t>(p.samples));
    std::vector<double> errors(rows.size()), ratios(rows.size());
    parallel_for(rows.size(), threads, [&](std::size_t s) {
      RandomStream r = rng.child(i).child(s);
      const std::vector<double> theta = quadratic_constraint_sample(nv, p.c, r);
      const Complex amp = quadratic_constraint_overlap(assign, theta);
      std::vector<double> bumped = theta;
      const double scale = std::sqrt((p.c + p.epsilon) / p.c);
      for (double& v : bumped) v *= scale;
      const double d = std::norm(quadratic_constraint_overlap(assign, bumped)) - std::norm(amp);
      errors[s] = std::abs(amp - Complex(expected, 0.0));
      ratios[s] = d / (p.epsilon * slope);
      rows[s] = {static_cast<long long>(nv), static_cast<long long>(s), p.c, amp.real(), amp.imag(),
                 expected, errors[s], ratios[s]};
    });
    for (auto& row : rows) out.results.add(std::move(row));
    Json strings = Json::array();
    for (std::size_t j = 0; j < assign.strings.size(); ++j)
      strings.push_back((assign.signs[j] < 0 ? "-" : "+") + assign.strings[j]);
    per_var.push_back({{"n_var", nv},
                       {"n_qubits", assign.n_qubits},
                       {"signed_strings", strings},
                       {"max_abs_error", *std::max_element(errors.begin(), errors.end())},
                       {"min_slope_ratio", *std::min_element(ratios.begin(), ratios.end())},
                       {"max_slope_ratio", *std::max_element(ratios.begin(), ratios.end())}});
  }
  out.summary = {{"task", "quadratic"}, {"C_rad2", p.c}, {"expected_overlap", expected},
                 {"epsilon_rad2", p.epsilon}, {"per_n_var", per_var}};
  return out;
}

// multicopy -------------------------------------------------------------------

inline TaskOutput run_multicopy(const MulticopyParams& p, const RandomStream& rng, int /*threads*/ = 1) {
  using namespace task_detail;
  TaskOutput out;
  out.results = Table({"phi_rad", "t_rad", "spatial_prob", "sequential_prob", "expected_prob",
                       "single_copy_max_offdiag", "single_copy_phi_shift"});
  const StateVector probe = StateVector::plus(2);
  const EigenvalueMap map = EigenvalueMap::local_z(2);
  RandomStream unused = rng.child(0);
  const DensityMatrix ref = averaged_density(probe, UniformLineSpec{{2.0, 1.0}, {0.0, 0.0}}, map,
                                             p.single_copy_grid, unused);
  double worst_offdiag = 0.0, worst_shift = 0.0, worst_multi = 0.0;
  Series spatial{"spatial", {}, {}}, sequential{"sequential", {}, {}}, expect{"(1 + sin 2 phi) / 2", {}, {}};
  for (int k = 0; k < p.phi_points; ++k) {
    const double phi = kTwoPi * k / p.phi_points;
    const DensityMatrix rho = averaged_density(probe, UniformLineSpec{{2.0, 1.0}, {0.0, phi}}, map,
                                               p.single_copy_grid, unused);
    const double off = rho.max_off_diagonal();
    const double shift = (rho.matrix() - ref.matrix()).cwiseAbs().maxCoeff();
    worst_offdiag = std::max(worst_offdiag, off);
    worst_shift = std::max(worst_shift, shift);
    const double want = 0.5 * (1.0 + std::sin(2.0 * phi));
    for (double t : p.t_values) {
      const MulticopyResult m = multicopy_protocols(phi, t);
      worst_multi = std::max({worst_multi, std::abs(m.spatial - want), std::abs(m.sequential - want)});
      out.results.add({phi, t, m.spatial, m.sequential, want, off, shift});
    }
    const MulticopyResult m0 = multicopy_protocols(phi, p.t_values.front());
    spatial.x.push_back(phi);
    spatial.y.push_back(m0.spatial);
    sequential.x.push_back(phi);
    sequential.y.push_back(m0.sequential);
    expect.x.push_back(phi);
    expect.y.push_back(want);
  }
  out.summary = {{"task", "multicopy"},
                 {"phi_points", p.phi_points},
                 {"single_copy_max_offdiag", worst_offdiag},
                 {"single_copy_max_phi_shift", worst_shift},
                 {"multicopy_max_abs_error", worst_multi}};
  out.charts.push_back({"multicopy.svg", Chart{"Multicopy readout vs phi", "phi [rad]", "P(1)", false,
                                               false, {spatial, sequential, expect}}});
  return out;
}

/// Dispatches on the parameter block.
inline TaskOutput execute_task(const ExperimentConfig& cfg) {
  const RandomStream rng(cfg.seed);
  return std::visit(
      [&](const auto& p) -> TaskOutput {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, BellGaussianParams>) return run_bell_gaussian(p, rng, cfg.threads);
        else if constexpr (std::is_same_v<T, GhzClassifyParams>) return run_ghz_classify(p, rng, cfg.threads);
        else if constexpr (std::is_same_v<T, GhzEstimateParams>) return run_ghz_estimate(p, rng, cfg.threads);
        else if constexpr (std::is_same_v<T, XxzParamsBlock>) return run_xxz(p, rng, cfg.threads);
        else if constexpr (std::is_same_v<T, FeatmatParams>) return run_featmat(p, rng, cfg.threads);
        else if constexpr (std::is_same_v<T, QuadraticParams>) return run_quadratic(p, rng, cfg.threads);
        else return run_multicopy(p, rng, cfg.threads);
      },
      cfg.params);
}

}  // namespace stochsense::cli
