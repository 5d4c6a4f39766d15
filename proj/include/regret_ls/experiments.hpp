#ifndef REGRET_LS_EXPERIMENTS_HPP
#define REGRET_LS_EXPERIMENTS_HPP

// Monte-Carlo comparison harness.
//
// Each scenario fixes nominal data (H, y), solves every estimator once on it
// and scores the estimate on perturbed data: residual = ||Htilde x - ytilde||^2.
// Trial t draws its perturbation from the stream derive_seed(master, t), so
// results do not depend on the thread count.

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "regret_ls/baselines.hpp"
#include "regret_ls/errors.hpp"
#include "regret_ls/linalg.hpp"
#include "regret_ls/perturbation.hpp"
#include "regret_ls/problem.hpp"
#include "regret_ls/regret.hpp"

namespace regret_ls::experiments {

inline constexpr const char* kVersion = "1.0.0";

// ---------------------------------------------------------------- estimators

struct EstimatorOutput {
  ComplexVector x;
  int iterations = 0;  // SDP iterations, 0 for closed-form estimators
  std::optional<double> gamma_star;  // SDP-based estimators only
};

inline const std::vector<std::string>& estimator_names() {
  static const std::vector<std::string> names = {
      "ls", "tls", "rbst-ls", "reg-ls", "rbst-reg-ls", "str-rbst-ls",
      "rgrt-ls", "rgrt-reg-ls", "str-rgrt-ls"};
  return names;
}

inline bool is_estimator(const std::string& name) {
  const auto& n = estimator_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

inline bool needs_structure(const std::string& name) {
  return name == "str-rbst-ls" || name == "str-rgrt-ls";
}

inline bool needs_mu(const std::string& name) {
  return name == "reg-ls" || name == "rbst-reg-ls" || name == "rgrt-reg-ls";
}

/// Estimates x from nominal data only; bounds and mu come from `spec`.
inline EstimatorOutput run_estimator(const std::string& name, const ProblemSpec& spec,
                                     const sdp::SolverOptions& opts = {}) {
  if (!is_estimator(name)) throw ArgumentError("unknown estimator '" + name + "'");
  if (needs_mu(name) && !(spec.mu > 0.0)) {
    throw ArgumentError("estimator '" + name + "' needs mu > 0");
  }
  EstimatorOutput out;
  if (name == "ls") {
    out.x = baselines::solve_ls(spec.H, spec.y);
  } else if (name == "tls") {
    out.x = baselines::solve_tls(spec.H, spec.y);
  } else if (name == "rbst-ls") {
    out.x = baselines::solve_robust_ls(spec.H, spec.y, spec.delta_H, spec.delta_Y);
  } else if (name == "reg-ls") {
    out.x = baselines::solve_reg_ls(spec.H, spec.y, spec.mu);
  } else if (name == "rbst-reg-ls") {
    out.x = baselines::solve_robust_reg_ls(spec.H, spec.y, spec.delta_H, spec.delta_Y, spec.mu);
  } else {
    RegretEstimate e;
    if (name == "str-rbst-ls") {
      e = solve_formulation(spec, Formulation::StructuredRobustResidual, opts);
    } else if (name == "rgrt-ls") {
      e = solve_regret_ls(spec, opts);
    } else if (name == "rgrt-reg-ls") {
      e = solve_regret_reg_ls(spec, opts);
    } else {
      e = solve_regret_structured(spec, opts);
    }
    out.x = e.x_hat;
    out.iterations = e.report.iterations;
    out.gamma_star = e.gamma_star;
  }
  return out;
}

// ---------------------------------------------------------------- structure

/// Convolution (Toeplitz) matrix of filter h acting on length-n inputs;
/// m = n + k - 1 rows.
inline ComplexMatrix convolution_matrix(const ComplexVector& h, Eigen::Index n) {
  if (h.size() < 1 || n < 1) throw ArgumentError("convolution_matrix: empty filter or input");
  const Eigen::Index m = n + h.size() - 1;
  ComplexMatrix c = ComplexMatrix::Zero(m, n);
  for (Eigen::Index j = 0; j < n; ++j) c.block(j, j, h.size(), 1) = h;
  return c;
}

/// Basis of Toeplitz perturbations of a convolution matrix: H_i has ones on
/// the i-th subdiagonal (tap i), y_basis is the standard basis of C^m.
inline Structure build_toeplitz_structure(const ComplexVector& h, Eigen::Index m, Eigen::Index n) {
  const Eigen::Index k = h.size();
  if (k < 1 || n < 1 || m != n + k - 1) {
    throw ArgumentError("build_toeplitz_structure: need m = n + k - 1 (got m=" +
                        std::to_string(m) + ", n=" + std::to_string(n) +
                        ", k=" + std::to_string(k) + ")");
  }
  Structure s;
  for (Eigen::Index i = 0; i < k; ++i) {
    ComplexMatrix b = ComplexMatrix::Zero(m, n);
    for (Eigen::Index j = 0; j < n; ++j) b(i + j, j) = 1.0;
    s.H_basis.push_back(std::move(b));
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    ComplexVector e = ComplexVector::Zero(m);
    e(i) = 1.0;
    s.y_basis.push_back(std::move(e));
  }
  return s;
}

// ---------------------------------------------------------------- configs

enum class Scenario { Fig1, Fig2, Fig3, Fig4, Custom };

inline std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::Fig1: return "fig1";
    case Scenario::Fig2: return "fig2";
    case Scenario::Fig3: return "fig3";
    case Scenario::Fig4: return "fig4";
    case Scenario::Custom: return "custom";
  }
  return "custom";
}

inline Scenario scenario_from_string(const std::string& s) {
  for (Scenario v : {Scenario::Fig1, Scenario::Fig2, Scenario::Fig3, Scenario::Fig4,
                     Scenario::Custom}) {
    if (to_string(v) == s || to_string(v).substr(3) == s) return v;
  }
  throw ArgumentError("unknown scenario '" + s + "'");
}

/// How the structured bounds of the Toeplitz scenario are read.
enum class StructuredBound {
  Absolute,       // delta_alpha, delta_beta used as given
  ScaledByNorm,   // multiplied by ||H_0|| of the clean convolution matrix
};

struct ExperimentConfig {
  Scenario scenario = Scenario::Custom;
  Eigen::Index m = 5;
  Eigen::Index n = 3;
  double delta_H = 0.0;
  double delta_Y = 0.0;
  std::vector<double> delta_grid;  // sweep only: delta_H = delta_Y = value
  double mu = 0.0;
  int trials = 1000;
  std::vector<std::string> estimators;
  std::uint64_t master_seed = 1;
  bool redraw_data = false;  // new (H, y) per trial instead of one per scenario
  unsigned threads = 0;      // 0: hardware concurrency

  // Toeplitz system identification.
  bool structured = false;
  Eigen::Index filter_length = 3;
  double delta_alpha = 0.0;
  double delta_beta = 0.0;
  StructuredBound bound_mode = StructuredBound::Absolute;
  double observation_noise = 0.1;  // relative noise on the observed taps and output
  bool normalize_data = true;      // scale H to unit spectral norm and y to unit norm

  void validate() const {
    if (trials < 1) throw ArgumentError("config: trials must be >= 1");
    if (m < 1 || n < 1 || m < n) throw ArgumentError("config: need m >= n >= 1");
    if (estimators.empty()) throw ArgumentError("config: no estimators");
    for (const auto& e : estimators) {
      if (!is_estimator(e)) throw ArgumentError("config: unknown estimator '" + e + "'");
      if (needs_structure(e) && !structured) {
        throw ArgumentError("config: estimator '" + e + "' needs a structured scenario");
      }
      if (needs_mu(e) && !(mu > 0.0)) {
        throw ArgumentError("config: estimator '" + e + "' needs mu > 0");
      }
    }
    if (!(delta_H >= 0.0) || !(delta_Y >= 0.0) || !(delta_alpha >= 0.0) ||
        !(delta_beta >= 0.0) || !(mu >= 0.0)) {
      throw ArgumentError("config: bounds and mu must be nonnegative");
    }
    for (double d : delta_grid) {
      if (!(d >= 0.0)) throw ArgumentError("config: grid values must be nonnegative");
    }
    if (structured && m != n + filter_length - 1) {
      throw ArgumentError("config: structured scenario needs m = n + filter_length - 1");
    }
    if (!(observation_noise >= 0.0)) throw ArgumentError("config: noise must be nonnegative");
  }
};

inline ExperimentConfig default_config(Scenario s) {
  ExperimentConfig c;
  c.scenario = s;
  switch (s) {
    case Scenario::Fig1:
      c.m = 5;
      c.n = 3;
      c.delta_H = c.delta_Y = 1.2;
      c.estimators = {"rgrt-ls", "ls", "rbst-ls", "tls"};
      break;
    case Scenario::Fig2:
      c.m = 5;
      c.n = 3;
      c.delta_grid = {0.3, 0.4, 0.5, 0.6};
      c.estimators = {"rgrt-ls", "ls", "rbst-ls", "tls"};
      break;
    case Scenario::Fig3:
      c.m = 5;
      c.n = 3;
      c.structured = true;
      c.filter_length = 3;
      c.delta_alpha = c.delta_beta = 2.0;
      c.normalize_data = false;
      c.estimators = {"str-rgrt-ls", "str-rbst-ls", "tls", "ls"};
      break;
    case Scenario::Fig4:
      c.m = 3;
      c.n = 2;
      c.delta_H = c.delta_Y = 0.65;
      c.mu = 0.5;
      c.estimators = {"rgrt-reg-ls", "reg-ls", "rbst-reg-ls"};
      break;
    case Scenario::Custom:
      c.estimators = {"ls"};
      break;
  }
  return c;
}

// ---------------------------------------------------------------- data

/// Random stream for nominal data (kept apart from the perturbation streams).
inline std::uint64_t data_seed(std::uint64_t master, std::uint64_t index) {
  return oracle::derive_seed(master ^ 0xA5A5A5A55A5A5A5AULL, index);
}

/// Nominal problem for one scenario realization.
///
/// Unstructured: complex Gaussian H and y scaled to ||H|| = 1, ||y|| = 1.
/// Structured: a +-1 filter h gives H_0 = conv(h); x_0 is complex Gaussian and
/// y_0 = H_0 x_0; the observed H, y add Toeplitz / output noise of relative
/// size observation_noise; then H and y are scaled as above.
inline ProblemSpec make_problem(const ExperimentConfig& c, std::uint64_t seed) {
  oracle::Rng rng(seed);
  ProblemSpec spec;
  spec.delta_H = c.delta_H;
  spec.delta_Y = c.delta_Y;
  spec.mu = c.mu;
  for (int attempt = 0; attempt < 100; ++attempt) {
    if (!c.structured) {
      spec.H = oracle::complex_gaussian(c.m, c.n, rng);
      spec.y = oracle::complex_gaussian(c.m, 1, rng);
      if (c.normalize_data) {
        spec.H /= linalg::spectral_norm(spec.H);
        spec.y.normalize();
      }
    } else {
      const Eigen::Index k = c.filter_length;
      ComplexVector h(k);
      for (Eigen::Index i = 0; i < k; ++i) h(i) = oracle::uniform01(rng) < 0.5 ? -1.0 : 1.0;
      const ComplexMatrix h0 = convolution_matrix(h, c.n);
      const ComplexVector x0 = oracle::complex_gaussian(c.n, 1, rng).normalized();
      const ComplexVector y0 = h0 * x0;
      const ComplexVector tap_noise = oracle::complex_gaussian(k, 1, rng);
      const ComplexVector out_noise = oracle::complex_gaussian(c.m, 1, rng);
      const ComplexVector h_obs = h + c.observation_noise * h.norm() / std::sqrt(double(k)) *
                                          tap_noise;
      spec.H = convolution_matrix(h_obs, c.n);
      spec.y = y0 + c.observation_noise * y0.norm() / std::sqrt(double(c.m)) * out_noise;
      double h0_norm = linalg::spectral_norm(h0);
      if (c.normalize_data) {
        const double h_scale = linalg::spectral_norm(spec.H);
        h0_norm /= h_scale;
        spec.H /= h_scale;
        spec.y.normalize();
      }
      Structure s = build_toeplitz_structure(h_obs, c.m, c.n);
      const double factor = c.bound_mode == StructuredBound::ScaledByNorm ? h0_norm : 1.0;
      s.delta_alpha = c.delta_alpha * factor;
      s.delta_beta = c.delta_beta * factor;
      spec.structure = std::move(s);
    }
    const RealVector sv = linalg::singular_values(spec.H);
    if (sv(sv.size() - 1) > kFullRankRelativeTolerance * sv(0)) return spec;
  }
  throw SolverError("make_problem: could not draw a full column rank H", 100);
}

// ---------------------------------------------------------------- running

struct TrialRecord {
  int trial_index = 0;
  std::string estimator;
  double residual = 0.0;
  std::uint64_t perturbation_seed = 0;
  int iterations = 0;
  bool ok = true;
  std::string error;
};

struct EstimatorSummary {
  std::string estimator;
  std::vector<double> sorted_residuals;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double stderr_mean = 0.0;
  int failures = 0;
};

struct ScenarioResult {
  ExperimentConfig config;
  std::vector<TrialRecord> records;  // trial-major, estimator order of config
  std::vector<EstimatorSummary> summaries;
  ProblemSpec nominal;  // the fixed nominal data (first one if redrawn)
};

namespace detail {

inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

// Runs body(i) for i in [0, count) on `threads` workers, static round-robin.
template <typename Body>
void parallel_for(int count, unsigned threads, Body&& body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max(count, 1))));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int i = static_cast<int>(t); i < count; i += static_cast<int>(threads)) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct Fitted {
  std::optional<ComplexVector> x;
  int iterations = 0;
  std::string error;
};

inline Fitted fit(const std::string& name, const ProblemSpec& spec) {
  Fitted f;
  try {
    EstimatorOutput o = run_estimator(name, spec);
    f.x = std::move(o.x);
    f.iterations = o.iterations;
  } catch (const Error& e) {
    f.error = e.what();
  }
  return f;
}

inline EstimatorSummary summarize(const std::string& name,
                                  const std::vector<TrialRecord>& records) {
  EstimatorSummary s;
  s.estimator = name;
  for (const auto& r : records) {
    if (r.estimator != name) continue;
    if (r.ok) {
      s.sorted_residuals.push_back(r.residual);
    } else {
      ++s.failures;
    }
  }
  std::sort(s.sorted_residuals.begin(), s.sorted_residuals.end());
  const auto count = static_cast<double>(s.sorted_residuals.size());
  if (count > 0) {
    double sum = 0.0;
    for (double v : s.sorted_residuals) sum += v;
    s.mean = sum / count;
    s.min = s.sorted_residuals.front();
    s.max = s.sorted_residuals.back();
    if (count > 1) {
      double ss = 0.0;
      for (double v : s.sorted_residuals) ss += (v - s.mean) * (v - s.mean);
      s.stderr_mean = std::sqrt(ss / (count - 1.0) / count);
    }
  } else {
    s.mean = s.min = s.max = std::nan("");
  }
  return s;
}

}  // namespace detail

inline ScenarioResult run_scenario(const ExperimentConfig& config) {
  config.validate();
  ScenarioResult result;
  result.config = config;
  const auto ne = config.estimators.size();
  const oracle::SampleMode mode =
      config.structured ? oracle::SampleMode::Structured : oracle::SampleMode::Unstructured;

  result.nominal = make_problem(config, data_seed(config.master_seed, 0));
  std::vector<detail::Fitted> fixed(ne);
  if (!config.redraw_data) {
    detail::parallel_for(static_cast<int>(ne), detail::resolve_threads(config.threads),
                         [&](int e) {
                           fixed[static_cast<std::size_t>(e)] =
                               detail::fit(config.estimators[static_cast<std::size_t>(e)],
                                           result.nominal);
                         });
  }

  result.records.resize(static_cast<std::size_t>(config.trials) * ne);
  detail::parallel_for(config.trials, detail::resolve_threads(config.threads), [&](int t) {
    const ProblemSpec spec = config.redraw_data
                                 ? make_problem(config, data_seed(config.master_seed,
                                                                  static_cast<std::uint64_t>(t)))
                                 : result.nominal;
    const std::uint64_t seed = oracle::derive_seed(config.master_seed, static_cast<std::uint64_t>(t));
    const oracle::PerturbationSample p = oracle::sample_perturbation(spec, mode, seed);
    const oracle::PerturbedData data = oracle::apply(spec, p);
    for (std::size_t e = 0; e < ne; ++e) {
      const detail::Fitted f =
          config.redraw_data ? detail::fit(config.estimators[e], spec) : fixed[e];
      TrialRecord& r = result.records[static_cast<std::size_t>(t) * ne + e];
      r.trial_index = t;
      r.estimator = config.estimators[e];
      r.perturbation_seed = seed;
      r.iterations = f.iterations;
      if (f.x) {
        r.residual = (data.H * *f.x - data.y).squaredNorm();
      } else {
        r.ok = false;
        r.error = f.error;
      }
    }
  });

  for (const auto& name : config.estimators) {
    result.summaries.push_back(detail::summarize(name, result.records));
  }
  return result;
}

struct SweepRow {
  double delta = 0.0;
  EstimatorSummary summary;
};

/// One scenario per grid value with delta_H = delta_Y = value. Every grid
/// point reuses the master seed, so the nominal data and perturbation
/// directions are shared and only their scale changes.
inline std::vector<SweepRow> sweep_bounds(const ExperimentConfig& config) {
  if (config.delta_grid.empty()) throw ArgumentError("sweep_bounds: empty grid");
  std::vector<SweepRow> rows;
  for (double d : config.delta_grid) {
    ExperimentConfig c = config;
    c.delta_H = c.delta_Y = d;
    c.delta_grid.clear();
    const ScenarioResult r = run_scenario(c);
    for (const auto& s : r.summaries) rows.push_back({d, s});
  }
  return rows;
}

// ---------------------------------------------------------------- output

inline std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// trial_rank,estimator,residual (sorted ascending per estimator).
inline void write_curves_csv(std::ostream& os, const std::vector<EstimatorSummary>& sums,
                             const std::optional<double>& delta = {}) {
  if (!delta) os << "trial_rank,estimator,residual\n";
  for (const auto& s : sums) {
    for (std::size_t i = 0; i < s.sorted_residuals.size(); ++i) {
      if (delta) os << fmt(*delta) << ',';
      os << (i + 1) << ',' << s.estimator << ',' << fmt(s.sorted_residuals[i]) << '\n';
    }
  }
}

inline void write_summary_csv(std::ostream& os, const std::vector<EstimatorSummary>& sums,
                              const std::optional<double>& delta = {}) {
  if (!delta) os << "estimator,mean,min,max,failures\n";
  for (const auto& s : sums) {
    if (delta) os << fmt(*delta) << ',';
    os << s.estimator << ',' << fmt(s.mean) << ',' << fmt(s.min) << ',' << fmt(s.max) << ','
       << s.failures << '\n';
  }
}

inline void write_trials_csv(std::ostream& os, const std::vector<TrialRecord>& records,
                             const std::optional<double>& delta = {}) {
  if (!delta) os << "trial_index,estimator,residual,perturbation_seed,iterations,status\n";
  for (const auto& r : records) {
    if (delta) os << fmt(*delta) << ',';
    os << r.trial_index << ',' << r.estimator << ',' << (r.ok ? fmt(r.residual) : "nan") << ','
       << r.perturbation_seed << ',' << r.iterations << ',' << (r.ok ? "ok" : "failed") << '\n';
  }
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "delta,estimator,mean,stderr\n";
  for (const auto& r : rows) {
    os << fmt(r.delta) << ',' << r.summary.estimator << ',' << fmt(r.summary.mean) << ','
       << fmt(r.summary.stderr_mean) << '\n';
  }
}

inline nlohmann::json config_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["scenario"] = to_string(c.scenario);
  j["m"] = c.m;
  j["n"] = c.n;
  j["delta_H"] = c.delta_H;
  j["delta_Y"] = c.delta_Y;
  j["delta_grid"] = c.delta_grid;
  j["mu"] = c.mu;
  j["trials"] = c.trials;
  j["estimators"] = c.estimators;
  j["master_seed"] = c.master_seed;
  j["redraw_data"] = c.redraw_data;
  j["normalize_data"] = c.normalize_data;
  if (c.structured) {
    j["structured"] = {
        {"filter_length", c.filter_length},
        {"delta_alpha", c.delta_alpha},
        {"delta_beta", c.delta_beta},
        {"bound_mode", c.bound_mode == StructuredBound::Absolute ? "absolute" : "scaled-by-norm"},
        {"bound_readings",
         {{"absolute", "||alpha|| <= delta_alpha, ||beta|| <= delta_beta"},
          {"scaled-by-norm", "||alpha|| <= delta_alpha ||H_0||, ||beta|| <= delta_beta ||H_0||"}}},
        {"observation_noise", c.observation_noise}};
  }
  return j;
}

/// Overlays the keys present in `j` on the defaults of its "scenario"
/// (custom when absent). Unknown keys are rejected.
inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ArgumentError("config: expected a JSON object");
  ExperimentConfig c = default_config(
      j.contains("scenario") ? scenario_from_string(j["scenario"].get<std::string>())
                             : Scenario::Custom);
  static const std::vector<std::string> known = {
      "scenario", "m", "n", "delta_H", "delta_Y", "delta_grid", "mu", "trials",
      "estimators", "master_seed", "redraw_data", "normalize_data", "threads", "structured"};
  try {
    for (const auto& [key, value] : j.items()) {
      if (std::find(known.begin(), known.end(), key) == known.end()) {
        throw ArgumentError("config: unknown key '" + key + "'");
      }
    }
    if (j.contains("m")) c.m = j["m"].get<Eigen::Index>();
    if (j.contains("n")) c.n = j["n"].get<Eigen::Index>();
    if (j.contains("delta_H")) c.delta_H = j["delta_H"].get<double>();
    if (j.contains("delta_Y")) c.delta_Y = j["delta_Y"].get<double>();
    if (j.contains("delta_grid")) c.delta_grid = j["delta_grid"].get<std::vector<double>>();
    if (j.contains("mu")) c.mu = j["mu"].get<double>();
    if (j.contains("trials")) c.trials = j["trials"].get<int>();
    if (j.contains("estimators")) c.estimators = j["estimators"].get<std::vector<std::string>>();
    if (j.contains("master_seed")) c.master_seed = j["master_seed"].get<std::uint64_t>();
    if (j.contains("redraw_data")) c.redraw_data = j["redraw_data"].get<bool>();
    if (j.contains("normalize_data")) c.normalize_data = j["normalize_data"].get<bool>();
    if (j.contains("threads")) c.threads = j["threads"].get<unsigned>();
    if (j.contains("structured")) {
      const nlohmann::json& s = j["structured"];
      if (s.is_boolean()) {
        c.structured = s.get<bool>();
      } else if (s.is_object()) {
        c.structured = true;
        if (s.contains("filter_length")) c.filter_length = s["filter_length"].get<Eigen::Index>();
        if (s.contains("delta_alpha")) c.delta_alpha = s["delta_alpha"].get<double>();
        if (s.contains("delta_beta")) c.delta_beta = s["delta_beta"].get<double>();
        if (s.contains("observation_noise")) {
          c.observation_noise = s["observation_noise"].get<double>();
        }
        if (s.contains("bound_mode")) {
          const std::string mode = s["bound_mode"].get<std::string>();
          if (mode == "absolute") {
            c.bound_mode = StructuredBound::Absolute;
          } else if (mode == "scaled-by-norm") {
            c.bound_mode = StructuredBound::ScaledByNorm;
          } else {
            throw ArgumentError("config: unknown bound_mode '" + mode + "'");
          }
        }
      } else {
        throw ArgumentError("config: 'structured' must be a boolean or an object");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

/// Sidecar describing how every number in the CSVs was produced. Thread
/// count is deliberately left out: it does not affect the output.
inline nlohmann::json metadata_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["config"] = config_json(c);
  j["code_version"] = kVersion;
  j["seeding"] = {
      {"perturbation_stream", "splitmix64(master_seed, trial_index) -> mt19937_64"},
      {"data_stream", "splitmix64(master_seed ^ 0xA5A5A5A55A5A5A5A, index) -> mt19937_64"}};
  j["sampling_law"] = {
      {"dH", "complex Gaussian direction scaled to spectral norm r * delta_H, r ~ U[0,1]"},
      {"dy", "complex Gaussian direction scaled to Euclidean norm r * delta_Y, r ~ U[0,1]"},
      {"alpha_beta", "complex Gaussian direction scaled to Euclidean norm r * delta, r ~ U[0,1]"}};
  std::string nominal = c.structured
                            ? "Toeplitz: +-1 filter h, unit-norm complex Gaussian x_0, y_0 = conv(h) x_0; "
                              "observed taps and output carry relative complex Gaussian noise"
                            : "complex Gaussian H and y";
  nominal += c.normalize_data ? "; H scaled to unit spectral norm, y to unit norm"
                              : "; no rescaling";
  nominal += c.redraw_data ? "; redrawn for every trial" : "; drawn once per run";
  j["nominal_data"] = nominal;
  j["residual"] = "||(H + dH) x_hat - (y + dy)||^2, x_hat from nominal data";
  return j;
}

}  // namespace regret_ls::experiments

#endif  // REGRET_LS_EXPERIMENTS_HPP
