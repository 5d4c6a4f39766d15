// regret-ls: command line front end.
//
// Exit codes: 0 success, 1 usage or input error, 2 solver / precondition
// failure, 3 validation failure.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "regret_ls/regret_ls.hpp"

namespace rls = regret_ls;
namespace ex = regret_ls::experiments;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitSolver = 2;
constexpr int kExitValidation = 3;

std::optional<std::uint64_t> env_seed() {
  const char* v = std::getenv("REGRET_LS_SEED");
  if (v == nullptr || *v == '\0') return std::nullopt;
  try {
    std::size_t used = 0;
    const unsigned long long s = std::stoull(v, &used, 0);
    if (used != std::string(v).size()) throw std::invalid_argument(v);
    return s;
  } catch (const std::exception&) {
    throw rls::ArgumentError(std::string("REGRET_LS_SEED is not an unsigned integer: '") + v +
                             "'");
  }
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw rls::ArgumentError("cannot write '" + p.string() + "'");
  return out;
}

json vector_json(const rls::ComplexVector& x) {
  json a = json::array();
  for (Eigen::Index i = 0; i < x.size(); ++i) a.push_back({x(i).real(), x(i).imag()});
  return a;
}

// ------------------------------------------------------------------ solve

struct SolveArgs {
  std::string problem;
  std::string estimator;
  std::string variant;
  std::string format = "json";
  std::string output;
};

int run_solve(const SolveArgs& a) {
  const rls::io::ProblemFile file = rls::io::load_problem(a.problem);
  json out;
  rls::ComplexVector x;
  if (!a.estimator.empty()) {
    const ex::EstimatorOutput r = ex::run_estimator(a.estimator, file.spec);
    x = r.x;
    out["estimator"] = a.estimator;
    out["iterations"] = r.iterations;
    if (r.gamma_star) out["gamma_star"] = *r.gamma_star;
  } else {
    std::optional<rls::Formulation> f = file.variant;
    if (!a.variant.empty()) f = rls::formulation_from_string(a.variant);
    if (!f) {
      throw rls::ArgumentError(
          "solve: give --estimator or --variant, or set \"variant\" in the problem file");
    }
    const rls::RegretEstimate e = rls::solve_formulation(file.spec, *f);
    x = e.x_hat;
    out["variant"] = std::string(rls::to_string(*f));
    out["gamma_star"] = e.gamma_star;
    out["tau"] = e.tau;
    out["status"] = e.report.status == rls::sdp::Status::Optimal ? "optimal" : "failed";
    out["iterations"] = e.report.iterations;
    out["relative_gap"] = e.report.relative_gap;
  }
  out["x"] = vector_json(x);
  out["residual"] = (file.spec.y - file.spec.H * x).squaredNorm();

  std::ofstream file_out;
  std::ostream* os = &std::cout;
  if (!a.output.empty()) {
    file_out = open_out(a.output);
    os = &file_out;
  }
  if (a.format == "json") {
    *os << out.dump(2) << '\n';
  } else {
    *os << "index,re,im\n";
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      *os << i << ',' << ex::fmt(x(i).real()) << ',' << ex::fmt(x(i).imag()) << '\n';
    }
  }
  return 0;
}

// ------------------------------------------------------------------ reproduce / sweep

struct RunArgs {
  std::string fig;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<unsigned> threads;
  std::string outdir = ".";
  std::string format = "csv";
  // Overrides of the scenario defaults.
  std::optional<double> delta;
  std::optional<double> delta_h;
  std::optional<double> delta_y;
  std::vector<double> delta_grid;
  std::optional<double> mu;
  std::optional<Eigen::Index> m;
  std::optional<Eigen::Index> n;
  std::vector<std::string> estimators;
  std::optional<double> noise;
  std::string bound_mode;
  bool redraw = false;
  std::optional<bool> normalize;
};

ex::ExperimentConfig build_config(const RunArgs& a, ex::Scenario fallback) {
  ex::ExperimentConfig c;
  if (!a.config.empty()) {
    c = ex::config_from_json(rls::io::parse(rls::io::read_file(a.config), a.config));
  } else {
    c = ex::default_config(a.fig.empty() ? fallback : ex::scenario_from_string(a.fig));
  }
  if (const auto s = env_seed()) c.master_seed = *s;
  if (a.seed) c.master_seed = *a.seed;
  if (a.trials) c.trials = *a.trials;
  if (a.threads) c.threads = *a.threads;
  if (a.delta) {
    c.delta_H = c.delta_Y = *a.delta;
    c.delta_alpha = c.delta_beta = *a.delta;
  }
  if (a.delta_h) c.delta_H = *a.delta_h;
  if (a.delta_y) c.delta_Y = *a.delta_y;
  if (!a.delta_grid.empty()) c.delta_grid = a.delta_grid;
  if (a.mu) c.mu = *a.mu;
  if (a.m) c.m = *a.m;
  if (a.n) c.n = *a.n;
  if (!a.estimators.empty()) c.estimators = a.estimators;
  if (a.noise) c.observation_noise = *a.noise;
  if (a.bound_mode == "absolute") c.bound_mode = ex::StructuredBound::Absolute;
  if (a.bound_mode == "scaled-by-norm") c.bound_mode = ex::StructuredBound::ScaledByNorm;
  if (a.redraw) c.redraw_data = true;
  if (a.normalize) c.normalize_data = *a.normalize;
  c.validate();
  return c;
}

void print_summaries(const std::vector<ex::EstimatorSummary>& sums,
                     const std::optional<double>& delta = {}) {
  for (const auto& s : sums) {
    if (delta) std::cerr << "delta " << *delta << "  ";
    std::cerr << s.estimator << ": mean " << s.mean << ", min " << s.min << ", max " << s.max;
    if (s.failures) std::cerr << ", failures " << s.failures;
    std::cerr << '\n';
  }
}

json summaries_json(const std::vector<ex::EstimatorSummary>& sums) {
  json a = json::array();
  for (const auto& s : sums) {
    a.push_back({{"estimator", s.estimator},
                 {"mean", s.mean},
                 {"min", s.min},
                 {"max", s.max},
                 {"stderr", s.stderr_mean},
                 {"failures", s.failures},
                 {"sorted_residuals", s.sorted_residuals}});
  }
  return a;
}

int count_failures(const std::vector<ex::EstimatorSummary>& sums) {
  int f = 0;
  for (const auto& s : sums) f += s.failures;
  return f;
}

void write_metadata(const fs::path& dir, const ex::ExperimentConfig& c) {
  open_out(dir / "metadata.json") << ex::metadata_json(c).dump(2) << '\n';
}

int run_reproduce(const RunArgs& a) {
  const ex::ExperimentConfig c = build_config(a, ex::Scenario::Fig1);
  const fs::path dir(a.outdir);
  fs::create_directories(dir);
  int failures = 0;
  if (c.delta_grid.empty()) {
    const ex::ScenarioResult r = ex::run_scenario(c);
    print_summaries(r.summaries);
    failures = count_failures(r.summaries);
    if (a.format == "csv") {
      { auto os = open_out(dir / "curves.csv"); ex::write_curves_csv(os, r.summaries); }
      { auto os = open_out(dir / "summary.csv"); ex::write_summary_csv(os, r.summaries); }
      { auto os = open_out(dir / "trials.csv"); ex::write_trials_csv(os, r.records); }
    } else {
      open_out(dir / "results.json") << json{{"summaries", summaries_json(r.summaries)}}.dump(2)
                                     << '\n';
    }
  } else {
    // Bound grid: one scenario per value, each CSV row prefixed with delta.
    std::vector<ex::SweepRow> rows;
    auto curves = a.format == "csv" ? open_out(dir / "curves.csv") : std::ofstream();
    auto summary = a.format == "csv" ? open_out(dir / "summary.csv") : std::ofstream();
    auto trials = a.format == "csv" ? open_out(dir / "trials.csv") : std::ofstream();
    if (a.format == "csv") {
      curves << "delta,trial_rank,estimator,residual\n";
      summary << "delta,estimator,mean,min,max,failures\n";
      trials << "delta,trial_index,estimator,residual,perturbation_seed,iterations,status\n";
    }
    json per_delta = json::array();
    for (double d : c.delta_grid) {
      ex::ExperimentConfig cd = c;
      cd.delta_H = cd.delta_Y = d;
      cd.delta_grid.clear();
      const ex::ScenarioResult r = ex::run_scenario(cd);
      print_summaries(r.summaries, d);
      failures += count_failures(r.summaries);
      for (const auto& s : r.summaries) rows.push_back({d, s});
      if (a.format == "csv") {
        ex::write_curves_csv(curves, r.summaries, d);
        ex::write_summary_csv(summary, r.summaries, d);
        ex::write_trials_csv(trials, r.records, d);
      } else {
        per_delta.push_back({{"delta", d}, {"summaries", summaries_json(r.summaries)}});
      }
    }
    if (a.format == "csv") {
      auto os = open_out(dir / "sweep.csv");
      ex::write_sweep_csv(os, rows);
    } else {
      open_out(dir / "results.json") << json{{"grid", per_delta}}.dump(2) << '\n';
    }
  }
  write_metadata(dir, c);
  if (failures) {
    std::cerr << "regret-ls: " << failures << " estimator fits failed (see trials output)\n";
    return kExitSolver;
  }
  return 0;
}

int run_sweep(const RunArgs& a) {
  ex::ExperimentConfig c = build_config(a, ex::Scenario::Fig2);
  if (c.delta_grid.empty()) throw rls::ArgumentError("sweep: the config has no delta_grid");
  const fs::path dir(a.outdir);
  fs::create_directories(dir);
  const std::vector<ex::SweepRow> rows = ex::sweep_bounds(c);
  int failures = 0;
  for (const auto& r : rows) {
    std::cerr << "delta " << r.delta << "  " << r.summary.estimator << ": mean "
              << r.summary.mean << " (stderr " << r.summary.stderr_mean << ")\n";
    failures += r.summary.failures;
  }
  if (a.format == "csv") {
    auto os = open_out(dir / "sweep.csv");
    ex::write_sweep_csv(os, rows);
  } else {
    json arr = json::array();
    for (const auto& r : rows) {
      arr.push_back({{"delta", r.delta},
                     {"estimator", r.summary.estimator},
                     {"mean", r.summary.mean},
                     {"stderr", r.summary.stderr_mean}});
    }
    open_out(dir / "sweep.json") << arr.dump(2) << '\n';
  }
  write_metadata(dir, c);
  return failures ? kExitSolver : 0;
}

// ------------------------------------------------------------------ validate

int run_validate(const std::string& suite, std::optional<std::uint64_t> seed) {
  std::uint64_t s = 1;
  if (const auto e = env_seed()) s = *e;
  if (seed) s = *seed;
  std::vector<std::string> names;
  if (suite == "all") {
    names = rls::validation::suite_names();
  } else {
    names = {suite};
  }
  bool ok = true;
  for (const auto& name : names) {
    const rls::validation::SuiteResult r = rls::validation::run_suite(name, s);
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.checks - r.failures << "/"
              << r.checks << " checks, worst " << r.worst << ", " << r.seconds << " s\n";
    for (const auto& note : r.notes) std::cout << "  " << note << '\n';
    ok = ok && r.passed;
  }
  return ok ? 0 : kExitValidation;
}

void add_run_options(CLI::App* cmd, RunArgs& a) {
  cmd->add_option("--seed", a.seed, "Master seed (default: $REGRET_LS_SEED, else 1)");
  cmd->add_option("--trials", a.trials, "Monte-Carlo trials")->check(CLI::PositiveNumber);
  cmd->add_option("--threads", a.threads, "Worker threads (0: all cores)");
  cmd->add_option("--outdir", a.outdir, "Output directory")->capture_default_str();
  cmd->add_option("--format", a.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--delta", a.delta, "Set every perturbation bound")->check(CLI::NonNegativeNumber);
  cmd->add_option("--delta-h", a.delta_h, "Bound on ||dH||")->check(CLI::NonNegativeNumber);
  cmd->add_option("--delta-y", a.delta_y, "Bound on ||dy||")->check(CLI::NonNegativeNumber);
  cmd->add_option("--delta-grid", a.delta_grid, "Bound grid (delta_H = delta_Y = value)")
      ->delimiter(',');
  cmd->add_option("--mu", a.mu, "Ridge weight")->check(CLI::NonNegativeNumber);
  cmd->add_option("--m", a.m, "Rows of H")->check(CLI::PositiveNumber);
  cmd->add_option("--n", a.n, "Columns of H")->check(CLI::PositiveNumber);
  cmd->add_option("--estimators", a.estimators, "Comma-separated estimator names")
      ->delimiter(',');
  cmd->add_option("--noise", a.noise, "Relative observation noise (Toeplitz scenario)");
  cmd->add_option("--bound-mode", a.bound_mode, "Structured bounds: absolute | scaled-by-norm")
      ->check(CLI::IsMember({"absolute", "scaled-by-norm"}));
  cmd->add_flag("--redraw", a.redraw, "Draw new nominal data for every trial");
  cmd->add_flag("--normalize,!--no-normalize", a.normalize,
                "Scale H to unit spectral norm and y to unit norm");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimax-regret robust least squares: solve, reproduce, sweep, validate"};
  app.set_version_flag("--version", std::string(ex::kVersion));
  app.require_subcommand(1);

  SolveArgs solve_args;
  CLI::App* solve = app.add_subcommand("solve", "Estimate x for one problem file");
  solve->add_option("--problem", solve_args.problem, "Problem JSON file")->required();
  solve->add_option("--estimator", solve_args.estimator, "Estimator name")
      ->check(CLI::IsMember(ex::estimator_names()));
  solve->add_option("--variant", solve_args.variant,
                    "Formulation (regret, regret-matrix, regret-vector, regularized-regret, "
                    "structured-regret, robust-residual, structured-robust-residual)");
  solve->add_option("--format", solve_args.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  solve->add_option("--output,-o", solve_args.output, "Write to a file instead of stdout");

  RunArgs repro_args;
  CLI::App* reproduce = app.add_subcommand("reproduce", "Run a Monte-Carlo scenario");
  reproduce->add_option("--fig", repro_args.fig, "Scenario: 1, 2, 3, 4 (or fig1..fig4)");
  reproduce->add_option("--config", repro_args.config, "Scenario config JSON");
  add_run_options(reproduce, repro_args);

  RunArgs sweep_args;
  CLI::App* sweep = app.add_subcommand("sweep", "Mean residual over a grid of bounds");
  sweep->add_option("--config", sweep_args.config, "Scenario config JSON with delta_grid");
  sweep->add_option("--fig", sweep_args.fig, "Start from a scenario's defaults instead");
  add_run_options(sweep, sweep_args);

  std::string suite = "all";
  std::optional<std::uint64_t> validate_seed;
  CLI::App* validate = app.add_subcommand("validate", "Run self-checking suites");
  std::vector<std::string> suites = rls::validation::suite_names();
  suites.push_back("all");
  validate->add_option("--suite", suite, "Suite name")
      ->check(CLI::IsMember(suites))
      ->capture_default_str();
  validate->add_option("--seed", validate_seed, "Seed (default: $REGRET_LS_SEED, else 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*solve) return run_solve(solve_args);
    if (*reproduce) return run_reproduce(repro_args);
    if (*sweep) return run_sweep(sweep_args);
    if (*validate) return run_validate(suite, validate_seed);
  } catch (const rls::ArgumentError& e) {
    std::cerr << "regret-ls: " << e.what() << '\n';
    return kExitUsage;
  } catch (const rls::Error& e) {
    std::cerr << "regret-ls: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "regret-ls: " << e.what() << '\n';
    return kExitSolver;
  }
  return kExitUsage;
}
