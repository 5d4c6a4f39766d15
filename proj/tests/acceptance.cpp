// Acceptance criteria runner. Prints one PASS/FAIL line per criterion.
//
//   acceptance                      all criteria
//   acceptance --criterion 7        one criterion (repeatable)
//   acceptance --cli <regret-ls>    also check determinism through the CLI
//
// Exit status is 0 only if every selected criterion passes.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "regret_ls/regret_ls.hpp"

using namespace regret_ls;
namespace ex = regret_ls::experiments;
namespace fs = std::filesystem;

namespace {

// All randomness below derives from this seed, fixed before any run.
constexpr std::uint64_t kSeed = 2026;

std::uint64_t criterion_seed(int criterion) { return oracle::derive_seed(kSeed, 1000 + criterion); }
std::uint64_t repetition_seed(int criterion, int rep) {
  return oracle::derive_seed(criterion_seed(criterion), static_cast<std::uint64_t>(rep));
}

// Pinned tolerances and thresholds.
constexpr double kGradientTolerance = 1e-5;
constexpr double kGradientSeconds = 10.0;
constexpr int kTaylorInstances = 20;
constexpr double kTaylorSlope = 1.8;
constexpr double kSolverGap = 1e-7;
constexpr double kSolverObjective = 1e-6;
constexpr double kSolverSeconds = 1.0;
constexpr int kTightnessSamples = 10000;
constexpr int kTrials = 1000;
constexpr double kMeanBand = 0.30;
constexpr double kFig1Reference = 1.1928;
constexpr double kFig4Reference = 0.9059;
constexpr double kFig1Seconds = 600.0;
constexpr double kTieTolerance = 1e-9;

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  std::function<Outcome()> run;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

std::string fraction(int hits, int total, double required) {
  std::ostringstream os;
  os << hits << "/" << total << " (need >= " << static_cast<int>(std::ceil(required * total - 1e-9))
     << ")";
  return os.str();
}

bool enough(int hits, int total, double required) {
  return hits >= static_cast<int>(std::ceil(required * total - 1e-9));
}

Outcome from_suite(const validation::SuiteResult& r, const std::string& headline,
                   double seconds_bound = 0.0) {
  Outcome o;
  o.passed = r.passed && (seconds_bound <= 0.0 || r.seconds < seconds_bound);
  std::ostringstream os;
  os << (r.checks - r.failures) << "/" << r.checks << " checks, " << headline << " "
     << fmt(r.worst, 3) << ", " << fmt(r.seconds, 3) << " s";
  if (seconds_bound > 0.0) os << " (limit " << seconds_bound << " s)";
  if (!r.notes.empty()) os << "; first failure: " << r.notes.front();
  o.detail = os.str();
  return o;
}

double mean_of(const ex::ScenarioResult& r, const std::string& name) {
  for (const auto& s : r.summaries) {
    if (s.estimator == name) return s.failures == 0 ? s.mean : std::nan("");
  }
  return std::nan("");
}

bool within_band(double value, double reference) {
  return std::abs(value - reference) <= kMeanBand * reference;
}

ex::ScenarioResult run_repetition(ex::Scenario scenario, int criterion, int rep) {
  ex::ExperimentConfig c = ex::default_config(scenario);
  c.trials = kTrials;
  c.master_seed = repetition_seed(criterion, rep);
  return ex::run_scenario(c);
}

// ---------------------------------------------------------------- statistical criteria

Outcome unstructured_scenario() {
  const int reps = 20;
  const auto t0 = std::chrono::steady_clock::now();
  int ordered = 0;
  int in_band = 0;
  double rgrt_sum = 0.0;
  std::vector<int> pair_hits(3, 0);
  for (int rep = 0; rep < reps; ++rep) {
    const auto r = run_repetition(ex::Scenario::Fig1, 7, rep);
    const double rg = mean_of(r, "rgrt-ls"), ls = mean_of(r, "ls"), rb = mean_of(r, "rbst-ls"),
                 tl = mean_of(r, "tls");
    pair_hits[0] += rg < ls;
    pair_hits[1] += ls < rb;
    pair_hits[2] += rb < tl;
    ordered += rg < ls && ls < rb && rb < tl;
    in_band += within_band(rg, kFig1Reference);
    rgrt_sum += rg;
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.passed = enough(ordered, reps, 0.70) && enough(in_band, reps, 0.80) && secs < kFig1Seconds;
  o.detail = "ordering rgrt<ls<rbst<tls " + fraction(ordered, reps, 0.70) +
             " [rgrt<ls " + std::to_string(pair_hits[0]) + ", ls<rbst " +
             std::to_string(pair_hits[1]) + ", rbst<tls " + std::to_string(pair_hits[2]) +
             "]; rgrt mean within 30% of " + fmt(kFig1Reference) + " " +
             fraction(in_band, reps, 0.80) + " (average " + fmt(rgrt_sum / reps) + "); " +
             fmt(secs, 3) + " s";
  return o;
}

Outcome bound_sweep() {
  const int reps = 10;
  int best_everywhere = 0;
  int ties = 0;
  int strict_everywhere = 0;
  std::ostringstream misses;
  for (int rep = 0; rep < reps; ++rep) {
    ex::ExperimentConfig c = ex::default_config(ex::Scenario::Fig2);
    c.trials = kTrials;
    c.master_seed = repetition_seed(8, rep);
    const auto rows = ex::sweep_bounds(c);
    bool all = true;
    bool strict = true;
    for (double d : c.delta_grid) {
      double rg = std::nan("");
      double best_other = std::numeric_limits<double>::infinity();
      std::string best_name;
      for (const auto& row : rows) {
        if (row.delta != d) continue;
        if (row.summary.estimator == "rgrt-ls") {
          rg = row.summary.mean;
        } else if (row.summary.mean < best_other) {
          best_other = row.summary.mean;
          best_name = row.summary.estimator;
        }
      }
      // At small bounds rgrt-ls and ls coincide and their means differ by
      // roundoff only; such a tie counts as lowest and is reported.
      const bool tie = std::abs(rg - best_other) <= kTieTolerance * best_other;
      ties += tie;
      strict = strict && rg < best_other;
      if (!(rg < best_other) && !tie) {
        all = false;
        misses << " rep " << rep << " delta " << d << ": " << best_name << " " << fmt(best_other, 6)
               << " <= rgrt " << fmt(rg, 6) << ";";
      }
    }
    best_everywhere += all;
    strict_everywhere += strict;
  }
  Outcome o;
  o.passed = enough(best_everywhere, reps, 0.70);
  o.detail = "rgrt-ls lowest mean at every bound " + fraction(best_everywhere, reps, 0.70) + "; " +
             std::to_string(ties) + " of " + std::to_string(reps * 4) +
             " comparisons tied within relative " + fmt(kTieTolerance, 2) +
             " (strictly lowest everywhere: " + std::to_string(strict_everywhere) + "/" +
             std::to_string(reps) + ")";
  if (!misses.str().empty()) o.detail += ";" + misses.str();
  return o;
}

Outcome regularized_scenario() {
  const int reps = 20;
  int ordered = 0;
  int in_band = 0;
  double sum = 0.0;
  for (int rep = 0; rep < reps; ++rep) {
    const auto r = run_repetition(ex::Scenario::Fig4, 9, rep);
    const double rg = mean_of(r, "rgrt-reg-ls");
    ordered += rg < mean_of(r, "rbst-reg-ls");
    in_band += within_band(rg, kFig4Reference);
    sum += rg;
  }
  Outcome o;
  o.passed = enough(ordered, reps, 0.80) && enough(in_band, reps, 0.70);
  o.detail = "rgrt-reg < rbst-reg " + fraction(ordered, reps, 0.80) +
             "; rgrt-reg mean within 30% of " + fmt(kFig4Reference) + " " +
             fraction(in_band, reps, 0.70) + " (average " + fmt(sum / reps) + ")";
  return o;
}

Outcome structured_scenario() {
  const int reps = 20;
  int ordered = 0;
  double ratio_sum = 0.0;
  for (int rep = 0; rep < reps; ++rep) {
    const auto r = run_repetition(ex::Scenario::Fig3, 10, rep);
    const double a = mean_of(r, "str-rgrt-ls");
    const double b = mean_of(r, "str-rbst-ls");
    ordered += a < b;
    ratio_sum += a / b;
  }
  Outcome o;
  o.passed = enough(ordered, reps, 0.70);
  o.detail = "str-rgrt < str-rbst " + fraction(ordered, reps, 0.70) +
             " (average mean ratio " + fmt(ratio_sum / reps) + ")";
  return o;
}

// ---------------------------------------------------------------- determinism

std::string scenario_csvs(ex::ExperimentConfig c, unsigned threads) {
  c.threads = threads;
  std::ostringstream os;
  if (!c.delta_grid.empty()) {
    for (double d : c.delta_grid) {
      ex::ExperimentConfig one = c;
      one.delta_H = one.delta_Y = d;
      one.delta_grid.clear();
      const auto r = ex::run_scenario(one);
      ex::write_curves_csv(os, r.summaries, d);
      ex::write_summary_csv(os, r.summaries, d);
      ex::write_trials_csv(os, r.records, d);
    }
    ex::write_sweep_csv(os, ex::sweep_bounds(c));
    return os.str();
  }
  const auto r = ex::run_scenario(c);
  ex::write_curves_csv(os, r.summaries);
  ex::write_summary_csv(os, r.summaries);
  ex::write_trials_csv(os, r.records);
  return os.str();
}

std::string slurp_dir(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".csv") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::string all;
  for (const auto& f : files) {
    all += f.filename().string() + "\n" + io::read_file(f.string());
  }
  return all;
}

Outcome determinism(const std::string& cli) {
  std::ostringstream os;
  bool ok = true;
  int compared = 0;
  for (auto s : {ex::Scenario::Fig1, ex::Scenario::Fig2, ex::Scenario::Fig3, ex::Scenario::Fig4}) {
    ex::ExperimentConfig c = ex::default_config(s);
    c.trials = 200;
    c.master_seed = criterion_seed(11);
    const std::string serial = scenario_csvs(c, 1);
    const std::string again = scenario_csvs(c, 1);
    const std::string parallel = scenario_csvs(c, 4);
    compared += 2;
    if (serial != again || serial != parallel) {
      ok = false;
      os << " " << ex::to_string(s) << " differs in-process;";
    }
  }
  os << " in-process " << compared << " comparisons";
  if (!cli.empty()) {
    const fs::path root = fs::temp_directory_path() /
                          ("regret_ls_acceptance_" + std::to_string(criterion_seed(11) % 100000));
    fs::remove_all(root);
    int runs = 0;
    for (int fig = 1; fig <= 4; ++fig) {
      std::vector<std::string> outputs;
      for (const char* threads : {"1", "1", "4"}) {
        const fs::path out = root / ("fig" + std::to_string(fig) + "_" + std::to_string(runs++));
        const std::string cmd = "\"" + cli + "\" reproduce --fig " + std::to_string(fig) +
                                " --seed " + std::to_string(criterion_seed(11)) +
                                " --trials 200 --threads " + threads + " --outdir \"" +
                                out.string() + "\" 2>/dev/null";
        if (std::system(cmd.c_str()) != 0) {
          ok = false;
          os << "; CLI run failed: " << cmd;
          break;
        }
        outputs.push_back(slurp_dir(out));
      }
      if (outputs.size() == 3 && (outputs[0].empty() || outputs[0] != outputs[1] ||
                                  outputs[0] != outputs[2])) {
        ok = false;
        os << "; CLI fig " << fig << " CSVs differ";
      }
    }
    fs::remove_all(root);
    os << ", CLI " << runs << " runs (serial, rerun, 4 threads)";
  } else {
    os << ", CLI not checked (no --cli)";
  }
  return {ok, "byte-identical CSVs:" + os.str()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria for the regret LS toolkit"};
  std::vector<int> selected;
  std::string cli;
  app.add_option("--criterion", selected, "Criterion number(s) to run (default: all)")
      ->check(CLI::Range(1, 11));
  app.add_option("--cli", cli, "Path to the regret-ls executable for the determinism check");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {1, "expansion gradients vs finite differences",
       [] {
         return from_suite(validation::gradient_suite(criterion_seed(1), 100, kGradientTolerance),
                           "worst relative error", kGradientSeconds);
       }},
      {2, "zero bounds recover least squares and ridge",
       [] { return from_suite(validation::zero_bound_suite(criterion_seed(2), 50), "worst |dx|"); }},
      {3, "single-bound formulations match the joint one",
       [] {
         return from_suite(validation::single_channel_suite(criterion_seed(3), 50), "worst |dx|");
       }},
      {4, "relaxation tightness at the optimum",
       [] {
         return from_suite(validation::tightness_suite(criterion_seed(4), 5, kTightnessSamples),
                           "worst gamma* - extracted");
       }},
      {5, "expansion remainder is second order",
       [] {
         return from_suite(
             validation::taylor_suite(criterion_seed(5), kTaylorInstances, kTaylorSlope),
             "smallest slope");
       }},
      {6, "solver regression set",
       [] {
         return from_suite(validation::solver_suite(criterion_seed(6), kSolverGap,
                                                    kSolverObjective, kSolverSeconds),
                           "worst objective error");
       }},
      {7, "unstructured 5x3 scenario, bounds 1.2 (fig 1)", unstructured_scenario},
      {8, "bound sweep 0.3..0.6 (fig 2)", bound_sweep},
      {9, "regularized 3x2 scenario (fig 4)", regularized_scenario},
      {10, "Toeplitz structured scenario (fig 3)", structured_scenario},
      {11, "determinism, serial vs parallel", [&cli] { return determinism(cli); }},
  };

  const std::set<int> want(selected.begin(), selected.end());
  int failures = 0;
  for (const auto& c : criteria) {
    if (!want.empty() && !want.count(c.id)) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.passed;
    std::printf("%s  criterion %2d  %s: %s\n", o.passed ? "PASS" : "FAIL", c.id, c.title.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
