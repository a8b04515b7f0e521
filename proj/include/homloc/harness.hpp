#pragma once
#include <homloc/estimation.hpp>
#include <homloc/fisher.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace homloc {

/// @brief One simulation campaign: repeated generate -> estimate trials for a
/// fixed truth over a grid of sample sizes.
struct ExperimentConfig {
  SphericalParams truth;
  Visibility nu;
  double gamma = 1.0;
  std::vector<std::uint64_t> n_values;  ///< nonempty, ascending
  std::uint64_t repetitions = 1000;
  std::uint64_t master_seed = 0;
  SolverConfig solver;
  int threads = 0;  ///< worker threads; 0 = hardware concurrency

  void validate() const;
};

/// Aggregated statistics for a single estimated parameter.
struct ParamStats {
  double mean = 0.0;
  double variance = 0.0;      ///< unbiased across trials; 0 for a single trial
  double bias_ratio = 0.0;    ///< mean / truth (circular mean for phi)
  double crb = 0.0;           ///< Cramer-Rao bound at this n
  double var_over_crb = 0.0;  ///< variance normalized to the bound
};

/// @brief Estimator statistics over the trials of one (config, n) point.
/// Only converged trials with a defined direction enter the statistics;
/// the rest are counted.
struct TrialStats {
  ParamStats s;
  ParamStats theta;
  ParamStats phi;
  std::uint64_t trials_run = 0;
  std::uint64_t trials_used = 0;
};

/// @brief Runs cfg.repetitions independent trials at sample size n and
/// aggregates TrialStats. Each trial owns an RNG substream derived from
/// (master_seed, n, trial index); the aggregation is an ordered reduction by
/// trial index, so the result is identical for any worker count. Throws
/// numeric_error when no trial yields a usable estimate.
TrialStats run_trials(const ExperimentConfig &cfg, std::uint64_t n);

/// One row of campaign results: a (truth, nu, n, parameter) cell.
struct ResultRow {
  SphericalParams truth;
  double nu;
  std::uint64_t n;
  std::string parameter;  // "s" | "theta" | "phi"
  ParamStats stats;
  std::uint64_t trials_run;
  std::uint64_t trials_used;
};

std::vector<ResultRow> rows_from_stats(const ExperimentConfig &cfg, std::uint64_t n,
                                       const TrialStats &stats);

/// @brief Settings of the default benchmark campaign: three truths
/// (3, pi/5, pi/4), (4, pi/4, pi/3), (5, pi/3, pi/5), visibilities 1 and 0.7,
/// sample sizes 125..4000, unit efficiency.
struct BenchmarkOptions {
  std::vector<std::uint64_t> n_values = {125, 250, 500, 1000, 2000, 4000};
  std::uint64_t repetitions = 1000;
  std::uint64_t master_seed = 20240901;
  double gamma = 1.0;
  SolverConfig solver;
  int threads = 0;
  std::ostream *progress = nullptr;  ///< optional progress log
};

/// Runs the six benchmark campaigns and returns all result rows.
std::vector<ResultRow> reproduce_benchmark(const BenchmarkOptions &opts);

/// CSV header written by emit_results (RFC 4180 style, LF line endings).
extern const char *const kResultsCsvHeader;

/// @brief Writes plot-ready CSV (one row per (truth, nu, n, parameter)) plus
/// a JSON summary embedding the full configuration and the RNG algorithm id.
/// I/O failures carry the offending path.
void emit_results(const std::vector<ResultRow> &rows, const ExperimentConfig &cfg,
                  const std::string &csv_path, const std::string &json_path);

/// Reads back the ExperimentConfig embedded in a results summary.
ExperimentConfig read_summary_config(std::istream &in);

/// Wraps an angular difference into (-pi, pi].
double wrap_angle(double delta);

}  // namespace homloc
