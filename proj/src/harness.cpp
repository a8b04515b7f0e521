#include <homloc/harness.hpp>

#include <homloc/errors.hpp>
#include <homloc/rng.hpp>
#include <homloc/sampling.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace homloc {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

struct TrialOutcome {
  double s = 0.0;
  double theta = 0.0;
  double phi = 0.0;
  bool usable = false;
};

ParamStats linear_stats(const std::vector<double> &values, double truth, double crb_value) {
  ParamStats st;
  const double m = static_cast<double>(values.size());
  for (double v : values) st.mean += v;
  st.mean /= m;
  if (values.size() >= 2) {
    double acc = 0.0;
    for (double v : values) acc += (v - st.mean) * (v - st.mean);
    st.variance = acc / (m - 1.0);
  }
  st.bias_ratio = st.mean / truth;
  st.crb = crb_value;
  st.var_over_crb = st.variance / crb_value;
  return st;
}

// phi statistics on wrapped deviations from the truth, avoiding 2*pi jumps.
ParamStats circular_stats(const std::vector<double> &values, double truth, double crb_value) {
  std::vector<double> deviations(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) deviations[i] = wrap_angle(values[i] - truth);
  ParamStats st = linear_stats(deviations, 1.0, crb_value);
  st.mean += truth;
  st.bias_ratio = st.mean / truth;
  return st;
}

nlohmann::json solver_to_json(const SolverConfig &s) {
  return {{"s_grid_max", s.s_grid_max},     {"s_grid_step", s.s_grid_step},
          {"theta_grid_count", s.theta_grid_count}, {"phi_grid_count", s.phi_grid_count},
          {"local_tol", s.local_tol},       {"max_iters", s.max_iters},
          {"prob_floor", s.prob_floor}};
}

SolverConfig solver_from_json(const nlohmann::json &j) {
  SolverConfig s;
  s.s_grid_max = j.at("s_grid_max").get<double>();
  s.s_grid_step = j.at("s_grid_step").get<double>();
  s.theta_grid_count = j.at("theta_grid_count").get<int>();
  s.phi_grid_count = j.at("phi_grid_count").get<int>();
  s.local_tol = j.at("local_tol").get<double>();
  s.max_iters = j.at("max_iters").get<int>();
  s.prob_floor = j.at("prob_floor").get<double>();
  return s;
}

nlohmann::json config_to_json(const ExperimentConfig &cfg) {
  return {{"truth", {{"s", cfg.truth.s}, {"theta", cfg.truth.theta}, {"phi", cfg.truth.phi}}},
          {"nu", cfg.nu.nu},
          {"gamma", cfg.gamma},
          {"n_values", cfg.n_values},
          {"repetitions", cfg.repetitions},
          {"master_seed", cfg.master_seed},
          {"solver", solver_to_json(cfg.solver)},
          {"threads", cfg.threads}};
}

}  // namespace

double wrap_angle(double delta) {
  delta = std::fmod(delta, 2 * kPi);
  if (delta <= -kPi) delta += 2 * kPi;
  if (delta > kPi) delta -= 2 * kPi;
  return delta;
}

void ExperimentConfig::validate() const {
  if (!std::isfinite(gamma) || gamma <= 0.0 || gamma > 1.0)
    throw std::invalid_argument("gamma must lie in (0, 1]: no pairs are detected at 0");
  if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
  if (n_values.empty()) throw std::invalid_argument("n_values must be nonempty");
  if (!std::is_sorted(n_values.begin(), n_values.end()))
    throw std::invalid_argument("n_values must be ascending");
  if (n_values.front() < 1) throw std::invalid_argument("n_values entries must be >= 1");
  if (threads < 0) throw std::invalid_argument("threads must be >= 0");
  solver.validate();
}

TrialStats run_trials(const ExperimentConfig &cfg, std::uint64_t n) {
  cfg.validate();

  const std::uint64_t reps = cfg.repetitions;
  std::vector<TrialOutcome> outcomes(reps);
  std::atomic<std::uint64_t> next{0};

  const auto worker = [&] {
    for (;;) {
      const std::uint64_t idx = next.fetch_add(1);
      if (idx >= reps) return;
      try {
        SampleConfig sc{cfg.truth, cfg.nu, cfg.gamma, n,
                        derive_stream_seed(cfg.master_seed, n, idx)};
        const Sample sample = generate_sample(sc);
        const EstimationResult r = estimate(sample.records, cfg.nu, cfg.solver);
        outcomes[idx] = {r.estimate.s, r.estimate.theta, r.estimate.phi,
                         r.converged && r.estimate.theta_defined && r.estimate.phi_defined};
      } catch (const std::exception &) {
        outcomes[idx] = {};
      }
    }
  };

  unsigned n_workers = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                       : std::max(1u, std::thread::hardware_concurrency());
  n_workers = std::min<unsigned>(n_workers, reps);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w + 1 < n_workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto &t : pool) t.join();

  // Ordered reduction over trial index keeps the result schedule-independent.
  std::vector<double> s_vals, t_vals, p_vals;
  for (const TrialOutcome &o : outcomes) {
    if (!o.usable) continue;
    s_vals.push_back(o.s);
    t_vals.push_back(o.theta);
    p_vals.push_back(o.phi);
  }
  if (s_vals.empty())
    throw numeric_error("run_trials: no usable trial at n = " + std::to_string(n) + " out of " +
                        std::to_string(reps) + " repetitions");

  const CrbReport bound = crb(fisher_resolved(cfg.truth, cfg.nu, cfg.gamma), n);
  TrialStats stats;
  stats.trials_run = reps;
  stats.trials_used = s_vals.size();
  stats.s = linear_stats(s_vals, cfg.truth.s, bound.crb_s);
  stats.theta = linear_stats(t_vals, cfg.truth.theta, bound.crb_theta);
  stats.phi = circular_stats(p_vals, cfg.truth.phi, bound.crb_phi);
  return stats;
}

std::vector<ResultRow> rows_from_stats(const ExperimentConfig &cfg, std::uint64_t n,
                                       const TrialStats &stats) {
  std::vector<ResultRow> rows;
  for (auto [name, st] : {std::pair<const char *, const ParamStats &>{"s", stats.s},
                          {"theta", stats.theta},
                          {"phi", stats.phi}}) {
    rows.push_back(
        {cfg.truth, cfg.nu.nu, n, name, st, stats.trials_run, stats.trials_used});
  }
  return rows;
}

std::vector<ResultRow> reproduce_benchmark(const BenchmarkOptions &opts) {
  const std::array<SphericalParams, 3> truths = {
      SphericalParams::make(3.0, kPi / 5, kPi / 4),
      SphericalParams::make(4.0, kPi / 4, kPi / 3),
      SphericalParams::make(5.0, kPi / 3, kPi / 5),
  };
  const std::array<double, 2> visibilities = {1.0, 0.7};

  std::vector<ResultRow> rows;
  for (const SphericalParams &truth : truths) {
    for (double nu : visibilities) {
      ExperimentConfig cfg{truth, Visibility(nu), opts.gamma, opts.n_values,
                           opts.repetitions, opts.master_seed, opts.solver, opts.threads};
      for (std::uint64_t n : opts.n_values) {
        const TrialStats stats = run_trials(cfg, n);
        if (opts.progress != nullptr) {
          *opts.progress << "s=" << truth.s << " nu=" << nu << " n=" << n
                         << "  var/crb: s=" << stats.s.var_over_crb
                         << " theta=" << stats.theta.var_over_crb
                         << " phi=" << stats.phi.var_over_crb
                         << "  used " << stats.trials_used << "/" << stats.trials_run << '\n';
        }
        auto batch = rows_from_stats(cfg, n, stats);
        rows.insert(rows.end(), batch.begin(), batch.end());
      }
    }
  }
  return rows;
}

const char *const kResultsCsvHeader =
    "s_true,theta_true,phi_true,nu,n,parameter,mean,variance,crb,var_over_crb,"
    "bias_ratio,trials_run,trials_used";

void emit_results(const std::vector<ResultRow> &rows, const ExperimentConfig &cfg,
                  const std::string &csv_path, const std::string &json_path) {
  cfg.validate();
  {
    std::ofstream csv(csv_path);
    if (!csv) throw std::runtime_error("cannot open for writing: " + csv_path);
    csv << kResultsCsvHeader << '\n';
    for (const ResultRow &r : rows) {
      csv << fmt(r.truth.s) << ',' << fmt(r.truth.theta) << ',' << fmt(r.truth.phi) << ','
          << fmt(r.nu) << ',' << r.n << ',' << r.parameter << ',' << fmt(r.stats.mean) << ','
          << fmt(r.stats.variance) << ',' << fmt(r.stats.crb) << ','
          << fmt(r.stats.var_over_crb) << ',' << fmt(r.stats.bias_ratio) << ','
          << r.trials_run << ',' << r.trials_used << '\n';
    }
    if (!csv) throw std::runtime_error("failed while writing: " + csv_path);
  }

  nlohmann::json results = nlohmann::json::array();
  for (const ResultRow &r : rows) {
    results.push_back({{"s_true", r.truth.s},
                       {"theta_true", r.truth.theta},
                       {"phi_true", r.truth.phi},
                       {"nu", r.nu},
                       {"n", r.n},
                       {"parameter", r.parameter},
                       {"mean", r.stats.mean},
                       {"variance", r.stats.variance},
                       {"crb", r.stats.crb},
                       {"var_over_crb", r.stats.var_over_crb},
                       {"bias_ratio", r.stats.bias_ratio},
                       {"trials_run", r.trials_run},
                       {"trials_used", r.trials_used}});
  }
  nlohmann::json summary{{"rng", std::string(kRngAlgorithm)},
                         {"config", config_to_json(cfg)},
                         {"results", results}};
  std::ofstream js(json_path);
  if (!js) throw std::runtime_error("cannot open for writing: " + json_path);
  js << summary.dump(2) << '\n';
  if (!js) throw std::runtime_error("failed while writing: " + json_path);
}

ExperimentConfig read_summary_config(std::istream &in) {
  nlohmann::json summary = nlohmann::json::parse(in);
  const nlohmann::json &j = summary.at("config");
  const nlohmann::json &t = j.at("truth");
  ExperimentConfig cfg{
      SphericalParams::make(t.at("s").get<double>(), t.at("theta").get<double>(),
                            t.at("phi").get<double>()),
      Visibility(j.at("nu").get<double>()),
      j.at("gamma").get<double>(),
      j.at("n_values").get<std::vector<std::uint64_t>>(),
      j.at("repetitions").get<std::uint64_t>(),
      j.at("master_seed").get<std::uint64_t>(),
      solver_from_json(j.at("solver")),
      j.at("threads").get<int>()};
  return cfg;
}

}  // namespace homloc
