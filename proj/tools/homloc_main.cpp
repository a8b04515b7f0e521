#include <homloc/errors.hpp>
#include <homloc/harness.hpp>
#include <homloc/sampling.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

namespace {

using nlohmann::json;

json spherical_json(const homloc::SphericalParams &sph) {
  json j{{"s", sph.s}};
  j["theta"] = sph.theta_defined ? json(sph.theta) : json(nullptr);
  j["phi"] = sph.phi_defined ? json(sph.phi) : json(nullptr);
  return j;
}

json matrix_json(const homloc::FisherMatrix &f) {
  return {{f.at(0, 0), f.at(0, 1), f.at(0, 2)},
          {f.at(1, 0), f.at(1, 1), f.at(1, 2)},
          {f.at(2, 0), f.at(2, 1), f.at(2, 2)}};
}

void write_text(const std::string &path, const std::string &text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("failed while writing: " + path);
}

int run(int argc, char **argv) {
  CLI::App app{"Two-photon interference toolkit: simulation, estimation and "
               "information bounds for the 3D relative localization of two "
               "single-photon emitters"};
  app.require_subcommand(1);

  double s = 4.0, theta = 0.785398163397448279, phi = 1.04719755119659775;
  double nu = 1.0, gamma = 1.0;
  std::uint64_t n = 1000, seed = 0, repetitions = 1000;
  std::string out_path, in_path;

  const auto add_truth = [&](CLI::App *cmd) {
    cmd->add_option("--s", s, "separation magnitude s (>= 0)");
    cmd->add_option("--theta", theta, "polar angle in [0, pi/2] (rad)");
    cmd->add_option("--phi", phi, "azimuth in [0, 2pi) (rad)");
  };

  // prob: outcome densities and probabilities at a phase-space point
  auto *prob = app.add_subcommand("prob", "evaluate the resolved outcome density and the "
                                          "non-resolving outcome probabilities");
  double xi = 0.0, kx = 0.0, ky = 0.0;
  add_truth(prob);
  prob->add_option("--nu", nu, "visibility in [0, 1]");
  prob->add_option("--gamma", gamma, "detector efficiency in [0, 1]");
  prob->add_option("--xi", xi, "reduced frequency difference");
  prob->add_option("--kx", kx, "reduced transverse momentum difference, x");
  prob->add_option("--ky", ky, "reduced transverse momentum difference, y");

  // sample: JSONL export of a synthetic run
  auto *sample_cmd = app.add_subcommand("sample", "generate a detection sample (JSON Lines)");
  add_truth(sample_cmd);
  sample_cmd->add_option("--nu", nu, "visibility in [0, 1]");
  sample_cmd->add_option("--gamma", gamma, "detector efficiency in [0, 1]");
  sample_cmd->add_option("--n", n, "number of detected two-photon events");
  sample_cmd->add_option("--seed", seed, "RNG stream seed");
  sample_cmd->add_option("--out", out_path, "output file (default stdout)");

  // estimate: maximum-likelihood fit of a JSONL sample
  auto *est_cmd = app.add_subcommand("estimate", "maximum-likelihood estimate of (s, theta, phi) "
                                                 "from a JSONL sample");
  est_cmd->add_option("--in", in_path, "input JSONL file")->required();
  double nu_override = -1.0;
  est_cmd->add_option("--nu", nu_override, "override the visibility recorded in the sample header");
  est_cmd->add_option("--out", out_path, "output JSON file (default stdout)");

  // fisher: information matrices and bounds
  auto *fisher_cmd = app.add_subcommand("fisher", "Fisher information, quantum bound and "
                                                  "Cramer-Rao bounds");
  add_truth(fisher_cmd);
  fisher_cmd->add_option("--nu", nu, "visibility in [0, 1]");
  fisher_cmd->add_option("--gamma", gamma, "detector efficiency in [0, 1]");
  fisher_cmd->add_option("--n", n, "sample size for the bounds");

  // feasibility: resolution screen
  auto *feas_cmd = app.add_subcommand("feasibility", "check that detector resolutions resolve "
                                                     "the momentum distribution and the beats");
  homloc::SourceWidths widths{1.0, 1.0, 1.0};
  homloc::DetectorModel det{1.0, 0.0, 0.0, 0.0, 1.0, 1.0};
  double margin = 0.1;
  add_truth(feas_cmd);
  feas_cmd->add_option("--gamma", det.gamma, "detector efficiency in [0, 1]");
  feas_cmd->add_option("--sigma-omega", widths.sigma_omega, "source frequency width (rad/s)");
  feas_cmd->add_option("--sigma-kx", widths.sigma_kx, "source momentum width, x (rad/m)");
  feas_cmd->add_option("--sigma-ky", widths.sigma_ky, "source momentum width, y (rad/m)");
  feas_cmd->add_option("--delta-omega", det.delta_omega, "frequency resolution (rad/s)");
  feas_cmd->add_option("--delta-xp", det.delta_xp, "camera position resolution, x (m)");
  feas_cmd->add_option("--delta-yp", det.delta_yp, "camera position resolution, y (m)");
  feas_cmd->add_option("--distance", det.distance_d, "camera distance (m)");
  feas_cmd->add_option("--omega-ref", det.omega_ref, "operating frequency (rad/s)");
  feas_cmd->add_option("--margin", margin, "inclusive feasibility margin in (0, 1]");

  // repro-fig4: full benchmark campaign
  auto *repro = app.add_subcommand("repro-fig4", "run the benchmark campaign: three truths, "
                                                 "two visibilities, variance/CRB and bias "
                                                 "versus sample size");
  homloc::BenchmarkOptions bench;
  std::vector<std::uint64_t> n_values;
  repro->add_option("--repetitions", repetitions,
                    "trials per grid point (default 1000; use 10000 for the high-precision run)");
  repro->add_option("--seed", bench.master_seed, "campaign master seed");
  repro->add_option("--gamma", bench.gamma, "detector efficiency in [0, 1]");
  repro->add_option("--n-values", n_values, "sample-size grid (ascending)");
  repro->add_option("--threads", bench.threads, "worker threads (0 = hardware)");
  repro->add_option("--out", out_path, "output prefix for <prefix>.csv and <prefix>.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 2;  // command-line problems are configuration errors
  }

  if (prob->parsed()) {
    const auto sph = homloc::SphericalParams::make(s, theta, phi);
    const homloc::Visibility v(nu);
    const homloc::MomentumDifference kappa{xi, kx, ky};
    json out{
        {"resolved",
         {{"A", homloc::resolved_density(homloc::Outcome::A, kappa, sph, v, gamma)},
          {"B", homloc::resolved_density(homloc::Outcome::B, kappa, sph, v, gamma)}}},
        {"nonresolving",
         {{"A", homloc::nonresolving_prob(homloc::Outcome::A, s, v, gamma)},
          {"B", homloc::nonresolving_prob(homloc::Outcome::B, s, v, gamma)}}},
    };
    const auto loss = homloc::loss_split(gamma);
    out["loss"] = {{"p0", loss.p0}, {"p1", loss.p1}, {"p2", loss.p2}};
    std::cout << out.dump(2) << '\n';
    return 0;
  }

  if (sample_cmd->parsed()) {
    homloc::SampleConfig cfg{homloc::SphericalParams::make(s, theta, phi),
                             homloc::Visibility(nu), gamma, n, seed};
    const homloc::Sample smp = homloc::generate_sample(cfg);
    std::ostringstream text;
    homloc::write_sample_jsonl(text, cfg, smp);
    write_text(out_path, text.str());
    return 0;
  }

  if (est_cmd->parsed()) {
    std::ifstream in(in_path);
    if (!in) throw std::invalid_argument("cannot open sample file: " + in_path);
    const homloc::LoadedSample loaded = homloc::read_sample_jsonl(in);
    const homloc::Visibility v = nu_override >= 0.0 ? homloc::Visibility(nu_override)
                                                    : loaded.config.nu;
    const homloc::EstimationResult r = homloc::estimate(loaded.sample.records, v);
    json out{{"estimate", spherical_json(r.estimate)},
             {"log_likelihood", r.log_likelihood},
             {"converged", r.converged},
             {"n_starts_used", r.n_starts_used},
             {"gradient_norm", r.gradient_norm},
             {"n_records", loaded.sample.records.size()},
             {"nu", v.nu}};
    write_text(out_path, out.dump(2) + "\n");
    return r.converged ? 0 : 3;
  }

  if (fisher_cmd->parsed()) {
    const auto sph = homloc::SphericalParams::make(s, theta, phi);
    const homloc::Visibility v(nu);
    const auto f = homloc::fisher_resolved(sph, v, gamma);
    const auto q = homloc::qfi(sph);
    const auto bound = homloc::crb(f, n);
    json out{{"fisher", matrix_json(f)},
             {"qfi", matrix_json(q)},
             {"crb", {{"s", bound.crb_s}, {"theta", bound.crb_theta}, {"phi", bound.crb_phi},
                      {"n", bound.n}}},
             {"fisher_nonresolving", homloc::fisher_nonresolving(s, v, gamma)}};
    std::cout << out.dump(2) << '\n';
    return 0;
  }

  if (feas_cmd->parsed()) {
    const auto sph = homloc::SphericalParams::make(s, theta, phi);
    const auto rep = homloc::feasibility_check(det, widths, sph, margin);
    json out{{"pass", rep.pass},
             {"resolution_ratio", rep.resolution_ratio},
             {"beat_ratio", rep.beat_ratio},
             {"beat_checked", rep.beat_checked},
             {"margin", margin}};
    std::cout << out.dump(2) << '\n';
    return 0;
  }

  if (repro->parsed()) {
    bench.repetitions = repetitions;
    if (!n_values.empty()) bench.n_values = n_values;
    bench.progress = &std::cerr;
    const auto rows = homloc::reproduce_benchmark(bench);
    // The emitted config records the campaign shape; the per-truth configs
    // differ only in the truth/nu cells present in every row.
    homloc::ExperimentConfig cfg{rows.front().truth, homloc::Visibility(rows.front().nu),
                                 bench.gamma, bench.n_values, bench.repetitions,
                                 bench.master_seed, bench.solver, bench.threads};
    const std::string prefix = out_path.empty() ? "results" : out_path;
    homloc::emit_results(rows, cfg, prefix + ".csv", prefix + ".json");
    std::cout << "wrote " << prefix << ".csv and " << prefix << ".json ("
              << rows.size() << " rows)\n";
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  try {
    return run(argc, argv);
  } catch (const std::invalid_argument &e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return 2;
  } catch (const homloc::numeric_error &e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
