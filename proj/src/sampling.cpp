#include <homloc/sampling.hpp>

#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace homloc {

void SampleConfig::validate() const {
  if (!std::isfinite(gamma) || gamma < 0.0 || gamma > 1.0)
    throw std::invalid_argument("gamma must lie in [0, 1]");
  if (n_detected < 1) throw std::invalid_argument("n_detected must be >= 1");
}

MomentumDifference draw_momentum_difference(Philox &rng) {
  constexpr double sigma = 0.7071067811865476;  // sqrt(1/2)
  return {sigma * rng.normal(), sigma * rng.normal(), sigma * rng.normal()};
}

Outcome draw_outcome(Philox &rng, const MomentumDifference &kappa,
                     const SphericalParams &sph, Visibility nu) {
  const double phase = sph.s > 0.0 ? sph.s * dot(as_vec(kappa), direction(sph)) : 0.0;
  const double p_bunch = quantum_beat(Outcome::B, nu, phase);
  return rng.uniform01() < p_bunch ? Outcome::B : Outcome::A;
}

DetectionEvent draw_detection_event(Philox &rng, const SampleConfig &cfg) {
  const LossSplit loss = loss_split(cfg.gamma);
  const double u = rng.uniform01();
  if (u < loss.p0) return LostZero{};
  if (u < loss.p0 + loss.p1) return LostOne{};
  const MomentumDifference kappa = draw_momentum_difference(rng);
  return DetectionRecord{draw_outcome(rng, kappa, cfg.truth, cfg.nu), kappa};
}

Sample generate_sample(const SampleConfig &cfg) {
  cfg.validate();
  if (cfg.gamma == 0.0)
    throw std::invalid_argument("generate_sample: gamma = 0 cannot produce detections");

  Philox rng(cfg.seed, 0);
  Sample out;
  out.records.reserve(cfg.n_detected);
  while (out.records.size() < cfg.n_detected) {
    ++out.emitted_pairs;
    DetectionEvent ev = draw_detection_event(rng, cfg);
    if (auto *rec = std::get_if<DetectionRecord>(&ev)) out.records.push_back(*rec);
  }
  return out;
}

namespace {

nlohmann::json angle_or_null(double value, bool defined) {
  if (!defined) return nullptr;
  return value;
}

}  // namespace

void write_sample_jsonl(std::ostream &out, const SampleConfig &cfg, const Sample &sample) {
  nlohmann::json header{
      {"rng", std::string(kRngAlgorithm)},
      {"s", cfg.truth.s},
      {"theta", angle_or_null(cfg.truth.theta, cfg.truth.theta_defined)},
      {"phi", angle_or_null(cfg.truth.phi, cfg.truth.phi_defined)},
      {"nu", cfg.nu.nu},
      {"gamma", cfg.gamma},
      {"n_detected", cfg.n_detected},
      {"seed", cfg.seed},
      {"emitted_pairs", sample.emitted_pairs},
  };
  out << header.dump() << '\n';
  for (const DetectionRecord &rec : sample.records) {
    nlohmann::json line{
        {"outcome", rec.outcome == Outcome::B ? "B" : "A"},
        {"xi", rec.kappa.xi},
        {"kx", rec.kappa.kappa_x},
        {"ky", rec.kappa.kappa_y},
    };
    out << line.dump() << '\n';
  }
}

LoadedSample read_sample_jsonl(std::istream &in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("sample stream is empty");

  nlohmann::json header = nlohmann::json::parse(line);
  LoadedSample loaded{
      SampleConfig{
          SphericalParams::make(header.at("s").get<double>(),
                                header.at("theta").is_null() ? 0.0 : header.at("theta").get<double>(),
                                header.at("phi").is_null() ? 0.0 : header.at("phi").get<double>()),
          Visibility(header.at("nu").get<double>()),
          header.at("gamma").get<double>(),
          header.at("n_detected").get<std::uint64_t>(),
          header.at("seed").get<std::uint64_t>(),
      },
      Sample{},
  };
  if (header.contains("emitted_pairs"))
    loaded.sample.emitted_pairs = header.at("emitted_pairs").get<std::uint64_t>();
  if (header.contains("rng") && header.at("rng").get<std::string>() != kRngAlgorithm)
    throw std::invalid_argument("sample was generated with an unknown RNG algorithm: " +
                                header.at("rng").get<std::string>());

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json rec = nlohmann::json::parse(line);
    const std::string label = rec.at("outcome").get<std::string>();
    if (label != "A" && label != "B")
      throw std::invalid_argument("record outcome must be \"A\" or \"B\"");
    const MomentumDifference kappa{rec.at("xi").get<double>(), rec.at("kx").get<double>(),
                                   rec.at("ky").get<double>()};
    if (!std::isfinite(kappa.xi) || !std::isfinite(kappa.kappa_x) || !std::isfinite(kappa.kappa_y))
      throw std::invalid_argument("record momentum components must be finite");
    loaded.sample.records.push_back(
        DetectionRecord{label == "B" ? Outcome::B : Outcome::A, kappa});
  }
  return loaded;
}

}  // namespace homloc
