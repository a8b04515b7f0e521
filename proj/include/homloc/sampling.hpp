#pragma once
#include <homloc/prob.hpp>
#include <homloc/rng.hpp>

#include <cstdint>
#include <iosfwd>
#include <variant>
#include <vector>

namespace homloc {

/// @brief Full definition of one synthetic measurement run. n_detected counts
/// detected two-photon events (the sample size entering the bounds), not
/// emitted pairs.
struct SampleConfig {
  SphericalParams truth;
  Visibility nu;
  double gamma = 1.0;
  std::uint64_t n_detected = 0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct LostZero {};
struct LostOne {};

/// One emitted photon pair: both lost, one lost, or both detected with a
/// resolved record.
using DetectionEvent = std::variant<LostZero, LostOne, DetectionRecord>;

/// @brief A generated sample plus loss accounting.
struct Sample {
  std::vector<DetectionRecord> records;
  std::uint64_t emitted_pairs = 0;
};

/// Momentum difference drawn from the envelope exp(-|kappa|^2)/pi^{3/2}:
/// each component is normal with mean 0 and variance 1/2.
MomentumDifference draw_momentum_difference(Philox &rng);

/// Outcome drawn by inverse CDF on one uniform: B with probability
/// zeta_{B;nu}(s kappa . lambda).
Outcome draw_outcome(Philox &rng, const MomentumDifference &kappa,
                     const SphericalParams &sph, Visibility nu);

/// One emitted pair through the loss channel (single uniform), then a
/// resolved record when both photons survive.
DetectionEvent draw_detection_event(Philox &rng, const SampleConfig &cfg);

/// @brief Draws detection events until n_detected records are collected.
/// Deterministic given the seed. Throws std::invalid_argument when gamma = 0
/// and n_detected >= 1 (the sample is unreachable).
Sample generate_sample(const SampleConfig &cfg);

/// @brief JSON Lines export: a header object carrying the full SampleConfig,
/// the RNG algorithm id and the emitted-pair count, then one object per
/// record with keys outcome ("A"|"B"), xi, kx, ky.
void write_sample_jsonl(std::ostream &out, const SampleConfig &cfg, const Sample &sample);

struct LoadedSample {
  SampleConfig config;
  Sample sample;
};

LoadedSample read_sample_jsonl(std::istream &in);

}  // namespace homloc
