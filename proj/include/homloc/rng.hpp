#pragma once
#include <array>
#include <cstdint>
#include <string_view>

namespace homloc {

/// Algorithm identifier recorded in sample headers and result metadata.
inline constexpr std::string_view kRngAlgorithm = "philox4x64-10";

/// @brief Counter-based pseudorandom generator (Philox 4x64, 10 rounds).
///
/// The raw block function maps a 256-bit counter and a 128-bit key to four
/// 64-bit words; the engine consumes blocks at counter 0, 1, 2, ... in word
/// order. All derived draws (uniforms, normals) are built from explicitly
/// specified arithmetic, so a stream is bit-reproducible from (key_hi, key_lo)
/// across platforms and implementations of the same algorithm.
class Philox {
 public:
  using Block = std::array<std::uint64_t, 4>;

  Philox(std::uint64_t key_hi, std::uint64_t key_lo);

  /// Raw 10-round block function (stateless).
  static Block block(const Block &counter, std::uint64_t key_hi, std::uint64_t key_lo);

  std::uint64_t next_u64();

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform01();

  /// Standard normal via the Box-Muller transform; pairs are generated from
  /// two uniforms and the second value is cached.
  double normal();

 private:
  Block counter_{};
  Block buffer_{};
  std::uint64_t key_hi_;
  std::uint64_t key_lo_;
  int buffer_pos_ = 4;  // empty
  double cached_normal_ = 0.0;
  bool have_cached_normal_ = false;
};

/// Deterministic substream seed for trial-level parallelism: one Philox block
/// keyed by the master seed, with the stream labels in the counter.
std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t label_a,
                                 std::uint64_t label_b = 0);

}  // namespace homloc
