#include <homloc/rng.hpp>

#include <cmath>
#include <numbers>

namespace homloc {

namespace {

constexpr std::uint64_t kMult0 = 0xD2E7470EE14C6C93ull;
constexpr std::uint64_t kMult1 = 0xCA5A826395121157ull;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73Bull;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t &hi, std::uint64_t &lo) {
  const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}

inline void round_once(Philox::Block &x, std::uint64_t k0, std::uint64_t k1) {
  std::uint64_t hi0, lo0, hi1, lo1;
  mulhilo(kMult0, x[0], hi0, lo0);
  mulhilo(kMult1, x[2], hi1, lo1);
  x = {hi1 ^ x[1] ^ k0, lo1, hi0 ^ x[3] ^ k1, lo0};
}

}  // namespace

Philox::Block Philox::block(const Block &counter, std::uint64_t key_hi, std::uint64_t key_lo) {
  Block x = counter;
  std::uint64_t k0 = key_hi, k1 = key_lo;
  round_once(x, k0, k1);
  for (int r = 1; r < 10; ++r) {
    k0 += kWeyl0;
    k1 += kWeyl1;
    round_once(x, k0, k1);
  }
  return x;
}

Philox::Philox(std::uint64_t key_hi, std::uint64_t key_lo) : key_hi_(key_hi), key_lo_(key_lo) {}

std::uint64_t Philox::next_u64() {
  if (buffer_pos_ == 4) {
    buffer_ = block(counter_, key_hi_, key_lo_);
    buffer_pos_ = 0;
    for (int i = 0; i < 4; ++i) {
      if (++counter_[i] != 0) break;  // 256-bit increment with carry
    }
  }
  return buffer_[buffer_pos_++];
}

double Philox::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Philox::normal() {
  if (have_cached_normal_) {
    have_cached_normal_ = false;
    return cached_normal_;
  }
  // u1 on (0, 1] keeps the log finite.
  const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  cached_normal_ = r * std::sin(a);
  have_cached_normal_ = true;
  return r * std::cos(a);
}

std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t label_a,
                                 std::uint64_t label_b) {
  return Philox::block({label_a, label_b, 0, 0}, master_seed, 0x73747265616d7364ull)[0];
}

}  // namespace homloc
