#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace maxrep {

// Philox4x32-10 counter-based generator. Streams are keyed by
// (master_seed, path_index, substream), so any path's variates can be
// regenerated in isolation and parallel runs draw exactly what serial
// runs draw.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t path_index,
            std::uint64_t substream = 0)
      : key_{static_cast<std::uint32_t>(master_seed),
             static_cast<std::uint32_t>(master_seed >> 32)},
        ctr_{0, 0, 0, 0} {
    ctr_[1] = static_cast<std::uint32_t>(path_index);
    ctr_[2] = static_cast<std::uint32_t>(path_index >> 32);
    ctr_[3] = static_cast<std::uint32_t>(substream);
  }

  std::uint32_t next_u32() {
    if (buf_pos_ == 4) {
      block_ = philox(ctr_, key_);
      ++ctr_[0];
      buf_pos_ = 0;
    }
    return block_[buf_pos_++];
  }

  // 53-bit uniform in [0, 1)
  double uniform() {
    std::uint64_t hi = next_u32() >> 5;  // 27 bits
    std::uint64_t lo = next_u32() >> 6;  // 26 bits
    return static_cast<double>((hi << 26) | lo) * 0x1.0p-53;
  }

  double exponential(double rate = 1.0) {
    return -std::log1p(-uniform()) / rate;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // uniform integer in [0, n)
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t x =
        (static_cast<std::uint64_t>(next_u32()) << 32) | next_u32();
    return x % n;
  }

 private:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static std::uint32_t mulhi(std::uint32_t a, std::uint32_t b) {
    return static_cast<std::uint32_t>(
        (static_cast<std::uint64_t>(a) * b) >> 32);
  }
  static std::uint32_t mullo(std::uint32_t a, std::uint32_t b) {
    return a * b;
  }

  static Block philox(Block ctr, Key key) {
    constexpr std::uint32_t kM0 = 0xD2511F53u;
    constexpr std::uint32_t kM1 = 0xCD9E8D57u;
    constexpr std::uint32_t kW0 = 0x9E3779B9u;
    constexpr std::uint32_t kW1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
      std::uint32_t hi0 = mulhi(kM0, ctr[0]);
      std::uint32_t lo0 = mullo(kM0, ctr[0]);
      std::uint32_t hi1 = mulhi(kM1, ctr[2]);
      std::uint32_t lo1 = mullo(kM1, ctr[2]);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
      key[0] += kW0;
      key[1] += kW1;
    }
    return ctr;
  }

  Key key_;
  Block ctr_;
  Block block_{};
  int buf_pos_ = 4;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace maxrep
