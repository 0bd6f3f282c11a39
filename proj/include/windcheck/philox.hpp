#pragma once

#include <array>
#include <cstdint>

namespace windcheck {

/// Philox4x32-10 counter-based generator. A stream is
/// identified by a 64-bit key and a 64-bit stream id; outputs depend only on
/// (key, stream, position), so any trace can be replayed in isolation.
class Philox4x32 {
 public:
  static constexpr const char* kAlgorithm = "philox4x32-10";
  using Block = std::array<std::uint32_t, 4>;

  Philox4x32(std::uint64_t key, std::uint64_t stream)
      : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)},
        stream_(stream) {}

  /// Raw block at an absolute block position.
  static Block block(std::array<std::uint32_t, 2> key, std::uint64_t stream, std::uint64_t pos) {
    Block ctr{static_cast<std::uint32_t>(pos), static_cast<std::uint32_t>(pos >> 32),
              static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t{kM0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kM1} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
      key[0] += kW0;
      key[1] += kW1;
    }
    return ctr;
  }

  std::uint32_t next_u32() {
    if (used_ == 4) {
      buf_ = block(key_, stream_, pos_++);
      used_ = 0;
    }
    return buf_[used_++];
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    const std::uint64_t hi = next_u32() >> 5;  // 27 bits
    const std::uint64_t lo = next_u32() >> 6;  // 26 bits
    return static_cast<double>((hi << 26) | lo) * 0x1p-53;
  }

 private:
  static constexpr std::uint32_t kM0 = 0xD2511F53u;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kW0 = 0x9E3779B9u;
  static constexpr std::uint32_t kW1 = 0xBB67AE85u;

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t pos_ = 0;
  Block buf_{};
  int used_ = 4;
};

}  // namespace windcheck
