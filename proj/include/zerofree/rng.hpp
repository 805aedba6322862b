#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace zerofree {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// Stream layout used by the ensemble generators: the 64-bit seed is the key;
/// the counter is (stream_lo, stream_hi, draw, 0) where `stream` is the
/// coupling index (lexicographic rank of the coupling's index tuple) and
/// `draw` counts 4-word blocks within that stream. Every coupling therefore
/// owns an independent substream and instances are reproducible bit for bit
/// regardless of generation order.
class Philox4x32 {
 public:
  using block = std::array<std::uint32_t, 4>;

  explicit Philox4x32(std::uint64_t seed)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

  block operator()(std::uint64_t stream, std::uint32_t draw) const {
    block ctr{static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32), draw, 0};
    std::array<std::uint32_t, 2> key = key_;
    for (int round = 0; round < 10; ++round) {
      ctr = single_round(ctr, key);
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }

  /// Uniform double in (0, 1) with 53 random bits, from words (w0, w1).
  static double to_unit(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = ((std::uint64_t{hi} << 32) | lo) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller on one counter block.
  double normal(std::uint64_t stream, std::uint32_t draw = 0) const {
    const block b = (*this)(stream, draw);
    const double u1 = to_unit(b[0], b[1]);
    const double u2 = to_unit(b[2], b[3]);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  double uniform(std::uint64_t stream, std::uint32_t draw = 0) const {
    const block b = (*this)(stream, draw);
    return to_unit(b[0], b[1]);
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

  static block single_round(const block& c, const std::array<std::uint32_t, 2>& k) {
    const std::uint64_t p0 = std::uint64_t{kMul0} * c[0];
    const std::uint64_t p1 = std::uint64_t{kMul1} * c[2];
    return {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
            static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
  }

  std::array<std::uint32_t, 2> key_;
};

}  // namespace zerofree
