#pragma once

#include <array>
#include <cstdint>

namespace langest {

/// Philox4x32-10 counter-based generator.
///
/// The 64-bit seed is the key; the 128-bit counter is (block index, stream
/// id). Two generators with the same seed and different stream ids produce
/// independent sequences, and any position can be reached without
/// generating the preceding values.
class Philox {
 public:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  Philox(std::uint64_t seed, std::uint64_t stream) noexcept;

  /// Ten rounds of Philox4x32 on one counter block.
  static Block bijection(Block counter, Key key) noexcept;

  std::uint64_t next_u64() noexcept;
  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double next_uniform() noexcept;
  /// Standard normal by inversion of the normal CDF.
  double next_normal();

 private:
  Key key_;
  std::uint64_t block_ = 0;
  std::uint64_t stream_;
  Block buffer_{};
  int used_ = 4;  // 32-bit words consumed from buffer_
};

}  // namespace langest
