#pragma once

// Counter-based random numbers: every draw is a pure function of
// (seed, stream, counter), so results do not depend on evaluation order.

#include <array>
#include <cstdint>

namespace radiso::random {

using Block = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

// Philox4x32 with 10 rounds.
Block philox4x32(Block counter, Key key);

// Uniform doubles in (0, 1) with 53 random bits, drawn from one stream.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t stream, std::uint32_t substream = 0);

  double uniform();
  // Uniform in (0, 1) on a grid of 2^32 cells; one quarter of a block.
  double uniform32();
  // Standard normal via Box-Muller; the second value of each pair is cached.
  double normal();
  // Sum of `count` squared standard normals, drawn as Box-Muller radii
  // (z1^2 + z2^2 = -2 ln U) so that only one uniform is spent per pair.
  double sum_of_squares(std::uint64_t count);

 private:
  void refill();

  Key key_;
  std::uint32_t substream_;
  std::uint64_t stream_;
  std::uint32_t block_index_ = 0;
  Block buffer_{};
  int used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace radiso::random
