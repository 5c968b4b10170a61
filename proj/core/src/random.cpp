#include "radiso/random.hpp"

#include <cmath>
#include <numbers>

namespace radiso::random {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

Block philox4x32(Block c, Key k) {
  std::uint32_t c0 = c[0], c1 = c[1], c2 = c[2], c3 = c[3];
  std::uint32_t k0 = k[0], k1 = k[1];
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, c0, hi0, lo0);
    mulhilo(kM1, c2, hi1, lo1);
    const std::uint32_t n0 = hi1 ^ c1 ^ k0;
    const std::uint32_t n2 = hi0 ^ c3 ^ k1;
    c0 = n0;
    c1 = lo1;
    c2 = n2;
    c3 = lo0;
    k0 += kW0;
    k1 += kW1;
  }
  return {c0, c1, c2, c3};
}

Stream::Stream(std::uint64_t seed, std::uint64_t stream, std::uint32_t substream)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      substream_(substream),
      stream_(stream) {}

void Stream::refill() {
  buffer_ = philox4x32({block_index_++, substream_, static_cast<std::uint32_t>(stream_),
                        static_cast<std::uint32_t>(stream_ >> 32)},
                       key_);
  used_ = 0;
}

double Stream::uniform() {
  if (used_ > 2) refill();
  const std::uint64_t a = buffer_[used_] >> 5;
  const std::uint64_t b = buffer_[used_ + 1] >> 6;
  used_ += 2;
  // Midpoint of one of 2^53 cells, never 0 or 1.
  return (static_cast<double>((a << 26) | b) + 0.5) * 0x1p-53;
}

double Stream::uniform32() {
  if (used_ > 3) refill();
  return (static_cast<double>(buffer_[used_++]) + 0.5) * 0x1p-32;
}

double Stream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double radius = std::sqrt(-2.0 * std::log(uniform()));
  const double angle = 2.0 * std::numbers::pi * uniform();
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

double Stream::sum_of_squares(std::uint64_t count) {
  double total = 0.0;
  // 32-bit uniforms suffice here: they cap each -2 ln U at about 45.
  // Products of uniforms are accumulated with explicit exponents so that one
  // logarithm covers many pairs.
  double mantissa = 1.0;
  long exponent = 0;
  int pending = 0;
  for (std::uint64_t pair = 0; pair < count / 2; ++pair) {
    mantissa *= uniform32();
    if (++pending == 16) {
      int e;
      mantissa = std::frexp(mantissa, &e);
      exponent += e;
      pending = 0;
    }
  }
  total = -2.0 * (std::log(mantissa) + static_cast<double>(exponent) * std::numbers::ln2);
  if (count % 2) {
    const double z = normal();
    total += z * z;
  }
  return total;
}

}  // namespace radiso::random
