#include <cmath>
#include <cstdint>

#include "doctest.h"
#include "radiso/random.hpp"

using namespace radiso::random;

TEST_SUITE("random") {
  TEST_CASE("Philox4x32-10 known-answer vectors") {
    CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == Block{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          Block{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          Block{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
  }

  TEST_CASE("streams are reproducible and distinct") {
    Stream a(42, 7), b(42, 7), c(42, 8), d(43, 7), e(42, 7, 1);
    for (int i = 0; i < 100; ++i) {
      const double x = a.uniform();
      CHECK(x == b.uniform());
      CHECK(x != c.uniform());
      CHECK(x != d.uniform());
      CHECK(x != e.uniform());
    }
  }

  TEST_CASE("uniforms lie in (0, 1) with the right moments") {
    Stream s(1, 0);
    const int m = 200000;
    double sum = 0.0, sum2 = 0.0, sum32 = 0.0;
    for (int i = 0; i < m; ++i) {
      const double u = s.uniform();
      const double v = s.uniform32();
      REQUIRE(u > 0.0);
      REQUIRE(u < 1.0);
      REQUIRE(v > 0.0);
      REQUIRE(v < 1.0);
      sum += u;
      sum2 += u * u;
      sum32 += v;
    }
    // Five standard errors.
    CHECK(std::abs(sum / m - 0.5) < 5.0 * std::sqrt(1.0 / 12.0 / m));
    CHECK(std::abs(sum2 / m - 1.0 / 3.0) < 5.0 * std::sqrt(4.0 / 45.0 / m));
    CHECK(std::abs(sum32 / m - 0.5) < 5.0 * std::sqrt(1.0 / 12.0 / m));
  }

  TEST_CASE("normals and sums of squares") {
    Stream s(9, 3);
    const int m = 200000;
    double sum = 0.0, sum2 = 0.0, sum4 = 0.0;
    for (int i = 0; i < m; ++i) {
      const double z = s.normal();
      sum += z;
      sum2 += z * z;
      sum4 += z * z * z * z;
    }
    CHECK(std::abs(sum / m) < 5.0 / std::sqrt(m));
    CHECK(std::abs(sum2 / m - 1.0) < 5.0 * std::sqrt(2.0 / m));
    CHECK(std::abs(sum4 / m - 3.0) < 5.0 * std::sqrt(96.0 / m));

    for (std::uint64_t k : {1u, 2u, 3u, 17u, 1000u}) {
      Stream t(5, k);
      const int reps = 20000;
      double mean = 0.0, var = 0.0;
      for (int i = 0; i < reps; ++i) {
        const double x = t.sum_of_squares(k);
        REQUIRE(x >= 0.0);
        mean += x;
        var += (x - k) * (x - k);
      }
      mean /= reps;
      var /= reps;
      CAPTURE(k);
      CHECK(std::abs(mean - k) < 5.0 * std::sqrt(2.0 * k / reps));
      CHECK(std::abs(var / (2.0 * k) - 1.0) < 0.1);
    }
  }
}
