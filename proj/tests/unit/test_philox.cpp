#include <catch_amalgamated.hpp>

#include <cmath>

#include "qhj/philox.hpp"

using qhj::Philox4x32;

// Known-answer vectors distributed with Random123 (kat_vectors, philox4x32 10 rounds).
TEST_CASE("philox4x32-10 known answers", "[philox]") {
  using C = Philox4x32::Counter;
  using K = Philox4x32::Key;
  CHECK(Philox4x32::block(C{0, 0, 0, 0}, K{0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::block(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, K{0xffffffff, 0xffffffff}) ==
        C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::block(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("block is usable at compile time", "[philox]") {
  constexpr auto r = Philox4x32::block({0, 0, 0, 0}, {0, 0});
  STATIC_REQUIRE(r[0] == 0x6627e8d5u);
}

TEST_CASE("uniforms lie in the unit interval and look uniform", "[philox]") {
  const std::size_t n = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (double u : Philox4x32::uniforms(42, 0, i)) {
      REQUIRE(u >= 0.0);
      REQUIRE(u < 1.0);
      sum += u;
      sum2 += u * u;
    }
  }
  const double mean = sum / (2.0 * n);
  const double var = sum2 / (2.0 * n) - mean * mean;
  CHECK(std::abs(mean - 0.5) < 5.0 * std::sqrt(1.0 / 12.0 / (2.0 * n)));
  CHECK(std::abs(var - 1.0 / 12.0) < 1e-3);
}

TEST_CASE("draws depend only on seed, stream and index", "[philox]") {
  CHECK(Philox4x32::uniforms(7, 3, 99) == Philox4x32::uniforms(7, 3, 99));
  CHECK(Philox4x32::uniforms(7, 3, 99) != Philox4x32::uniforms(8, 3, 99));
  CHECK(Philox4x32::uniforms(7, 3, 99) != Philox4x32::uniforms(7, 4, 99));
  CHECK(Philox4x32::uniforms(7, 3, 99) != Philox4x32::uniforms(7, 3, 100));
}
