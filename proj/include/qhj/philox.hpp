#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace qhj {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Draw i of
/// stream s under seed k is a pure function of (k, s, i), so samples can be
/// generated in any order or in parallel with identical results.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr std::string_view algorithm = "philox4x32-10";

  static constexpr Counter block(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += 0x9E3779B9u;
        key[1] += 0xBB67AE85u;
      }
      const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

  /// Two uniforms in [0, 1) with 53 random bits each.
  static std::array<double, 2> uniforms(std::uint64_t seed, std::uint64_t stream,
                                        std::uint64_t index) {
    const Counter ctr{static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    const Key key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    const Counter r = block(ctr, key);
    const std::uint64_t a = (std::uint64_t{r[0]} << 32) | r[1];
    const std::uint64_t b = (std::uint64_t{r[2]} << 32) | r[3];
    return {static_cast<double>(a >> 11) * 0x1.0p-53, static_cast<double>(b >> 11) * 0x1.0p-53};
  }
};

}  // namespace qhj
