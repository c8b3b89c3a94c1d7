#pragma once

// Counter-based random streams.
//
// Every random variable in the library is a pure function of
// (seed, stream, index): the seed keys a Philox4x32-10 block cipher and
// (stream, index) form its 128-bit counter. A stream is typically a mode
// index and the index a realization number, so any single mode of any
// realization can be drawn without generating the others, and results do
// not depend on how work is split across threads.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace zpf {

class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Counter block(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
};

/// Reserved stream tags, kept clear of mode indices.
namespace streams {
inline constexpr std::uint64_t kDirections = 0x8000'0000'0000'0001ull;
}  // namespace streams

/// Two independent uniforms in [0, 1) with 53 random bits each.
constexpr std::pair<double, double> uniform_pair(std::uint64_t seed, std::uint64_t stream,
                                                 std::uint64_t index) {
  const Philox4x32::Counter ctr{static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                                static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  const Philox4x32::Key key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  const auto out = Philox4x32::block(ctr, key);
  constexpr double kScale = 0x1.0p-53;
  const auto bits53 = [](std::uint32_t hi, std::uint32_t lo) {
    return ((std::uint64_t{hi} << 32) | lo) >> 11;
  };
  return {static_cast<double>(bits53(out[0], out[1])) * kScale,
          static_cast<double>(bits53(out[2], out[3])) * kScale};
}

/// Uniform phase in [0, 2pi).
inline double uniform_phase(double u) {
  const double theta = 2.0 * std::numbers::pi * u;
  return theta < 2.0 * std::numbers::pi ? theta : 0.0;
}

/// Box-Muller: two independent standard normals from two uniforms in [0, 1).
inline std::pair<double, double> box_muller(double u1, double u2) {
  const double radius = std::sqrt(-2.0 * std::log1p(-u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

/// Sequential view over one stream, for callers that just need "the next" value.
class StreamRng {
 public:
  StreamRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

  std::pair<double, double> uniform_pair() { return zpf::uniform_pair(seed_, stream_, next_++); }

  std::pair<double, double> normal_pair() {
    const auto [u1, u2] = uniform_pair();
    return box_muller(u1, u2);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t next_ = 0;
};

}  // namespace zpf
