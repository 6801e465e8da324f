#pragma once

#include <cstdint>
#include <string_view>

namespace ztc::netsim {

/// SplitMix64 generator. The whole simulation draws from streams of this
/// type, each forked by label from the run seed, so a stream's output depends
/// only on (seed, label) and never on what other streams consumed.
class RngStream {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  explicit RngStream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += kGamma);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, bound]; bound == UINT64_MAX returns a raw draw.
  std::uint64_t uniform_inclusive(std::uint64_t bound);

  /// New stream seeded with seed XOR low64(SHA-256(label)).
  static RngStream fork(std::uint64_t seed, std::string_view label);
  static std::uint64_t label_mix(std::string_view label);

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

}  // namespace ztc::netsim
