#include "ztc/netsim/rng.hpp"

#include "ztc/common/bytes.hpp"

namespace ztc::netsim {

std::uint64_t RngStream::uniform_inclusive(std::uint64_t bound) {
  if (bound == UINT64_MAX) {
    return next();
  }
  // Rejection sampling keeps jitter draws exactly uniform.
  const std::uint64_t span = bound + 1;
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % span);
  std::uint64_t x = next();
  while (x >= limit) {
    x = next();
  }
  return x % span;
}

std::uint64_t RngStream::label_mix(std::string_view label) {
  Digest d = sha256(label);
  std::uint64_t v = 0;
  for (std::size_t i = 24; i < 32; ++i) {
    v = (v << 8) | d[i];
  }
  return v;
}

RngStream RngStream::fork(std::uint64_t seed, std::string_view label) {
  return RngStream(seed ^ label_mix(label));
}

}  // namespace ztc::netsim
