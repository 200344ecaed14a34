#include "eda/rng.hpp"

#include <cmath>

namespace eda {

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  std::uint64_t mix = seed;
  const std::uint64_t a = splitmix64(mix);
  mix = stream_id ^ 0x6a09e667f3bcc909ULL;
  const std::uint64_t b = splitmix64(mix);
  std::uint64_t sm = a ^ (b * 0xd1b54a32d192ed03ULL);
  for (auto& s : state_) s = splitmix64(sm);
  // xoshiro must not start from the all-zero state
  if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
}

namespace {
__extension__ using u128 = unsigned __int128;
}

std::uint64_t RngStream::below(std::uint64_t bound) {
  // Lemire's multiply-shift with rejection; exact uniformity.
  u128 m = static_cast<u128>(next()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<u128>(next()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double RngStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  double u = 0.0;
  double v = 0.0;
  double s = 0.0;
  do {
    u = 2.0 * uniform01() - 1.0;
    v = 2.0 * uniform01() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_normal_ = v * factor;
  has_spare_ = true;
  return u * factor;
}

RngStream RngStream::split(std::uint64_t child_id) const {
  std::uint64_t mix = stream_id_ ^ (child_id * 0x9e3779b97f4a7c15ULL);
  const std::uint64_t derived = splitmix64(mix) ^ (child_id + 1);
  return RngStream(seed_ ^ 0xa0761d6478bd642fULL, derived);
}

}  // namespace eda
