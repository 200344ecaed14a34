#include "eda/frequency_vector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "eda/error.hpp"

namespace eda {

namespace {

constexpr std::uint64_t kOne = std::uint64_t{1} << FrequencyVector::kPrecisionBits;
constexpr int kLowestPlaneBit = FrequencyVector::kPrecisionBits - FrequencyVector::kPlaneLevels;

std::uint64_t to_threshold(double p) {
  return static_cast<std::uint64_t>(std::ceil(p * 0x1.0p53));
}

}  // namespace

MarginPolicy parse_margin_policy(std::string_view name) {
  if (name == "none" || name == "no-margins" || name == "NoMargins") return MarginPolicy::NoMargins;
  if (name == "standard" || name == "margins" || name == "StandardMargins") {
    return MarginPolicy::StandardMargins;
  }
  throw ConfigError("unknown margin policy '" + std::string(name) + "'");
}

std::string_view to_string(MarginPolicy policy) {
  return policy == MarginPolicy::NoMargins ? "none" : "standard";
}

MarginBounds margin_bounds(MarginPolicy policy, std::size_t n) {
  if (policy == MarginPolicy::NoMargins) return {0.0, 1.0};
  const double inv = 1.0 / static_cast<double>(n);
  return {inv, 1.0 - inv};
}

FrequencyVector::FrequencyVector(std::size_t n, MarginPolicy policy)
    : values_(n, 0.0),
      thresholds_(n, 0),
      blocks_((n + 63) / 64),
      policy_(policy),
      bounds_(margin_bounds(policy, n)) {
  if (n == 0) throw ConfigError("frequency vector needs a positive dimension");
  for (std::size_t j = 0; j < n; ++j) store(j, 0.5);
}

void FrequencyVector::store(std::size_t j, double value) {
  values_[j] = value;
  const std::uint64_t q = to_threshold(value);
  const std::uint64_t old = thresholds_[j];
  if (q == old) return;
  thresholds_[j] = q;
  Block& block = blocks_[j / 64];
  const Word lane = Word{1} << (j % 64);
  if (q == kOne) {
    block.certain_ones |= lane;
  } else {
    block.certain_ones &= ~lane;
  }
  // p == 1 lanes never reach the planes; keep their plane bits zero
  const std::uint64_t old_bits = old == kOne ? 0 : old;
  const std::uint64_t new_bits = q == kOne ? 0 : q;
  std::uint64_t delta = (old_bits ^ new_bits) >> kLowestPlaneBit;
  while (delta != 0) {
    const int bit = std::countr_zero(delta);
    delta &= delta - 1;
    block.planes[kPlaneLevels - 1 - bit] ^= lane;
  }
}

void FrequencyVector::set(std::size_t j, double raw) {
  store(j, std::min(std::max(bounds_.lower, raw), bounds_.upper));
}

void FrequencyVector::assign(std::span<const double> raw) {
  if (raw.size() != values_.size()) {
    throw ConfigError("frequency update has " + std::to_string(raw.size()) +
                      " entries, model has " + std::to_string(values_.size()));
  }
  for (std::size_t j = 0; j < raw.size(); ++j) set(j, raw[j]);
}

FrequencyVector clamp_to_margins(std::span<const double> raw, MarginPolicy policy, std::size_t n) {
  if (raw.size() != n) {
    throw ConfigError("clamp: got " + std::to_string(raw.size()) + " values for dimension " +
                      std::to_string(n));
  }
  FrequencyVector p(n, policy);
  p.assign(raw);
  return p;
}

}  // namespace eda
