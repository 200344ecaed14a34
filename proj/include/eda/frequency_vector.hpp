#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace eda {

enum class MarginPolicy {
  NoMargins,        // frequencies live in [0, 1]
  StandardMargins,  // frequencies live in [1/n, 1 - 1/n]
};

MarginPolicy parse_margin_policy(std::string_view name);
std::string_view to_string(MarginPolicy policy);

/// Lower and upper clamp bounds for a policy at dimension n.
struct MarginBounds {
  double lower;
  double upper;
};
MarginBounds margin_bounds(MarginPolicy policy, std::size_t n);

/// Univariate probabilistic model: one Bernoulli parameter per bit.
/// Every mutation goes through the clamp, so the margin invariant always holds.
///
/// Alongside the doubles the vector keeps each entry as the integer
/// threshold q_j = ceil(p_j * 2^53) (a 53-bit uniform k is a one iff k < q_j)
/// and the top bits of those thresholds transposed into 64-lane bit planes,
/// which is what the sampler consumes.
class FrequencyVector {
 public:
  static constexpr int kPrecisionBits = 53;
  static constexpr int kPlaneLevels = 16;
  using Word = std::uint64_t;

  /// Bit-sliced view of one 64-entry block.
  struct Block {
    std::array<Word, kPlaneLevels> planes{};  // planes[t] holds threshold bit 52 - t of every lane
    Word certain_ones = 0;                    // lanes with p == 1
  };

  /// The uniform model (1/2, ..., 1/2).
  FrequencyVector(std::size_t n, MarginPolicy policy);

  std::size_t size() const { return values_.size(); }
  MarginPolicy policy() const { return policy_; }
  MarginBounds bounds() const { return bounds_; }

  double operator[](std::size_t j) const { return values_[j]; }
  std::span<const double> values() const { return values_; }

  /// Stores clamp(raw) at index j.
  void set(std::size_t j, double raw);
  /// Replaces every entry with the clamped raw values; sizes must match.
  void assign(std::span<const double> raw);

  std::span<const Block> blocks() const { return blocks_; }
  std::uint64_t threshold(std::size_t j) const { return thresholds_[j]; }

  friend bool operator==(const FrequencyVector& a, const FrequencyVector& b) {
    return a.policy_ == b.policy_ && a.values_ == b.values_;
  }

 private:
  void store(std::size_t j, double value);

  std::vector<double> values_;
  std::vector<std::uint64_t> thresholds_;
  std::vector<Block> blocks_;
  MarginPolicy policy_;
  MarginBounds bounds_;
};

/// Entry-wise clamp of an unconstrained update into the policy's interval.
FrequencyVector clamp_to_margins(std::span<const double> raw, MarginPolicy policy, std::size_t n);

}  // namespace eda
