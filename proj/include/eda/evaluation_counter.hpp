#pragma once

#include <cstdint>
#include <limits>
#include <optional>

namespace eda {

/// Counts fitness evaluations against an optional cap.
class EvaluationCounter {
 public:
  EvaluationCounter() = default;
  explicit EvaluationCounter(std::optional<std::uint64_t> cap) : cap_(cap) {}

  std::uint64_t count() const { return count_; }
  std::optional<std::uint64_t> cap() const { return cap_; }

  std::uint64_t remaining() const {
    if (!cap_) return std::numeric_limits<std::uint64_t>::max();
    return count_ >= *cap_ ? 0 : *cap_ - count_;
  }
  bool allows(std::uint64_t evaluations) const { return remaining() >= evaluations; }
  bool exhausted() const { return remaining() == 0; }

  /// Charges one evaluation. Returns false (and charges nothing) at the cap.
  bool charge() {
    if (exhausted()) return false;
    ++count_;
    return true;
  }

 private:
  std::uint64_t count_ = 0;
  std::optional<std::uint64_t> cap_;
};

}  // namespace eda
