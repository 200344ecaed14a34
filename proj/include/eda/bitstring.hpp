#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace eda {

/// Fixed-length bit string packed into 64-bit words. Bit j lives in word
/// j / 64 at position j % 64 (least significant first); unused high bits of
/// the last word are always zero.
class BitString {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  BitString() = default;
  explicit BitString(std::size_t n) : n_(n), words_(word_count(n), 0) {}
  BitString(std::initializer_list<int> bits);

  static BitString ones(std::size_t n);
  static BitString zeros(std::size_t n) { return BitString(n); }
  /// Parses a string of '0'/'1' characters.
  static BitString from_string(const std::string& s);

  static constexpr std::size_t word_count(std::size_t n) {
    return (n + kWordBits - 1) / kWordBits;
  }

  std::size_t size() const { return n_; }
  bool empty() const { return n_ == 0; }

  bool get(std::size_t j) const {
    return (words_[j / kWordBits] >> (j % kWordBits)) & 1U;
  }
  void set(std::size_t j, bool v) {
    const Word mask = Word{1} << (j % kWordBits);
    if (v) {
      words_[j / kWordBits] |= mask;
    } else {
      words_[j / kWordBits] &= ~mask;
    }
  }
  bool operator[](std::size_t j) const { return get(j); }

  std::size_t count_ones() const {
    std::size_t c = 0;
    for (Word w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  /// Length of the all-ones prefix.
  std::size_t leading_ones() const;

  bool all_ones() const { return count_ones() == n_; }

  BitString complement() const;

  std::span<const Word> words() const { return words_; }
  std::span<Word> words() { return words_; }

  /// Mask of valid bits in word `w`.
  Word valid_mask(std::size_t w) const {
    const std::size_t rem = n_ - w * kWordBits;
    return rem >= kWordBits ? ~Word{0} : ((Word{1} << rem) - 1);
  }

  std::string to_string() const;

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Word> words_;
};

}  // namespace eda
