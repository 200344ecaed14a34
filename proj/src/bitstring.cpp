#include "eda/bitstring.hpp"

#include "eda/error.hpp"

namespace eda {

BitString::BitString(std::initializer_list<int> bits) : BitString(bits.size()) {
  std::size_t j = 0;
  for (int b : bits) set(j++, b != 0);
}

BitString BitString::ones(std::size_t n) {
  BitString x(n);
  for (std::size_t w = 0; w < x.words_.size(); ++w) x.words_[w] = x.valid_mask(w);
  return x;
}

BitString BitString::from_string(const std::string& s) {
  BitString x(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (s[j] != '0' && s[j] != '1') {
      throw ConfigError("bit string may only contain '0' and '1'");
    }
    x.set(j, s[j] == '1');
  }
  return x;
}

std::size_t BitString::leading_ones() const {
  std::size_t total = 0;
  for (Word w : words_) {
    const auto run = static_cast<std::size_t>(std::countr_one(w));
    total += run;
    if (run < kWordBits) break;
  }
  return total < n_ ? total : n_;
}

BitString BitString::complement() const {
  BitString x(n_);
  for (std::size_t w = 0; w < words_.size(); ++w) x.words_[w] = ~words_[w] & valid_mask(w);
  return x;
}

std::string BitString::to_string() const {
  std::string s(n_, '0');
  for (std::size_t j = 0; j < n_; ++j) {
    if (get(j)) s[j] = '1';
  }
  return s;
}

}  // namespace eda
