#include "eda/sampling.hpp"

#include <bit>

#include "eda/error.hpp"

namespace eda {

namespace {

using Word = BitString::Word;

// Continues the comparison below the cached planes for the few lanes still
// undecided, reading threshold bits directly.
Word resolve_tail(const FrequencyVector& p, std::size_t base, Word undecided, RngStream& rng) {
  Word result = 0;
  for (int bit = FrequencyVector::kPrecisionBits - FrequencyVector::kPlaneLevels - 1; bit >= 0 && undecided != 0;
       --bit) {
    Word plane = 0;
    for (Word lanes = undecided; lanes != 0; lanes &= lanes - 1) {
      const int lane = std::countr_zero(lanes);
      plane |= ((p.threshold(base + static_cast<std::size_t>(lane)) >> bit) & 1U) << lane;
    }
    const Word r = rng.next();
    result |= ~r & plane & undecided;
    undecided &= ~(r ^ plane);
  }
  // lanes equal on all 53 bits have k == q, which is not below q
  return result;
}

}  // namespace

void sample_into(const FrequencyVector& p, RngStream& rng, BitString& out) {
  if (out.size() != p.size()) throw ConfigError("sample buffer length differs from model dimension");
  const auto blocks = p.blocks();
  auto words = out.words();
  for (std::size_t w = 0; w < words.size(); ++w) {
    const auto& block = blocks[w];
    Word result = block.certain_ones;
    Word undecided = out.valid_mask(w) & ~block.certain_ones;
    for (int t = 0; t < FrequencyVector::kPlaneLevels && undecided != 0; ++t) {
      const Word r = rng.next();
      const Word plane = block.planes[static_cast<std::size_t>(t)];
      // lane bit r < q bit decides one, r > q decides zero, equal continues
      result |= ~r & plane & undecided;
      undecided &= ~(r ^ plane);
    }
    if (undecided != 0) result |= resolve_tail(p, w * BitString::kWordBits, undecided, rng);
    words[w] = result;
  }
}

BitString sample_bitstring(const FrequencyVector& p, RngStream& rng) {
  BitString x(p.size());
  sample_into(p, rng, x);
  return x;
}

}  // namespace eda
