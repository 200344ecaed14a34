#pragma once

#include "eda/bitstring.hpp"
#include "eda/frequency_vector.hpp"
#include "eda/rng.hpp"

namespace eda {

/// Draws x with independent x_j ~ Bernoulli(p_j).
///
/// Bit j is one iff k_j < ceil(p_j * 2^53) for a uniform 53-bit integer k_j,
/// which is the event `uniform01() < p_j`. The k_j of a 64-bit block are
/// revealed together, one most-significant bit per 64-bit draw, until every
/// lane's comparison is decided; a block typically costs 7 to 9 draws
/// rather than 64. The number of draws consumed is a deterministic function
/// of the stream, so fixed (seed, stream_id) reproduce the same strings.
BitString sample_bitstring(const FrequencyVector& p, RngStream& rng);

/// Same as above, writing into an existing string of matching length.
void sample_into(const FrequencyVector& p, RngStream& rng, BitString& out);

}  // namespace eda
