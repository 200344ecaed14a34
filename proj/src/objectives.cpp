#include "eda/objectives.hpp"

#include <cmath>
#include <limits>

#include "eda/error.hpp"
#include "eda/sampling.hpp"

namespace eda {

std::int64_t onemax(const BitString& x) { return static_cast<std::int64_t>(x.count_ones()); }

std::int64_t leadingones(const BitString& x) {
  return static_cast<std::int64_t>(x.leading_ones());
}

std::int64_t jump(const BitString& x, std::size_t k) {
  const std::size_t n = x.size();
  if (k < 1 || k > n) {
    throw ConfigError("jump size k=" + std::to_string(k) + " must lie in [1.." + std::to_string(n) + "]");
  }
  const std::size_t s = x.count_ones();
  if (s <= n - k || s == n) return static_cast<std::int64_t>(k + s);
  return static_cast<std::int64_t>(n - s);
}

std::int64_t dlb(const BitString& x) {
  const std::size_t n = x.size();
  if (n % 2 != 0) throw ConfigError("DeceptiveLeadingBlocks requires an even length, got " + std::to_string(n));
  const std::size_t prefix = x.leading_ones();
  if (prefix == n) return static_cast<std::int64_t>(n);
  const std::size_t m = prefix / 2;
  // the block after the 2m-prefix is not 11; it is 00 or has exactly one 1
  const bool a = x.get(2 * m);
  const bool b = x.get(2 * m + 1);
  return static_cast<std::int64_t>(!a && !b ? 2 * m + 1 : 2 * m);
}

void Objective::sample(const FrequencyVector& p, RngStream& rng, BitString& out) const {
  sample_into(p, rng, out);
}

namespace {

std::size_t checked_dimension(std::size_t n) {
  if (n == 0) throw ConfigError("objective dimension must be positive");
  return n;
}

}  // namespace

OneMax::OneMax(std::size_t n) : n_(checked_dimension(n)) {}

double OneMax::evaluate_true(const BitString& x) const { return static_cast<double>(onemax(x)); }

LeadingOnes::LeadingOnes(std::size_t n) : n_(checked_dimension(n)) {}

double LeadingOnes::evaluate_true(const BitString& x) const {
  return static_cast<double>(leadingones(x));
}

Jump::Jump(std::size_t n, std::size_t k) : n_(checked_dimension(n)), k_(k) {
  if (k < 1 || k > n) {
    throw ConfigError("jump size k=" + std::to_string(k) + " must lie in [1.." + std::to_string(n) + "]");
  }
}

double Jump::evaluate_true(const BitString& x) const { return static_cast<double>(jump(x, k_)); }

DeceptiveLeadingBlocks::DeceptiveLeadingBlocks(std::size_t n) : n_(checked_dimension(n)) {
  if (n % 2 != 0) throw ConfigError("DeceptiveLeadingBlocks requires an even length, got " + std::to_string(n));
}

double DeceptiveLeadingBlocks::evaluate_true(const BitString& x) const {
  return static_cast<double>(dlb(x));
}

ConstantObjective::ConstantObjective(std::size_t n, double value)
    : n_(checked_dimension(n)), value_(value) {}

double ConstantObjective::optimum_value() const { return std::numeric_limits<double>::infinity(); }

std::optional<Evaluation> evaluate(const Objective& obj, const NoiseModel& noise, const BitString& x,
                                   RngStream& rng, EvaluationCounter& counter) {
  if (!counter.charge()) return std::nullopt;
  const double truth = obj.evaluate_true(x);
  if (noise.noiseless()) return Evaluation{truth, truth};
  return Evaluation{truth, truth + std::sqrt(noise.variance) * rng.normal()};
}

std::optional<double> noisy_evaluate(const Objective& obj, const NoiseModel& noise, const BitString& x,
                                     RngStream& rng, EvaluationCounter& counter) {
  const auto e = evaluate(obj, noise, x, rng, counter);
  if (!e) return std::nullopt;
  return e->noisy_value;
}

}  // namespace eda
