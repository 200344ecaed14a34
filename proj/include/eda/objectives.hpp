#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "eda/bitstring.hpp"
#include "eda/evaluation_counter.hpp"
#include "eda/frequency_vector.hpp"
#include "eda/rng.hpp"

namespace eda {

// Benchmark functions over {0,1}^n; bit 0 is the leftmost position.
std::int64_t onemax(const BitString& x);
std::int64_t leadingones(const BitString& x);
/// Jump_k. Throws ConfigError unless 1 <= k <= n.
std::int64_t jump(const BitString& x, std::size_t k);
/// DeceptiveLeadingBlocks. Throws ConfigError for odd n.
std::int64_t dlb(const BitString& x);

/// A pseudo-Boolean maximization target with a known optimum value.
///
/// `evaluate_true` is the noiseless referee. `sample` lets constrained
/// problems replace the product-Bernoulli sampler (the default).
class Objective {
 public:
  virtual ~Objective() = default;

  virtual std::string name() const = 0;
  virtual std::size_t dimension() const = 0;
  virtual double evaluate_true(const BitString& x) const = 0;
  virtual double optimum_value() const = 0;
  virtual bool is_optimum(const BitString& x) const { return evaluate_true(x) == optimum_value(); }
  virtual void sample(const FrequencyVector& p, RngStream& rng, BitString& out) const;
};

class OneMax final : public Objective {
 public:
  explicit OneMax(std::size_t n);
  std::string name() const override { return "onemax"; }
  std::size_t dimension() const override { return n_; }
  double evaluate_true(const BitString& x) const override;
  double optimum_value() const override { return static_cast<double>(n_); }
  bool is_optimum(const BitString& x) const override { return x.all_ones(); }

 private:
  std::size_t n_;
};

class LeadingOnes final : public Objective {
 public:
  explicit LeadingOnes(std::size_t n);
  std::string name() const override { return "leadingones"; }
  std::size_t dimension() const override { return n_; }
  double evaluate_true(const BitString& x) const override;
  double optimum_value() const override { return static_cast<double>(n_); }
  bool is_optimum(const BitString& x) const override { return x.all_ones(); }

 private:
  std::size_t n_;
};

class Jump final : public Objective {
 public:
  Jump(std::size_t n, std::size_t k);
  std::string name() const override { return "jump"; }
  std::size_t dimension() const override { return n_; }
  std::size_t gap() const { return k_; }
  double evaluate_true(const BitString& x) const override;
  double optimum_value() const override { return static_cast<double>(n_ + k_); }
  bool is_optimum(const BitString& x) const override { return x.all_ones(); }

 private:
  std::size_t n_;
  std::size_t k_;
};

class DeceptiveLeadingBlocks final : public Objective {
 public:
  explicit DeceptiveLeadingBlocks(std::size_t n);
  std::string name() const override { return "dlb"; }
  std::size_t dimension() const override { return n_; }
  double evaluate_true(const BitString& x) const override;
  double optimum_value() const override { return static_cast<double>(n_); }
  bool is_optimum(const BitString& x) const override { return x.all_ones(); }

 private:
  std::size_t n_;
};

/// f(x) = c for every x. Its optimum value is +infinity, so no sample ever
/// counts as optimal; used to observe pure genetic drift.
class ConstantObjective final : public Objective {
 public:
  ConstantObjective(std::size_t n, double value);
  std::string name() const override { return "constant"; }
  std::size_t dimension() const override { return n_; }
  double evaluate_true(const BitString&) const override { return value_; }
  double optimum_value() const override;
  bool is_optimum(const BitString&) const override { return false; }

 private:
  std::size_t n_;
  double value_;
};

/// Additive centered Gaussian posterior noise N(0, variance).
struct NoiseModel {
  double variance = 0.0;

  bool noiseless() const { return variance == 0.0; }
};

/// True and perceived fitness of one evaluation.
struct Evaluation {
  double true_value;
  double noisy_value;
};

/// One charged evaluation with fresh noise. Returns nullopt, and draws
/// nothing, when the counter's cap is already reached.
std::optional<Evaluation> evaluate(const Objective& obj, const NoiseModel& noise, const BitString& x,
                                   RngStream& rng, EvaluationCounter& counter);

/// Perceived fitness f(x) + D only; see `evaluate`.
std::optional<double> noisy_evaluate(const Objective& obj, const NoiseModel& noise, const BitString& x,
                                     RngStream& rng, EvaluationCounter& counter);

}  // namespace eda
