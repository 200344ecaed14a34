#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "eda/bitstring.hpp"
#include "eda/evaluation_counter.hpp"
#include "eda/frequency_vector.hpp"
#include "eda/objectives.hpp"
#include "eda/rng.hpp"

namespace eda {

/// Compact GA with hypothetical population size mu.
struct CgaConfig {
  std::uint64_t mu = 2;
  MarginPolicy margins = MarginPolicy::StandardMargins;

  void validate() const;
};

/// UMDA: sample lambda, average the mu best.
struct UmdaConfig {
  std::size_t lambda = 2;
  std::size_t mu = 1;
  MarginPolicy margins = MarginPolicy::StandardMargins;

  void validate() const;
};

/// PBIL / cross-entropy: UMDA's mean blended into the model with rate rho,
/// selecting mu = ceil(eta * lambda).
struct PbilConfig {
  std::size_t lambda = 2;
  double eta = 0.5;
  double rho = 1.0;
  MarginPolicy margins = MarginPolicy::StandardMargins;

  std::size_t selected() const;
  void validate() const;
};

using KernelConfig = std::variant<CgaConfig, UmdaConfig, PbilConfig>;

enum class KernelKind { Cga, Umda, Pbil };

KernelKind kind_of(const KernelConfig& cfg);
KernelKind parse_kernel_kind(std::string_view name);
std::string_view to_string(KernelKind kind);
MarginPolicy margins_of(const KernelConfig& cfg);
void validate(const KernelConfig& cfg);
/// Fitness evaluations consumed by one full generation.
std::uint64_t evaluations_per_generation(const KernelConfig& cfg);

/// Mutable state of a single run. Confined to one thread.
struct RunState {
  RunState(std::size_t n, MarginPolicy margins, std::optional<std::uint64_t> eval_cap, RngStream stream);

  FrequencyVector p;
  std::uint64_t generation = 0;
  EvaluationCounter counter;
  double best_true_fitness;
  bool success = false;
  RngStream rng;

  // Data of the last generation that was started: the samples, their
  // perceived fitness (in evaluation order), and the random order used to
  // break selection ties (UMDA/PBIL only).
  std::vector<BitString> samples;
  std::vector<double> fitnesses;
  std::vector<std::size_t> tie_order;
};

enum class StepStatus {
  Completed,        // a full generation ran and the model was updated
  OptimumFound,     // an evaluated sample is a true optimum; no model update
  BudgetExhausted,  // not enough budget for a full generation; nothing ran
};

// Pure model updates. Each applies the raw rule and then clamps.

/// p_j += (winner_j - loser_j) / mu.
void cga_update(FrequencyVector& p, const BitString& winner, const BitString& loser, std::uint64_t mu);
/// p = mean of `selected`.
void umda_update(FrequencyVector& p, std::span<const BitString> selected);
/// p = rho * mean(selected) + (1 - rho) * p.
void pbil_update(FrequencyVector& p, std::span<const BitString> selected, double rho);

/// Indices of the mu best by descending fitness. Ties are broken uniformly
/// at random: the indices are shuffled, then stably sorted. The shuffled
/// order is returned through `tie_order` when non-null.
std::vector<std::size_t> select_best(std::span<const double> fitnesses, std::size_t mu, RngStream& rng,
                                     std::vector<std::size_t>* tie_order = nullptr);

StepStatus cga_step(RunState& state, const CgaConfig& cfg, const Objective& obj, const NoiseModel& noise);
StepStatus umda_step(RunState& state, const UmdaConfig& cfg, const Objective& obj, const NoiseModel& noise);
StepStatus pbil_step(RunState& state, const PbilConfig& cfg, const Objective& obj, const NoiseModel& noise);
StepStatus kernel_step(RunState& state, const KernelConfig& cfg, const Objective& obj, const NoiseModel& noise);

struct RunOutcome {
  bool success = false;
  std::uint64_t evaluations = 0;  // evaluation index of the optimum on success
  std::uint64_t generations = 0;  // completed generations
  double best_true_fitness;
  FrequencyVector final_p;
};

/// Fresh uniform-model state for `cfg` on `obj`.
RunState make_run_state(const KernelConfig& cfg, const Objective& obj, std::optional<std::uint64_t> eval_cap,
                        RngStream rng);

/// Steps until the optimum is sampled or the budget cannot fund another
/// generation.
RunOutcome run_to_completion(RunState& state, const KernelConfig& cfg, const Objective& obj,
                             const NoiseModel& noise);

RunOutcome run_kernel(const KernelConfig& cfg, const Objective& obj, const NoiseModel& noise,
                      std::optional<std::uint64_t> eval_cap, RngStream rng);

}  // namespace eda
