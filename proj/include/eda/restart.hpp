#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "eda/frequency_vector.hpp"
#include "eda/kernels.hpp"
#include "eda/objectives.hpp"
#include "eda/rng.hpp"

namespace eda {

/// Maps the scheduler-controlled parameter (cGA mu, UMDA/PBIL lambda) to a
/// kernel configuration.
using KernelFactory = std::function<KernelConfig(std::uint64_t parameter)>;

KernelFactory cga_factory(MarginPolicy margins);
/// UMDA with selection size ceil(eta * lambda).
KernelFactory umda_factory(double eta, MarginPolicy margins);
KernelFactory pbil_factory(double eta, double rho, MarginPolicy margins);

/// One leg of a restart scheme.
struct LegRecord {
  std::uint32_t index = 0;  // 1-based
  std::uint64_t parameter = 0;
  std::optional<std::uint64_t> budget;  // smart restart only
  std::uint64_t evaluations = 0;
  std::uint64_t generations = 0;
  bool success = false;
  bool triggered = false;  // HL/AH condition fired
};

/// Result of a scheduler run. `evaluations` always equals the sum of the
/// per-leg (or per-process) evaluations.
struct ScheduleOutcome {
  bool success = false;
  std::uint64_t evaluations = 0;
  std::uint64_t generations = 0;
  double best_true_fitness;
  std::vector<LegRecord> legs;
};

// ---------------------------------------------------------------------------
// Smart restart

struct SmartRestartConfig {
  double update_factor = 2.0;  // U
  double budget_factor = 16.0;  // b, evaluations per unit parameter^2
  std::uint64_t initial_parameter = 2;
  std::optional<std::uint64_t> global_eval_cap;

  void validate() const;
};

/// Parameter of leg `leg` (1-based): round(initial * U^(leg-1)), at least 2.
/// Never returns a value <= `previous`.
std::uint64_t leg_parameter(const SmartRestartConfig& cfg, std::uint32_t leg, std::uint64_t previous);
/// ceil(b * parameter^2).
std::uint64_t leg_budget(double budget_factor, std::uint64_t parameter);

/// Runs legs with growing parameters, each from a fresh uniform model and
/// for at most its budget, until the optimum is sampled or the global cap is
/// spent.
ScheduleOutcome smart_restart_run(const KernelFactory& factory, const Objective& obj, const NoiseModel& noise,
                                  const SmartRestartConfig& cfg, RngStream rng);

// ---------------------------------------------------------------------------
// Parallel run (cGA)

struct ProcessRecord {
  std::uint32_t index = 0;  // 1-based
  std::uint64_t mu = 0;
  std::uint64_t generations = 0;
  std::uint64_t evaluations = 0;
  bool success = false;
};

struct ParallelRunOutcome {
  bool success = false;
  std::uint64_t evaluations = 0;
  std::uint64_t generations = 0;
  std::uint32_t rounds = 0;
  double best_true_fitness;
  std::vector<ProcessRecord> processes;
};

/// Population size of parallel-run process `index`: 2^(index-1), with the
/// first process using 2 instead of 1.
std::uint64_t parallel_process_mu(std::uint32_t index);
/// Generations process `index` runs in the round that starts it: 2^index - 1.
std::uint64_t parallel_initial_allotment(std::uint32_t index);

/// Interleaved cGA processes with doubling population sizes. Process k
/// draws from rng.split(k). Execution follows the sequential order of the
/// schedule exactly; `evaluations` is the global index of the optimal sample.
ParallelRunOutcome parallel_run(const Objective& obj, const NoiseModel& noise, RngStream rng,
                                std::optional<std::uint64_t> global_eval_cap, MarginPolicy margins =
                                                                                  MarginPolicy::StandardMargins);

// ---------------------------------------------------------------------------
// Adapted HL / AH restarts

/// True when every frequency sits at a boundary: exactly on a margin with
/// StandardMargins, within 1/n^2 of 0 or 1 without margins.
bool hl_trigger(const FrequencyVector& p);

struct AhConfig {
  std::size_t memory = 11;  // L
  double epsilon = 1e-12;

  /// L = 10 + ceil(30 n / lambda).
  static AhConfig for_problem(std::size_t n, std::size_t samples_per_generation, double epsilon = 1e-12);
  void validate() const;
};

std::size_t ah_memory(std::size_t n, std::size_t samples_per_generation);

/// True iff at least L best values are known and either their range is zero
/// or the range of those values together with the current generation's
/// fitnesses is below epsilon. Only the last L entries of `best_history`
/// are considered.
bool ah_trigger(std::span<const double> best_history, std::span<const double> current_generation,
                const AhConfig& cfg);

enum class TriggerKind { HL, AH };

TriggerKind parse_trigger_kind(std::string_view name);

struct TriggeredRestartConfig {
  TriggerKind trigger = TriggerKind::HL;
  double update_factor = 2.0;
  std::uint64_t initial_parameter = 2;
  double ah_epsilon = 1e-12;
  std::optional<std::uint64_t> global_eval_cap;

  void validate() const;
};

/// Runs legs with parameter 2U^(l-1) without a per-leg budget, restarting
/// from a fresh model when the trigger fires after a completed generation.
ScheduleOutcome triggered_restart_run(const KernelFactory& factory, const Objective& obj, const NoiseModel& noise,
                                      const TriggeredRestartConfig& cfg, RngStream rng);

// ---------------------------------------------------------------------------
// Runtime guarantee and budget factors

struct RuntimeBoundInputs {
  double success_probability;  // p, must exceed 1 - 1/U^2
  double update_factor;        // U > 1
  double budget_factor;        // b > 0
  double mu_tilde;             // smallest good parameter
  double time_factor;          // T: runtime per unit parameter
};

/// Expected-evaluation upper bound of the smart-restart scheme:
///   (U^2/(U^2-1) + (1-p)U^2/(1-(1-p)U^2)) max{b mu~^2, T^2/b} + pU/(1-(1-p)U) mu~ T.
/// Throws ConfigError outside the preconditions.
double restart_runtime_bound(const RuntimeBoundInputs& in);

enum class BudgetVariant { Aggressive, Conservative };

BudgetVariant parse_budget_variant(std::string_view name);

/// cGA: 16 or 1/ln n. PBIL: 96 eta/rho^2 or 6 eta/(rho^2 ln n). UMDA is
/// PBIL with rho = 1 and needs eta.
double recommended_budget_factor(KernelKind kernel, std::size_t n, std::optional<double> eta,
                                 std::optional<double> rho, BudgetVariant variant);

}  // namespace eda
