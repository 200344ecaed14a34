#include "eda/restart.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "eda/error.hpp"

namespace eda {

KernelFactory cga_factory(MarginPolicy margins) {
  return [margins](std::uint64_t mu) -> KernelConfig { return CgaConfig{mu, margins}; };
}

KernelFactory umda_factory(double eta, MarginPolicy margins) {
  return [eta, margins](std::uint64_t lambda) -> KernelConfig {
    const PbilConfig shape{static_cast<std::size_t>(lambda), eta, 1.0, margins};
    return UmdaConfig{shape.lambda, shape.selected(), margins};
  };
}

KernelFactory pbil_factory(double eta, double rho, MarginPolicy margins) {
  return [eta, rho, margins](std::uint64_t lambda) -> KernelConfig {
    return PbilConfig{static_cast<std::size_t>(lambda), eta, rho, margins};
  };
}

namespace {

constexpr std::uint64_t kParameterLimit = std::uint64_t{1} << 40;

double lowest_fitness() { return -std::numeric_limits<double>::infinity(); }

std::optional<std::uint64_t> remaining_of(std::optional<std::uint64_t> cap, std::uint64_t used) {
  if (!cap) return std::nullopt;
  return used >= *cap ? 0 : *cap - used;
}

std::uint64_t grown_parameter(std::uint64_t initial, double update_factor, std::uint32_t leg,
                              std::uint64_t previous) {
  const double raw = static_cast<double>(initial) * std::pow(update_factor, static_cast<double>(leg - 1));
  if (!(raw < static_cast<double>(kParameterLimit))) return kParameterLimit;
  auto value = std::max<std::uint64_t>(2, static_cast<std::uint64_t>(std::llround(raw)));
  if (leg > 1 && value <= previous) value = previous + 1;
  return value;
}

}  // namespace

// ---------------------------------------------------------------------------

void SmartRestartConfig::validate() const {
  if (!(update_factor > 1.0)) throw ConfigError("update factor U must exceed 1");
  if (!(budget_factor > 0.0)) throw ConfigError("budget factor b must be positive");
  if (initial_parameter < 2) throw ConfigError("initial parameter must be at least 2");
}

std::uint64_t leg_parameter(const SmartRestartConfig& cfg, std::uint32_t leg, std::uint64_t previous) {
  return grown_parameter(cfg.initial_parameter, cfg.update_factor, leg, previous);
}

std::uint64_t leg_budget(double budget_factor, std::uint64_t parameter) {
  const long double mu = static_cast<long double>(parameter);
  return static_cast<std::uint64_t>(std::ceil(static_cast<long double>(budget_factor) * mu * mu));
}

ScheduleOutcome smart_restart_run(const KernelFactory& factory, const Objective& obj, const NoiseModel& noise,
                                  const SmartRestartConfig& cfg, RngStream rng) {
  cfg.validate();
  ScheduleOutcome out;
  out.best_true_fitness = lowest_fitness();
  std::uint64_t parameter = 0;
  for (std::uint32_t leg = 1;; ++leg) {
    parameter = leg_parameter(cfg, leg, parameter);
    if (parameter >= kParameterLimit) break;
    const std::uint64_t budget = leg_budget(cfg.budget_factor, parameter);
    const auto remaining = remaining_of(cfg.global_eval_cap, out.evaluations);
    if (remaining && *remaining == 0) break;
    const std::uint64_t leg_cap = remaining ? std::min(budget, *remaining) : budget;

    const KernelConfig kernel = factory(parameter);
    RunState state = make_run_state(kernel, obj, leg_cap, rng);
    const RunOutcome run = run_to_completion(state, kernel, obj, noise);
    rng = state.rng;

    out.legs.push_back(LegRecord{leg, parameter, budget, run.evaluations, run.generations, run.success, false});
    out.evaluations += run.evaluations;
    out.generations += run.generations;
    out.best_true_fitness = std::max(out.best_true_fitness, run.best_true_fitness);
    if (run.success) {
      out.success = true;
      break;
    }
    // the global cap cut this leg short; nothing further fits
    if (leg_cap < budget) break;
  }
  return out;
}

// ---------------------------------------------------------------------------

std::uint64_t parallel_process_mu(std::uint32_t index) {
  if (index < 1) throw ConfigError("parallel-run processes are numbered from 1");
  return index == 1 ? 2 : std::uint64_t{1} << (index - 1);
}

std::uint64_t parallel_initial_allotment(std::uint32_t index) {
  if (index < 1) throw ConfigError("parallel-run processes are numbered from 1");
  return (std::uint64_t{1} << index) - 1;
}

namespace {

struct Process {
  CgaConfig config;
  RunState state;
};

enum class Advance { Done, Found, CapReached };

}  // namespace

ParallelRunOutcome parallel_run(const Objective& obj, const NoiseModel& noise, RngStream rng,
                                std::optional<std::uint64_t> global_eval_cap, MarginPolicy margins) {
  ParallelRunOutcome out;
  out.best_true_fitness = lowest_fitness();
  std::vector<Process> processes;

  const auto advance = [&](Process& proc, std::uint64_t generations) {
    for (std::uint64_t g = 0; g < generations; ++g) {
      const auto remaining = remaining_of(global_eval_cap, out.evaluations);
      if (remaining && *remaining < 2) return Advance::CapReached;
      const std::uint64_t before = proc.state.counter.count();
      const StepStatus status = cga_step(proc.state, proc.config, obj, noise);
      out.evaluations += proc.state.counter.count() - before;
      out.best_true_fitness = std::max(out.best_true_fitness, proc.state.best_true_fitness);
      if (status == StepStatus::OptimumFound) return Advance::Found;
      ++out.generations;
    }
    return Advance::Done;
  };

  const auto finish = [&](Advance result) {
    out.success = result == Advance::Found;
    for (std::size_t i = 0; i < processes.size(); ++i) {
      const auto& s = processes[i].state;
      out.processes.push_back(ProcessRecord{static_cast<std::uint32_t>(i + 1), processes[i].config.mu,
                                            s.generation, s.counter.count(), s.success});
    }
    return out;
  };

  for (std::uint32_t round = 1; round < 63; ++round) {
    out.rounds = round;
    if (round > 1) {
      const std::uint64_t extra = std::uint64_t{1} << (round - 1);
      for (auto& proc : processes) {
        const Advance result = advance(proc, extra);
        if (result != Advance::Done) return finish(result);
      }
    }
    const CgaConfig cfg{parallel_process_mu(round), margins};
    processes.push_back(Process{cfg, RunState(obj.dimension(), margins, std::nullopt, rng.split(round))});
    const Advance result = advance(processes.back(), parallel_initial_allotment(round));
    if (result != Advance::Done) return finish(result);
  }
  return finish(Advance::CapReached);
}

// ---------------------------------------------------------------------------

bool hl_trigger(const FrequencyVector& p) {
  const auto values = p.values();
  if (p.policy() == MarginPolicy::StandardMargins) {
    const auto [lower, upper] = p.bounds();
    return std::all_of(values.begin(), values.end(), [&](double v) { return v == lower || v == upper; });
  }
  const double n = static_cast<double>(p.size());
  const double near = 1.0 / (n * n);
  // absorbed entries (exactly 0 or 1) count as being at the boundary
  return std::all_of(values.begin(), values.end(), [&](double v) { return v < near || v > 1.0 - near; });
}

std::size_t ah_memory(std::size_t n, std::size_t samples_per_generation) {
  if (samples_per_generation == 0) throw ConfigError("AH memory needs a positive sample count");
  return 10 + (30 * n + samples_per_generation - 1) / samples_per_generation;
}

AhConfig AhConfig::for_problem(std::size_t n, std::size_t samples_per_generation, double epsilon) {
  return AhConfig{ah_memory(n, samples_per_generation), epsilon};
}

void AhConfig::validate() const {
  if (memory < 1) throw ConfigError("AH memory must be positive");
  if (!(epsilon >= 0.0)) throw ConfigError("AH threshold must be non-negative");
}

bool ah_trigger(std::span<const double> best_history, std::span<const double> current_generation,
                const AhConfig& cfg) {
  if (best_history.size() < cfg.memory) return false;
  const auto window = best_history.last(cfg.memory);
  const auto [lo, hi] = std::minmax_element(window.begin(), window.end());
  if (*hi - *lo == 0.0) return true;
  double min_all = *lo;
  double max_all = *hi;
  for (double v : current_generation) {
    min_all = std::min(min_all, v);
    max_all = std::max(max_all, v);
  }
  return max_all - min_all < cfg.epsilon;
}

TriggerKind parse_trigger_kind(std::string_view name) {
  if (name == "hl" || name == "HL") return TriggerKind::HL;
  if (name == "ah" || name == "AH") return TriggerKind::AH;
  throw ConfigError("unknown restart trigger '" + std::string(name) + "' (expected hl or ah)");
}

void TriggeredRestartConfig::validate() const {
  if (!(update_factor > 1.0)) throw ConfigError("update factor U must exceed 1");
  if (initial_parameter < 2) throw ConfigError("initial parameter must be at least 2");
  if (!(ah_epsilon >= 0.0)) throw ConfigError("AH threshold must be non-negative");
}

ScheduleOutcome triggered_restart_run(const KernelFactory& factory, const Objective& obj, const NoiseModel& noise,
                                      const TriggeredRestartConfig& cfg, RngStream rng) {
  cfg.validate();
  ScheduleOutcome out;
  out.best_true_fitness = lowest_fitness();
  std::uint64_t parameter = 0;
  for (std::uint32_t leg = 1;; ++leg) {
    parameter = grown_parameter(cfg.initial_parameter, cfg.update_factor, leg, parameter);
    if (parameter >= kParameterLimit) break;
    const auto remaining = remaining_of(cfg.global_eval_cap, out.evaluations);
    if (remaining && *remaining == 0) break;

    const KernelConfig kernel = factory(parameter);
    RunState state = make_run_state(kernel, obj, remaining, rng);
    const AhConfig ah = AhConfig::for_problem(obj.dimension(), evaluations_per_generation(kernel), cfg.ah_epsilon);
    std::vector<double> history;
    bool triggered = false;
    bool exhausted = false;
    while (true) {
      const StepStatus status = kernel_step(state, kernel, obj, noise);
      if (status == StepStatus::OptimumFound) break;
      if (status == StepStatus::BudgetExhausted) {
        exhausted = true;
        break;
      }
      if (cfg.trigger == TriggerKind::HL) {
        triggered = hl_trigger(state.p);
      } else {
        history.push_back(*std::max_element(state.fitnesses.begin(), state.fitnesses.end()));
        if (history.size() > 2 * ah.memory) history.erase(history.begin(), history.end() - ah.memory);
        triggered = ah_trigger(history, state.fitnesses, ah);
      }
      if (triggered) break;
    }
    rng = state.rng;

    out.legs.push_back(LegRecord{leg, parameter, std::nullopt, state.counter.count(), state.generation,
                                 state.success, triggered});
    out.evaluations += state.counter.count();
    out.generations += state.generation;
    out.best_true_fitness = std::max(out.best_true_fitness, state.best_true_fitness);
    if (state.success) {
      out.success = true;
      break;
    }
    if (exhausted) break;
  }
  return out;
}

// ---------------------------------------------------------------------------

double restart_runtime_bound(const RuntimeBoundInputs& in) {
  const double p = in.success_probability;
  const double u = in.update_factor;
  const double b = in.budget_factor;
  if (!(u > 1.0)) throw ConfigError("bound requires U > 1");
  if (!(b > 0.0)) throw ConfigError("bound requires b > 0");
  const double u2 = u * u;
  if (!(p > 1.0 - 1.0 / u2 && p <= 1.0)) throw ConfigError("bound requires 1 - 1/U^2 < p <= 1");
  if (!(in.mu_tilde >= 0.0) || !(in.time_factor >= 0.0)) {
    throw ConfigError("bound requires non-negative mu~ and T");
  }
  const double q = 1.0 - p;
  const double restart_weight = u2 / (u2 - 1.0) + q * u2 / (1.0 - q * u2);
  const double drift_term = std::max(b * in.mu_tilde * in.mu_tilde, in.time_factor * in.time_factor / b);
  const double run_weight = p * u / (1.0 - q * u);
  return restart_weight * drift_term + run_weight * in.mu_tilde * in.time_factor;
}

BudgetVariant parse_budget_variant(std::string_view name) {
  if (name == "aggressive") return BudgetVariant::Aggressive;
  if (name == "conservative") return BudgetVariant::Conservative;
  throw ConfigError("unknown budget variant '" + std::string(name) + "' (expected aggressive or conservative)");
}

double recommended_budget_factor(KernelKind kernel, std::size_t n, std::optional<double> eta,
                                 std::optional<double> rho, BudgetVariant variant) {
  if (variant == BudgetVariant::Conservative && n < 2) {
    throw ConfigError("the conservative budget factor needs n >= 2");
  }
  const double log_n = std::log(static_cast<double>(n));
  if (kernel == KernelKind::Cga) return variant == BudgetVariant::Aggressive ? 16.0 : 1.0 / log_n;
  if (!eta) throw ConfigError("budget factor for UMDA/PBIL requires eta");
  double r = 1.0;
  if (kernel == KernelKind::Pbil) {
    if (!rho) throw ConfigError("budget factor for PBIL requires rho");
    r = *rho;
  }
  if (!(*eta > 0.0) || !(r > 0.0)) throw ConfigError("eta and rho must be positive");
  const double ratio = *eta / (r * r);
  return variant == BudgetVariant::Aggressive ? 96.0 * ratio : 6.0 * ratio / log_n;
}

}  // namespace eda
