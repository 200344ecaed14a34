#include "eda/kernels.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "eda/error.hpp"

namespace eda {

void CgaConfig::validate() const {
  if (mu < 2) throw ConfigError("cGA population size mu must be at least 2, got " + std::to_string(mu));
}

void UmdaConfig::validate() const {
  if (lambda < 2) throw ConfigError("UMDA sample size lambda must be at least 2");
  if (mu < 1 || mu > lambda) {
    throw ConfigError("UMDA selection size mu=" + std::to_string(mu) + " must lie in [1, lambda=" +
                      std::to_string(lambda) + "]");
  }
}

std::size_t PbilConfig::selected() const {
  const double product = eta * static_cast<double>(lambda);
  const double nearest = std::round(product);
  // eta * lambda is meant exactly; 0.1 * 30 must give 3, not 4
  if (std::abs(product - nearest) <= 1e-9 * std::max(1.0, product)) {
    return static_cast<std::size_t>(nearest);
  }
  return static_cast<std::size_t>(std::ceil(product));
}

void PbilConfig::validate() const {
  if (lambda < 2) throw ConfigError("PBIL sample size lambda must be at least 2");
  if (!(eta > 0.0 && eta <= 1.0)) throw ConfigError("PBIL selection pressure eta must lie in (0, 1]");
  if (!(rho >= 0.0 && rho <= 1.0)) throw ConfigError("PBIL learning rate rho must lie in [0, 1]");
  const std::size_t mu = selected();
  if (mu < 1 || mu > lambda) throw ConfigError("PBIL: ceil(eta * lambda) must lie in [1, lambda]");
}

KernelKind kind_of(const KernelConfig& cfg) {
  return static_cast<KernelKind>(cfg.index());
}

KernelKind parse_kernel_kind(std::string_view name) {
  if (name == "cga") return KernelKind::Cga;
  if (name == "umda") return KernelKind::Umda;
  if (name == "pbil" || name == "ce") return KernelKind::Pbil;
  throw ConfigError("unknown kernel '" + std::string(name) + "' (expected cga, umda or pbil)");
}

std::string_view to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::Cga:
      return "cga";
    case KernelKind::Umda:
      return "umda";
    case KernelKind::Pbil:
      return "pbil";
  }
  return "?";
}

MarginPolicy margins_of(const KernelConfig& cfg) {
  return std::visit([](const auto& c) { return c.margins; }, cfg);
}

void validate(const KernelConfig& cfg) {
  std::visit([](const auto& c) { c.validate(); }, cfg);
}

std::uint64_t evaluations_per_generation(const KernelConfig& cfg) {
  if (std::holds_alternative<CgaConfig>(cfg)) return 2;
  if (const auto* u = std::get_if<UmdaConfig>(&cfg)) return u->lambda;
  return std::get<PbilConfig>(cfg).lambda;
}

RunState::RunState(std::size_t n, MarginPolicy margins, std::optional<std::uint64_t> eval_cap, RngStream stream)
    : p(n, margins),
      counter(eval_cap),
      best_true_fitness(-std::numeric_limits<double>::infinity()),
      rng(stream) {}

void cga_update(FrequencyVector& p, const BitString& winner, const BitString& loser, std::uint64_t mu) {
  const double step = 1.0 / static_cast<double>(mu);
  const auto w = winner.words();
  const auto l = loser.words();
  for (std::size_t k = 0; k < w.size(); ++k) {
    BitString::Word diff = w[k] ^ l[k];
    while (diff != 0) {
      const auto bit = static_cast<std::size_t>(std::countr_zero(diff));
      diff &= diff - 1;
      const std::size_t j = k * BitString::kWordBits + bit;
      const bool up = (w[k] >> bit) & 1U;
      p.set(j, up ? p[j] + step : p[j] - step);
    }
  }
}

namespace {

// Ones per position over the selected strings.
std::vector<std::uint32_t> column_counts(std::span<const BitString> selected, std::size_t n) {
  std::vector<std::uint32_t> counts(n, 0);
  for (const auto& x : selected) {
    const auto words = x.words();
    for (std::size_t k = 0; k < words.size(); ++k) {
      BitString::Word w = words[k];
      while (w != 0) {
        const auto bit = static_cast<std::size_t>(std::countr_zero(w));
        w &= w - 1;
        ++counts[k * BitString::kWordBits + bit];
      }
    }
  }
  return counts;
}

void check_selection(const FrequencyVector& p, std::span<const BitString> selected) {
  if (selected.empty()) throw ConfigError("model update needs at least one selected individual");
  for (const auto& x : selected) {
    if (x.size() != p.size()) throw ConfigError("selected individual length differs from model dimension");
  }
}

}  // namespace

void umda_update(FrequencyVector& p, std::span<const BitString> selected) {
  check_selection(p, selected);
  const auto counts = column_counts(selected, p.size());
  const auto mu = static_cast<double>(selected.size());
  for (std::size_t j = 0; j < p.size(); ++j) p.set(j, static_cast<double>(counts[j]) / mu);
}

void pbil_update(FrequencyVector& p, std::span<const BitString> selected, double rho) {
  check_selection(p, selected);
  const auto counts = column_counts(selected, p.size());
  const auto mu = static_cast<double>(selected.size());
  for (std::size_t j = 0; j < p.size(); ++j) {
    p.set(j, rho * (static_cast<double>(counts[j]) / mu) + (1.0 - rho) * p[j]);
  }
}

std::vector<std::size_t> select_best(std::span<const double> fitnesses, std::size_t mu, RngStream& rng,
                                     std::vector<std::size_t>* tie_order) {
  if (mu > fitnesses.size()) throw ConfigError("cannot select more individuals than were sampled");
  std::vector<std::size_t> order(fitnesses.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(std::span<std::size_t>(order));
  if (tie_order != nullptr) *tie_order = order;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return fitnesses[a] > fitnesses[b]; });
  order.resize(mu);
  return order;
}

namespace {

// Charges and scores one sample. Returns false when it is a true optimum.
bool score(RunState& state, const Objective& obj, const NoiseModel& noise, const BitString& x) {
  const auto e = evaluate(obj, noise, x, state.rng, state.counter);
  // callers reserve budget for the whole generation first
  state.fitnesses.push_back(e->noisy_value);
  state.best_true_fitness = std::max(state.best_true_fitness, e->true_value);
  if (obj.is_optimum(x)) {
    state.success = true;
    return false;
  }
  return true;
}

void prepare_samples(RunState& state, std::size_t count) {
  const std::size_t n = state.p.size();
  state.samples.resize(count);
  for (auto& x : state.samples) {
    if (x.size() != n) x = BitString(n);
  }
  state.fitnesses.clear();
}

// Samples lambda individuals and scores them in order. Returns the status
// to report if the generation cannot proceed to the model update.
std::optional<StepStatus> sample_and_score(RunState& state, std::size_t lambda, const Objective& obj,
                                           const NoiseModel& noise) {
  if (!state.counter.allows(lambda)) return StepStatus::BudgetExhausted;
  prepare_samples(state, lambda);
  for (auto& x : state.samples) obj.sample(state.p, state.rng, x);
  for (const auto& x : state.samples) {
    if (!score(state, obj, noise, x)) return StepStatus::OptimumFound;
  }
  return std::nullopt;
}

template <typename Update>
StepStatus truncation_step(RunState& state, std::size_t lambda, std::size_t mu, const Objective& obj,
                           const NoiseModel& noise, Update&& update) {
  if (const auto early = sample_and_score(state, lambda, obj, noise)) return *early;
  const auto chosen = select_best(state.fitnesses, mu, state.rng, &state.tie_order);
  std::vector<BitString> selected;
  selected.reserve(mu);
  for (std::size_t i : chosen) selected.push_back(state.samples[i]);
  update(std::span<const BitString>(selected));
  ++state.generation;
  return StepStatus::Completed;
}

}  // namespace

StepStatus cga_step(RunState& state, const CgaConfig& cfg, const Objective& obj, const NoiseModel& noise) {
  if (!state.counter.allows(2)) return StepStatus::BudgetExhausted;
  prepare_samples(state, 2);
  state.tie_order.clear();
  obj.sample(state.p, state.rng, state.samples[0]);
  obj.sample(state.p, state.rng, state.samples[1]);
  if (!score(state, obj, noise, state.samples[0])) return StepStatus::OptimumFound;
  if (!score(state, obj, noise, state.samples[1])) return StepStatus::OptimumFound;
  // ties favor the first sample
  if (state.fitnesses[0] >= state.fitnesses[1]) {
    cga_update(state.p, state.samples[0], state.samples[1], cfg.mu);
  } else {
    cga_update(state.p, state.samples[1], state.samples[0], cfg.mu);
  }
  ++state.generation;
  return StepStatus::Completed;
}

StepStatus umda_step(RunState& state, const UmdaConfig& cfg, const Objective& obj, const NoiseModel& noise) {
  return truncation_step(state, cfg.lambda, cfg.mu, obj, noise,
                         [&](std::span<const BitString> sel) { umda_update(state.p, sel); });
}

StepStatus pbil_step(RunState& state, const PbilConfig& cfg, const Objective& obj, const NoiseModel& noise) {
  return truncation_step(state, cfg.lambda, cfg.selected(), obj, noise,
                         [&](std::span<const BitString> sel) { pbil_update(state.p, sel, cfg.rho); });
}

StepStatus kernel_step(RunState& state, const KernelConfig& cfg, const Objective& obj, const NoiseModel& noise) {
  return std::visit(
      [&](const auto& c) -> StepStatus {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, CgaConfig>) {
          return cga_step(state, c, obj, noise);
        } else if constexpr (std::is_same_v<T, UmdaConfig>) {
          return umda_step(state, c, obj, noise);
        } else {
          return pbil_step(state, c, obj, noise);
        }
      },
      cfg);
}

RunState make_run_state(const KernelConfig& cfg, const Objective& obj, std::optional<std::uint64_t> eval_cap,
                        RngStream rng) {
  validate(cfg);
  return RunState(obj.dimension(), margins_of(cfg), eval_cap, rng);
}

RunOutcome run_to_completion(RunState& state, const KernelConfig& cfg, const Objective& obj,
                             const NoiseModel& noise) {
  while (!state.success) {
    if (kernel_step(state, cfg, obj, noise) == StepStatus::BudgetExhausted) break;
  }
  return RunOutcome{state.success, state.counter.count(), state.generation, state.best_true_fitness, state.p};
}

RunOutcome run_kernel(const KernelConfig& cfg, const Objective& obj, const NoiseModel& noise,
                      std::optional<std::uint64_t> eval_cap, RngStream rng) {
  RunState state = make_run_state(cfg, obj, eval_cap, rng);
  return run_to_completion(state, cfg, obj, noise);
}

}  // namespace eda
