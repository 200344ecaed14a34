#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "eda/error.hpp"
#include "eda/restart.hpp"

using namespace eda;

namespace {

// Exact rational arithmetic for the bound oracle.
struct Q {
  __extension__ typedef __int128 I;
  I num, den;
  Q(long long n = 0, long long d = 1) : num(n), den(d) { norm(); }
  static Q make(I n, I d) {
    Q q;
    q.num = n;
    q.den = d;
    q.norm();
    return q;
  }
  void norm() {
    if (den < 0) num = -num, den = -den;
    I a = num < 0 ? -num : num, b = den;
    while (b != 0) {
      I t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) num /= a, den /= a;
  }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};
Q operator+(Q a, Q b) { return Q::make(a.num * b.den + b.num * a.den, a.den * b.den); }
Q operator-(Q a, Q b) { return Q::make(a.num * b.den - b.num * a.den, a.den * b.den); }
Q operator*(Q a, Q b) { return Q::make(a.num * b.num, a.den * b.den); }
Q operator/(Q a, Q b) { return Q::make(a.num * b.den, a.den * b.num); }
bool operator<(Q a, Q b) { return a.num * b.den < b.num * a.den; }

Q bound_oracle(Q p, Q u, Q b, Q mu, Q t) {
  const Q one(1), q = one - p, u2 = u * u;
  const Q w1 = u2 / (u2 - one) + q * u2 / (one - q * u2);
  const Q x = b * mu * mu, y = t * t / b;
  const Q drift = x < y ? y : x;
  return w1 * drift + p * u / (one - q * u) * mu * t;
}

void check_close(double got, Q want) {
  CAPTURE(got);
  CAPTURE(want.value());
  CHECK(std::abs(got - want.value()) <= 1e-12 * std::abs(want.value()));
}

}  // namespace

TEST_CASE("smart-restart parameters and budgets") {
  SmartRestartConfig cfg;
  std::uint64_t prev = 0;
  std::vector<std::uint64_t> mus;
  for (std::uint32_t leg = 1; leg <= 6; ++leg) mus.push_back(prev = leg_parameter(cfg, leg, prev));
  CHECK(mus == std::vector<std::uint64_t>{2, 4, 8, 16, 32, 64});
  CHECK(leg_budget(16, 2) == 64);
  CHECK(leg_budget(16, 2) + leg_budget(16, 4) + leg_budget(16, 8) + leg_budget(16, 16) == 5440);
  CHECK(leg_budget(1.0 / std::log(100.0), 2) == 1);
  CHECK(leg_budget(0.5, 3) == 5);
}

TEST_CASE("parameters grow strictly for any U > 1") {
  for (double u : {std::sqrt(2.0), 1.05, 1.5, 2.0, 3.0}) {
    SmartRestartConfig cfg;
    cfg.update_factor = u;
    std::uint64_t prev = 0;
    for (std::uint32_t leg = 1; 2.0 * std::pow(u, leg - 1) < 1e12; ++leg) {
      const std::uint64_t next = leg_parameter(cfg, leg, prev);
      CHECK(next >= 2);
      if (leg > 1) CHECK(next > prev);
      const double raw = 2.0 * std::pow(u, leg - 1);
      if (leg > 1 && std::llround(raw) > static_cast<long long>(prev)) CHECK(next == std::llround(raw));
      prev = next;
    }
  }
}

TEST_CASE("budgets grow geometrically for U = 2") {
  std::uint64_t total = 0;
  for (std::uint64_t mu = 2; mu <= 1024; mu *= 2) {
    const std::uint64_t b = leg_budget(16, mu);
    if (mu > 2) CHECK(b == 4 * leg_budget(16, mu / 2));
    total += b;
    CHECK(static_cast<double>(total) < static_cast<double>(b) * 4.0 / 3.0);
  }
}

TEST_CASE("smart restart log accounts for every evaluation") {
  OneMax f(40);
  SmartRestartConfig cfg;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const ScheduleOutcome out = smart_restart_run(cga_factory(MarginPolicy::StandardMargins), f, NoiseModel{},
                                                  cfg, RngStream(seed, 1));
    REQUIRE(out.success);
    std::uint64_t evals = 0, gens = 0;
    for (std::size_t i = 0; i < out.legs.size(); ++i) {
      const LegRecord& leg = out.legs[i];
      CHECK(leg.index == i + 1);
      CHECK(leg.parameter == (std::uint64_t{2} << i));
      REQUIRE(leg.budget);
      CHECK(*leg.budget == leg_budget(16, leg.parameter));
      CHECK(leg.evaluations <= *leg.budget);
      CHECK(leg.success == (i + 1 == out.legs.size()));
      if (!leg.success) CHECK(leg.evaluations + 2 > *leg.budget);
      evals += leg.evaluations;
      gens += leg.generations;
    }
    CHECK(evals == out.evaluations);
    CHECK(gens == out.generations);
  }
}

TEST_CASE("each smart-restart leg starts from a fresh model") {
  // A leg with a fresh model and the continued stream must replay exactly.
  OneMax f(30);
  SmartRestartConfig cfg;
  RngStream rng(5, 5);
  const ScheduleOutcome out = smart_restart_run(cga_factory(MarginPolicy::StandardMargins), f, NoiseModel{}, cfg, rng);
  REQUIRE(out.legs.size() >= 2);
  RngStream replay = rng;
  for (const LegRecord& leg : out.legs) {
    const KernelConfig k = CgaConfig{leg.parameter};
    RunState s = make_run_state(k, f, *leg.budget, replay);
    const RunOutcome r = run_to_completion(s, k, f, NoiseModel{});
    CHECK(r.evaluations == leg.evaluations);
    CHECK(r.success == leg.success);
    replay = s.rng;
  }
}

TEST_CASE("smart restart honors the global cap") {
  ConstantObjective f(10, 0.0);
  SmartRestartConfig cfg;
  cfg.global_eval_cap = 1000;
  const ScheduleOutcome out = smart_restart_run(cga_factory(MarginPolicy::StandardMargins), f, NoiseModel{},
                                                cfg, RngStream(1, 1));
  CHECK_FALSE(out.success);
  CHECK(out.evaluations == 1000);
  std::uint64_t sum = 0;
  for (const auto& leg : out.legs) sum += leg.evaluations;
  CHECK(sum == 1000);
  CHECK(out.legs.size() == 3);  // 64 + 256 + 680 of 1024
  CHECK(out.legs[2].evaluations == 680);
}

TEST_CASE("smart restart config validation") {
  SmartRestartConfig cfg;
  cfg.update_factor = 1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.update_factor = 2.0;
  cfg.budget_factor = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("parallel-run schedule") {
  CHECK(parallel_initial_allotment(1) == 1);
  CHECK(parallel_initial_allotment(2) == 3);
  CHECK(parallel_initial_allotment(3) == 7);
  CHECK(parallel_process_mu(1) == 2);
  CHECK(parallel_process_mu(2) == 2);
  CHECK(parallel_process_mu(3) == 4);
  CHECK(parallel_process_mu(11) == 1024);

  // rounds 1..3 take 1 + (2 + 3) + (4 + 4 + 7) = 21 generations
  ConstantObjective f(10, 0.0);
  const ParallelRunOutcome out = parallel_run(f, NoiseModel{}, RngStream(1, 1), 42);
  CHECK_FALSE(out.success);
  CHECK(out.evaluations == 42);
  CHECK(out.generations == 21);
  REQUIRE(out.processes.size() == 3);
  CHECK(out.processes[0].generations == 7);
  CHECK(out.processes[1].generations == 7);
  CHECK(out.processes[2].generations == 7);
  std::uint64_t sum = 0;
  for (const auto& p : out.processes) sum += p.evaluations;
  CHECK(sum == out.evaluations);
}

TEST_CASE("parallel-run accounting on onemax") {
  OneMax f(30);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const ParallelRunOutcome out = parallel_run(f, NoiseModel{}, RngStream(seed, 1), std::nullopt);
    REQUIRE(out.success);
    std::uint64_t sum = 0, successes = 0;
    for (const auto& p : out.processes) {
      sum += p.evaluations;
      successes += p.success;
    }
    CHECK(sum == out.evaluations);
    CHECK(successes == 1);
    CHECK(out.evaluations + 1 >= 2 * out.generations);
  }
}

TEST_CASE("hl trigger") {
  FrequencyVector p(4, MarginPolicy::StandardMargins);
  for (std::size_t j = 0; j < 4; ++j) p.set(j, j % 2 ? 1.0 : 0.0);
  CHECK(p[0] == 0.25);
  CHECK(p[1] == 0.75);
  CHECK(hl_trigger(p));
  p.set(1, 0.5);
  CHECK_FALSE(hl_trigger(p));

  FrequencyVector q(10, MarginPolicy::NoMargins);
  for (std::size_t j = 0; j < 10; ++j) q.set(j, 0.005);
  CHECK(hl_trigger(q));
  q.set(3, 0.995);
  CHECK(hl_trigger(q));
  q.set(4, 0.02);
  CHECK_FALSE(hl_trigger(q));
}

TEST_CASE("ah memory and trigger") {
  CHECK(ah_memory(100, 10) == 310);
  CHECK(ah_memory(400, 1000) == 22);
  CHECK(ah_memory(600, 6000) == 13);
  CHECK(ah_memory(20, 2) == 310);

  const AhConfig cfg{5, 1e-12};
  std::vector<double> flat(5, 17.0);
  CHECK(ah_trigger(flat, std::vector<double>{1.0, 40.0}, cfg));
  CHECK_FALSE(ah_trigger(std::vector<double>(4, 17.0), std::vector<double>{}, cfg));

  std::vector<double> close{1.0, 1.0, 1.0, 1.0, 1.0 + 1e-13};
  CHECK(ah_trigger(close, std::vector<double>{1.0}, cfg));
  CHECK_FALSE(ah_trigger(close, std::vector<double>{1.0 + 2e-12}, cfg));
  std::vector<double> moving{1, 2, 3, 4, 5};
  CHECK_FALSE(ah_trigger(moving, std::vector<double>{5.0}, cfg));
}

TEST_CASE("ah fires exactly at generation L on a plateau") {
  ConstantObjective f(20, 5.0);
  TriggeredRestartConfig cfg;
  cfg.trigger = TriggerKind::AH;
  cfg.global_eval_cap = 100000;
  const ScheduleOutcome cga = triggered_restart_run(cga_factory(MarginPolicy::StandardMargins), f, NoiseModel{},
                                                    cfg, RngStream(1, 1));
  REQUIRE(cga.legs.size() >= 2);
  CHECK(cga.legs[0].triggered);
  CHECK(cga.legs[0].generations == ah_memory(20, 2));
  CHECK(cga.legs[1].parameter == 4);

  const ScheduleOutcome pbil = triggered_restart_run(pbil_factory(0.5, 1.0, MarginPolicy::StandardMargins), f,
                                                     NoiseModel{}, cfg, RngStream(1, 1));
  REQUIRE(pbil.legs.size() >= 2);
  CHECK(pbil.legs[0].generations == ah_memory(20, 2));
  CHECK(pbil.legs[1].generations == ah_memory(20, 4));
}

TEST_CASE("hl restarts once every frequency sits at a margin") {
  ConstantObjective f(20, 0.0);
  TriggeredRestartConfig cfg;
  cfg.trigger = TriggerKind::HL;
  cfg.initial_parameter = 10;
  cfg.global_eval_cap = 20000;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const ScheduleOutcome out = triggered_restart_run(pbil_factory(0.1, 0.7, MarginPolicy::StandardMargins), f,
                                                      NoiseModel{}, cfg, RngStream(seed, 1));
    REQUIRE(out.legs.size() >= 2);
    CHECK(out.legs[0].parameter == 10);
    CHECK(out.legs[0].triggered);
    CHECK(out.legs[1].parameter == 20);
  }
}

TEST_CASE("triggered restart that finds the optimum in leg 1") {
  OneMax f(5);
  TriggeredRestartConfig cfg;
  cfg.trigger = TriggerKind::HL;
  cfg.initial_parameter = 64;
  const ScheduleOutcome out = triggered_restart_run(pbil_factory(0.5, 1.0, MarginPolicy::StandardMargins), f,
                                                    NoiseModel{}, cfg, RngStream(2, 1));
  CHECK(out.success);
  REQUIRE(out.legs.size() == 1);
  CHECK(out.legs[0].success);
  CHECK(out.evaluations == out.legs[0].evaluations);
}

TEST_CASE("runtime bound against exact rationals") {
  check_close(restart_runtime_bound({1.0, 2.0, 1.0, 10.0, 10.0}), Q(1000, 3));
  check_close(restart_runtime_bound({0.9, 1.2, 1.0, 1.0, 1.0}),
              bound_oracle(Q(9, 10), Q(6, 5), Q(1), Q(1), Q(1)));
  CHECK(restart_runtime_bound({0.9, 1.2, 1.0, 1.0, 1.0}) == doctest::Approx(4.668).epsilon(1e-3));
  // p = 1: the second coefficient vanishes for every U
  for (auto [un, ud] : {std::pair{3, 2}, std::pair{5, 4}, std::pair{2, 1}, std::pair{7, 2}}) {
    const Q u(un, ud);
    const double got = restart_runtime_bound({1.0, u.value(), 2.0, 3.0, 7.0});
    const Q u2 = u * u;
    check_close(got, u2 / (u2 - Q(1)) * Q(49, 2) + u * Q(21));
    check_close(got, bound_oracle(Q(1), u, Q(2), Q(3), Q(7)));
  }
}

TEST_CASE("runtime bound preconditions") {
  CHECK_THROWS_AS(restart_runtime_bound({0.75, 2.0, 1.0, 1.0, 1.0}), ConfigError);
  CHECK_THROWS_AS(restart_runtime_bound({0.5, 2.0, 1.0, 1.0, 1.0}), ConfigError);
  CHECK_NOTHROW(restart_runtime_bound({0.76, 2.0, 1.0, 1.0, 1.0}));
  CHECK_THROWS_AS(restart_runtime_bound({1.0, 1.0, 1.0, 1.0, 1.0}), ConfigError);
  CHECK_THROWS_AS(restart_runtime_bound({1.0, 2.0, 0.0, 1.0, 1.0}), ConfigError);
  CHECK_THROWS_AS(restart_runtime_bound({1.1, 2.0, 1.0, 1.0, 1.0}), ConfigError);
}

TEST_CASE("runtime bound is monotone in mu-tilde and T") {
  for (double p : {0.8, 0.95, 1.0}) {
    for (double b : {0.1, 1.0, 16.0}) {
      double prev_mu = 0;
      for (double mu = 1; mu <= 200; mu *= 1.7) {
        double prev_t = 0;
        for (double t = 1; t <= 200; t *= 1.7) {
          const double v = restart_runtime_bound({p, 2.0, b, mu, t});
          CHECK(v >= prev_t);
          prev_t = v;
        }
        const double v = restart_runtime_bound({p, 2.0, b, mu, 10.0});
        CHECK(v >= prev_mu);
        prev_mu = v;
      }
    }
  }
}

TEST_CASE("recommended budget factors") {
  using BV = BudgetVariant;
  CHECK(recommended_budget_factor(KernelKind::Pbil, 400, 0.1, 1.0, BV::Aggressive) == doctest::Approx(9.6));
  CHECK(recommended_budget_factor(KernelKind::Pbil, 600, 0.01, 0.7, BV::Aggressive) ==
        doctest::Approx(96.0 / 49.0));
  CHECK(recommended_budget_factor(KernelKind::Pbil, 600, 0.01, 0.7, BV::Conservative) ==
        doctest::Approx(6.0 / (49.0 * std::log(600.0))));
  CHECK(recommended_budget_factor(KernelKind::Cga, 100, std::nullopt, std::nullopt, BV::Conservative) ==
        doctest::Approx(0.2171).epsilon(1e-4));
  CHECK(recommended_budget_factor(KernelKind::Cga, 100, std::nullopt, std::nullopt, BV::Aggressive) == 16.0);
  CHECK(recommended_budget_factor(KernelKind::Umda, 100, 0.5, std::nullopt, BV::Aggressive) == 48.0);
  CHECK_THROWS_AS(recommended_budget_factor(KernelKind::Pbil, 100, std::nullopt, 1.0, BV::Aggressive), ConfigError);
  CHECK_THROWS_AS(recommended_budget_factor(KernelKind::Pbil, 100, 0.1, std::nullopt, BV::Aggressive), ConfigError);
  CHECK(parse_budget_variant("conservative") == BV::Conservative);
  CHECK_THROWS_AS(parse_budget_variant("medium"), ConfigError);
}
