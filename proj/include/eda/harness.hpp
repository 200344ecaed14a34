#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "eda/frequency_vector.hpp"
#include "eda/kernels.hpp"
#include "eda/objectives.hpp"
#include "eda/restart.hpp"

namespace eda {

struct ObjectiveSpec {
  std::string name = "onemax";  // onemax, leadingones, jump, dlb, constant, maxcut, bipartition
  std::size_t n = 100;
  std::size_t k = 0;  // jump gap
  double noise_variance = 0.0;
  // maxcut / bipartition: either an instance file or a planted instance
  // generated from (n, density, instance_seed)
  std::string instance;
  double density = 0.5;
  std::uint64_t instance_seed = 1;
};

enum class SchedulerKind { Static, SmartRestart, ParallelRun, HL, AH };

SchedulerKind parse_scheduler_kind(const std::string& name);
std::string to_string(SchedulerKind kind);

struct AlgorithmSpec {
  SchedulerKind scheduler = SchedulerKind::Static;
  KernelKind kernel = KernelKind::Cga;
  std::uint64_t mu = 0;      // cGA mu, UMDA selection size (static only)
  std::uint64_t lambda = 0;  // UMDA/PBIL sample size (static only)
  double eta = 0.5;
  double rho = 1.0;
  MarginPolicy margins = MarginPolicy::StandardMargins;
  double update_factor = 2.0;
  std::optional<double> budget_factor;      // explicit b
  std::optional<BudgetVariant> budget_rule;  // or a recommended one
  double ah_epsilon = 1e-12;
};

struct ExperimentSpec {
  ObjectiveSpec objective;
  AlgorithmSpec algorithm;
  std::size_t repetitions = 1;
  std::uint64_t base_seed = 1;
  std::optional<std::uint64_t> eval_cap;  // unset: default_eval_cap
  bool uncapped = false;                  // "eval_cap": "none"
  std::string output;                     // per-run CSV
  std::string summary_output;             // summary CSV
  std::size_t threads = 1;
};

/// A template experiment swept along one numeric parameter.
struct SweepSpec {
  ExperimentSpec base;
  std::string parameter;  // mu, lambda, budget_factor, update_factor, noise_variance, n, k, eta, rho
  std::vector<double> values;
};

struct RunRecord {
  std::string axis;
  std::uint64_t seed = 0;  // repetition stream id
  bool success = false;
  std::uint64_t evaluations = 0;
  std::uint64_t generations = 0;
  double wall_seconds = 0.0;
};

struct SummaryRow {
  std::string axis;
  std::uint64_t median = 0;
  std::uint64_t q1 = 0;
  std::uint64_t q3 = 0;
  std::size_t successes = 0;
  std::size_t censored = 0;
};

// Parsing and validation. All throw ConfigError with a descriptive message.
ExperimentSpec parse_experiment(const nlohmann::json& doc);
SweepSpec parse_sweep(const nlohmann::json& doc);
nlohmann::json read_json_file(const std::string& path);
void validate(const ExperimentSpec& spec);
void validate(const SweepSpec& spec);

std::unique_ptr<Objective> build_objective(const ObjectiveSpec& spec);
/// Kernel configuration of a static run.
KernelConfig static_kernel(const AlgorithmSpec& alg);
KernelFactory kernel_factory(const AlgorithmSpec& alg);
double resolve_budget_factor(const AlgorithmSpec& alg, std::size_t n);

/// Generation caps converted to evaluations for static kernels:
/// ceil(n^4 ln n) OneMax, n^5 LeadingOnes, ceil(n^(k/2)) Jump, 10 n^5 DLB,
/// times the per-generation cost. Max-cut and bipartition use 1.5e7 and 3e6
/// evaluations for every scheduler. Restart schemes on the pseudo-Boolean
/// benchmarks run uncapped.
std::optional<std::uint64_t> default_eval_cap(const ExperimentSpec& spec);

struct RunResult {
  bool success = false;
  std::uint64_t evaluations = 0;
  std::uint64_t generations = 0;
};

/// One repetition with stream (base_seed, stream_id).
RunResult run_once(const ExperimentSpec& spec, const Objective& obj, std::optional<std::uint64_t> cap,
                   std::uint64_t stream_id);

/// R repetitions on streams (base_seed, 1..R), optionally on several worker
/// threads; the returned records are ordered by seed.
std::vector<RunRecord> run_experiment(const ExperimentSpec& spec, const std::string& axis = "-");
std::vector<RunRecord> run_sweep(const SweepSpec& sweep);
ExperimentSpec apply_axis(const ExperimentSpec& base, const std::string& parameter, double value);
std::string format_axis_value(double value);

/// Nearest-rank quartiles of evaluations per axis value, in order of first
/// appearance. Censored runs enter at their recorded evaluation count.
std::vector<SummaryRow> summarize(const std::vector<RunRecord>& records);
/// Nearest-rank quantile: the ceil(num/den * size)-th smallest value.
std::uint64_t nearest_rank(const std::vector<std::uint64_t>& sorted, std::uint64_t num, std::uint64_t den);

void write_runs_csv(std::ostream& os, const std::vector<RunRecord>& records);
void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows);

}  // namespace eda
