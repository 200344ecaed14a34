#include "eda/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <stdexcept>
#include <thread>

#include "eda/combinatorial.hpp"
#include "eda/error.hpp"

namespace eda {

using nlohmann::json;

namespace {

constexpr std::uint64_t kMaxU64 = std::numeric_limits<std::uint64_t>::max();

std::uint64_t saturate(long double v) {
  if (!(v < 18446744073709551616.0L)) return kMaxU64;
  return static_cast<std::uint64_t>(std::ceil(v));
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kMaxU64 / a) return kMaxU64;
  return a * b;
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& known, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!known.count(it.key())) throw ConfigError("unknown field '" + it.key() + "' in " + where);
  }
}

template <typename T>
T field(const json& obj, const char* key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("field '" + std::string(key) + "' in " + where + " is missing or has the wrong type");
  }
}

template <typename T>
void optional_field(const json& obj, const char* key, const std::string& where, T& out) {
  if (obj.contains(key)) out = field<T>(obj, key, where);
}

std::uint64_t count_field(const json& obj, const char* key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw ConfigError("field '" + std::string(key) + "' in " + where + " must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

template <typename T>
void optional_count(const json& obj, const char* key, const std::string& where, T& out) {
  if (obj.contains(key)) out = static_cast<T>(count_field(obj, key, where));
}

ObjectiveSpec parse_objective(const json& j) {
  const std::string where = "objective";
  reject_unknown_keys(j, {"name", "n", "k", "noise_variance", "instance", "density", "instance_seed"}, where);
  ObjectiveSpec spec;
  spec.name = field<std::string>(j, "name", where);
  optional_count(j, "n", where, spec.n);
  optional_count(j, "k", where, spec.k);
  optional_field(j, "noise_variance", where, spec.noise_variance);
  optional_field(j, "instance", where, spec.instance);
  optional_field(j, "density", where, spec.density);
  optional_count(j, "instance_seed", where, spec.instance_seed);
  return spec;
}

AlgorithmSpec parse_algorithm(const json& j) {
  const std::string where = "algorithm";
  reject_unknown_keys(j,
                      {"scheduler", "kernel", "mu", "lambda", "eta", "rho", "margins", "update_factor",
                       "budget_factor", "ah_epsilon"},
                      where);
  AlgorithmSpec alg;
  if (j.contains("scheduler")) alg.scheduler = parse_scheduler_kind(field<std::string>(j, "scheduler", where));
  if (j.contains("kernel")) alg.kernel = parse_kernel_kind(field<std::string>(j, "kernel", where));
  optional_count(j, "mu", where, alg.mu);
  optional_count(j, "lambda", where, alg.lambda);
  optional_field(j, "eta", where, alg.eta);
  optional_field(j, "rho", where, alg.rho);
  if (j.contains("margins")) alg.margins = parse_margin_policy(field<std::string>(j, "margins", where));
  optional_field(j, "update_factor", where, alg.update_factor);
  if (j.contains("budget_factor")) {
    const json& b = j.at("budget_factor");
    if (b.is_string()) {
      alg.budget_rule = parse_budget_variant(b.get<std::string>());
    } else if (b.is_number()) {
      alg.budget_factor = b.get<double>();
    } else {
      throw ConfigError("budget_factor must be a number, \"aggressive\" or \"conservative\"");
    }
  }
  optional_field(j, "ah_epsilon", where, alg.ah_epsilon);
  return alg;
}

std::vector<double> parse_axis_values(const json& axis) {
  if (axis.contains("values")) {
    try {
      return axis.at("values").get<std::vector<double>>();
    } catch (const json::exception&) {
      throw ConfigError("axis.values must be an array of numbers");
    }
  }
  if (axis.contains("log2_range")) {
    std::vector<std::int64_t> range;
    try {
      range = axis.at("log2_range").get<std::vector<std::int64_t>>();
    } catch (const json::exception&) {
      throw ConfigError("axis.log2_range must be [first, last] integer exponents");
    }
    if (range.size() != 2 || range[0] > range[1] || range[0] < 0 || range[1] > 62) {
      throw ConfigError("axis.log2_range must be [first, last] with 0 <= first <= last <= 62");
    }
    std::vector<double> values;
    for (std::int64_t e = range[0]; e <= range[1]; ++e) values.push_back(std::ldexp(1.0, static_cast<int>(e)));
    return values;
  }
  throw ConfigError("axis needs either 'values' or 'log2_range'");
}

bool is_cut_problem(const std::string& name) { return name == "maxcut" || name == "bipartition"; }

std::uint64_t integral_axis(const std::string& parameter, double value) {
  if (!(value >= 0.0) || value != std::floor(value) || value > 9007199254740992.0) {
    throw ConfigError("axis parameter '" + parameter + "' needs non-negative integer values");
  }
  return static_cast<std::uint64_t>(value);
}

}  // namespace

SchedulerKind parse_scheduler_kind(const std::string& name) {
  if (name == "static") return SchedulerKind::Static;
  if (name == "smart-restart" || name == "smart_restart") return SchedulerKind::SmartRestart;
  if (name == "parallel-run" || name == "parallel_run") return SchedulerKind::ParallelRun;
  if (name == "hl" || name == "HL") return SchedulerKind::HL;
  if (name == "ah" || name == "AH") return SchedulerKind::AH;
  throw ConfigError("unknown scheduler '" + name + "' (expected static, smart-restart, parallel-run, hl or ah)");
}

std::string to_string(SchedulerKind kind) {
  switch (kind) {
    case SchedulerKind::Static: return "static";
    case SchedulerKind::SmartRestart: return "smart-restart";
    case SchedulerKind::ParallelRun: return "parallel-run";
    case SchedulerKind::HL: return "hl";
    case SchedulerKind::AH: return "ah";
  }
  return "?";
}

ExperimentSpec parse_experiment(const json& doc) {
  const std::string where = "experiment";
  reject_unknown_keys(doc,
                      {"objective", "algorithm", "repetitions", "base_seed", "eval_cap", "output", "summary_output",
                       "threads"},
                      where);
  if (!doc.contains("objective")) throw ConfigError("experiment is missing 'objective'");
  if (!doc.contains("algorithm")) throw ConfigError("experiment is missing 'algorithm'");
  ExperimentSpec spec;
  spec.objective = parse_objective(doc.at("objective"));
  spec.algorithm = parse_algorithm(doc.at("algorithm"));
  optional_count(doc, "repetitions", where, spec.repetitions);
  optional_count(doc, "base_seed", where, spec.base_seed);
  if (doc.contains("eval_cap")) {
    const json& cap = doc.at("eval_cap");
    if (cap.is_string() && cap.get<std::string>() == "none") {
      spec.uncapped = true;
    } else if (cap.is_string() && cap.get<std::string>() == "default") {
      spec.eval_cap.reset();
    } else if (!cap.is_null()) {
      spec.eval_cap = count_field(doc, "eval_cap", where);
    }
  }
  optional_field(doc, "output", where, spec.output);
  optional_field(doc, "summary_output", where, spec.summary_output);
  optional_count(doc, "threads", where, spec.threads);
  return spec;
}

SweepSpec parse_sweep(const json& doc) {
  reject_unknown_keys(doc, {"base", "axis"}, "sweep");
  if (!doc.contains("base") || !doc.contains("axis")) throw ConfigError("sweep needs 'base' and 'axis'");
  SweepSpec sweep;
  sweep.base = parse_experiment(doc.at("base"));
  const json& axis = doc.at("axis");
  reject_unknown_keys(axis, {"parameter", "values", "log2_range"}, "axis");
  sweep.parameter = field<std::string>(axis, "parameter", "axis");
  sweep.values = parse_axis_values(axis);
  return sweep;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed JSON in '" + path + "': " + e.what());
  }
}

std::unique_ptr<Objective> build_objective(const ObjectiveSpec& spec) {
  const std::string& name = spec.name;
  if (is_cut_problem(name)) {
    PlantedInstance inst = [&] {
      if (!spec.instance.empty()) return load_instance(spec.instance);
      if (!(spec.density > 0.0 && spec.density <= 1.0)) throw ConfigError("density must lie in (0, 1]");
      RngStream rng(spec.instance_seed, 0);
      return planted_maxcut(spec.n, spec.density, rng);
    }();
    if (name == "maxcut") return std::make_unique<MaxCutObjective>(std::move(inst.graph), inst.optimal_value);
    BipartitionConstraint c{inst.planted_assignment.count_ones()};
    return std::make_unique<BipartitionObjective>(std::move(inst.graph), c, inst.optimal_value);
  }
  if (spec.n == 0) throw ConfigError("objective dimension n must be positive");
  if (name == "onemax") return std::make_unique<OneMax>(spec.n);
  if (name == "leadingones") return std::make_unique<LeadingOnes>(spec.n);
  if (name == "jump") return std::make_unique<Jump>(spec.n, spec.k);
  if (name == "dlb") return std::make_unique<DeceptiveLeadingBlocks>(spec.n);
  if (name == "constant") return std::make_unique<ConstantObjective>(spec.n, 0.0);
  throw ConfigError("unknown objective '" + name +
                    "' (expected onemax, leadingones, jump, dlb, constant, maxcut or bipartition)");
}

KernelConfig static_kernel(const AlgorithmSpec& alg) {
  KernelConfig cfg;
  switch (alg.kernel) {
    case KernelKind::Cga:
      if (alg.mu == 0) throw ConfigError("static cGA needs 'mu'");
      cfg = CgaConfig{alg.mu, alg.margins};
      break;
    case KernelKind::Umda: {
      if (alg.lambda == 0) throw ConfigError("static UMDA needs 'lambda'");
      std::size_t mu = alg.mu;
      if (mu == 0) mu = PbilConfig{alg.lambda, alg.eta, 1.0, alg.margins}.selected();
      cfg = UmdaConfig{alg.lambda, mu, alg.margins};
      break;
    }
    case KernelKind::Pbil:
      if (alg.lambda == 0) throw ConfigError("static PBIL needs 'lambda'");
      cfg = PbilConfig{alg.lambda, alg.eta, alg.rho, alg.margins};
      break;
  }
  validate(cfg);
  return cfg;
}

KernelFactory kernel_factory(const AlgorithmSpec& alg) {
  switch (alg.kernel) {
    case KernelKind::Cga: return cga_factory(alg.margins);
    case KernelKind::Umda: return umda_factory(alg.eta, alg.margins);
    case KernelKind::Pbil: return pbil_factory(alg.eta, alg.rho, alg.margins);
  }
  throw ConfigError("unknown kernel");
}

double resolve_budget_factor(const AlgorithmSpec& alg, std::size_t n) {
  if (alg.budget_factor) return *alg.budget_factor;
  const BudgetVariant variant = alg.budget_rule.value_or(BudgetVariant::Aggressive);
  return recommended_budget_factor(alg.kernel, n, alg.eta, alg.rho, variant);
}

std::optional<std::uint64_t> default_eval_cap(const ExperimentSpec& spec) {
  const ObjectiveSpec& o = spec.objective;
  if (o.name == "maxcut") return 15'000'000;
  if (o.name == "bipartition") return 3'000'000;
  if (spec.algorithm.scheduler != SchedulerKind::Static) return std::nullopt;

  const long double n = static_cast<long double>(o.n);
  std::uint64_t generations = 0;
  if (o.name == "onemax") {
    generations = saturate(std::pow(n, 4.0L) * std::log(n));
  } else if (o.name == "leadingones") {
    generations = saturate(std::pow(n, 5.0L));
  } else if (o.name == "jump") {
    generations = saturate(std::pow(n, static_cast<long double>(o.k) / 2.0L));
  } else if (o.name == "dlb") {
    generations = saturate(10.0L * std::pow(n, 5.0L));
  } else {
    return std::nullopt;
  }
  return saturating_mul(generations, evaluations_per_generation(static_kernel(spec.algorithm)));
}

void validate(const ExperimentSpec& spec) {
  if (spec.repetitions < 1) throw ConfigError("repetitions must be at least 1");
  if (spec.threads < 1) throw ConfigError("threads must be at least 1");
  if (!(spec.objective.noise_variance >= 0.0) || !std::isfinite(spec.objective.noise_variance)) {
    throw ConfigError("noise_variance must be finite and non-negative");
  }
  const auto obj = build_objective(spec.objective);
  const AlgorithmSpec& alg = spec.algorithm;
  const std::size_t n = obj->dimension();

  switch (alg.scheduler) {
    case SchedulerKind::Static:
      static_kernel(alg);
      break;
    case SchedulerKind::SmartRestart: {
      SmartRestartConfig cfg;
      cfg.update_factor = alg.update_factor;
      cfg.budget_factor = resolve_budget_factor(alg, n);
      cfg.validate();
      kernel_factory(alg)(cfg.initial_parameter);
      break;
    }
    case SchedulerKind::ParallelRun:
      if (alg.kernel != KernelKind::Cga) throw ConfigError("the parallel-run scheduler supports only the cGA");
      break;
    case SchedulerKind::HL:
    case SchedulerKind::AH: {
      TriggeredRestartConfig cfg;
      cfg.trigger = alg.scheduler == SchedulerKind::HL ? TriggerKind::HL : TriggerKind::AH;
      cfg.update_factor = alg.update_factor;
      cfg.ah_epsilon = alg.ah_epsilon;
      cfg.validate();
      kernel_factory(alg)(cfg.initial_parameter);
      break;
    }
  }

  const bool capped = !spec.uncapped && (spec.eval_cap || default_eval_cap(spec));
  if (!capped && spec.objective.name == "constant") {
    throw ConfigError("the constant objective has no optimum and needs an eval_cap");
  }
}

void validate(const SweepSpec& sweep) {
  static const std::set<std::string> axes{"mu",      "lambda",         "eta", "rho", "budget_factor",
                                          "update_factor", "noise_variance", "n",   "k",   "density"};
  if (!axes.count(sweep.parameter)) throw ConfigError("unknown sweep parameter '" + sweep.parameter + "'");
  if (sweep.values.empty()) throw ConfigError("sweep axis has no values");
  for (std::size_t i = 0; i < sweep.values.size(); ++i) {
    if (!std::isfinite(sweep.values[i])) throw ConfigError("sweep axis values must be finite");
    if (i > 0 && !(sweep.values[i - 1] < sweep.values[i])) {
      throw ConfigError("sweep axis values must be distinct and sorted ascending");
    }
  }
  for (double v : sweep.values) validate(apply_axis(sweep.base, sweep.parameter, v));
}

ExperimentSpec apply_axis(const ExperimentSpec& base, const std::string& parameter, double value) {
  ExperimentSpec spec = base;
  AlgorithmSpec& alg = spec.algorithm;
  if (parameter == "mu") {
    alg.mu = integral_axis(parameter, value);
  } else if (parameter == "lambda") {
    alg.lambda = integral_axis(parameter, value);
  } else if (parameter == "eta") {
    alg.eta = value;
  } else if (parameter == "rho") {
    alg.rho = value;
  } else if (parameter == "budget_factor") {
    alg.budget_factor = value;
    alg.budget_rule.reset();
  } else if (parameter == "update_factor") {
    alg.update_factor = value;
  } else if (parameter == "noise_variance") {
    spec.objective.noise_variance = value;
  } else if (parameter == "n") {
    spec.objective.n = integral_axis(parameter, value);
  } else if (parameter == "k") {
    spec.objective.k = integral_axis(parameter, value);
  } else if (parameter == "density") {
    spec.objective.density = value;
  } else {
    throw ConfigError("unknown sweep parameter '" + parameter + "'");
  }
  return spec;
}

std::string format_axis_value(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

RunResult run_once(const ExperimentSpec& spec, const Objective& obj, std::optional<std::uint64_t> cap,
                   std::uint64_t stream_id) {
  const AlgorithmSpec& alg = spec.algorithm;
  const NoiseModel noise{spec.objective.noise_variance};
  RngStream rng(spec.base_seed, stream_id);
  switch (alg.scheduler) {
    case SchedulerKind::Static: {
      RunOutcome out = run_kernel(static_kernel(alg), obj, noise, cap, rng);
      return {out.success, out.evaluations, out.generations};
    }
    case SchedulerKind::SmartRestart: {
      SmartRestartConfig cfg;
      cfg.update_factor = alg.update_factor;
      cfg.budget_factor = resolve_budget_factor(alg, obj.dimension());
      cfg.global_eval_cap = cap;
      ScheduleOutcome out = smart_restart_run(kernel_factory(alg), obj, noise, cfg, rng);
      return {out.success, out.evaluations, out.generations};
    }
    case SchedulerKind::ParallelRun: {
      ParallelRunOutcome out = parallel_run(obj, noise, rng, cap, alg.margins);
      return {out.success, out.evaluations, out.generations};
    }
    case SchedulerKind::HL:
    case SchedulerKind::AH: {
      TriggeredRestartConfig cfg;
      cfg.trigger = alg.scheduler == SchedulerKind::HL ? TriggerKind::HL : TriggerKind::AH;
      cfg.update_factor = alg.update_factor;
      cfg.ah_epsilon = alg.ah_epsilon;
      cfg.global_eval_cap = cap;
      ScheduleOutcome out = triggered_restart_run(kernel_factory(alg), obj, noise, cfg, rng);
      return {out.success, out.evaluations, out.generations};
    }
  }
  throw ConfigError("unknown scheduler");
}

std::vector<RunRecord> run_experiment(const ExperimentSpec& spec, const std::string& axis) {
  validate(spec);
  const auto obj = build_objective(spec.objective);
  std::optional<std::uint64_t> cap;
  if (!spec.uncapped) cap = spec.eval_cap ? spec.eval_cap : default_eval_cap(spec);

  std::vector<RunRecord> records(spec.repetitions);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < records.size(); i = next++) {
      const std::uint64_t stream = i + 1;
      const auto start = std::chrono::steady_clock::now();
      RunResult r = run_once(spec, *obj, cap, stream);
      const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - start;
      records[i] = RunRecord{axis, stream, r.success, r.evaluations, r.generations, wall.count()};
    }
  };

  const std::size_t threads = std::min(spec.threads, spec.repetitions);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return records;
}

std::vector<RunRecord> run_sweep(const SweepSpec& sweep) {
  validate(sweep);
  std::vector<RunRecord> all;
  for (double v : sweep.values) {
    auto recs = run_experiment(apply_axis(sweep.base, sweep.parameter, v), format_axis_value(v));
    all.insert(all.end(), recs.begin(), recs.end());
  }
  return all;
}

std::uint64_t nearest_rank(const std::vector<std::uint64_t>& sorted, std::uint64_t num, std::uint64_t den) {
  if (sorted.empty()) throw std::invalid_argument("nearest_rank of an empty sample");
  const std::uint64_t size = sorted.size();
  std::uint64_t rank = (num * size + den - 1) / den;
  rank = std::clamp<std::uint64_t>(rank, 1, size);
  return sorted[rank - 1];
}

std::vector<SummaryRow> summarize(const std::vector<RunRecord>& records) {
  if (records.empty()) throw std::invalid_argument("cannot summarize an empty set of records");
  std::vector<std::string> order;
  for (const auto& r : records) {
    if (std::find(order.begin(), order.end(), r.axis) == order.end()) order.push_back(r.axis);
  }
  std::vector<SummaryRow> rows;
  for (const auto& axis : order) {
    std::vector<std::uint64_t> evals;
    SummaryRow row;
    row.axis = axis;
    for (const auto& r : records) {
      if (r.axis != axis) continue;
      evals.push_back(r.evaluations);
      (r.success ? row.successes : row.censored) += 1;
    }
    std::sort(evals.begin(), evals.end());
    row.q1 = nearest_rank(evals, 1, 4);
    row.median = nearest_rank(evals, 1, 2);
    row.q3 = nearest_rank(evals, 3, 4);
    rows.push_back(row);
  }
  return rows;
}

void write_runs_csv(std::ostream& os, const std::vector<RunRecord>& records) {
  os << "axis,seed,success,evaluations,generations\n";
  for (const auto& r : records) {
    os << r.axis << ',' << r.seed << ',' << (r.success ? 1 : 0) << ',' << r.evaluations << ',' << r.generations
       << '\n';
  }
}

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
  os << "axis,median,q1,q3,successes,censored\n";
  for (const auto& r : rows) {
    os << r.axis << ',' << r.median << ',' << r.q1 << ',' << r.q3 << ',' << r.successes << ',' << r.censored
       << '\n';
  }
}

}  // namespace eda
