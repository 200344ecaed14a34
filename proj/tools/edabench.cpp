// edabench: command-line front end for the EDA benchmark harness.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "eda/combinatorial.hpp"
#include "eda/error.hpp"
#include "eda/harness.hpp"
#include "eda/restart.hpp"

namespace {

enum Exit : int {
  kOk = 0,
  kUsage = 64,         // unknown subcommand or bad flags
  kConfig = 65,        // malformed or invalid configuration
  kUnwritable = 73,    // output path cannot be created
  kRuntime = 70,
};

struct RunFlags {
  std::string config;
  std::optional<std::size_t> threads;
  std::string output;
  std::string summary;
};

std::string default_summary_path(const std::string& runs) {
  std::filesystem::path p(runs);
  std::string stem = p.stem().string();
  return (p.parent_path() / (stem + "_summary.csv")).string();
}

struct OutputFiles {
  std::ofstream runs;
  std::ofstream summary;
};

// Opens both outputs up front so an unwritable path fails before any run.
std::optional<OutputFiles> open_outputs(const std::string& runs, const std::string& summary) {
  OutputFiles files;
  files.runs.open(runs);
  if (!files.runs) {
    std::cerr << "error: cannot write output file '" << runs << "'\n";
    return std::nullopt;
  }
  files.summary.open(summary);
  if (!files.summary) {
    std::cerr << "error: cannot write summary file '" << summary << "'\n";
    return std::nullopt;
  }
  return files;
}

void apply_overrides(eda::ExperimentSpec& spec, const RunFlags& flags) {
  if (flags.threads) spec.threads = *flags.threads;
  if (!flags.output.empty()) spec.output = flags.output;
  if (!flags.summary.empty()) spec.summary_output = flags.summary;
  if (spec.output.empty()) spec.output = "runs.csv";
  if (spec.summary_output.empty()) spec.summary_output = default_summary_path(spec.output);
}

int write_results(const eda::ExperimentSpec& spec, const std::vector<eda::RunRecord>& records, OutputFiles& files) {
  eda::write_runs_csv(files.runs, records);
  eda::write_summary_csv(files.summary, eda::summarize(records));
  files.runs.close();
  files.summary.close();
  if (!files.runs || !files.summary) {
    std::cerr << "error: failed while writing results\n";
    return kUnwritable;
  }
  std::size_t successes = 0;
  for (const auto& r : records) successes += r.success ? 1 : 0;
  std::cout << records.size() << " runs, " << successes << " successful\n"
            << "runs:    " << spec.output << "\n"
            << "summary: " << spec.summary_output << "\n";
  return kOk;
}

int cmd_run(const RunFlags& flags) {
  eda::ExperimentSpec spec = eda::parse_experiment(eda::read_json_file(flags.config));
  apply_overrides(spec, flags);
  eda::validate(spec);
  auto files = open_outputs(spec.output, spec.summary_output);
  if (!files) return kUnwritable;
  return write_results(spec, eda::run_experiment(spec), *files);
}

int cmd_sweep(const RunFlags& flags) {
  eda::SweepSpec sweep = eda::parse_sweep(eda::read_json_file(flags.config));
  apply_overrides(sweep.base, flags);
  eda::validate(sweep);
  auto files = open_outputs(sweep.base.output, sweep.base.summary_output);
  if (!files) return kUnwritable;
  return write_results(sweep.base, eda::run_sweep(sweep), *files);
}

void add_run_flags(CLI::App* cmd, RunFlags& flags) {
  cmd->add_option("-c,--config", flags.config, "JSON experiment file")->required();
  cmd->add_option("-j,--threads", flags.threads, "worker threads for repetitions");
  cmd->add_option("-o,--output", flags.output, "per-run CSV path");
  cmd->add_option("-s,--summary", flags.summary, "summary CSV path");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benchmark harness for univariate EDAs with restart schedulers"};
  app.require_subcommand(1);

  RunFlags run_flags;
  auto* run = app.add_subcommand("run", "run one experiment from a JSON config");
  add_run_flags(run, run_flags);

  RunFlags sweep_flags;
  auto* sweep = app.add_subcommand("sweep", "run an experiment across a parameter axis");
  add_run_flags(sweep, sweep_flags);

  std::size_t nodes = 0;
  double density = 0.5;
  std::uint64_t seed = 1;
  std::string kind = "maxcut";
  std::string out;
  auto* gen = app.add_subcommand("gen-instance", "write a planted max-cut/bipartition instance");
  gen->add_option("--nodes", nodes, "number of nodes (even)")->required();
  gen->add_option("--density", density, "probability of each cross edge")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--seed", seed, "generator seed");
  gen->add_option("--kind", kind, "maxcut or bipartition")->check(CLI::IsMember({"maxcut", "bipartition"}));
  gen->add_option("--out", out, "output file (stdout if omitted)");

  eda::RuntimeBoundInputs in{};
  auto* bound = app.add_subcommand("bound", "evaluate the smart-restart expected runtime bound");
  bound->add_option("--p", in.success_probability, "success probability of a good leg")->required();
  bound->add_option("--U", in.update_factor, "update factor")->required();
  bound->add_option("--b", in.budget_factor, "budget factor")->required();
  bound->add_option("--mu-tilde", in.mu_tilde, "smallest good parameter")->required();
  bound->add_option("--T", in.time_factor, "runtime per unit parameter")->required();

  std::string kernel = "cga";
  std::size_t n = 0;
  std::optional<double> eta;
  std::optional<double> rho;
  std::string variant = "aggressive";
  auto* rec = app.add_subcommand("recommend-b", "print the recommended budget factor");
  rec->add_option("--kernel", kernel, "cga, umda or pbil");
  rec->add_option("--n", n, "problem size (conservative variant)");
  rec->add_option("--eta", eta, "selection pressure");
  rec->add_option("--rho", rho, "learning rate");
  rec->add_option("--variant", variant, "aggressive or conservative");

  if (argc > 1 && argv[1][0] != '-') {
    const std::string name = argv[1];
    if (app.get_subcommand_no_throw(name) == nullptr) {
      std::cerr << "error: unknown subcommand '" << name << "' (expected run, sweep, gen-instance, bound, recommend-b)\n";
      return kUsage;
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ExtrasError& e) {
    std::cerr << "error: unknown subcommand or argument: " << e.what() << "\n";
    return kUsage;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  try {
    if (*run) return cmd_run(run_flags);
    if (*sweep) return cmd_sweep(sweep_flags);
    if (*gen) {
      eda::RngStream rng(seed, 0);
      eda::PlantedInstance inst = eda::planted_maxcut(nodes, density, rng);
      if (out.empty()) {
        eda::write_instance(std::cout, inst);
      } else {
        std::ofstream os(out);
        if (!os) {
          std::cerr << "error: cannot write instance file '" << out << "'\n";
          return kUnwritable;
        }
        eda::write_instance(os, inst);
      }
      return kOk;
    }
    if (*bound) {
      std::cout << std::setprecision(12) << eda::restart_runtime_bound(in) << "\n";
      return kOk;
    }
    if (*rec) {
      const double b = eda::recommended_budget_factor(eda::parse_kernel_kind(kernel), n, eta, rho,
                                                      eda::parse_budget_variant(variant));
      std::cout << std::setprecision(12) << b << "\n";
      return kOk;
    }
  } catch (const eda::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kUsage;
}
