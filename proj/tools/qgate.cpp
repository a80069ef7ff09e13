// qgate: optimise and analyse one-qubit gates in a spin environment.

#include <omp.h>

#include <iostream>

#include <CLI11.hpp>

#include "qgate/cli/commands.hpp"

using namespace qgate::cli;

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  int threads = 0;
  std::optional<std::string> field;
  std::optional<std::string> samples;
  std::vector<double> gammas;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON run configuration")->required();
  cmd->add_option("--seed", f.seed, "override the configured seed");
  cmd->add_option("--out", f.out, "output directory (overrides output.directory)");
  cmd->add_option("--threads", f.threads, "OpenMP threads (0: runtime default)")
      ->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal control of a qubit coupled to a spin environment"};
  app.require_subcommand(1);
  Flags f;

  auto* optimize = app.add_subcommand("optimize", "two-stage GA and gradient optimisation");
  add_common(optimize, f);
  optimize->add_option("--field", f.field, "seed the gradient stage with this field CSV");

  auto* sweep = app.add_subcommand("sweep", "fidelity against coupling strength");
  add_common(sweep, f);
  sweep->add_option("--field", f.field, "evaluate this fixed field instead of optimising");
  sweep->add_option("--gammas", f.gammas, "override sweep.gammas");

  auto* entropy = app.add_subcommand("entropy", "entropy traces with and without control");
  add_common(entropy, f);
  entropy->add_option("--field", f.field, "field CSV")->required();

  auto* ensemble = app.add_subcommand("ensemble", "robustness over random couplings");
  add_common(ensemble, f);
  ensemble->add_option("--field", f.field, "field CSV")->required();
  ensemble->add_option("--samples", f.samples,
                       "recompute statistics from a stored samples.csv");

  auto* check = app.add_subcommand("check", "invariant suite for the configured system");
  add_common(check, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kSuccess : kValidationFailure;
  }

  if (f.threads > 0) omp_set_num_threads(f.threads);

  try {
    CommandArgs args{RunConfig::load(f.config), {}, {}, {}};
    if (f.seed) args.config.set_seed(*f.seed);
    if (!f.gammas.empty()) args.config.sweep.gammas = f.gammas;
    if (f.out) args.config.output_directory = *f.out;
    args.config.validate();
    args.out = args.config.output_directory;
    if (f.field) args.field = *f.field;
    if (f.samples) args.samples = *f.samples;

    if (*optimize) return cmd_optimize(args, std::cout);
    if (*sweep) return cmd_sweep(args, std::cout);
    if (*entropy) return cmd_entropy(args, std::cout);
    if (*ensemble) return cmd_ensemble(args, std::cout);
    return cmd_check(args, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kValidationFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
}
