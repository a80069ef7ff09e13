#pragma once

// The qgate subcommands. Each writes its artifacts into one output directory
// and returns a process exit code.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "qgate/cli/config.hpp"

namespace qgate::cli {

enum ExitCode : int { kSuccess = 0, kValidationFailure = 1, kRuntimeFailure = 2 };

/// Field used when no GA stage precedes the gradient stage.
PiecewiseField initial_field(FieldInit init, const SystemSpec& spec, const TimeGrid& grid);

struct RecipeResult {
  PiecewiseField field;
  std::optional<GaResult> ga;
  std::optional<OptimReport> gradient;
  double fidelity = 0.0;
  double entropy = 0.0;
};

/// GA then gradient, in the configured stage order. A warm field replaces
/// the GA stage and seeds the gradient stage directly.
RecipeResult run_recipe(const SystemSpec& spec, const GateTarget& target,
                        const TimeGrid& grid, const OptimizerBlock& optimizer,
                        const PiecewiseField* warm = nullptr);

struct CommandArgs {
  RunConfig config;
  std::filesystem::path out;
  std::optional<std::filesystem::path> field;
  std::optional<std::filesystem::path> samples;
};

int cmd_optimize(const CommandArgs& args, std::ostream& log);
int cmd_sweep(const CommandArgs& args, std::ostream& log);
int cmd_entropy(const CommandArgs& args, std::ostream& log);
int cmd_ensemble(const CommandArgs& args, std::ostream& log);
int cmd_check(const CommandArgs& args, std::ostream& log);

}  // namespace qgate::cli
