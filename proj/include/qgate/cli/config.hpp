#pragma once

// Run configuration for the qgate command-line tool.
//
// A single JSON document with nested blocks:
//
//   {
//     "seed": 1,
//     "system":    {"n": 1, "gamma": 0.02, "gamma_prime": 0.0,
//                   "frequencies": [...], "mu": 1.0, "couplings": [[...]]},
//     "grid":      {"t_final": 25.0, "steps": 500, "max_dt": 0.05},
//     "target":    {"gate": "hadamard"} | {"matrix": [[[re, im], ...], ...]},
//     "optimizer": {"stages": ["ga", "gradient"], "init": "zero",
//                   "ga": {...}, "gradient": {...}},
//     "ensemble":  {"size": 1000, "gamma_mean": 0.02, "gamma_sd": 0.0025,
//                   "env_ratio": 0.0, "bins": 40},
//     "sweep":     {"gammas": [0.0, 0.01, 0.02], "warm_start": true,
//                   "cross_n": [4]},
//     "output":    {"directory": "out"}
//   }
//
// Every block and key is optional except system.n and grid.t_final. Unknown
// keys are rejected; errors carry the JSON path of the offending value.

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qgate/ga.hpp"
#include "qgate/gradient.hpp"
#include "qgate/robustness.hpp"

namespace qgate::cli {

using json = nlohmann::json;

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

enum class Stage { ga, gradient };

enum class FieldInit { zero, resonant };

struct SystemBlock {
  int n = 1;
  double gamma = 0.02;
  double gamma_prime = 0.0;
  std::optional<std::vector<double>> frequencies;
  double mu = 1.0;
  std::optional<RealMatrix> couplings;
};

struct GridBlock {
  double t_final = 25.0;
  int steps = 0;  // 0: derived from max_dt
  double max_dt = 0.05;
};

struct TargetBlock {
  std::string gate = "hadamard";
  std::optional<ComplexMatrix> matrix;
};

struct OptimizerBlock {
  std::vector<Stage> stages{Stage::ga, Stage::gradient};
  FieldInit init = FieldInit::zero;
  GaConfig ga;
  GaBounds bounds;
  GradConfig gradient;
};

struct EnsembleBlock {
  int size = 10000;
  std::optional<double> gamma_mean;  // defaults to system.gamma
  std::optional<double> gamma_sd;    // defaults to gamma_mean / 8
  std::optional<double> env_ratio;   // defaults to gamma_prime / gamma
  int bins = 40;
};

struct SweepBlock {
  std::vector<double> gammas;
  bool warm_start = true;
  std::vector<int> cross_n;
};

struct RunConfig {
  std::uint64_t seed = 1;
  SystemBlock system;
  GridBlock grid;
  TargetBlock target;
  OptimizerBlock optimizer;
  EnsembleBlock ensemble;
  SweepBlock sweep;
  std::string output_directory = "out";

  /// Throws ConfigError with a JSON path.
  static RunConfig from_json(const json& doc);
  static RunConfig load(const std::filesystem::path& path);

  /// Fully resolved configuration (defaults filled in) for embedding in
  /// output artifacts.
  json to_json() const;

  /// Cross-checks blocks against module preconditions; throws ConfigError.
  void validate() const;

  /// Overrides the run seed and every derived seed.
  void set_seed(std::uint64_t s);

  SystemSpec system_spec() const;
  SystemSpec system_spec(int n, double gamma) const;
  TimeGrid time_grid() const;
  GateTarget gate() const;
  EnsembleConfig ensemble_config() const;
};

}  // namespace qgate::cli
