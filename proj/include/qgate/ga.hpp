#pragma once

// Genetic search over spectrally parameterised control fields
//   C(t) = f(t) sum_l A_l cos(w_l t + theta_l).
//
// Each individual is a flat genome [A_0, w_0, theta_0, A_1, ...]. Fitness is
// the gate fidelity. Randomness is drawn from per-(generation, individual)
// substreams of the run seed, so results do not depend on how fitness
// evaluations are scheduled.

#include <cstdint>
#include <vector>

#include "qgate/measures.hpp"

namespace qgate {

enum class Envelope { sin_squared, flat };

/// f(t): sin^2(pi t / t_f) or 1.
double envelope_value(Envelope envelope, double t, double t_final);

struct SpectralComponent {
  double amplitude = 0.0;
  double frequency = 1.0;
  double phase = 0.0;  // [0, 2 pi)
};

struct ParamField {
  std::vector<SpectralComponent> components;
  Envelope envelope = Envelope::sin_squared;
  TimeGrid grid;

  std::vector<double> genome() const;
  static ParamField from_genome(const std::vector<double>& genes,
                                Envelope envelope, const TimeGrid& grid);
};

/// Samples C(t) at interval midpoints.
PiecewiseField synthesize(const ParamField& pf);

struct GaBounds {
  int components = 8;
  /// Per-component amplitude cap; the default keeps |C(t)| <= 4.
  double amplitude_max = 0.5;
  double frequency_min = 0.5;
  double frequency_max = 2.0;
  Envelope envelope = Envelope::sin_squared;

  void validate() const;
};

struct GaConfig {
  int population = 250;
  int generations = 100;
  int tournament_size = 3;
  double crossover_rate = 0.9;
  double mutation_rate = 0.2;   // per-gene probability
  double mutation_scale = 0.1;  // Gaussian width as a fraction of gene range
  double mutation_decay = 0.98;  // width multiplier per generation
  int elitism = 2;
  std::uint64_t seed = 1;
  ExecPolicy policy = ExecPolicy::parallel;

  void validate() const;
};

struct GaResult {
  ParamField best;
  double best_fidelity = 0.0;
  /// Best fidelity after generation 0 (the initial population), 1, ...
  std::vector<double> history;
  /// Trailing generations without improvement.
  int stagnant_generations = 0;
};

/// Fidelity of every genome. The index-parallel fitness kernel.
std::vector<double> evaluate_population(
    const SystemSpec& spec, const GateTarget& target, const TimeGrid& grid,
    Envelope envelope, const std::vector<std::vector<double>>& genomes,
    ExecPolicy policy);

/// Generation 0: uniform draws within the bounds.
std::vector<std::vector<double>> initial_population(const GaConfig& config,
                                                    const GaBounds& bounds);

GaResult ga_optimize(const SystemSpec& spec, const GateTarget& target,
                     const TimeGrid& grid, const GaConfig& config,
                     const GaBounds& bounds = {});

}  // namespace qgate
