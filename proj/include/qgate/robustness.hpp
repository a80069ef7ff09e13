#pragma once

// Monte Carlo robustness of a fixed field against normally distributed
// coupling strengths.

#include <cstdint>
#include <span>
#include <vector>

#include "qgate/measures.hpp"

namespace qgate {

struct EnsembleConfig {
  int size = 10000;
  double gamma_mean = 0.02;
  double gamma_sd = 0.0025;
  /// Environment pairs are drawn from Normal(ratio * mean, ratio * sd).
  double env_ratio = 0.0;
  std::uint64_t seed = 1;
  ExecPolicy policy = ExecPolicy::parallel;

  /// sd = mean / 8 for both coupling families.
  static EnsembleConfig relative(double gamma_mean, double env_ratio, int size,
                                 std::uint64_t seed);

  void validate() const;
};

struct EnsembleSample {
  std::uint64_t draw = 0;
  std::vector<double> couplings;  // upper triangle, row-major (0,1),(0,2),...
  double fidelity = 0.0;
  double entropy = 0.0;
};

struct EnsembleReport {
  std::vector<EnsembleSample> samples;
  double f_mean = 0.0;
  double f_sd = 0.0;
  double s_mean = 0.0;
  double s_sd = 0.0;
};

/// Couplings of draw `draw_index`: qubit-environment pairs from
/// Normal(gamma_mean, gamma_sd), environment pairs from
/// Normal(env_ratio * gamma_mean, env_ratio * gamma_sd). Pairs that are zero
/// in `base` stay exactly zero. Each draw has its own generator keyed by
/// (seed, draw_index).
SystemSpec sample_couplings(const SystemSpec& base,
                            const EnsembleConfig& config,
                            std::uint64_t draw_index);

EnsembleReport evaluate_ensemble(const PiecewiseField& field,
                                 const SystemSpec& base,
                                 const GateTarget& target,
                                 const EnsembleConfig& config);

struct Moments {
  double mean = 0.0;
  double sd = 0.0;  // population (1/L) standard deviation
};

/// Throws std::invalid_argument on empty input.
Moments statistics(std::span<const double> values);

/// Recomputes f/s moments from the stored samples.
void summarize(EnsembleReport& report);

struct Histogram {
  std::vector<double> edges;  // bins + 1
  std::vector<std::size_t> counts;
};

/// Uniform bins over [min, max]; the maximum lands in the last bin.
Histogram histogram(std::span<const double> values, int bins);

/// Population skewness (third standardised moment); 0 for constant input.
double skewness(std::span<const double> values);

std::vector<double> upper_triangle(const RealMatrix& couplings);

}  // namespace qgate
