#include <gtest/gtest.h>

#include <algorithm>

#include "qgate/ga.hpp"

using namespace qgate;

namespace {

GaConfig small_config(std::uint64_t seed) {
  GaConfig c;
  c.population = 16;
  c.generations = 6;
  c.seed = seed;
  c.policy = ExecPolicy::serial;
  return c;
}

}  // namespace

TEST(Synthesize, ZeroAmplitudes) {
  const TimeGrid g{5.0, 50};
  const ParamField pf = ParamField::from_genome({0.0, 1.3, 0.2, 0.0, 0.7, 1.0},
                                                Envelope::sin_squared, g);
  for (double c : synthesize(pf).values) EXPECT_EQ(c, 0.0);
}

TEST(Synthesize, SingleFlatComponentIsCosine) {
  const TimeGrid g{10.0, 100};
  const PiecewiseField f =
      synthesize(ParamField::from_genome({1.0, 1.0, 0.0}, Envelope::flat, g));
  for (int k = 0; k < g.steps; ++k) EXPECT_NEAR(f.values[k], std::cos(g.midpoint(k)), 1e-15);
}

TEST(Synthesize, EnvelopeTurnOn) {
  const TimeGrid g{12.0, 240};
  const GaBounds b;
  std::vector<double> genes;
  for (int l = 0; l < b.components; ++l) genes.insert(genes.end(), {b.amplitude_max, 1.0, 0.0});
  const PiecewiseField f = synthesize(ParamField::from_genome(genes, Envelope::sin_squared, g));
  const double a_max = b.amplitude_max * b.components;
  const double s = std::sin(M_PI * g.dt() / (2.0 * g.t_final));
  EXPECT_LE(std::abs(f.values.front()), a_max * s * s + 1e-15);
  EXPECT_LE(std::abs(f.values.back()), a_max * s * s + 1e-15);
  EXPECT_LE(f.max_amplitude(), a_max + 1e-12);
}

TEST(Genome, RoundTrip) {
  const std::vector<double> genes{0.1, 1.2, 3.0, 0.4, 0.6, 5.0};
  const ParamField pf = ParamField::from_genome(genes, Envelope::flat, TimeGrid{1.0, 4});
  EXPECT_EQ(pf.genome(), genes);
  EXPECT_THROW(ParamField::from_genome({1.0, 2.0}, Envelope::flat, TimeGrid{1.0, 4}),
               std::invalid_argument);
}

TEST(GaConfig, Validation) {
  GaConfig c;
  c.population = 1;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = GaConfig{};
  c.elitism = c.population;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = GaConfig{};
  c.mutation_rate = 1.5;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  GaBounds b;
  b.frequency_min = 3.0;
  EXPECT_THROW(b.validate(), std::invalid_argument);
}

TEST(Ga, DeterministicUnderSeed) {
  const SystemSpec s = default_spec(1, 0.02, 0);
  const TimeGrid g{6.0, 120};
  const GaResult a = ga_optimize(s, GateTarget::hadamard(), g, small_config(42));
  const GaResult b = ga_optimize(s, GateTarget::hadamard(), g, small_config(42));
  EXPECT_EQ(a.history, b.history);
  EXPECT_EQ(a.best.genome(), b.best.genome());
  const GaResult c = ga_optimize(s, GateTarget::hadamard(), g, small_config(43));
  EXPECT_NE(a.best.genome(), c.best.genome());
}

TEST(Ga, ElitismKeepsBestNonDecreasing) {
  const SystemSpec s = default_spec(0, 0, 0);
  GaConfig c = small_config(7);
  c.generations = 20;
  const GaResult r = ga_optimize(s, GateTarget::hadamard(), TimeGrid{12.0, 240}, c);
  ASSERT_EQ(r.history.size(), 21u);
  for (std::size_t i = 1; i < r.history.size(); ++i) EXPECT_GE(r.history[i], r.history[i - 1]);
  EXPECT_EQ(r.history.back(), r.best_fidelity);
}

TEST(Ga, BestIsReproducibleAndWithinBounds) {
  const SystemSpec s = default_spec(1, 0.02, 0);
  const TimeGrid g{6.0, 120};
  GaBounds b;
  b.components = 3;
  const GaResult r = ga_optimize(s, GateTarget::hadamard(), g, small_config(5), b);
  ASSERT_EQ(r.best.components.size(), 3u);
  for (const auto& comp : r.best.components) {
    EXPECT_GE(comp.amplitude, 0.0);
    EXPECT_LE(comp.amplitude, b.amplitude_max);
    EXPECT_GE(comp.frequency, b.frequency_min);
    EXPECT_LE(comp.frequency, b.frequency_max);
    EXPECT_GE(comp.phase, 0.0);
    EXPECT_LT(comp.phase, 2 * M_PI);
  }
  const double f = evaluate_gate(s, synthesize(r.best), GateTarget::hadamard()).fidelity;
  EXPECT_NEAR(f, r.best_fidelity, 1e-12);
}

TEST(Ga, DegeneratePopulationReturnsBetterOfTwo) {
  const SystemSpec s = default_spec(0, 0, 0);
  const TimeGrid g{4.0, 80};
  GaConfig c = small_config(3);
  c.population = 2;
  c.generations = 0;
  c.elitism = 1;
  const GaBounds b;
  const auto initial = initial_population(c, b);
  const auto f = evaluate_population(s, GateTarget::hadamard(), g, b.envelope, initial,
                                     ExecPolicy::serial);
  const std::size_t winner = f[1] > f[0] ? 1 : 0;
  const GaResult r = ga_optimize(s, GateTarget::hadamard(), g, c, b);
  ASSERT_EQ(r.history.size(), 1u);
  EXPECT_EQ(r.best_fidelity, f[winner]);
  EXPECT_EQ(r.best.genome(), initial[winner]);
}

TEST(Ga, SerialAndParallelAgree) {
  const SystemSpec s = default_spec(1, 0.02, 0);
  const TimeGrid g{6.0, 120};
  GaConfig c = small_config(11);
  const GaResult a = ga_optimize(s, GateTarget::hadamard(), g, c);
  c.policy = ExecPolicy::parallel;
  const GaResult b = ga_optimize(s, GateTarget::hadamard(), g, c);
  EXPECT_EQ(a.history, b.history);
  EXPECT_EQ(a.best.genome(), b.best.genome());
}

TEST(Ga, FreeQubitHadamard) {
  const SystemSpec s = default_spec(0, 0, 0);
  GaConfig c;
  c.generations = 200;
  c.seed = 5;
  const GaResult r = ga_optimize(s, GateTarget::hadamard(), TimeGrid::with_max_step(12.0), c);
  EXPECT_GE(r.best_fidelity, 0.999);
}
