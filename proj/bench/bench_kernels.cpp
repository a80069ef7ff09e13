// Serial reference vs OpenMP for the index-parallel kernels.
//
//   ./qgate_bench --benchmark_filter=Steps

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "qgate/ga.hpp"
#include "qgate/gradient.hpp"
#include "qgate/robustness.hpp"

using namespace qgate;

namespace {

PiecewiseField test_field(const TimeGrid& grid) {
  PiecewiseField f = PiecewiseField::zeros(grid);
  for (int k = 0; k < grid.steps; ++k) {
    const double t = grid.midpoint(k);
    f.values[static_cast<std::size_t>(k)] = std::sin(M_PI * t / grid.t_final) * std::cos(t);
  }
  return f;
}

ExecPolicy policy_of(const benchmark::State& state) {
  return state.range(1) ? ExecPolicy::parallel : ExecPolicy::serial;
}

void BM_StepExponentials(benchmark::State& state) {
  const SystemSpec spec = default_spec(static_cast<int>(state.range(0)), 0.02, 0.0175);
  const PiecewiseField field = test_field(TimeGrid{25.0, 500});
  for (auto _ : state) {
    benchmark::DoNotOptimize(step_exponentials(spec, field, policy_of(state)));
  }
}

void BM_AssembleGradient(benchmark::State& state) {
  const SystemSpec spec = default_spec(static_cast<int>(state.range(0)), 0.02, 0.0175);
  const PiecewiseField field = test_field(TimeGrid{25.0, 500});
  const auto steps = step_exponentials(spec, field);
  const auto forward = accumulate(field.grid, steps, true).unitaries;
  const auto costate = accumulate_costate(
      steps, ComplexMatrix::Identity(forward[0].rows(), forward[0].cols()));
  const ComplexMatrix control = build_control_op(spec);
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble_gradient(steps, forward, costate, control,
                                               field.grid.dt(), policy_of(state)));
  }
}

void BM_EvaluatePopulation(benchmark::State& state) {
  const SystemSpec spec = default_spec(static_cast<int>(state.range(0)), 0.02, 0.0);
  const TimeGrid grid{25.0, 500};
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<double>> genomes(32);
  for (auto& g : genomes) {
    for (int c = 0; c < 8; ++c) {
      g.insert(g.end(), {0.5 * u(rng), 0.5 + 1.5 * u(rng), 6.28 * u(rng)});
    }
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_population(spec, GateTarget::hadamard(), grid,
                                                 Envelope::sin_squared, genomes,
                                                 policy_of(state)));
  }
}

void BM_EvaluateEnsemble(benchmark::State& state) {
  const SystemSpec spec = default_spec(static_cast<int>(state.range(0)), 0.02, 0.0175);
  const PiecewiseField field = test_field(TimeGrid{15.4, 308});
  EnsembleConfig config = EnsembleConfig::relative(0.02, 0.875, 32, 1);
  config.policy = policy_of(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        evaluate_ensemble(field, spec, GateTarget::hadamard(), config));
  }
}

}  // namespace

BENCHMARK(BM_StepExponentials)->ArgsProduct({{1, 2, 4}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AssembleGradient)->ArgsProduct({{1, 2, 4}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluatePopulation)->ArgsProduct({{1, 2}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluateEnsemble)->ArgsProduct({{1, 2}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
