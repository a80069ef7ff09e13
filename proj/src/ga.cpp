#include "qgate/ga.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

namespace qgate {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kGenesPerComponent = 3;

// Independent generator for (seed, generation, individual).
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t generation,
                          std::uint64_t individual) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(generation),
                    static_cast<std::uint32_t>(individual), 0x9a6au};
  return std::mt19937_64(seq);
}

struct GeneRange {
  double lo;
  double hi;
  bool periodic;
};

GeneRange gene_range(const GaBounds& b, std::size_t gene) {
  switch (gene % kGenesPerComponent) {
    case 0:
      return {0.0, b.amplitude_max, false};
    case 1:
      return {b.frequency_min, b.frequency_max, false};
    default:
      return {0.0, kTwoPi, true};
  }
}

double fit_to_range(double v, const GeneRange& r) {
  if (r.periodic) {
    v = std::fmod(v - r.lo, r.hi - r.lo);
    if (v < 0.0) v += r.hi - r.lo;
    return r.lo + v;
  }
  return std::clamp(v, r.lo, r.hi);
}

std::vector<double> random_genome(const GaBounds& b, std::mt19937_64& rng) {
  std::vector<double> genes(static_cast<std::size_t>(b.components) *
                            kGenesPerComponent);
  for (std::size_t i = 0; i < genes.size(); ++i) {
    const auto r = gene_range(b, i);
    genes[i] = std::uniform_real_distribution<double>(r.lo, r.hi)(rng);
    genes[i] = fit_to_range(genes[i], r);
  }
  return genes;
}

}  // namespace

double envelope_value(Envelope envelope, double t, double t_final) {
  if (envelope == Envelope::flat) return 1.0;
  const double s = std::sin(std::numbers::pi * t / t_final);
  return s * s;
}

std::vector<double> ParamField::genome() const {
  std::vector<double> genes;
  genes.reserve(components.size() * kGenesPerComponent);
  for (const auto& c : components) {
    genes.push_back(c.amplitude);
    genes.push_back(c.frequency);
    genes.push_back(c.phase);
  }
  return genes;
}

ParamField ParamField::from_genome(const std::vector<double>& genes,
                                   Envelope envelope, const TimeGrid& grid) {
  if (genes.size() % kGenesPerComponent != 0 || genes.empty()) {
    throw std::invalid_argument("genome length must be a positive multiple of 3");
  }
  ParamField pf;
  pf.envelope = envelope;
  pf.grid = grid;
  for (std::size_t i = 0; i < genes.size(); i += kGenesPerComponent) {
    pf.components.push_back({genes[i], genes[i + 1], genes[i + 2]});
  }
  return pf;
}

PiecewiseField synthesize(const ParamField& pf) {
  pf.grid.validate();
  PiecewiseField field = PiecewiseField::zeros(pf.grid);
  for (int k = 0; k < pf.grid.steps; ++k) {
    const double t = pf.grid.midpoint(k);
    double sum = 0.0;
    for (const auto& c : pf.components) {
      sum += c.amplitude * std::cos(c.frequency * t + c.phase);
    }
    field.values[static_cast<std::size_t>(k)] =
        envelope_value(pf.envelope, t, pf.grid.t_final) * sum;
  }
  return field;
}

void GaBounds::validate() const {
  if (components < 1) throw std::invalid_argument("ga: components must be >= 1");
  if (!(amplitude_max > 0.0)) {
    throw std::invalid_argument("ga: amplitude_max must be positive");
  }
  if (!(frequency_min > 0.0) || !(frequency_max > frequency_min)) {
    throw std::invalid_argument(
        "ga: need 0 < frequency_min < frequency_max");
  }
}

void GaConfig::validate() const {
  if (population < 2) throw std::invalid_argument("ga: population must be >= 2");
  if (generations < 0) throw std::invalid_argument("ga: generations must be >= 0");
  if (tournament_size < 1) {
    throw std::invalid_argument("ga: tournament_size must be >= 1");
  }
  auto is_rate = [](double r) { return r >= 0.0 && r <= 1.0; };
  if (!is_rate(crossover_rate) || !is_rate(mutation_rate)) {
    throw std::invalid_argument("ga: rates must lie in [0, 1]");
  }
  if (mutation_scale < 0.0 || !(mutation_decay > 0.0)) {
    throw std::invalid_argument(
        "ga: mutation_scale must be >= 0 and mutation_decay > 0");
  }
  if (elitism < 0 || elitism >= population) {
    throw std::invalid_argument("ga: elitism must be in [0, population)");
  }
}

std::vector<double> evaluate_population(
    const SystemSpec& spec, const GateTarget& target, const TimeGrid& grid,
    Envelope envelope, const std::vector<std::vector<double>>& genomes,
    ExecPolicy policy) {
  std::vector<double> fitness(genomes.size());
  for_each_index(genomes.size(), policy, [&](std::size_t i) {
    const auto field =
        synthesize(ParamField::from_genome(genomes[i], envelope, grid));
    const auto traj = propagate(spec, field, false);
    fitness[i] = distance(traj.final(), target, spec.n).fidelity;
  });
  return fitness;
}

std::vector<std::vector<double>> initial_population(const GaConfig& config,
                                                    const GaBounds& bounds) {
  config.validate();
  bounds.validate();
  std::vector<std::vector<double>> genomes(static_cast<std::size_t>(config.population));
  for_each_index(genomes.size(), config.policy, [&](std::size_t i) {
    auto rng = substream(config.seed, 0, i);
    genomes[i] = random_genome(bounds, rng);
  });
  return genomes;
}

GaResult ga_optimize(const SystemSpec& spec, const GateTarget& target,
                     const TimeGrid& grid, const GaConfig& config,
                     const GaBounds& bounds) {
  spec.validate();
  target.validate();
  grid.validate();
  config.validate();
  bounds.validate();

  const auto pop = static_cast<std::size_t>(config.population);
  std::vector<std::vector<double>> genomes = initial_population(config, bounds);
  std::vector<double> fitness = evaluate_population(
      spec, target, grid, bounds.envelope, genomes, config.policy);

  // Descending fitness, ties broken by index.
  auto ranking = [](const std::vector<double>& f) {
    std::vector<std::size_t> order(f.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return f[a] > f[b]; });
    return order;
  };

  GaResult result;
  auto order = ranking(fitness);
  result.history.push_back(fitness[order.front()]);

  const auto elite = static_cast<std::size_t>(config.elitism);
  for (int gen = 1; gen <= config.generations; ++gen) {
    const double width =
        config.mutation_scale * std::pow(config.mutation_decay, gen - 1);
    std::vector<std::vector<double>> next(pop);
    std::vector<double> next_fitness(pop, 0.0);
    for (std::size_t e = 0; e < elite; ++e) {
      next[e] = genomes[order[e]];
      next_fitness[e] = fitness[order[e]];
    }

    for_each_index(pop - elite, config.policy, [&](std::size_t c) {
      const std::size_t i = elite + c;
      auto rng = substream(config.seed, static_cast<std::uint64_t>(gen), i);
      std::uniform_int_distribution<std::size_t> pick(0, pop - 1);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      std::normal_distribution<double> normal(0.0, 1.0);
      auto tournament = [&] {
        std::size_t best = pick(rng);
        for (int t = 1; t < config.tournament_size; ++t) {
          const std::size_t cand = pick(rng);
          if (fitness[cand] > fitness[best] ||
              (fitness[cand] == fitness[best] && cand < best)) {
            best = cand;
          }
        }
        return best;
      };
      const std::size_t pa = tournament();
      const std::size_t pb = tournament();
      std::vector<double> child = genomes[pa];
      if (unit(rng) < config.crossover_rate) {
        for (std::size_t g = 0; g < child.size(); ++g) {
          if (unit(rng) < 0.5) child[g] = genomes[pb][g];
        }
      }
      for (std::size_t g = 0; g < child.size(); ++g) {
        if (unit(rng) < config.mutation_rate) {
          const auto r = gene_range(bounds, g);
          child[g] = fit_to_range(child[g] + width * (r.hi - r.lo) * normal(rng),
                                  r);
        }
      }
      next[i] = std::move(child);
    });

    std::vector<std::vector<double>> children(next.begin() + elite, next.end());
    const auto child_fitness = evaluate_population(
        spec, target, grid, bounds.envelope, children, config.policy);
    std::copy(child_fitness.begin(), child_fitness.end(),
              next_fitness.begin() + elite);

    genomes = std::move(next);
    fitness = std::move(next_fitness);
    order = ranking(fitness);
    const double best = fitness[order.front()];
    result.stagnant_generations =
        best > result.history.back() ? 0 : result.stagnant_generations + 1;
    result.history.push_back(best);
  }

  result.best =
      ParamField::from_genome(genomes[order.front()], bounds.envelope, grid);
  result.best_fidelity = fitness[order.front()];
  return result;
}

}  // namespace qgate
