#include "qgate/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace qgate {

EnsembleConfig EnsembleConfig::relative(double gamma_mean, double env_ratio,
                                        int size, std::uint64_t seed) {
  EnsembleConfig c;
  c.size = size;
  c.gamma_mean = gamma_mean;
  c.gamma_sd = gamma_mean / 8.0;
  c.env_ratio = env_ratio;
  c.seed = seed;
  return c;
}

void EnsembleConfig::validate() const {
  if (size < 1) throw std::invalid_argument("ensemble: size must be >= 1");
  if (gamma_sd < 0.0 || env_ratio < 0.0) {
    throw std::invalid_argument(
        "ensemble: standard deviation and env_ratio must be >= 0");
  }
  if (!std::isfinite(gamma_mean)) {
    throw std::invalid_argument("ensemble: gamma_mean must be finite");
  }
}

std::vector<double> upper_triangle(const RealMatrix& couplings) {
  std::vector<double> out;
  for (Eigen::Index i = 0; i < couplings.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < couplings.cols(); ++j) {
      out.push_back(couplings(i, j));
    }
  }
  return out;
}

SystemSpec sample_couplings(const SystemSpec& base,
                            const EnsembleConfig& config,
                            std::uint64_t draw_index) {
  base.validate();
  config.validate();
  std::seed_seq seq{static_cast<std::uint32_t>(config.seed),
                    static_cast<std::uint32_t>(config.seed >> 32),
                    static_cast<std::uint32_t>(draw_index),
                    static_cast<std::uint32_t>(draw_index >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);

  SystemSpec spec = base;
  const Eigen::Index p = base.couplings.rows();
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i + 1; j < p; ++j) {
      // Draw unconditionally so the stream layout does not depend on the
      // topology.
      const double z = normal(rng);
      if (base.couplings(i, j) == 0.0) continue;
      const double ratio = i == 0 ? 1.0 : config.env_ratio;
      const double mean = ratio * config.gamma_mean;
      const double sd = ratio * config.gamma_sd;
      spec.couplings(i, j) = spec.couplings(j, i) = sd == 0.0 ? mean : mean + sd * z;
    }
  }
  return spec;
}

Moments statistics(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("statistics: empty input");
  const double l = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  double mean = sum / l;
  double residual = 0.0;
  for (double v : values) residual += v - mean;
  mean += residual / l;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / l)};
}

void summarize(EnsembleReport& report) {
  std::vector<double> f, s;
  f.reserve(report.samples.size());
  s.reserve(report.samples.size());
  for (const auto& smp : report.samples) {
    f.push_back(smp.fidelity);
    s.push_back(smp.entropy);
  }
  const auto fm = statistics(f);
  const auto sm = statistics(s);
  report.f_mean = fm.mean;
  report.f_sd = fm.sd;
  report.s_mean = sm.mean;
  report.s_sd = sm.sd;
}

EnsembleReport evaluate_ensemble(const PiecewiseField& field,
                                 const SystemSpec& base,
                                 const GateTarget& target,
                                 const EnsembleConfig& config) {
  config.validate();
  field.validate();
  target.validate();
  EnsembleReport report;
  report.samples.resize(static_cast<std::size_t>(config.size));
  for_each_index(report.samples.size(), config.policy, [&](std::size_t p) {
    const SystemSpec spec = sample_couplings(base, config, p);
    const auto eval = evaluate_gate(spec, field, target);
    auto& smp = report.samples[p];
    smp.draw = p;
    smp.couplings = upper_triangle(spec.couplings);
    smp.fidelity = eval.fidelity;
    smp.entropy = eval.entropy;
  });
  summarize(report);
  return report;
}

Histogram histogram(std::span<const double> values, int bins) {
  if (bins < 1) throw std::invalid_argument("histogram: bins must be >= 1");
  Histogram h;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  if (values.empty()) {
    h.edges.assign(static_cast<std::size_t>(bins) + 1, 0.0);
    return h;
  }
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  const double width = (hi - lo) / bins;
  for (int b = 0; b <= bins; ++b) h.edges.push_back(lo + b * width);
  h.edges.back() = hi;
  for (double v : values) {
    std::size_t b = 0;
    if (width > 0.0) {
      b = static_cast<std::size_t>(std::floor((v - lo) / width));
      b = std::min(b, static_cast<std::size_t>(bins) - 1);
    }
    ++h.counts[b];
  }
  return h;
}

double skewness(std::span<const double> values) {
  const auto m = statistics(values);
  if (m.sd == 0.0) return 0.0;
  double s3 = 0.0;
  for (double v : values) s3 += std::pow((v - m.mean) / m.sd, 3);
  return s3 / static_cast<double>(values.size());
}

}  // namespace qgate
