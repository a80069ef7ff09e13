#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "qgate/robustness.hpp"
#include "test_util.hpp"

using namespace qgate;
using qgate::testing::random_field;

TEST(Sampling, ZeroSpreadReturnsBase) {
  const SystemSpec base = default_spec(3, 0.02, 0.0175);
  EnsembleConfig c;
  c.gamma_mean = 0.02;
  c.gamma_sd = 0.0;
  c.env_ratio = 0.875;
  for (std::uint64_t d : {0u, 1u, 99u}) {
    const SystemSpec s = sample_couplings(base, c, d);
    EXPECT_EQ((s.couplings - base.couplings).cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(Sampling, UncoupledEnvironmentStaysZero) {
  const SystemSpec base = default_spec(4, 0.02, 0.0175);
  const EnsembleConfig c = EnsembleConfig::relative(0.02, 0.0, 1, 3);
  for (std::uint64_t d = 0; d < 50; ++d) {
    const SystemSpec s = sample_couplings(base, c, d);
    for (int i = 1; i <= 4; ++i)
      for (int j = 1; j <= 4; ++j) EXPECT_EQ(s.couplings(i, j), 0.0);
    EXPECT_NE(s.couplings(0, 1), 0.02);
    EXPECT_EQ(s.couplings(0, 1), s.couplings(1, 0));
  }
}

TEST(Sampling, ZeroBasePairsStayZero) {
  SystemSpec base = default_spec(2, 0.02, 0.0175);
  base.couplings(0, 2) = base.couplings(2, 0) = 0.0;
  const EnsembleConfig c = EnsembleConfig::relative(0.02, 0.875, 1, 3);
  EXPECT_EQ(sample_couplings(base, c, 5).couplings(0, 2), 0.0);
}

TEST(Sampling, MomentsOfQubitCoupling) {
  const SystemSpec base = default_spec(2, 0.02, 0.0175);
  const EnsembleConfig c = EnsembleConfig::relative(0.02, 0.875, 1, 17);
  std::vector<double> g01, g12;
  for (std::uint64_t d = 0; d < 10000; ++d) {
    const SystemSpec s = sample_couplings(base, c, d);
    g01.push_back(s.couplings(0, 1));
    g12.push_back(s.couplings(1, 2));
  }
  const Moments m = statistics(g01);
  EXPECT_NEAR(m.mean, 0.02, 3 * 0.0025 / 100);
  EXPECT_NEAR(m.sd, 0.0025, 0.05 * 0.0025);
  const Moments e = statistics(g12);
  EXPECT_NEAR(e.mean, 0.0175, 3 * 0.0175 / 8 / 100);
  EXPECT_NEAR(e.sd, 0.0175 / 8, 0.05 * 0.0175 / 8);
}

TEST(Sampling, Reproducible) {
  const SystemSpec base = default_spec(2, 0.02, 0.0175);
  const EnsembleConfig c = EnsembleConfig::relative(0.02, 0.875, 1, 4);
  EXPECT_EQ(sample_couplings(base, c, 12).couplings, sample_couplings(base, c, 12).couplings);
  EXPECT_NE(sample_couplings(base, c, 12).couplings, sample_couplings(base, c, 13).couplings);
  EnsembleConfig other = c;
  other.seed = 5;
  EXPECT_NE(sample_couplings(base, c, 12).couplings, sample_couplings(base, other, 12).couplings);
}

TEST(Statistics, HandArithmetic) {
  const std::vector<double> v{1.0, 2.0, 3.0};
  const Moments m = statistics(v);
  EXPECT_DOUBLE_EQ(m.mean, 2.0);
  EXPECT_NEAR(m.sd, std::sqrt(2.0 / 3.0), 1e-15);
  EXPECT_NEAR(m.sd, 0.81650, 1e-5);
  const std::vector<double> flat(7, 0.9975);
  EXPECT_EQ(statistics(flat).sd, 0.0);
  EXPECT_THROW(statistics(std::vector<double>{}), std::invalid_argument);
}

TEST(Statistics, AgreesWithWelford) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n(0.0, 2.6e-4);
  std::vector<double> v(5000);
  for (double& x : v) x = 0.9975 + n(rng);
  long double mean = 0.0L, m2 = 0.0L;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const long double delta = v[i] - mean;
    mean += delta / static_cast<long double>(i + 1);
    m2 += delta * (v[i] - mean);
  }
  const Moments m = statistics(v);
  EXPECT_NEAR(m.mean, static_cast<double>(mean), 1e-14);
  EXPECT_NEAR(m.sd, static_cast<double>(std::sqrt(m2 / v.size())), 1e-14);
}

TEST(Histogram, SingleValue) {
  const std::vector<double> v{0.42};
  const Histogram h = histogram(v, 10);
  EXPECT_EQ(std::accumulate(h.counts.begin(), h.counts.end(), std::size_t{0}), 1u);
  EXPECT_EQ(std::count(h.counts.begin(), h.counts.end(), std::size_t{0}), 9);
}

TEST(Histogram, CountsSumAndEdges) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-3.0, 5.0);
  std::vector<double> v(1234);
  for (double& x : v) x = u(rng);
  const Histogram h = histogram(v, 17);
  ASSERT_EQ(h.edges.size(), 18u);
  EXPECT_EQ(std::accumulate(h.counts.begin(), h.counts.end(), std::size_t{0}), 1234);
  EXPECT_EQ(h.edges.front(), *std::min_element(v.begin(), v.end()));
  EXPECT_EQ(h.edges.back(), *std::max_element(v.begin(), v.end()));
  EXPECT_THROW(histogram(v, 0), std::invalid_argument);
}

TEST(Skewness, Sign) {
  const std::vector<double> symmetric{-2, -1, 0, 1, 2};
  EXPECT_NEAR(skewness(symmetric), 0.0, 1e-15);
  const std::vector<double> left{1.0, 1.0, 1.0, 1.0, 0.0};
  EXPECT_LT(skewness(left), 0.0);
}

TEST(Ensemble, SingleDrawWithoutSpreadIsNominal) {
  const SystemSpec base = default_spec(1, 0.02, 0);
  const PiecewiseField f = random_field(TimeGrid{6.0, 120}, 3);
  EnsembleConfig c = EnsembleConfig::relative(0.02, 0.0, 1, 1);
  c.gamma_sd = 0.0;
  const EnsembleReport r = evaluate_ensemble(f, base, GateTarget::hadamard(), c);
  const GateEvaluation nominal = evaluate_gate(base, f, GateTarget::hadamard());
  ASSERT_EQ(r.samples.size(), 1u);
  EXPECT_EQ(r.f_mean, nominal.fidelity);
  EXPECT_EQ(r.f_sd, 0.0);
  EXPECT_EQ(r.s_mean, nominal.entropy);
}

TEST(Ensemble, SerialParallelAndSummaryAgree) {
  const SystemSpec base = default_spec(2, 0.02, 0.0175);
  const PiecewiseField f = random_field(TimeGrid{4.0, 80}, 4);
  EnsembleConfig c = EnsembleConfig::relative(0.02, 0.875, 24, 6);
  c.policy = ExecPolicy::serial;
  const EnsembleReport a = evaluate_ensemble(f, base, GateTarget::hadamard(), c);
  c.policy = ExecPolicy::parallel;
  const EnsembleReport b = evaluate_ensemble(f, base, GateTarget::hadamard(), c);
  ASSERT_EQ(a.samples.size(), 24u);
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    EXPECT_EQ(a.samples[i].fidelity, b.samples[i].fidelity);
    EXPECT_EQ(a.samples[i].couplings, b.samples[i].couplings);
    EXPECT_EQ(a.samples[i].draw, i);
  }
  EXPECT_EQ(a.f_mean, b.f_mean);
  EXPECT_EQ(a.f_sd, b.f_sd);
  // re-summarising the stored samples reproduces the statistics exactly
  EnsembleReport copy{a.samples, 0, 0, 0, 0};
  summarize(copy);
  EXPECT_EQ(copy.f_mean, a.f_mean);
  EXPECT_EQ(copy.f_sd, a.f_sd);
  EXPECT_EQ(copy.s_sd, a.s_sd);
  // draw d is independent of the ensemble size
  c.size = 5;
  const EnsembleReport small = evaluate_ensemble(f, base, GateTarget::hadamard(), c);
  EXPECT_EQ(small.samples[4].fidelity, a.samples[4].fidelity);
}

TEST(Ensemble, ConfigValidation) {
  EnsembleConfig c;
  c.size = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = EnsembleConfig{};
  c.gamma_sd = -1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}
