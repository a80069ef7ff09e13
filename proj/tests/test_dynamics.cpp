#include <gtest/gtest.h>

#include "qgate/dynamics.hpp"
#include "test_util.hpp"

using namespace qgate;
using qgate::testing::max_abs_diff;
using qgate::testing::random_field;

TEST(TimeGrid, MaxStep) {
  EXPECT_EQ(TimeGrid::with_max_step(25.0).steps, 500);
  EXPECT_EQ(TimeGrid::with_max_step(15.4).steps, 308);
  EXPECT_EQ(TimeGrid::with_max_step(1.0, 0.3).steps, 4);
  EXPECT_LE(TimeGrid::with_max_step(7.3).dt(), 0.05);
  EXPECT_THROW((TimeGrid{0.0, 10}.validate()), std::invalid_argument);
  EXPECT_THROW((TimeGrid{1.0, 0}.validate()), std::invalid_argument);
}

TEST(Field, FluenceAndAmplitude) {
  PiecewiseField f = PiecewiseField::zeros(TimeGrid{2.0, 4});
  f.values = {1.0, -2.0, 0.5, 0.0};
  EXPECT_DOUBLE_EQ(f.fluence(), (1.0 + 4.0 + 0.25) * 0.5);
  EXPECT_EQ(f.max_amplitude(), 2.0);
  EXPECT_THROW(f.validate(1.5), std::invalid_argument);
  f.values.pop_back();
  EXPECT_THROW(f.validate(), std::invalid_argument);
}

TEST(StepPropagator, FreePeriodIsMinusIdentity) {
  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  h(0, 0) = 0.5;
  h(1, 1) = -0.5;
  EXPECT_LT(max_abs_diff(step_propagator(h, 2 * M_PI), -ComplexMatrix::Identity(2, 2)),
            1e-14);
  EXPECT_LT(max_abs_diff(step_propagator(h, 0.0), ComplexMatrix::Identity(2, 2)), 1e-16);
}

TEST(StepPropagator, PauliRotation) {
  const ComplexMatrix u = step_propagator(0.5 * pauli(Axis::x), M_PI);
  EXPECT_LT(max_abs_diff(u, -kI * pauli(Axis::x)), 1e-15);
}

TEST(StepPropagator, RejectsNonHermitian) {
  ComplexMatrix h = pauli(Axis::x);
  h(0, 1) = 2.0;
  EXPECT_THROW(step_propagator(h, 0.1), std::invalid_argument);
}

TEST(Propagate, FreeQubit) {
  const SystemSpec s = default_spec(0, 0, 0);
  const TimeGrid g{3.7, 50};
  const ComplexMatrix u = propagate(s, PiecewiseField::zeros(g), false).final();
  EXPECT_LT(std::abs(u(0, 0) - std::exp(-kI * 3.7 / 2.0)), 1e-13);
  EXPECT_LT(std::abs(u(1, 1) - std::exp(kI * 3.7 / 2.0)), 1e-13);
  EXPECT_LT(std::abs(u(0, 1)), 1e-15);
}

TEST(Propagate, UncoupledFactorises) {
  const SystemSpec s = default_spec(2, 0.0, 0.0);
  const double t = 5.3;
  const ComplexMatrix u = propagate(s, PiecewiseField::zeros(TimeGrid{t, 40}), false).final();
  ComplexMatrix expect = ComplexMatrix::Identity(1, 1);
  for (double w : s.omegas) {
    ComplexMatrix local = ComplexMatrix::Zero(2, 2);
    local(0, 0) = std::exp(-kI * w * t / 2.0);
    local(1, 1) = std::exp(kI * w * t / 2.0);
    expect = kron(expect, local);
  }
  EXPECT_LT(max_abs_diff(u, expect), 1e-13);
}

TEST(Propagate, UnitarityOverManySteps) {
  const SystemSpec s = default_spec(2, 0.02, 0.0175);
  const PiecewiseField f = random_field(TimeGrid{500.0, 10000}, 17, 2.0);
  const auto traj = propagate(s, f, false);
  EXPECT_LT(unitarity_error(traj.final()), 1e-10);
  EXPECT_FALSE(traj.full());
}

TEST(Propagate, Composition) {
  const SystemSpec s = default_spec(1, 0.02, 0);
  const TimeGrid g{10.0, 200};
  const PiecewiseField f = random_field(g, 3);
  const auto full = propagate(s, f, true);
  ASSERT_TRUE(full.full());
  const int split = 77;
  PiecewiseField a{TimeGrid{split * g.dt(), split}, {f.values.begin(), f.values.begin() + split}};
  PiecewiseField b{TimeGrid{(g.steps - split) * g.dt(), g.steps - split},
                   {f.values.begin() + split, f.values.end()}};
  const ComplexMatrix composed = propagate(s, b, false).final() * propagate(s, a, false).final();
  EXPECT_LT(max_abs_diff(composed, full.final()), 1e-12);
  EXPECT_LT(max_abs_diff(full.unitaries[split], propagate(s, a, false).final()), 1e-13);
}

TEST(Propagate, StepHalvingOfPiecewiseConstantField) {
  const SystemSpec s = default_spec(2, 0.02, 0.0175);
  const TimeGrid g{8.0, 160};
  const PiecewiseField f = random_field(g, 9);
  PiecewiseField fine = PiecewiseField::zeros(TimeGrid{8.0, 320});
  for (int k = 0; k < 320; ++k) fine.values[k] = f.values[k / 2];
  EXPECT_LT(max_abs_diff(propagate(s, f, false).final(), propagate(s, fine, false).final()),
            1e-12);
}

TEST(Propagate, StateFollowsUnitary) {
  const SystemSpec s = default_spec(1, 0.02, 0);
  const PiecewiseField f = random_field(TimeGrid{5.0, 100}, 4);
  const auto traj = propagate(s, f, true);
  const auto psi = propagate_state(s, f, initial_state(1));
  ASSERT_EQ(psi.size(), traj.unitaries.size());
  for (std::size_t k = 0; k < psi.size(); k += 10) {
    EXPECT_LT((psi[k] - traj.unitaries[k] * initial_state(1)).norm(), 1e-13);
  }
}

TEST(Costate, IdentityUnderZeroHamiltonian) {
  const std::vector<StepExponential> steps(5, step_exponential(ComplexMatrix::Zero(4, 4), 0.1));
  const auto b = accumulate_costate(steps, ComplexMatrix::Identity(4, 4));
  ASSERT_EQ(b.size(), 6u);
  for (const auto& m : b) EXPECT_LT(max_abs_diff(m, ComplexMatrix::Identity(4, 4)), 1e-16);
}

TEST(Costate, PairingAndClosedForm) {
  const SystemSpec s = default_spec(2, 0.02, 0.0175);
  const PiecewiseField f = random_field(TimeGrid{12.0, 240}, 21);
  const auto traj = propagate(s, f, true);
  std::mt19937_64 rng(8);
  const ComplexMatrix bf = haar_unitary(8, rng) * 0.3 + haar_unitary(8, rng);
  const auto b = propagate_costate(s, f, bf);
  ASSERT_EQ(b.size(), traj.unitaries.size());
  const Complex pairing = (bf * traj.final()).trace();
  for (std::size_t k = 0; k < b.size(); ++k) {
    EXPECT_LT(std::abs((b[k] * traj.unitaries[k]).trace() - pairing), 1e-8 * std::abs(pairing));
    const ComplexMatrix closed = bf * traj.final() * traj.unitaries[k].adjoint();
    EXPECT_LT(max_abs_diff(b[k], closed), 1e-11);
  }
  EXPECT_THROW(propagate_costate(s, f, ComplexMatrix::Identity(4, 4)), std::invalid_argument);
}

TEST(Spectrum, ZeroFieldIsDriftSpectrum) {
  const SystemSpec s = default_spec(1, 0.02, 0);
  const auto spec = instantaneous_spectrum(s, PiecewiseField::zeros(TimeGrid{1.0, 5}));
  const Eigen::VectorXd e = Eigen::SelfAdjointEigenSolver<ComplexMatrix>(build_drift(s)).eigenvalues();
  for (const auto& row : spec) {
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(row[i], e(i), 1e-14);
  }
}

TEST(Spectrum, DrivenQubitClosedFormAndParity) {
  const SystemSpec s = default_spec(0, 0, 0);
  PiecewiseField f = PiecewiseField::zeros(TimeGrid{1.0, 2});
  f.values = {2.0, -2.0};
  const auto spec = instantaneous_spectrum(s, f);
  EXPECT_NEAR(spec[0][0], -std::sqrt(5.0) / 2, 1e-14);
  EXPECT_NEAR(spec[0][1], std::sqrt(5.0) / 2, 1e-14);
  EXPECT_NEAR(spec[1][0], spec[0][0], 1e-14);
  EXPECT_NEAR(spec[1][1], spec[0][1], 1e-14);
}

TEST(Propagate, SerialAndParallelAgreeBitwise) {
  const SystemSpec s = default_spec(2, 0.02, 0.0175);
  const PiecewiseField f = random_field(TimeGrid{6.0, 120}, 2);
  const ComplexMatrix a = propagate(s, f, false, ExecPolicy::serial).final();
  const ComplexMatrix b = propagate(s, f, false, ExecPolicy::parallel).final();
  EXPECT_EQ(max_abs_diff(a, b), 0.0);
}
