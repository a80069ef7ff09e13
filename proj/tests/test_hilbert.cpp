#include <gtest/gtest.h>

#include <array>

#include "qgate/hilbert.hpp"
#include "test_util.hpp"

using namespace qgate;
using qgate::testing::max_abs_diff;

TEST(Hilbert, CompositeDimension) {
  EXPECT_EQ(composite_dim(0), 2u);
  EXPECT_EQ(composite_dim(6), 128u);
  EXPECT_THROW(composite_dim(-1), std::invalid_argument);
}

TEST(Hilbert, KronIdentityAndDiagonal) {
  const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  EXPECT_EQ(max_abs_diff(kron(i2, i2), ComplexMatrix::Identity(4, 4)), 0.0);
  ComplexMatrix z = ComplexMatrix::Zero(2, 2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  Eigen::VectorXcd expect(4);
  expect << 1, 1, -1, -1;
  EXPECT_EQ(max_abs_diff(kron(z, i2), ComplexMatrix(expect.asDiagonal())), 0.0);
}

TEST(Hilbert, KronXXTwiceIsIdentityOnBasis) {
  const ComplexMatrix xx = kron(pauli(Axis::x), pauli(Axis::x));
  for (int k = 0; k < 4; ++k) {
    StateVector e = StateVector::Zero(4);
    e(k) = 1.0;
    EXPECT_LT((xx * (xx * e) - e).norm(), 1e-15);
    // single application flips both bits
    EXPECT_NEAR(std::abs((xx * e)(3 - k)), 1.0, 1e-15);
  }
}

TEST(Hilbert, EmbeddedSz) {
  const ComplexMatrix sz = embed_spin_op(Axis::z, 0, 0);
  EXPECT_EQ(sz(0, 0), Complex(0.5, 0));
  EXPECT_EQ(sz(1, 1), Complex(-0.5, 0));
  EXPECT_EQ(sz(0, 1), Complex(0, 0));
}

TEST(Hilbert, SpinCommutationForAnyN) {
  for (int n = 0; n <= 4; ++n) {
    for (int p = 0; p <= n; ++p) {
      const auto sx = embed_spin_op(Axis::x, p, n);
      const auto sy = embed_spin_op(Axis::y, p, n);
      const auto sz = embed_spin_op(Axis::z, p, n);
      EXPECT_LT(max_abs_diff(commutator(sx, sy), kI * sz), 1e-15);
      EXPECT_LT(max_abs_diff(commutator(sy, sz), kI * sx), 1e-15);
    }
  }
}

TEST(Hilbert, EmbeddedSxOnEnvironment) {
  const ComplexMatrix s1x = embed_spin_op(Axis::x, 1, 1);
  for (int k = 0; k < 4; ++k) EXPECT_EQ(s1x(k, k), Complex(0, 0));
  const ComplexMatrix two = 2.0 * s1x;
  EXPECT_LT(max_abs_diff(two * two, ComplexMatrix::Identity(4, 4)), 1e-15);
  // explicit construction: I (x) sigma_x / 2
  EXPECT_LT(max_abs_diff(s1x, 0.5 * kron(ComplexMatrix::Identity(2, 2), pauli(Axis::x))),
            1e-15);
}

TEST(Hilbert, EmbedRejectsBadParticle) {
  EXPECT_THROW(embed_spin_op(Axis::x, 2, 1), std::out_of_range);
  EXPECT_THROW(embed_spin_op(Axis::x, -1, 1), std::out_of_range);
}

TEST(Hilbert, BasisStates) {
  const std::array<SpinLabel, 1> up{SpinLabel::up};
  const StateVector s = basis_state(up, 0);
  EXPECT_EQ(s(0), Complex(1, 0));
  EXPECT_EQ(s(1), Complex(0, 0));

  // qubit down, environment up: index 1 * 2 + 0
  const std::array<SpinLabel, 2> du{SpinLabel::down, SpinLabel::up};
  const StateVector v = basis_state(du, 1);
  EXPECT_EQ(v(2), Complex(1, 0));
  EXPECT_NEAR(v.norm(), 1.0, 1e-15);
  const auto s0z = embed_spin_op(Axis::z, 0, 1);
  const auto s1z = embed_spin_op(Axis::z, 1, 1);
  EXPECT_LT((s0z * v + 0.5 * v).norm(), 1e-15);
  EXPECT_LT((s1z * v - 0.5 * v).norm(), 1e-15);

  const std::array<SpinLabel, 3> dpp{SpinLabel::down, SpinLabel::up, SpinLabel::up};
  const StateVector w = basis_state(dpp, 2);
  EXPECT_LT((embed_spin_op(Axis::z, 0, 2) * w + 0.5 * w).norm(), 1e-15);
  EXPECT_LT((initial_state(2) - w).norm(), 1e-15);
}

TEST(Hilbert, BasisStateLengthMismatch) {
  const std::array<SpinLabel, 2> two{SpinLabel::up, SpinLabel::up};
  EXPECT_THROW(basis_state(two, 2), std::invalid_argument);
}

TEST(Hilbert, HaarUnitaryIsUnitary) {
  std::mt19937_64 rng(11);
  for (int d : {2, 4, 8, 32}) {
    const auto u = haar_unitary(d, rng);
    EXPECT_LT(unitarity_error(u), 1e-13);
  }
}

TEST(Hilbert, ExpiHermitian) {
  // exp(i pi/2 sigma_x) = i sigma_x
  const ComplexMatrix u = expi_hermitian(0.5 * M_PI * pauli(Axis::x));
  EXPECT_LT(max_abs_diff(u, kI * pauli(Axis::x)), 1e-15);
  std::mt19937_64 rng(5);
  const ComplexMatrix a = haar_unitary(8, rng);
  const ComplexMatrix h = a + a.adjoint();
  EXPECT_LT(unitarity_error(expi_hermitian(h)), 1e-13);
}

TEST(Hilbert, Hermiticity) {
  EXPECT_TRUE(is_hermitian(pauli(Axis::y)));
  ComplexMatrix m = pauli(Axis::y);
  m(0, 1) += 1e-9;
  EXPECT_FALSE(is_hermitian(m));
  EXPECT_NEAR(hermiticity_error(m), 1e-9, 1e-15);
}
