#include "qgate/hilbert.hpp"

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace qgate {

std::size_t composite_dim(int n_env) {
  if (n_env < 0 || n_env > 12) {
    throw std::invalid_argument("environment size must be in [0, 12], got " +
                                std::to_string(n_env));
  }
  return std::size_t{1} << (n_env + 1);
}

ComplexMatrix pauli(Axis axis) {
  ComplexMatrix s(2, 2);
  switch (axis) {
    case Axis::x:
      s << 0.0, 1.0, 1.0, 0.0;
      break;
    case Axis::y:
      s << 0.0, -kI, kI, 0.0;
      break;
    case Axis::z:
      s << 1.0, 0.0, 0.0, -1.0;
      break;
  }
  return s;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix embed_spin_op(Axis axis, int particle, int n_env) {
  if (particle < 0 || particle > n_env) {
    throw std::out_of_range("particle index " + std::to_string(particle) +
                            " outside [0, " + std::to_string(n_env) + "]");
  }
  composite_dim(n_env);  // range check on n_env
  // Identity blocks on either side of the slot.
  const Eigen::Index left = Eigen::Index{1} << particle;
  const Eigen::Index right = Eigen::Index{1} << (n_env - particle);
  const ComplexMatrix local = 0.5 * pauli(axis);
  return kron(kron(ComplexMatrix::Identity(left, left), local),
              ComplexMatrix::Identity(right, right));
}

StateVector basis_state(std::span<const SpinLabel> labels, int n_env) {
  if (labels.size() != static_cast<std::size_t>(n_env) + 1) {
    throw std::invalid_argument("basis_state: expected " +
                                std::to_string(n_env + 1) + " labels, got " +
                                std::to_string(labels.size()));
  }
  const auto dim = static_cast<Eigen::Index>(composite_dim(n_env));
  Eigen::Index index = 0;
  for (SpinLabel l : labels) {
    index = 2 * index + (l == SpinLabel::down ? 1 : 0);
  }
  StateVector psi = StateVector::Zero(dim);
  psi(index) = 1.0;
  return psi;
}

StateVector initial_state(int n_env) {
  std::vector<SpinLabel> labels(static_cast<std::size_t>(n_env) + 1,
                                SpinLabel::up);
  labels.front() = SpinLabel::down;
  return basis_state(labels, n_env);
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b - b * a;
}

double hermiticity_error(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& a, double tol) {
  return a.rows() == a.cols() && hermiticity_error(a) <= tol;
}

double unitarity_error(const ComplexMatrix& u) {
  return (u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())).norm();
}

ComplexMatrix haar_unitary(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix z(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) {
      const double re = normal(rng);
      z(i, j) = Complex(re, normal(rng));
    }
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

ComplexMatrix expi_hermitian(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(h);
  const Eigen::VectorXcd phases =
      (kI * eig.eigenvalues().cast<Complex>()).array().exp();
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

}  // namespace qgate
