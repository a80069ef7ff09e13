#pragma once

// Operator algebra on the composite qubit + environment Hilbert space.
//
// Particle 0 (the qubit) is the leftmost, most significant tensor factor:
// composite index = qubit_index * 2^n + environment_index. Within the
// environment, particle 1 is the most significant bit. The local basis is
// |+> = (1, 0), |-> = (0, 1), so S_z = diag(+1/2, -1/2).

#include <complex>
#include <cstddef>
#include <random>
#include <span>

#include <Eigen/Dense>

namespace qgate {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr Complex kI{0.0, 1.0};

enum class Axis { x, y, z };

/// Eigenstate label of the local S_z: up is |+>, down is |->.
enum class SpinLabel { up, down };

/// 2^(n+1) for a qubit plus n environment particles.
std::size_t composite_dim(int n_env);

/// Pauli matrix sigma_axis (not halved).
ComplexMatrix pauli(Axis axis);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// S_axis = sigma_axis / 2 acting on `particle`, identity elsewhere.
/// Throws std::out_of_range if particle is not in [0, n_env].
ComplexMatrix embed_spin_op(Axis axis, int particle, int n_env);

/// Tensor product of S_z eigenvectors; labels[0] is the qubit.
/// Throws std::invalid_argument unless labels.size() == n_env + 1.
StateVector basis_state(std::span<const SpinLabel> labels, int n_env);

/// |-> on the qubit and |+> on every environment particle.
StateVector initial_state(int n_env);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// Largest elementwise |A - A^dagger|.
double hermiticity_error(const ComplexMatrix& a);

bool is_hermitian(const ComplexMatrix& a, double tol = 1e-12);

/// ||U^dagger U - I||_Fr.
double unitarity_error(const ComplexMatrix& u);

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases
/// of R's diagonal folded back into Q.
ComplexMatrix haar_unitary(Eigen::Index dim, std::mt19937_64& rng);

/// exp(i h) for Hermitian h.
ComplexMatrix expi_hermitian(const ComplexMatrix& h);

}  // namespace qgate
