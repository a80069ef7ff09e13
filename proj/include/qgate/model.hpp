#pragma once

// Spin-chain model: one driven qubit isotropically (Heisenberg) coupled to n
// undriven two-level environment particles. Units: qubit frequency = 1.
//
//   H(c) = sum_i omega_i S_iz - c mu S_0x - sum_{i<j} gamma_ij S_i . S_j

#include <array>

#include "qgate/hilbert.hpp"

namespace qgate {

inline constexpr int kMaxEnvironment = 6;

/// Qubit frequency followed by the six environment frequencies.
inline constexpr std::array<double, kMaxEnvironment + 1> kDefaultFrequencies = {
    1.0, 0.99841, 1.00159, 0.96007, 1.04159, 0.87597, 1.14159};

struct SystemSpec {
  int n = 0;                   // environment particles
  std::vector<double> omegas;  // n + 1 entries, qubit first
  double mu = 1.0;             // dipole moment
  RealMatrix couplings;        // symmetric (n+1)x(n+1), zero diagonal

  std::size_t dim() const { return composite_dim(n); }

  /// Throws std::invalid_argument describing the first violated invariant.
  void validate() const;
};

/// gamma on every qubit-environment pair, gamma_prime on every
/// environment-environment pair (complete environment graph).
struct CouplingRule {
  double gamma = 0.0;
  double gamma_prime = 0.0;

  RealMatrix expand(int n) const;
};

/// Default frequencies (first n environment entries), mu = 1, couplings from
/// CouplingRule{gamma, gamma_prime}. Rejects n outside [0, 6].
SystemSpec default_spec(int n, double gamma, double gamma_prime);

ComplexMatrix build_drift(const SystemSpec& spec);

/// mu * S_0x. The Hamiltonian carries it with a minus sign times the field.
ComplexMatrix build_control_op(const SystemSpec& spec);

ComplexMatrix hamiltonian_at(const SystemSpec& spec, double c);

/// Drift and control operator built once; at(c) is the affine Hamiltonian.
struct ControlledHamiltonian {
  ComplexMatrix drift;
  ComplexMatrix control;

  explicit ControlledHamiltonian(const SystemSpec& spec)
      : drift(build_drift(spec)), control(build_control_op(spec)) {}

  ComplexMatrix at(double c) const { return drift - c * control; }
};

struct LieClosure {
  int dimension = 0;
  int depth = 0;        // commutator depth reached
  bool closed = false;  // false: max_depth hit while the span still grew
};

/// Dimension of the real Lie algebra generated by {i H_drift, i mu S_0x}.
/// Requires spec.n <= 2.
LieClosure controllability_dim(const SystemSpec& spec, int max_depth = 32);

/// Complete controllability up to a global phase: dim >= 4^(n+1) - 1.
bool completely_controllable(const LieClosure& closure, int n);

}  // namespace qgate
