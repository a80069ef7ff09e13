#pragma once

// Gate distance, fidelity and decoherence diagnostics.
//
// For a composite evolution U and a one-qubit target G, the distance
//   J = lambda_n min_Phi ||U - G (x) Phi||_Fr,   lambda_n = 2^{-(n+2)/2},
// has the closed form J = sqrt(1 - 2 lambda_n^2 ||Q||_*), where
//   Q_{v v'} = sum_{r r'} conj(G_{r r'}) U_{(r,v),(r',v')}
// and ||.||_* is the nuclear norm. Fidelity is F = 1 - J.

#include <cstdint>
#include <string>
#include <vector>

#include "qgate/dynamics.hpp"

namespace qgate {

struct GateTarget {
  ComplexMatrix g;
  std::string name;

  static GateTarget hadamard();
  static GateTarget identity();
  static GateTarget pauli_x();
  static GateTarget phase_s();
  /// hadamard, identity, x (not), s (phase). Throws std::invalid_argument.
  static GateTarget from_name(const std::string& name);

  /// 2x2 and unitary to 1e-12, else std::invalid_argument.
  void validate() const;
};

struct DistanceResult {
  double j = 1.0;
  double fidelity = 0.0;
  double nuclear_norm = 0.0;
  ComplexMatrix q;
};

/// lambda_n = 2^{-(n+2)/2}
double distance_normalization(int n);

/// Below this value of 1 - 2 lambda^2 ||Q||_*, distance() switches to a
/// cancellation-free evaluation that assumes U is unitary.
inline constexpr double kCancellationThreshold = 1e-8;

ComplexMatrix q_matrix(const ComplexMatrix& u, const GateTarget& target, int n);

DistanceResult distance(const ComplexMatrix& u, const GateTarget& target,
                        int n);

struct BruteForceOptions {
  int starts = 8;
  int max_iterations = 20000;
  double gradient_tolerance = 1e-8;
  std::uint64_t seed = 7;
};

struct BruteForceResult {
  double j = 1.0;
  bool converged = false;  // every start met the gradient tolerance
  int iterations = 0;      // summed over starts
};

/// Direct numerical minimisation of lambda_n ||U - G (x) Phi||_Fr over
/// Phi in U(2^n), charted as Phi_c exp(i sum_k theta_k P_k) with P_k the 4^n
/// Pauli strings and the centre Phi_c re-anchored after every step.
/// Uses no part of the closed-form path; exists to validate it. n <= 2.
BruteForceResult distance_bruteforce(const ComplexMatrix& u,
                                     const GateTarget& target, int n,
                                     const BruteForceOptions& options = {});

/// Partial trace over the environment: 2x2 qubit density matrix.
ComplexMatrix reduced_density(const StateVector& state, int n);

/// -sum lambda ln lambda with 0 ln 0 = 0. Eigenvalues below -1e-10 are
/// rejected; smaller negatives are clamped to zero.
double von_neumann_entropy(const ComplexMatrix& rho);

struct EntropyPoint {
  double t;
  double entropy;
};

/// Qubit entropy along the trajectory of |-> (x) |+>^n, one point per grid
/// time t_0..t_M.
std::vector<EntropyPoint> entropy_trace(const SystemSpec& spec,
                                        const PiecewiseField& field);

/// Entropy of the reduced qubit state at t_f only.
double final_entropy(const SystemSpec& spec, const ComplexMatrix& u_final);

/// Fidelity and final entropy of one field on one system.
struct GateEvaluation {
  double fidelity;
  double entropy;
};

GateEvaluation evaluate_gate(const SystemSpec& spec,
                             const PiecewiseField& field,
                             const GateTarget& target);

}  // namespace qgate
