#include "qgate/measures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace qgate {

GateTarget GateTarget::hadamard() {
  ComplexMatrix g(2, 2);
  g << 1.0, 1.0, 1.0, -1.0;
  return {g / std::numbers::sqrt2, "hadamard"};
}

GateTarget GateTarget::identity() {
  return {ComplexMatrix::Identity(2, 2), "identity"};
}

GateTarget GateTarget::pauli_x() { return {pauli(Axis::x), "x"}; }

GateTarget GateTarget::phase_s() {
  ComplexMatrix g(2, 2);
  g << 1.0, 0.0, 0.0, kI;
  return {g, "s"};
}

GateTarget GateTarget::from_name(const std::string& name) {
  if (name == "hadamard") return hadamard();
  if (name == "identity") return identity();
  if (name == "x" || name == "not") return pauli_x();
  if (name == "s" || name == "phase") return phase_s();
  throw std::invalid_argument("unknown gate '" + name + "'");
}

void GateTarget::validate() const {
  if (g.rows() != 2 || g.cols() != 2) {
    throw std::invalid_argument("target gate must be 2x2");
  }
  if ((g.adjoint() * g - ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() >
      1e-12) {
    throw std::invalid_argument("target gate is not unitary");
  }
}

double distance_normalization(int n) {
  return std::pow(2.0, -(n + 2) / 2.0);
}

ComplexMatrix q_matrix(const ComplexMatrix& u, const GateTarget& target,
                       int n) {
  const auto env = static_cast<Eigen::Index>(composite_dim(n) / 2);
  if (u.rows() != 2 * env || u.cols() != 2 * env) {
    throw std::invalid_argument("q_matrix: U must be " +
                                std::to_string(2 * env) + "-dimensional");
  }
  ComplexMatrix q = ComplexMatrix::Zero(env, env);
  for (Eigen::Index r = 0; r < 2; ++r) {
    for (Eigen::Index rp = 0; rp < 2; ++rp) {
      q += std::conj(target.g(r, rp)) * u.block(r * env, rp * env, env, env);
    }
  }
  return q;
}

DistanceResult distance(const ComplexMatrix& u, const GateTarget& target,
                        int n) {
  DistanceResult out;
  out.q = q_matrix(u, target, n);
  Eigen::JacobiSVD<ComplexMatrix> svd(out.q);
  out.nuclear_norm = svd.singularValues().sum();
  const double lambda = distance_normalization(n);
  const double arg = 1.0 - 2.0 * lambda * lambda * out.nuclear_norm;
  if (arg >= kCancellationThreshold) {
    out.j = std::sqrt(arg);
  } else {
    // Near a perfect gate 1 - N/(2d) loses every digit. For unitary U,
    // 4 - sigma_i^2 are the eigenvalues of the positive sum below, and
    // J^2 = sum_i (2 - sigma_i) / (2d) follows without cancellation.
    const Eigen::Index d = out.q.rows();
    const ComplexMatrix v =
        kron(target.g.adjoint(), ComplexMatrix::Identity(d, d)) * u;
    const ComplexMatrix diff = v.topLeftCorner(d, d) - v.bottomRightCorner(d, d);
    const ComplexMatrix off_a = v.topRightCorner(d, d);
    const ComplexMatrix off_b = v.bottomLeftCorner(d, d);
    const ComplexMatrix m = diff.adjoint() * diff + 2.0 * off_a.adjoint() * off_a +
                            2.0 * off_b.adjoint() * off_b;
    const Eigen::VectorXd mu =
        Eigen::SelfAdjointEigenSolver<ComplexMatrix>(m, Eigen::EigenvaluesOnly)
            .eigenvalues();
    double gap = 0.0;
    for (double x : mu) {
      x = std::max(0.0, x);
      gap += x / (2.0 + std::sqrt(std::max(0.0, 4.0 - x)));
    }
    out.j = std::sqrt(gap / (2.0 * static_cast<double>(d)));
  }
  out.fidelity = 1.0 - out.j;
  return out;
}

namespace {

std::vector<ComplexMatrix> pauli_strings(int n) {
  const std::array<ComplexMatrix, 4> local = {
      ComplexMatrix::Identity(2, 2), pauli(Axis::x), pauli(Axis::y),
      pauli(Axis::z)};
  std::vector<ComplexMatrix> out{ComplexMatrix::Identity(1, 1)};
  for (int q = 0; q < n; ++q) {
    std::vector<ComplexMatrix> next;
    next.reserve(out.size() * 4);
    for (const auto& p : out) {
      for (const auto& l : local) next.push_back(kron(p, l));
    }
    out = std::move(next);
  }
  return out;
}

struct DescentOutcome {
  double f;
  int iterations;
  bool converged;
};

// Steepest descent of f(Phi) = ||U - G (x) Phi||^2 on U(2^n), moving along
// Phi -> Phi exp(i sum_k theta_k P_k). The directional derivative at theta = 0
// is df/dtheta_k = -2 Im tr((I (x) P_k) (G (x) Phi)^dagger U).
DescentOutcome descend(const ComplexMatrix& u, const ComplexMatrix& g,
                       const std::vector<ComplexMatrix>& paulis,
                       ComplexMatrix phi, const BruteForceOptions& options) {
  const ComplexMatrix eye2 = ComplexMatrix::Identity(2, 2);
  auto objective = [&](const ComplexMatrix& p) {
    return (u - kron(g, p)).squaredNorm();
  };
  double f = objective(phi);
  double step = 1.0;
  Eigen::VectorXd grad(static_cast<Eigen::Index>(paulis.size()));
  for (int it = 0; it < options.max_iterations; ++it) {
    const ComplexMatrix a = kron(g, phi).adjoint() * u;
    for (std::size_t k = 0; k < paulis.size(); ++k) {
      grad(static_cast<Eigen::Index>(k)) =
          -2.0 * (kron(eye2, paulis[k]) * a).trace().imag();
    }
    const double gnorm = grad.norm();
    if (gnorm < options.gradient_tolerance) return {f, it, true};

    bool accepted = false;
    step = std::min(step * 2.0, 1e3);
    for (int bt = 0; bt < 60; ++bt) {
      ComplexMatrix h = ComplexMatrix::Zero(phi.rows(), phi.cols());
      for (std::size_t k = 0; k < paulis.size(); ++k) {
        h -= step * grad(static_cast<Eigen::Index>(k)) * paulis[k];
      }
      ComplexMatrix trial = phi * expi_hermitian(h);
      const double ft = objective(trial);
      if (ft <= f - 1e-4 * step * gnorm * gnorm) {
        phi = std::move(trial);
        f = ft;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    // No representable decrease left: the gradient is at roundoff level.
    if (!accepted) return {f, it, gnorm < 1e3 * options.gradient_tolerance};
  }
  return {f, options.max_iterations, false};
}

}  // namespace

BruteForceResult distance_bruteforce(const ComplexMatrix& u,
                                     const GateTarget& target, int n,
                                     const BruteForceOptions& options) {
  if (n < 0 || n > 2) {
    throw std::invalid_argument("distance_bruteforce supports n <= 2");
  }
  const auto dim = static_cast<Eigen::Index>(composite_dim(n));
  if (u.rows() != dim || u.cols() != dim) {
    throw std::invalid_argument("distance_bruteforce: U has wrong dimension");
  }
  const auto paulis = pauli_strings(n);
  std::mt19937_64 rng(options.seed);
  BruteForceResult result;
  result.converged = true;
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < std::max(1, options.starts); ++s) {
    const auto outcome =
        descend(u, target.g, paulis, haar_unitary(dim / 2, rng), options);
    best = std::min(best, outcome.f);
    result.iterations += outcome.iterations;
    result.converged = result.converged && outcome.converged;
  }
  result.j = distance_normalization(n) * std::sqrt(std::max(0.0, best));
  return result;
}

ComplexMatrix reduced_density(const StateVector& state, int n) {
  const auto env = static_cast<Eigen::Index>(composite_dim(n) / 2);
  if (state.size() != 2 * env) {
    throw std::invalid_argument("reduced_density: state has wrong dimension");
  }
  ComplexMatrix rho(2, 2);
  for (Eigen::Index a = 0; a < 2; ++a) {
    for (Eigen::Index b = 0; b < 2; ++b) {
      rho(a, b) = state.segment(b * env, env).dot(state.segment(a * env, env));
    }
  }
  return rho;
}

double von_neumann_entropy(const ComplexMatrix& rho) {
  if (rho.rows() != rho.cols() || !is_hermitian(rho, 1e-10)) {
    throw std::invalid_argument("density matrix must be square and Hermitian");
  }
  if (std::abs(rho.trace() - 1.0) > 1e-8) {
    throw std::invalid_argument("density matrix must have unit trace");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(rho, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (double p : eig.eigenvalues()) {
    if (p < -1e-10) {
      throw std::invalid_argument("density matrix has a negative eigenvalue");
    }
    p = std::min(p, 1.0);
    if (p > 0.0) s -= p * std::log(p);
  }
  return s;
}

std::vector<EntropyPoint> entropy_trace(const SystemSpec& spec,
                                        const PiecewiseField& field) {
  const auto states = propagate_state(spec, field, initial_state(spec.n));
  std::vector<EntropyPoint> out;
  out.reserve(states.size());
  for (std::size_t k = 0; k < states.size(); ++k) {
    out.push_back({field.grid.time(static_cast<int>(k)),
                   von_neumann_entropy(reduced_density(states[k], spec.n))});
  }
  return out;
}

double final_entropy(const SystemSpec& spec, const ComplexMatrix& u_final) {
  return von_neumann_entropy(
      reduced_density(u_final * initial_state(spec.n), spec.n));
}

GateEvaluation evaluate_gate(const SystemSpec& spec,
                             const PiecewiseField& field,
                             const GateTarget& target) {
  const auto traj = propagate(spec, field, false);
  return {distance(traj.final(), target, spec.n).fidelity,
          final_entropy(spec, traj.final())};
}

}  // namespace qgate
