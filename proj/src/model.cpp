#include "qgate/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qgate {

void SystemSpec::validate() const {
  if (n < 0 || n > kMaxEnvironment) {
    throw std::invalid_argument("environment size n must be in [0, " +
                                std::to_string(kMaxEnvironment) + "], got " +
                                std::to_string(n));
  }
  const auto p = static_cast<Eigen::Index>(n) + 1;
  if (static_cast<Eigen::Index>(omegas.size()) != p) {
    throw std::invalid_argument("expected " + std::to_string(p) +
                                " frequencies, got " +
                                std::to_string(omegas.size()));
  }
  for (double w : omegas) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("frequencies must be finite and positive");
    }
  }
  if (!std::isfinite(mu)) throw std::invalid_argument("mu must be finite");
  if (couplings.rows() != p || couplings.cols() != p) {
    throw std::invalid_argument("coupling matrix must be " + std::to_string(p) +
                                "x" + std::to_string(p));
  }
  for (Eigen::Index i = 0; i < p; ++i) {
    if (couplings(i, i) != 0.0) {
      throw std::invalid_argument("coupling matrix diagonal must be zero");
    }
    for (Eigen::Index j = 0; j < p; ++j) {
      if (!std::isfinite(couplings(i, j))) {
        throw std::invalid_argument("coupling entries must be finite");
      }
      if (couplings(i, j) != couplings(j, i)) {
        throw std::invalid_argument("coupling matrix must be symmetric");
      }
    }
  }
}

RealMatrix CouplingRule::expand(int n) const {
  if (gamma < 0.0) throw std::invalid_argument("gamma must be >= 0");
  const auto p = static_cast<Eigen::Index>(n) + 1;
  RealMatrix g = RealMatrix::Zero(p, p);
  for (Eigen::Index j = 1; j < p; ++j) g(0, j) = g(j, 0) = gamma;
  for (Eigen::Index i = 1; i < p; ++i) {
    for (Eigen::Index j = i + 1; j < p; ++j) g(i, j) = g(j, i) = gamma_prime;
  }
  return g;
}

SystemSpec default_spec(int n, double gamma, double gamma_prime) {
  if (n < 0 || n > kMaxEnvironment) {
    throw std::invalid_argument("environment size n must be in [0, " +
                                std::to_string(kMaxEnvironment) + "], got " +
                                std::to_string(n));
  }
  SystemSpec spec;
  spec.n = n;
  spec.omegas.assign(kDefaultFrequencies.begin(),
                     kDefaultFrequencies.begin() + n + 1);
  spec.couplings = CouplingRule{gamma, gamma_prime}.expand(n);
  spec.validate();
  return spec;
}

ComplexMatrix build_drift(const SystemSpec& spec) {
  spec.validate();
  const int n = spec.n;
  const auto dim = static_cast<Eigen::Index>(spec.dim());
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  std::vector<std::array<ComplexMatrix, 3>> ops;
  ops.reserve(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    ops.push_back({embed_spin_op(Axis::x, i, n), embed_spin_op(Axis::y, i, n),
                   embed_spin_op(Axis::z, i, n)});
  }
  for (int i = 0; i <= n; ++i) {
    h += spec.omegas[static_cast<std::size_t>(i)] * ops[i][2];
  }
  for (int i = 0; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      const double g = spec.couplings(i, j);
      if (g == 0.0) continue;
      for (int a = 0; a < 3; ++a) h -= g * (ops[i][a] * ops[j][a]);
    }
  }
  return h;
}

ComplexMatrix build_control_op(const SystemSpec& spec) {
  spec.validate();
  return spec.mu * embed_spin_op(Axis::x, 0, spec.n);
}

ComplexMatrix hamiltonian_at(const SystemSpec& spec, double c) {
  return ControlledHamiltonian(spec).at(c);
}

namespace {

// Real inner product on anti-Hermitian matrices: Re tr(A^dagger B).
double real_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.adjoint() * b).trace().real();
}

// Gram-Schmidt (two passes) against the current basis. Returns true and
// appends the normalized residual when it exceeds the threshold.
bool extend_basis(std::vector<ComplexMatrix>& basis, ComplexMatrix candidate,
                  double threshold) {
  const double scale = candidate.norm();
  if (scale <= threshold) return false;
  candidate /= scale;
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& b : basis) candidate -= real_inner(b, candidate) * b;
  }
  const double residual = candidate.norm();
  if (residual <= threshold) return false;
  basis.push_back(candidate / residual);
  return true;
}

}  // namespace

LieClosure controllability_dim(const SystemSpec& spec, int max_depth) {
  if (spec.n > 2) {
    throw std::invalid_argument(
        "controllability_dim supports n <= 2 (cost grows as 16^(n+1))");
  }
  constexpr double kThreshold = 1e-10;
  const std::size_t full = spec.dim() * spec.dim();

  std::vector<ComplexMatrix> basis;
  std::vector<ComplexMatrix> frontier;
  for (const ComplexMatrix& g :
       {ComplexMatrix(kI * build_drift(spec)),
        ComplexMatrix(kI * build_control_op(spec))}) {
    if (extend_basis(basis, g, kThreshold)) frontier.push_back(basis.back());
  }

  LieClosure result;
  while (!frontier.empty()) {
    if (result.depth >= max_depth) {
      result.dimension = static_cast<int>(basis.size());
      return result;
    }
    ++result.depth;
    std::vector<ComplexMatrix> next;
    for (const auto& a : frontier) {
      // Iterate by index: basis grows inside the loop.
      for (std::size_t k = 0; k < basis.size() && basis.size() < full; ++k) {
        if (extend_basis(basis, commutator(a, basis[k]), kThreshold)) {
          next.push_back(basis.back());
        }
      }
    }
    frontier = std::move(next);
  }
  result.closed = true;
  result.dimension = static_cast<int>(basis.size());
  return result;
}

bool completely_controllable(const LieClosure& closure, int n) {
  const long long d = 1LL << (n + 1);
  return closure.dimension >= d * d - 1;
}

}  // namespace qgate
