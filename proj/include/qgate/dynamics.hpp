#pragma once

// Exact piecewise-constant propagation of the composite-system unitary.
//
// The field value c_k applies on [t_k, t_{k+1}); each step is propagated by
// the exact exponential exp(-i H(c_k) dt) from a Hermitian eigendecomposition,
// so unitarity holds to machine precision and discrete gradients are exact.

#include <vector>

#include "qgate/model.hpp"
#include "qgate/parallel.hpp"

namespace qgate {

struct TimeGrid {
  double t_final = 1.0;
  int steps = 1;

  double dt() const { return t_final / steps; }
  double time(int k) const { return k * dt(); }
  double midpoint(int k) const { return (k + 0.5) * dt(); }

  void validate() const;

  /// Smallest step count with dt <= max_dt (default 0.05).
  static TimeGrid with_max_step(double t_final, double max_dt = 0.05);
};

bool operator==(const TimeGrid& a, const TimeGrid& b);

struct PiecewiseField {
  TimeGrid grid;
  std::vector<double> values;  // one per step

  static PiecewiseField zeros(const TimeGrid& grid);

  /// sum_k c_k^2 dt
  double fluence() const;
  double max_amplitude() const;

  /// Checks sizes and finiteness; a positive bound also caps |c_k|.
  void validate(double amplitude_bound = 0.0) const;
};

struct UnitaryTrajectory {
  TimeGrid grid;
  /// U(t_0) = I, ..., U(t_M) when the trajectory is kept; otherwise only
  /// U(t_M).
  std::vector<ComplexMatrix> unitaries;

  const ComplexMatrix& final() const { return unitaries.back(); }
  bool full() const {
    return unitaries.size() == static_cast<std::size_t>(grid.steps) + 1;
  }
};

/// Spectral data of one constant-Hamiltonian step.
struct StepExponential {
  Eigen::VectorXd energies;  // ascending
  ComplexMatrix modes;       // columns are eigenvectors
  ComplexMatrix propagator;  // exp(-i H dt)
};

/// exp(-i h dt). Throws std::invalid_argument if h is not Hermitian.
ComplexMatrix step_propagator(const ComplexMatrix& h, double dt);

StepExponential step_exponential(const ComplexMatrix& h, double dt);

/// Per-step exponentials for every field value. Steps are independent, so
/// this is the data-parallel kernel of the forward pass.
std::vector<StepExponential> step_exponentials(
    const SystemSpec& spec, const PiecewiseField& field,
    ExecPolicy policy = ExecPolicy::serial);

UnitaryTrajectory propagate(const SystemSpec& spec, const PiecewiseField& field,
                            bool keep_trajectory,
                            ExecPolicy policy = ExecPolicy::serial);

/// Ordered product of already-computed step propagators.
UnitaryTrajectory accumulate(const TimeGrid& grid,
                             const std::vector<StepExponential>& steps,
                             bool keep_trajectory);

/// Backward solution of dB/dt = i B H: B(t_M) = b_final and
/// B(t_k) = B(t_{k+1}) exp(-i H_k dt). Returns M + 1 matrices.
std::vector<ComplexMatrix> propagate_costate(
    const SystemSpec& spec, const PiecewiseField& field,
    const ComplexMatrix& b_final, ExecPolicy policy = ExecPolicy::serial);

std::vector<ComplexMatrix> accumulate_costate(
    const std::vector<StepExponential>& steps, const ComplexMatrix& b_final);

/// Ascending eigenvalues of H(c_k) for every step.
std::vector<std::vector<double>> instantaneous_spectrum(
    const SystemSpec& spec, const PiecewiseField& field);

/// State trajectory psi(t_k) = U(t_k) psi0, k = 0..M.
std::vector<StateVector> propagate_state(const SystemSpec& spec,
                                         const PiecewiseField& field,
                                         const StateVector& psi0);

}  // namespace qgate
