#include "qgate/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qgate {

void TimeGrid::validate() const {
  if (!(t_final > 0.0) || !std::isfinite(t_final)) {
    throw std::invalid_argument("t_final must be finite and positive");
  }
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
}

TimeGrid TimeGrid::with_max_step(double t_final, double max_dt) {
  if (!(max_dt > 0.0)) throw std::invalid_argument("max_dt must be positive");
  TimeGrid grid{t_final, std::max(1, static_cast<int>(std::ceil(
                                         t_final / max_dt - 1e-9)))};
  grid.validate();
  return grid;
}

bool operator==(const TimeGrid& a, const TimeGrid& b) {
  return a.t_final == b.t_final && a.steps == b.steps;
}

PiecewiseField PiecewiseField::zeros(const TimeGrid& grid) {
  grid.validate();
  return {grid, std::vector<double>(static_cast<std::size_t>(grid.steps), 0.0)};
}

double PiecewiseField::fluence() const {
  double sum = 0.0;
  for (double c : values) sum += c * c;
  return sum * grid.dt();
}

double PiecewiseField::max_amplitude() const {
  double m = 0.0;
  for (double c : values) m = std::max(m, std::abs(c));
  return m;
}

void PiecewiseField::validate(double amplitude_bound) const {
  grid.validate();
  if (values.size() != static_cast<std::size_t>(grid.steps)) {
    throw std::invalid_argument("field has " + std::to_string(values.size()) +
                                " values for a grid of " +
                                std::to_string(grid.steps) + " steps");
  }
  for (double c : values) {
    if (!std::isfinite(c)) throw std::invalid_argument("field value not finite");
    if (amplitude_bound > 0.0 && std::abs(c) > amplitude_bound) {
      throw std::invalid_argument("field amplitude exceeds bound");
    }
  }
}

StepExponential step_exponential(const ComplexMatrix& h, double dt) {
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if (h.rows() != h.cols() || hermiticity_error(h) > 1e-12 * scale) {
    throw std::invalid_argument("step_propagator: Hamiltonian is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(h);
  StepExponential step;
  step.energies = eig.eigenvalues();
  step.modes = eig.eigenvectors();
  const Eigen::VectorXcd phases =
      (-kI * dt * step.energies.cast<Complex>()).array().exp();
  step.propagator = step.modes * phases.asDiagonal() * step.modes.adjoint();
  return step;
}

ComplexMatrix step_propagator(const ComplexMatrix& h, double dt) {
  return step_exponential(h, dt).propagator;
}

std::vector<StepExponential> step_exponentials(const SystemSpec& spec,
                                               const PiecewiseField& field,
                                               ExecPolicy policy) {
  field.validate();
  const ControlledHamiltonian ham(spec);
  const double dt = field.grid.dt();
  std::vector<StepExponential> steps(field.values.size());
  for_each_index(steps.size(), policy, [&](std::size_t k) {
    steps[k] = step_exponential(ham.at(field.values[k]), dt);
  });
  return steps;
}

UnitaryTrajectory accumulate(const TimeGrid& grid,
                             const std::vector<StepExponential>& steps,
                             bool keep_trajectory) {
  const Eigen::Index dim = steps.empty() ? 0 : steps.front().propagator.rows();
  UnitaryTrajectory traj{grid, {}};
  ComplexMatrix u = ComplexMatrix::Identity(dim, dim);
  if (keep_trajectory) {
    traj.unitaries.reserve(steps.size() + 1);
    traj.unitaries.push_back(u);
  }
  for (const auto& s : steps) {
    u = s.propagator * u;
    if (keep_trajectory) traj.unitaries.push_back(u);
  }
  if (!keep_trajectory) traj.unitaries.push_back(std::move(u));
  return traj;
}

UnitaryTrajectory propagate(const SystemSpec& spec, const PiecewiseField& field,
                            bool keep_trajectory, ExecPolicy policy) {
  return accumulate(field.grid, step_exponentials(spec, field, policy),
                    keep_trajectory);
}

std::vector<ComplexMatrix> accumulate_costate(
    const std::vector<StepExponential>& steps, const ComplexMatrix& b_final) {
  std::vector<ComplexMatrix> b(steps.size() + 1);
  b.back() = b_final;
  for (std::size_t k = steps.size(); k-- > 0;) {
    b[k] = b[k + 1] * steps[k].propagator;
  }
  return b;
}

std::vector<ComplexMatrix> propagate_costate(const SystemSpec& spec,
                                             const PiecewiseField& field,
                                             const ComplexMatrix& b_final,
                                             ExecPolicy policy) {
  if (b_final.rows() != static_cast<Eigen::Index>(spec.dim()) ||
      b_final.cols() != b_final.rows()) {
    throw std::invalid_argument("costate final condition has wrong dimension");
  }
  return accumulate_costate(step_exponentials(spec, field, policy), b_final);
}

std::vector<std::vector<double>> instantaneous_spectrum(
    const SystemSpec& spec, const PiecewiseField& field) {
  field.validate();
  const ControlledHamiltonian ham(spec);
  std::vector<std::vector<double>> out;
  out.reserve(field.values.size());
  for (double c : field.values) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(ham.at(c),
                                                     Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& e = eig.eigenvalues();
    out.emplace_back(e.data(), e.data() + e.size());
  }
  return out;
}

std::vector<StateVector> propagate_state(const SystemSpec& spec,
                                         const PiecewiseField& field,
                                         const StateVector& psi0) {
  if (psi0.size() != static_cast<Eigen::Index>(spec.dim())) {
    throw std::invalid_argument("initial state has wrong dimension");
  }
  const auto steps = step_exponentials(spec, field);
  std::vector<StateVector> psi;
  psi.reserve(steps.size() + 1);
  psi.push_back(psi0);
  for (const auto& s : steps) psi.push_back(s.propagator * psi.back());
  return psi;
}

}  // namespace qgate
