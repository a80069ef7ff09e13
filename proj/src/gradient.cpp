#include "qgate/gradient.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <stdexcept>

namespace qgate {

void GradConfig::validate() const {
  if (alpha < 0.0) throw std::invalid_argument("gradient: alpha must be >= 0");
  if (max_iters < 0) throw std::invalid_argument("gradient: max_iters must be >= 0");
  if (!(tol_grad > 0.0) || !(tol_obj > 0.0) || tol_j < 0.0) {
    throw std::invalid_argument("gradient: tolerances must be positive");
  }
  if (!(initial_step > 0.0) || !(backtrack > 0.0 && backtrack < 1.0) ||
      !(armijo > 0.0 && armijo < 1.0) || max_backtracks < 1) {
    throw std::invalid_argument("gradient: invalid line-search parameters");
  }
  if (lbfgs_memory < 1) throw std::invalid_argument("gradient: lbfgs_memory must be >= 1");
  if (amplitude_bound < 0.0) {
    throw std::invalid_argument("gradient: amplitude_bound must be >= 0");
  }
}

std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::already_optimal:
      return "already_optimal";
    case StopReason::target_reached:
      return "target_reached";
    case StopReason::gradient_tolerance:
      return "gradient_tolerance";
    case StopReason::objective_tolerance:
      return "objective_tolerance";
    case StopReason::max_iterations:
      return "max_iterations";
    case StopReason::line_search_failure:
      return "line_search_failure";
  }
  return "unknown";
}

namespace {

double penalty(const PiecewiseField& field, double alpha) {
  return 0.5 * alpha * field.fluence();
}

double objective_value(double j, Objective objective) {
  return objective == Objective::distance ? j : j * j;
}

}  // namespace

double objective_k(const SystemSpec& spec, const PiecewiseField& field,
                   const GateTarget& target, double alpha,
                   Objective objective) {
  const auto traj = propagate(spec, field, false);
  return objective_value(distance(traj.final(), target, spec.n).j, objective) +
         penalty(field, alpha);
}

std::vector<double> assemble_gradient(const std::vector<StepExponential>& steps,
                                      const std::vector<ComplexMatrix>& forward,
                                      const std::vector<ComplexMatrix>& costate,
                                      const ComplexMatrix& control, double dt,
                                      ExecPolicy policy) {
  std::vector<double> grad(steps.size());
  for_each_index(steps.size(), policy, [&](std::size_t k) {
    const auto& s = steps[k];
    const Eigen::Index d = s.energies.size();
    // Divided differences of exp(-i e dt):
    //   (f(a) - f(b)) / (a - b) = -i dt exp(-i m dt) sinc(delta),
    //   m = (a + b) / 2, delta = (a - b) dt / 2.
    ComplexMatrix gamma(d, d);
    for (Eigen::Index a = 0; a < d; ++a) {
      for (Eigen::Index b = 0; b < d; ++b) {
        const double m = 0.5 * (s.energies(a) + s.energies(b));
        const double delta = 0.5 * (s.energies(a) - s.energies(b)) * dt;
        const double sinc = delta == 0.0 ? 1.0 : std::sin(delta) / delta;
        gamma(a, b) = -kI * dt * std::exp(-kI * (m * dt)) * sinc;
      }
    }
    // dH/dc = -control
    const ComplexMatrix y = -(s.modes.adjoint() * control * s.modes);
    const ComplexMatrix m =
        s.modes.adjoint() * forward[k] * costate[k + 1] * s.modes;
    grad[k] = m.transpose().cwiseProduct(gamma.cwiseProduct(y)).sum().real();
  });
  return grad;
}

GradientResult gradient_k(const SystemSpec& spec, const PiecewiseField& field,
                          const GateTarget& target, double alpha,
                          Objective objective, ExecPolicy policy) {
  const auto steps = step_exponentials(spec, field, policy);
  const auto traj = accumulate(field.grid, steps, true);
  const DistanceResult dist = distance(traj.final(), target, spec.n);

  GradientResult out;
  out.j = dist.j;
  if (objective == Objective::distance && dist.j < kSingularDistance) {
    objective = Objective::squared_distance;
    out.squared_path = true;
  }
  out.objective = objective_value(dist.j, objective) + penalty(field, alpha);

  // Nuclear-norm subgradient W V^dagger, transposed into dN = Re tr(P dQ).
  Eigen::JacobiSVD<ComplexMatrix> svd(dist.q,
                                      Eigen::ComputeFullU | Eigen::ComputeFullV);
  const ComplexMatrix p = svd.matrixV() * svd.matrixU().adjoint();
  const double lambda2 = std::pow(distance_normalization(spec.n), 2);
  const double dk_dn = objective == Objective::distance
                           ? -lambda2 / dist.j
                           : -2.0 * lambda2;
  const ComplexMatrix b_final = dk_dn * kron(target.g.adjoint(), p);

  const auto costate = accumulate_costate(steps, b_final);
  out.gradient = assemble_gradient(steps, traj.unitaries, costate,
                                   build_control_op(spec), field.grid.dt(),
                                   policy);
  const double dt = field.grid.dt();
  for (std::size_t k = 0; k < out.gradient.size(); ++k) {
    out.gradient[k] += alpha * field.values[k] * dt;
  }
  return out;
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

struct CurvaturePair {
  std::vector<double> s;
  std::vector<double> y;
  double rho;
};

std::vector<double> lbfgs_direction(const std::vector<double>& grad,
                                    const std::deque<CurvaturePair>& memory) {
  std::vector<double> q = grad;
  std::vector<double> alphas(memory.size());
  for (std::size_t i = memory.size(); i-- > 0;) {
    alphas[i] = memory[i].rho * dot(memory[i].s, q);
    for (std::size_t k = 0; k < q.size(); ++k) q[k] -= alphas[i] * memory[i].y[k];
  }
  if (!memory.empty()) {
    const auto& last = memory.back();
    const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
    for (double& v : q) v *= gamma;
  }
  for (std::size_t i = 0; i < memory.size(); ++i) {
    const double beta = memory[i].rho * dot(memory[i].y, q);
    for (std::size_t k = 0; k < q.size(); ++k) {
      q[k] += memory[i].s[k] * (alphas[i] - beta);
    }
  }
  for (double& v : q) v = -v;
  return q;
}

}  // namespace

OptimReport optimize(const SystemSpec& spec, const PiecewiseField& init,
                     const GateTarget& target, const GradConfig& config) {
  spec.validate();
  target.validate();
  config.validate();
  init.validate();

  OptimReport report;
  report.field = init;
  if (config.amplitude_bound > 0.0) {
    for (double& c : report.field.values) {
      c = std::clamp(c, -config.amplitude_bound, config.amplitude_bound);
    }
  }
  Objective objective = config.objective;

  auto grad = gradient_k(spec, report.field, target, config.alpha, objective,
                         config.policy);
  if (grad.squared_path) {
    objective = Objective::squared_distance;
    report.squared_path_used = true;
  }
  report.objective_history.push_back(grad.objective);
  report.grad_norm = norm(grad.gradient);

  std::deque<CurvaturePair> memory;
  if (grad.j < config.tol_j) {
    report.reason = StopReason::already_optimal;
  } else {
    report.reason = StopReason::max_iterations;
    double step_hint = config.initial_step;
    for (int it = 0; it < config.max_iters; ++it) {
      if (report.grad_norm < config.tol_grad) {
        report.reason = StopReason::gradient_tolerance;
        break;
      }
      std::vector<double> dir;
      if (config.direction == SearchDirection::lbfgs) {
        dir = lbfgs_direction(grad.gradient, memory);
      }
      double slope = dir.empty() ? 0.0 : dot(dir, grad.gradient);
      if (dir.empty() || !(slope < 0.0)) {
        memory.clear();
        dir = grad.gradient;
        for (double& v : dir) v = -v;
        slope = -report.grad_norm * report.grad_norm;
      }
      // L-BFGS steps are scaled by the curvature estimate; steepest descent
      // reuses the last accepted length.
      double step = (config.direction == SearchDirection::lbfgs && !memory.empty())
                        ? config.initial_step
                        : step_hint;

      PiecewiseField trial = report.field;
      double trial_value = 0.0;
      bool accepted = false;
      for (int bt = 0; bt < config.max_backtracks; ++bt) {
        for (std::size_t k = 0; k < trial.values.size(); ++k) {
          double c = report.field.values[k] + step * dir[k];
          if (config.amplitude_bound > 0.0) {
            c = std::clamp(c, -config.amplitude_bound, config.amplitude_bound);
          }
          trial.values[k] = c;
        }
        trial_value =
            objective_k(spec, trial, target, config.alpha, objective);
        if (trial_value <= grad.objective + config.armijo * step * slope) {
          accepted = true;
          break;
        }
        step *= config.backtrack;
      }
      if (!accepted) {
        if (!memory.empty()) {
          // Retry along the plain gradient before giving up.
          memory.clear();
          continue;
        }
        report.reason = StopReason::line_search_failure;
        break;
      }
      step_hint = std::min(step / config.backtrack, 1e6);

      auto next = gradient_k(spec, trial, target, config.alpha, objective,
                             config.policy);
      if (next.squared_path && objective == Objective::distance) {
        objective = Objective::squared_distance;
        report.squared_path_used = true;
        memory.clear();
      } else {
        CurvaturePair pair;
        pair.s.resize(dir.size());
        pair.y.resize(dir.size());
        for (std::size_t k = 0; k < dir.size(); ++k) {
          pair.s[k] = trial.values[k] - report.field.values[k];
          pair.y[k] = next.gradient[k] - grad.gradient[k];
        }
        const double sy = dot(pair.s, pair.y);
        if (sy > 1e-12 * norm(pair.s) * norm(pair.y)) {
          pair.rho = 1.0 / sy;
          memory.push_back(std::move(pair));
          if (static_cast<int>(memory.size()) > config.lbfgs_memory) {
            memory.pop_front();
          }
        }
      }

      const double previous = grad.objective;
      report.field = std::move(trial);
      grad = std::move(next);
      report.objective_history.push_back(grad.objective);
      report.grad_norm = norm(grad.gradient);
      report.iterations = it + 1;

      if (grad.j < config.tol_j) {
        report.reason = StopReason::target_reached;
        break;
      }
      if (previous - grad.objective <=
          config.tol_obj * std::max(std::abs(previous), 1e-300)) {
        report.reason = StopReason::objective_tolerance;
        break;
      }
    }
  }

  report.fidelity = 1.0 - grad.j;
  report.fluence = report.field.fluence();
  return report;
}

}  // namespace qgate
