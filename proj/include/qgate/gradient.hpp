#pragma once

// Adjoint-gradient optimisation of unconstrained piecewise-constant fields.
//
// Objective: K = J(U(t_f)) + (alpha / 2) sum_k c_k^2 dt. The Lagrange term
// vanishes because the discrete propagation satisfies the Schrodinger
// equation by construction. The gradient is exact for the discrete problem:
//
//   dN/dU     : N = ||Q||_*, Q = W S V^dagger  =>  dN = Re tr((G^dagger (x) V W^dagger) dU)
//   B(t_f)    = (dK/dN) (G^dagger (x) V W^dagger),   dK/dN = -lambda_n^2 / J
//   B(t_k)    = B(t_{k+1}) exp(-i H_k dt)
//   dK/dc_k   = Re tr(B(t_{k+1}) dE_k/dc_k U(t_k)) + alpha c_k dt
//
// dE_k/dc_k comes from the Daleckii-Krein formula in the eigenbasis of H_k.

#include <string_view>
#include <vector>

#include "qgate/measures.hpp"

namespace qgate {

enum class Objective {
  distance,          // J + fluence penalty
  squared_distance,  // J^2 + fluence penalty; smooth at J = 0
};

constexpr std::string_view to_string(Objective o) {
  return o == Objective::distance ? "distance" : "squared_distance";
}

enum class SearchDirection { lbfgs, steepest };

struct GradConfig {
  double alpha = 1e-3;
  int max_iters = 500;
  double tol_grad = 1e-9;
  double tol_obj = 1e-13;   // relative decrease per iteration
  double tol_j = 1e-10;     // stop once the distance is below this
  double initial_step = 1.0;
  double backtrack = 0.5;
  double armijo = 1e-4;
  int max_backtracks = 50;
  Objective objective = Objective::distance;
  SearchDirection direction = SearchDirection::lbfgs;
  int lbfgs_memory = 12;
  double amplitude_bound = 0.0;  // 0 disables clipping
  ExecPolicy policy = ExecPolicy::serial;

  void validate() const;
};

/// Below this distance the J path switches to J^2 to avoid the 1/J factor.
inline constexpr double kSingularDistance = 1e-12;

struct GradientResult {
  std::vector<double> gradient;
  double objective = 0.0;  // value of the objective actually differentiated
  double j = 0.0;
  bool squared_path = false;
};

double objective_k(const SystemSpec& spec, const PiecewiseField& field,
                   const GateTarget& target, double alpha,
                   Objective objective = Objective::distance);

GradientResult gradient_k(const SystemSpec& spec, const PiecewiseField& field,
                          const GateTarget& target, double alpha,
                          Objective objective = Objective::distance,
                          ExecPolicy policy = ExecPolicy::serial);

/// Per-step derivative assembly Re tr(B_{k+1} dE_k U_k). The index-parallel
/// kernel of the backward pass; exposed for the serial/parallel benchmark.
std::vector<double> assemble_gradient(const std::vector<StepExponential>& steps,
                                      const std::vector<ComplexMatrix>& forward,
                                      const std::vector<ComplexMatrix>& costate,
                                      const ComplexMatrix& control, double dt,
                                      ExecPolicy policy);

enum class StopReason {
  already_optimal,
  target_reached,
  gradient_tolerance,
  objective_tolerance,
  max_iterations,
  line_search_failure,
};

std::string_view to_string(StopReason r);

struct OptimReport {
  PiecewiseField field;
  std::vector<double> objective_history;  // entry 0 is the initial field
  double fidelity = 0.0;
  double fluence = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  StopReason reason = StopReason::max_iterations;
  bool squared_path_used = false;
};

OptimReport optimize(const SystemSpec& spec, const PiecewiseField& init,
                     const GateTarget& target, const GradConfig& config);

}  // namespace qgate
