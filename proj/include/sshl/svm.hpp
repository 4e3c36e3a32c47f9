#pragma once

// Per-bit dual problem
//
//   max  sum_n alpha_n - 1/2 sum_{n,j} alpha_n alpha_j y_n y_j K_nj
//   s.t. 0 <= alpha_n <= cap_n,  sum_n alpha_n y_n = 0
//
// With one-hot group weights only the (sample, assigned group) dual variables
// can be nonzero, so the NG-variable problem collapses to this N-variable
// C-SVM with y_n = mu_{g(n), b}.

#include "sshl/core.hpp"
#include "sshl/kernels.hpp"

#include <optional>

namespace sshl {

struct SvmProblem {
  Matrix gram;    // combined kernel, jitter included
  Vector labels;  // +1 / -1
  Vector caps;    // C for active samples, 0 for inactive ones
};

struct SvmTolerances {
  double kkt = 1e-3;  // stop when the maximal violating pair gap drops below this
  long max_iterations = 100'000'000;
};

struct SvmSolution {
  Vector alpha;
  Vector eta;  // alpha_n y_n
  double beta = 0.0;
  double dual_objective = 0.0;
  double primal_objective = 0.0;
  long iterations = 0;
  double max_violation = 0.0;
};

/// Two-variable working-set solver. `warm_start` must be feasible for the box
/// and equality constraints; it is ignored otherwise.
SvmSolution solve(const SvmProblem& problem, const SvmTolerances& tolerances = {},
                  const std::optional<Vector>& warm_start = std::nullopt);

/// 1/2 eta' K eta + sum_n cap_n max(0, 1 - y_n ((K eta)_n + beta)).
double primal_objective(const SvmProblem& problem, const Vector& eta, double beta);
/// sum_n alpha_n - 1/2 eta' K eta.
double dual_objective(const SvmProblem& problem, const Vector& alpha);

/// f_b on raw (unstandardized) query rows.
Vector decision_values(const Model& model, std::size_t bit, const Matrix& queries);

/// theta_m^2 eta' K_m eta for every kernel, clamped at 0.
Vector regularizer_norms(const Vector& eta, const Vector& theta, const KernelBank& bank);

}  // namespace sshl
