#include "sshl/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace sshl {

namespace {

constexpr double kTau = 1e-12;

void check_problem(const SvmProblem& problem) {
  const Eigen::Index n = problem.gram.rows();
  if (problem.gram.cols() != n || problem.labels.size() != n || problem.caps.size() != n) {
    throw DimensionError("svm: gram, labels and caps must agree in size");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (problem.labels[i] != 1.0 && problem.labels[i] != -1.0) throw DimensionError("svm: labels must be +1 or -1");
    if (!(problem.caps[i] >= 0.0)) throw ConfigError("svm: box caps must be nonnegative");
    if (problem.gram(i, i) < -1e-10) throw NumericalError("svm: gram matrix has a negative diagonal entry");
  }
  const double asym = (problem.gram - problem.gram.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9 * (1.0 + problem.gram.cwiseAbs().maxCoeff())) throw NumericalError("svm: gram matrix is not symmetric");
}

bool feasible(const SvmProblem& problem, const Vector& alpha) {
  if (alpha.size() != problem.caps.size()) return false;
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    if (alpha[i] < 0.0 || alpha[i] > problem.caps[i]) return false;
  }
  return std::abs(alpha.dot(problem.labels)) <= 1e-9 * (1.0 + problem.caps.sum());
}

struct Smo {
  const Matrix& k;
  const Vector& y;
  const Vector& cap;
  Vector alpha;
  Vector grad;  // Q alpha - 1

  bool in_up(Eigen::Index t) const { return y[t] > 0 ? alpha[t] < cap[t] : alpha[t] > 0.0; }
  bool in_low(Eigen::Index t) const { return y[t] > 0 ? alpha[t] > 0.0 : alpha[t] < cap[t]; }

  // Maximal violating i, second-order choice of j. Returns the KKT gap.
  double select(Eigen::Index& out_i, Eigen::Index& out_j) const {
    const Eigen::Index n = alpha.size();
    double gmax = -std::numeric_limits<double>::infinity();
    Eigen::Index i = -1;
    for (Eigen::Index t = 0; t < n; ++t) {
      if (in_up(t) && -y[t] * grad[t] >= gmax) {
        gmax = -y[t] * grad[t];
        i = t;
      }
    }
    double gmax2 = -std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    Eigen::Index j = -1;
    for (Eigen::Index t = 0; t < n; ++t) {
      if (!in_low(t)) continue;
      const double v = y[t] * grad[t];
      gmax2 = std::max(gmax2, v);
      const double b = gmax + v;
      if (i < 0 || b <= 0.0) continue;
      double a = k(i, i) + k(t, t) - 2.0 * k(i, t);
      if (a < -1e-10 * (1.0 + k(i, i) + k(t, t))) throw NumericalError("svm: gram matrix is not positive semidefinite");
      if (a <= 0.0) a = kTau;
      const double obj = -(b * b) / a;
      if (obj <= best) {
        best = obj;
        j = t;
      }
    }
    out_i = i;
    out_j = j;
    if (i < 0 || j < 0) return 0.0;
    return gmax + gmax2;
  }

  void update(Eigen::Index i, Eigen::Index j) {
    const double ci = cap[i];
    const double cj = cap[j];
    const double old_i = alpha[i];
    const double old_j = alpha[j];
    double& ai = alpha[i];
    double& aj = alpha[j];
    double quad = k(i, i) + k(j, j) - 2.0 * k(i, j);
    if (quad <= 0.0) quad = kTau;
    if (y[i] != y[j]) {
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = ai - aj;
      ai += delta;
      aj += delta;
      if (diff > 0.0) {
        if (aj < 0.0) {
          aj = 0.0;
          ai = diff;
        }
      } else if (ai < 0.0) {
        ai = 0.0;
        aj = -diff;
      }
      if (diff > ci - cj) {
        if (ai > ci) {
          ai = ci;
          aj = ci - diff;
        }
      } else if (aj > cj) {
        aj = cj;
        ai = cj + diff;
      }
    } else {
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = ai + aj;
      ai -= delta;
      aj += delta;
      if (sum > ci) {
        if (ai > ci) {
          ai = ci;
          aj = sum - ci;
        }
      } else if (aj < 0.0) {
        aj = 0.0;
        ai = sum;
      }
      if (sum > cj) {
        if (aj > cj) {
          aj = cj;
          ai = sum - cj;
        }
      } else if (ai < 0.0) {
        ai = 0.0;
        aj = sum;
      }
    }
    const double di = (ai - old_i) * y[i];
    const double dj = (aj - old_j) * y[j];
    // grad_t += y_t (K_ti di + K_tj dj)
    grad.array() += y.array() * (k.col(i).array() * di + k.col(j).array() * dj);
  }

  double offset() const {
    double ub = std::numeric_limits<double>::infinity();
    double lb = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    int free = 0;
    for (Eigen::Index t = 0; t < alpha.size(); ++t) {
      if (cap[t] <= 0.0) continue;
      const double yg = y[t] * grad[t];
      if (alpha[t] >= cap[t]) {
        if (y[t] < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
      } else if (alpha[t] <= 0.0) {
        if (y[t] > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
      } else {
        ++free;
        sum += yg;
      }
    }
    const double rho = free > 0 ? sum / free : (ub + lb) / 2.0;
    return -rho;
  }
};

}  // namespace

double primal_objective(const SvmProblem& problem, const Vector& eta, double beta) {
  const Vector k_eta = problem.gram * eta;
  double hinge = 0.0;
  for (Eigen::Index n = 0; n < eta.size(); ++n) {
    if (problem.caps[n] > 0.0) hinge += problem.caps[n] * std::max(0.0, 1.0 - problem.labels[n] * (k_eta[n] + beta));
  }
  return 0.5 * eta.dot(k_eta) + hinge;
}

double dual_objective(const SvmProblem& problem, const Vector& alpha) {
  const Vector eta = alpha.cwiseProduct(problem.labels);
  return alpha.sum() - 0.5 * eta.dot(problem.gram * eta);
}

SvmSolution solve(const SvmProblem& problem, const SvmTolerances& tolerances, const std::optional<Vector>& warm_start) {
  check_problem(problem);
  const Eigen::Index n = problem.gram.rows();
  int positives = 0;
  int negatives = 0;
  for (Eigen::Index t = 0; t < n; ++t) {
    if (problem.caps[t] > 0.0) (problem.labels[t] > 0 ? positives : negatives) += 1;
  }
  if (positives + negatives == 0) throw DegenerateProblemError("svm: no active samples");

  SvmSolution sol;
  if (positives == 0 || negatives == 0) {
    // one class only: w = 0 and beta = that class gives zero hinge loss
    sol.alpha = Vector::Zero(n);
    sol.eta = Vector::Zero(n);
    sol.beta = positives > 0 ? 1.0 : -1.0;
    sol.dual_objective = 0.0;
    sol.primal_objective = primal_objective(problem, sol.eta, sol.beta);
    return sol;
  }

  Smo smo{problem.gram, problem.labels, problem.caps, Vector::Zero(n), -Vector::Ones(n)};
  if (warm_start && feasible(problem, *warm_start)) {
    smo.alpha = *warm_start;
    const Vector eta = smo.alpha.cwiseProduct(problem.labels);
    smo.grad = problem.labels.cwiseProduct(problem.gram * eta) - Vector::Ones(n);
  }

  long it = 0;
  double violation = 0.0;
  for (; it < tolerances.max_iterations; ++it) {
    Eigen::Index i = -1;
    Eigen::Index j = -1;
    violation = smo.select(i, j);
    if (i < 0 || j < 0 || violation < tolerances.kkt) break;
    smo.update(i, j);
  }

  sol.beta = smo.offset();
  sol.alpha = std::move(smo.alpha);
  sol.eta = sol.alpha.cwiseProduct(problem.labels);
  sol.iterations = it;
  sol.max_violation = violation;
  sol.dual_objective = dual_objective(problem, sol.alpha);
  sol.primal_objective = primal_objective(problem, sol.eta, sol.beta);
  return sol;
}

Vector decision_values(const Model& model, std::size_t bit, const Matrix& queries) {
  if (bit >= model.num_bits()) throw DimensionError("decision_values: bit index out of range");
  const Matrix std_queries = model.standardization.apply(queries);
  const BitFunction& fb = model.bits[bit];
  Vector f = Vector::Constant(std_queries.rows(), fb.beta);
  for (std::size_t m = 0; m < model.num_kernels(); ++m) {
    const double theta = fb.theta[static_cast<Eigen::Index>(m)];
    if (theta == 0.0) continue;
    f += theta * (gram_matrix(model.kernels[m], model.training_features, std_queries).transpose() * fb.eta);
  }
  return f;
}

Vector regularizer_norms(const Vector& eta, const Vector& theta, const KernelBank& bank) {
  if (static_cast<std::size_t>(theta.size()) != bank.size()) throw DimensionError("regularizer_norms: theta size mismatch");
  if (eta.size() != bank.samples()) throw DimensionError("regularizer_norms: eta size mismatch");
  Vector out(theta.size());
  for (Eigen::Index m = 0; m < theta.size(); ++m) {
    const double q = eta.dot(bank.grams[static_cast<std::size_t>(m)] * eta);
    out[m] = std::max(0.0, theta[m] * theta[m] * q);
  }
  return out;
}

}  // namespace sshl
