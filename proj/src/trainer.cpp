#include "sshl/trainer.hpp"

#include "sshl/hasher.hpp"
#include "sshl/svm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <string>

namespace sshl {

Assignment assign_groups(const DecisionMatrix& f, const Codebook& codebook, const Dataset& data) {
  if (static_cast<std::size_t>(f.rows()) != data.size()) throw DimensionError("assign_groups: row count mismatch");
  Assignment a;
  a.groups = data.groups;
  a.group.resize(data.size());
  const auto bits = static_cast<std::size_t>(f.cols());
  for (std::size_t n = 0; n < data.size(); ++n) {
    if (data.labels[n]) {
      a.group[n] = *data.labels[n];
      continue;
    }
    const std::span<const double> row{f.row(static_cast<Eigen::Index>(n)).data(), bits};
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < codebook.groups(); ++g) {
      const double d = soft_distance(row, codebook.codewords[g]);
      if (d < best) {
        best = d;
        a.group[n] = static_cast<int>(g);
      }
    }
  }
  return a;
}

Assignment assign_groups(const Model& model, const Dataset& data) {
  return assign_groups(decision_matrix(model, data.features), model.codebook, data);
}

Vector update_mkl_weights(const Vector& norms, double p) {
  if (!(p > 1.0)) throw ConfigError("update_mkl_weights: p must be > 1");
  const Eigen::Index m = norms.size();
  if ((norms.array() < 0.0).any()) throw ConfigError("update_mkl_weights: norms must be nonnegative");
  const double denom = std::pow(norms.array().pow(p / (p + 1.0)).sum(), 1.0 / p);
  if (!(denom > 0.0)) return Vector::Constant(m, std::pow(static_cast<double>(m), -1.0 / p));
  return norms.array().pow(1.0 / (p + 1.0)) / denom;
}

Codebook update_codewords(const Assignment& assignment, const DecisionMatrix& f, const Codebook& previous) {
  if (static_cast<std::size_t>(f.rows()) != assignment.group.size()) {
    throw DimensionError("update_codewords: assignment and decision values differ in row count");
  }
  const auto groups = previous.groups();
  const auto bits = static_cast<Eigen::Index>(f.cols());
  // hinge sums for mu = +1 and mu = -1, per (group, bit)
  Matrix cost_pos = Matrix::Zero(static_cast<Eigen::Index>(groups), bits);
  Matrix cost_neg = Matrix::Zero(static_cast<Eigen::Index>(groups), bits);
  std::vector<std::size_t> members(groups, 0);
  for (Eigen::Index n = 0; n < f.rows(); ++n) {
    const int g = assignment.group[static_cast<std::size_t>(n)];
    ++members[static_cast<std::size_t>(g)];
    for (Eigen::Index b = 0; b < bits; ++b) {
      cost_pos(g, b) += std::max(0.0, 1.0 - f(n, b));
      cost_neg(g, b) += std::max(0.0, 1.0 + f(n, b));
    }
  }
  Codebook out = previous;
  for (std::size_t g = 0; g < groups; ++g) {
    if (members[g] == 0) continue;
    const auto gi = static_cast<Eigen::Index>(g);
    for (Eigen::Index b = 0; b < bits; ++b) {
      out.codewords[g].set(static_cast<std::size_t>(b), cost_pos(gi, b) <= cost_neg(gi, b) ? 1 : -1);
    }
  }
  return out;
}

Model initialize(const Dataset& data, const TrainConfig& config, std::mt19937_64& rng) {
  config.validate();
  const auto bits = static_cast<std::size_t>(config.bits);
  const auto groups = static_cast<std::size_t>(data.groups);
  if (bits < 64 && groups > (std::size_t{1} << bits)) {
    throw ConfigError(std::to_string(groups) + " distinct codewords do not fit in " + std::to_string(bits) + " bits");
  }
  Model model;
  model.kernels = config.kernels.empty() ? default_kernel_bank() : config.kernels;
  for (const auto& k : model.kernels) validate(k);
  model.training_features = data.features;
  model.standardization = Standardization::identity(data.dim());
  model.label_values = data.label_values;
  model.c = config.c;
  model.p = config.p;

  const auto m = static_cast<Eigen::Index>(model.kernels.size());
  const auto n = static_cast<Eigen::Index>(data.size());
  const Vector theta = Vector::Constant(m, std::pow(static_cast<double>(m), -1.0 / config.p));
  model.bits.assign(bits, BitFunction{Vector::Zero(n), 0.0, theta});

  model.codebook.codewords.reserve(groups);
  while (model.codebook.codewords.size() < groups) {
    HashCode code(bits);
    for (std::size_t b = 0; b < bits; ++b) code.set(b, (rng() & 1u) ? 1 : -1);
    if (std::find(model.codebook.codewords.begin(), model.codebook.codewords.end(), code) ==
        model.codebook.codewords.end()) {
      model.codebook.codewords.push_back(std::move(code));
    }
  }
  return model;
}

DecisionMatrix training_decisions(const Model& model, const KernelBank& bank) {
  const auto n = bank.samples();
  const auto nbits = static_cast<Eigen::Index>(model.num_bits());
  DecisionMatrix f(n, nbits);
#pragma omp parallel for schedule(static)
  for (Eigen::Index b = 0; b < nbits; ++b) {
    const BitFunction& fb = model.bits[static_cast<std::size_t>(b)];
    Vector col = Vector::Constant(n, fb.beta);
    for (std::size_t m = 0; m < bank.size(); ++m) {
      const double theta = fb.theta[static_cast<Eigen::Index>(m)];
      if (theta != 0.0) col.noalias() += theta * (bank.grams[m] * fb.eta);
    }
    f.col(b) = col;
  }
  return f;
}

void write_log_header(std::ostream& os) { os << "iteration\tsurrogate\tdistortion\tsvm_objective\telapsed_s\n"; }

void write_log_line(std::ostream& os, const IterationStats& s) {
  const auto old = os.precision(12);
  os << s.iteration << '\t' << s.surrogate << '\t' << s.distortion << '\t' << s.svm_objective << '\t' << s.seconds
     << '\n';
  os.precision(old);
}

namespace {

double bit_hinge(const Eigen::Ref<const Vector>& f, const Vector& labels) {
  double total = 0.0;
  for (Eigen::Index n = 0; n < f.size(); ++n) total += std::max(0.0, 1.0 - labels[n] * f[n]);
  return total;
}

double recomputed_surrogate(const DecisionMatrix& f, const Codebook& codebook, const Dataset& data) {
  return surrogate_loss(f, codebook, assign_groups(f, codebook, data));
}

void check_training_input(const Dataset& data, const TrainConfig& config) {
  config.validate();
  if (data.size() == 0) throw ConfigError("training set is empty");
  data.validate();
  if (data.groups < 2) throw ConfigError("need at least 2 groups, got " + std::to_string(data.groups));
  if (config.mode == TrainMode::supervised && !data.fully_labeled()) {
    throw ConfigError("supervised training requires every sample to be labeled; use semi or transductive mode");
  }
}

}  // namespace

TrainState train(const Dataset& data, const TrainConfig& config, std::ostream* log) {
  check_training_input(data, config);
  const auto start = std::chrono::steady_clock::now();
  const auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };

  const Standardization standardization =
      config.standardize ? Standardization::fit(data.features) : Standardization::identity(data.dim());
  Dataset work = data;
  work.features = standardization.apply(data.features);

  std::mt19937_64 rng(config.seed);
  TrainState state;
  Model& model = state.model;
  model = initialize(work, config, rng);
  model.standardization = standardization;

  const auto labeled = work.labeled_indices();
  if (!labeled.empty() && labeled.size() < work.size()) {
    // With f = 0 every unlabeled row ties on all codewords, so start from a
    // fit on the labeled rows alone.
    TrainConfig pre = config;
    pre.mode = TrainMode::supervised;
    pre.standardize = false;
    const TrainState fit = train(work.subset(labeled), pre, nullptr);
    for (std::size_t b = 0; b < model.num_bits(); ++b) {
      BitFunction& fb = model.bits[b];
      const BitFunction& src = fit.model.bits[b];
      fb.eta.setZero();
      for (std::size_t i = 0; i < labeled.size(); ++i) fb.eta[static_cast<Eigen::Index>(labeled[i])] = src.eta[static_cast<Eigen::Index>(i)];
      fb.beta = src.beta;
      fb.theta = src.theta;
    }
    model.codebook = fit.model.codebook;
  }
  const KernelBank bank = KernelBank::build(model.kernels, work.features);

  const auto nbits = static_cast<Eigen::Index>(model.num_bits());
  const auto n = static_cast<Eigen::Index>(work.size());
  const SvmTolerances tolerances{config.svm_kkt_tolerance};

  DecisionMatrix f = training_decisions(model, bank);
  {
    IterationStats s;
    s.surrogate = s.after_svm = s.after_theta = s.after_codewords = recomputed_surrogate(f, model.codebook, work);
    s.distortion = distortion(f, model.codebook, work);
    s.seconds = elapsed();
    state.history.push_back(s);
  }
  if (log) {
    write_log_header(*log);
    write_log_line(*log, state.history.back());
  }

  // Weights for the next SVM solve. The expansion of the current f keeps the
  // weights it was solved with, so the MKL step leaves f untouched.
  std::vector<Vector> next_theta(model.num_bits());
  for (std::size_t b = 0; b < model.num_bits(); ++b) next_theta[b] = model.bits[b].theta;
  std::vector<std::optional<Vector>> warm(model.num_bits());
  std::vector<Vector> previous_labels(model.num_bits());
  std::vector<double> objective(model.num_bits(), 0.0);

  for (int it = 1; it <= config.max_outer_iterations; ++it) {
    const Assignment gamma = assign_groups(f, model.codebook, work);

#pragma omp parallel for schedule(dynamic, 1)
    for (Eigen::Index b = 0; b < nbits; ++b) {
      const auto bi = static_cast<std::size_t>(b);
      SvmProblem problem;
      problem.labels.resize(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        problem.labels[i] = model.codebook.codewords[static_cast<std::size_t>(gamma.group[static_cast<std::size_t>(i)])][bi];
      }
      problem.caps = Vector::Constant(n, config.c);
      problem.gram = combine(next_theta[bi], bank, config.jitter);
      const bool same_labels = previous_labels[bi].size() == n && previous_labels[bi] == problem.labels;
      const SvmSolution sol = solve(problem, tolerances, same_labels ? warm[bi] : std::nullopt);

      Vector col = Vector::Constant(n, sol.beta);
      for (std::size_t m = 0; m < bank.size(); ++m) {
        const double theta = next_theta[bi][static_cast<Eigen::Index>(m)];
        if (theta != 0.0) col.noalias() += theta * (bank.grams[m] * sol.eta);
      }
      warm[bi] = sol.alpha;
      previous_labels[bi] = problem.labels;
      objective[bi] = sol.primal_objective;
      if (config.descent_guard && bit_hinge(col, problem.labels) > bit_hinge(f.col(b), problem.labels)) continue;

      BitFunction& fb = model.bits[bi];
      fb.theta = next_theta[bi];
      fb.eta = sol.eta;
      fb.beta = sol.beta;
      f.col(b) = col;

      next_theta[bi] = update_mkl_weights(regularizer_norms(fb.eta, fb.theta, bank), config.p);
    }

    IterationStats s;
    s.iteration = it;
    s.after_svm = recomputed_surrogate(f, model.codebook, work);
    s.after_theta = s.after_svm;
    const Assignment fresh = assign_groups(f, model.codebook, work);
    model.codebook = update_codewords(fresh, f, model.codebook);
    s.after_codewords = recomputed_surrogate(f, model.codebook, work);
    s.surrogate = s.after_codewords;
    s.distortion = distortion(f, model.codebook, work);
    for (double o : objective) s.svm_objective += o;
    s.seconds = elapsed();

    const double prev = state.history.back().surrogate;
    state.history.push_back(s);
    if (log) write_log_line(*log, s);
    if ((prev - s.surrogate) / std::max(prev, 1e-12) < config.tolerance) {
      state.converged = true;
      break;
    }
  }
  state.assignment = assign_groups(f, model.codebook, work);
  return state;
}

TransductiveResult train_transductive(const Dataset& labeled, const Matrix& queries, TrainConfig config,
                                      std::ostream* log) {
  if (queries.cols() != labeled.features.cols()) {
    throw DimensionError("transductive queries have " + std::to_string(queries.cols()) + " features, training data " +
                         std::to_string(labeled.features.cols()));
  }
  Dataset all = labeled;
  all.features.resize(labeled.features.rows() + queries.rows(), labeled.features.cols());
  all.features << labeled.features, queries;
  all.labels.resize(all.features.rows());
  config.mode = TrainMode::transductive;

  TransductiveResult out;
  out.state = train(all, config, log);
  out.codes = hash(out.state.model, queries);
  out.groups = classify(out.state.model.codebook, out.codes);
  return out;
}

}  // namespace sshl
