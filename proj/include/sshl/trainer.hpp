#pragma once

// Majorize-minimize training loop. Each outer iteration refreshes the group
// assignment from the current decision values and codewords, then for every
// bit solves the SVM dual, updates the MKL weights in closed form, and
// finally re-picks each codeword bit by enumerating {-1, +1}.

#include "sshl/core.hpp"
#include "sshl/kernels.hpp"

#include <iosfwd>
#include <random>
#include <vector>

namespace sshl {

struct IterationStats {
  int iteration = 0;
  double surrogate = 0.0;        // surrogate loss at the end of the iteration
  double distortion = 0.0;
  double svm_objective = 0.0;    // sum of per-bit primal objectives
  double after_svm = 0.0;        // surrogate recomputed after each block
  double after_theta = 0.0;
  double after_codewords = 0.0;
  double seconds = 0.0;          // wall time since training started
};

struct TrainState {
  Model model;
  Assignment assignment;
  std::vector<IterationStats> history;  // entry 0 is the initial model
  bool converged = false;
};

/// Labeled rows are pinned to their class; unlabeled rows go to the codeword
/// with the smallest soft distance, lowest index on ties.
Assignment assign_groups(const DecisionMatrix& f, const Codebook& codebook, const Dataset& data);
Assignment assign_groups(const Model& model, const Dataset& data);

/// Closed-form lp-norm MKL weights from the per-kernel squared norms. All-zero
/// norms give the uniform point M^(-1/p).
Vector update_mkl_weights(const Vector& norms, double p);

/// For every (group, bit) the sign with the smaller hinge sum over the group's
/// samples, +1 on ties. Groups without samples keep their previous codeword.
Codebook update_codewords(const Assignment& assignment, const DecisionMatrix& f, const Codebook& previous);

/// Uniform MKL weights, zero expansions, distinct random codewords. `data`
/// must already be in the space the kernels act on.
Model initialize(const Dataset& data, const TrainConfig& config, std::mt19937_64& rng);

/// Decision values of the training samples from precomputed Grams.
DecisionMatrix training_decisions(const Model& model, const KernelBank& bank);

/// Runs the loop until the relative surrogate decrease falls below
/// config.tolerance or max_outer_iterations is reached. When `log` is given,
/// one tab-separated line per iteration is written to it.
TrainState train(const Dataset& data, const TrainConfig& config, std::ostream* log = nullptr);

void write_log_header(std::ostream& os);
void write_log_line(std::ostream& os, const IterationStats& stats);

struct TransductiveResult {
  TrainState state;
  std::vector<HashCode> codes;  // codes of the appended query rows
  std::vector<int> groups;      // nearest-codeword group of each query row
};

/// Appends `queries` as unlabeled rows, trains, and reads their codes and
/// groups off the final model.
TransductiveResult train_transductive(const Dataset& labeled, const Matrix& queries, TrainConfig config,
                                      std::ostream* log = nullptr);

}  // namespace sshl
