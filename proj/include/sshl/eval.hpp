#pragma once

#include "sshl/core.hpp"

#include <iosfwd>
#include <vector>

namespace sshl {

/// Codes with the group of every item; used for both queries and database.
struct LabeledCodes {
  std::vector<HashCode> codes;
  std::vector<int> labels;
};

struct PrPoint {
  int radius = 0;
  double precision = 0.0;
  double recall = 0.0;
  std::size_t contributing = 0;  // queries with nonempty retrieval at this radius
};

struct RetrievalReport {
  std::vector<int> s_values;
  std::vector<double> precision_at_s;
  std::vector<PrPoint> pr;
};

/// Database indices ordered by (distance, index), truncated to `limit`.
/// Counting sort over the B+1 possible distances.
std::vector<std::size_t> rank_by_hamming(const HashCode& query, const std::vector<HashCode>& database, std::size_t limit);

/// Mean over queries of the same-label fraction among the s nearest items.
std::vector<double> precision_at_s(const LabeledCodes& queries, const LabeledCodes& database,
                                   const std::vector<int>& s_values);

/// Precision and recall of retrieving everything within radius r, r = 0..B.
/// Queries that retrieve nothing are left out of the precision mean only.
std::vector<PrPoint> pr_curve(const LabeledCodes& queries, const LabeledCodes& database);

RetrievalReport retrieval_report(const LabeledCodes& queries, const LabeledCodes& database,
                                 const std::vector<int>& s_values);

/// Q_rho(u) = min(1, max(0, 1 - u / rho)).
double ramp_loss(double u, double rho);

/// (1 / NB) sum_{n,b} Q_rho(f_b(x_n) mu_{l_n, b}).
double margin_loss(const DecisionMatrix& f, const Codebook& codebook, const std::vector<int>& labels, double rho);

struct BoundReport {
  double rho = 0.0;
  double delta = 0.0;
  double kernel_radius = 0.0;            // r
  std::vector<double> weight_norms;      // R_b
  double empirical_margin_error = 0.0;
  double complexity_term = 0.0;
  double confidence_term = 0.0;
  double bound = 0.0;
  std::size_t samples = 0;
};

/// Assembles the bound from its ingredients.
BoundReport bound_from_terms(double empirical_margin_error, double kernel_radius, std::vector<double> weight_norms,
                             double rho, double delta, std::size_t samples);

/// Evaluates every quantity on a labeled dataset (raw features).
BoundReport generalization_bound(const Model& model, const Dataset& data, double rho, double delta);

void write_precision_table(std::ostream& os, const std::vector<int>& s_values, const std::vector<double>& precision);
void write_pr_table(std::ostream& os, const std::vector<PrPoint>& pr);
void write_bound_report(std::ostream& os, const BoundReport& report);

/// "a:b:c" (start:stop:step, inclusive) or a comma list.
std::vector<int> parse_s_list(const std::string& text);

}  // namespace sshl
