#include "sshl/eval.hpp"

#include "sshl/hasher.hpp"
#include "sshl/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <string>

namespace sshl {

namespace {

void check_codes(const LabeledCodes& set, const char* what) {
  if (set.codes.size() != set.labels.size()) {
    throw DimensionError(std::string(what) + ": codes and labels differ in count");
  }
}

std::size_t common_bits(const LabeledCodes& queries, const LabeledCodes& database) {
  const std::size_t bits = database.codes.empty() ? 0 : database.codes.front().size();
  for (const auto& c : queries.codes) {
    if (c.size() != bits) throw DimensionError("query and database codes differ in length");
  }
  for (const auto& c : database.codes) {
    if (c.size() != bits) throw DimensionError("database codes differ in length");
  }
  return bits;
}

}  // namespace

std::vector<std::size_t> rank_by_hamming(const HashCode& query, const std::vector<HashCode>& database, std::size_t limit) {
  const std::size_t bits = query.size();
  std::vector<std::size_t> dist(database.size());
  std::vector<std::size_t> bucket_start(bits + 2, 0);
  for (std::size_t i = 0; i < database.size(); ++i) {
    dist[i] = hamming_distance(query, database[i]);
    ++bucket_start[dist[i] + 1];
  }
  for (std::size_t d = 1; d < bucket_start.size(); ++d) bucket_start[d] += bucket_start[d - 1];
  std::vector<std::size_t> order(database.size());
  for (std::size_t i = 0; i < database.size(); ++i) order[bucket_start[dist[i]]++] = i;
  order.resize(std::min(limit, order.size()));
  return order;
}

std::vector<double> precision_at_s(const LabeledCodes& queries, const LabeledCodes& database,
                                   const std::vector<int>& s_values) {
  check_codes(queries, "queries");
  check_codes(database, "database");
  common_bits(queries, database);
  int s_max = 0;
  for (int s : s_values) {
    if (s < 1) throw ConfigError("s values must be >= 1");
    if (static_cast<std::size_t>(s) > database.codes.size()) {
      throw ConfigError("s = " + std::to_string(s) + " exceeds the database size " +
                        std::to_string(database.codes.size()));
    }
    s_max = std::max(s_max, s);
  }
  const auto nq = static_cast<long>(queries.codes.size());
  // per-query precision for each s, reduced serially afterwards
  std::vector<std::vector<double>> per_query(queries.codes.size(), std::vector<double>(s_values.size(), 0.0));
#pragma omp parallel for schedule(dynamic, 16)
  for (long q = 0; q < nq; ++q) {
    const auto qi = static_cast<std::size_t>(q);
    const auto order = rank_by_hamming(queries.codes[qi], database.codes, static_cast<std::size_t>(s_max));
    std::vector<int> hits(order.size() + 1, 0);
    for (std::size_t k = 0; k < order.size(); ++k) {
      hits[k + 1] = hits[k] + (database.labels[order[k]] == queries.labels[qi] ? 1 : 0);
    }
    for (std::size_t t = 0; t < s_values.size(); ++t) {
      per_query[qi][t] = static_cast<double>(hits[static_cast<std::size_t>(s_values[t])]) / s_values[t];
    }
  }
  std::vector<double> mean(s_values.size(), 0.0);
  if (queries.codes.empty()) return mean;
  for (const auto& row : per_query) {
    for (std::size_t t = 0; t < row.size(); ++t) mean[t] += row[t];
  }
  for (double& m : mean) m /= static_cast<double>(queries.codes.size());
  return mean;
}

std::vector<PrPoint> pr_curve(const LabeledCodes& queries, const LabeledCodes& database) {
  check_codes(queries, "queries");
  check_codes(database, "database");
  if (database.codes.empty()) throw ConfigError("pr_curve: database is empty");
  const std::size_t bits = common_bits(queries, database);
  const auto nq = static_cast<long>(queries.codes.size());
  // cumulative (retrieved, retrieved same label) counts per radius, per query
  std::vector<std::vector<std::size_t>> all(queries.codes.size()), same(queries.codes.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (long q = 0; q < nq; ++q) {
    const auto qi = static_cast<std::size_t>(q);
    std::vector<std::size_t> a(bits + 1, 0), s(bits + 1, 0);
    for (std::size_t i = 0; i < database.codes.size(); ++i) {
      const std::size_t d = hamming_distance(queries.codes[qi], database.codes[i]);
      ++a[d];
      if (database.labels[i] == queries.labels[qi]) ++s[d];
    }
    for (std::size_t r = 1; r <= bits; ++r) {
      a[r] += a[r - 1];
      s[r] += s[r - 1];
    }
    all[qi] = std::move(a);
    same[qi] = std::move(s);
  }
  std::vector<PrPoint> out(bits + 1);
  for (std::size_t r = 0; r <= bits; ++r) {
    double p_sum = 0.0, r_sum = 0.0;
    std::size_t p_count = 0, r_count = 0;
    for (std::size_t q = 0; q < queries.codes.size(); ++q) {
      const std::size_t total_same = same[q][bits];
      if (all[q][r] > 0) {
        p_sum += static_cast<double>(same[q][r]) / static_cast<double>(all[q][r]);
        ++p_count;
      }
      if (total_same > 0) {
        r_sum += static_cast<double>(same[q][r]) / static_cast<double>(total_same);
        ++r_count;
      }
    }
    out[r].radius = static_cast<int>(r);
    out[r].precision = p_count > 0 ? p_sum / static_cast<double>(p_count) : 0.0;
    out[r].recall = r_count > 0 ? r_sum / static_cast<double>(r_count) : 0.0;
    out[r].contributing = p_count;
  }
  return out;
}

RetrievalReport retrieval_report(const LabeledCodes& queries, const LabeledCodes& database,
                                 const std::vector<int>& s_values) {
  RetrievalReport report;
  report.s_values = s_values;
  report.precision_at_s = precision_at_s(queries, database, s_values);
  report.pr = pr_curve(queries, database);
  return report;
}

double ramp_loss(double u, double rho) { return std::min(1.0, std::max(0.0, 1.0 - u / rho)); }

double margin_loss(const DecisionMatrix& f, const Codebook& codebook, const std::vector<int>& labels, double rho) {
  if (!(rho > 0.0)) throw ConfigError("margin_loss: rho must be > 0");
  if (static_cast<std::size_t>(f.rows()) != labels.size()) throw DimensionError("margin_loss: label count mismatch");
  if (static_cast<std::size_t>(f.cols()) != codebook.bits()) throw DimensionError("margin_loss: bit count mismatch");
  if (f.size() == 0) return 0.0;
  double total = 0.0;
  for (Eigen::Index n = 0; n < f.rows(); ++n) {
    const HashCode& mu = codebook.codewords.at(static_cast<std::size_t>(labels[static_cast<std::size_t>(n)]));
    for (Eigen::Index b = 0; b < f.cols(); ++b) total += ramp_loss(f(n, b) * mu[static_cast<std::size_t>(b)], rho);
  }
  return total / static_cast<double>(f.size());
}

BoundReport bound_from_terms(double empirical_margin_error, double kernel_radius, std::vector<double> weight_norms,
                             double rho, double delta, std::size_t samples) {
  if (!(rho > 0.0)) throw ConfigError("rho must be > 0");
  if (!(delta > 0.0 && delta <= 1.0)) throw ConfigError("delta must lie in (0, 1]");
  if (samples == 0) throw ConfigError("bound needs at least one sample");
  if (weight_norms.empty()) throw ConfigError("bound needs at least one bit");
  BoundReport r;
  r.rho = rho;
  r.delta = delta;
  r.kernel_radius = kernel_radius;
  r.empirical_margin_error = empirical_margin_error;
  r.samples = samples;
  double sum_norms = 0.0;
  for (double v : weight_norms) sum_norms += v;
  const double n = static_cast<double>(samples);
  const double bits = static_cast<double>(weight_norms.size());
  r.weight_norms = std::move(weight_norms);
  r.complexity_term = 2.0 * kernel_radius * sum_norms / (rho * bits * std::sqrt(n));
  r.confidence_term = std::sqrt(std::log(1.0 / delta) / (2.0 * n));
  r.bound = r.empirical_margin_error + r.complexity_term + r.confidence_term;
  return r;
}

BoundReport generalization_bound(const Model& model, const Dataset& data, double rho, double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) throw ConfigError("delta must lie in (0, 1]");
  if (!(rho > 0.0)) throw ConfigError("rho must be > 0");
  if (!data.fully_labeled()) throw ConfigError("the bound needs a fully labeled dataset");
  if (data.size() == 0) throw ConfigError("the bound needs a nonempty dataset");
  std::vector<int> labels(data.size());
  for (std::size_t n = 0; n < data.size(); ++n) labels[n] = *data.labels[n];
  if (model.groups() != static_cast<std::size_t>(data.groups)) {
    throw ConfigError("model and dataset disagree on the number of groups");
  }

  const DecisionMatrix f = decision_matrix(model, data.features);
  const double err = margin_loss(f, model.codebook, labels, rho);

  const KernelBank bank = KernelBank::build(model.kernels, model.training_features);
  std::vector<double> norms(model.num_bits(), 0.0);
  double radius_sq = 0.0;
  for (std::size_t b = 0; b < model.num_bits(); ++b) {
    const BitFunction& fb = model.bits[b];
    double norm_sq = 0.0;
    for (std::size_t m = 0; m < bank.size(); ++m) {
      // sum_m ||w_m||^2 / theta_m with ||w_m||^2 = theta_m^2 eta' K_m eta
      norm_sq += fb.theta[static_cast<Eigen::Index>(m)] * fb.eta.dot(bank.grams[m] * fb.eta);
    }
    norms[b] = std::sqrt(std::max(0.0, norm_sq));
    for (Eigen::Index n = 0; n < bank.samples(); ++n) {
      double k = 0.0;
      for (std::size_t m = 0; m < bank.size(); ++m) k += fb.theta[static_cast<Eigen::Index>(m)] * bank.grams[m](n, n);
      radius_sq = std::max(radius_sq, k);
    }
  }
  return bound_from_terms(err, std::sqrt(radius_sq), std::move(norms), rho, delta, data.size());
}

void write_precision_table(std::ostream& os, const std::vector<int>& s_values, const std::vector<double>& precision) {
  const auto old = os.precision(10);
  os << "s\tmean_precision\n";
  for (std::size_t i = 0; i < s_values.size(); ++i) os << s_values[i] << '\t' << precision[i] << '\n';
  os.precision(old);
}

void write_pr_table(std::ostream& os, const std::vector<PrPoint>& pr) {
  const auto old = os.precision(10);
  os << "r\tprecision\trecall\n";
  for (const auto& p : pr) os << p.radius << '\t' << p.precision << '\t' << p.recall << '\n';
  os.precision(old);
}

void write_bound_report(std::ostream& os, const BoundReport& r) {
  const auto old = os.precision(10);
  double sum = 0.0;
  for (double v : r.weight_norms) sum += v;
  os << "rho\t" << r.rho << '\n'
     << "delta\t" << r.delta << '\n'
     << "samples\t" << r.samples << '\n'
     << "bits\t" << r.weight_norms.size() << '\n'
     << "kernel_radius\t" << r.kernel_radius << '\n'
     << "sum_weight_norms\t" << sum << '\n'
     << "empirical_margin_error\t" << r.empirical_margin_error << '\n'
     << "complexity_term\t" << r.complexity_term << '\n'
     << "confidence_term\t" << r.confidence_term << '\n'
     << "bound\t" << r.bound << '\n';
  os.precision(old);
}

std::vector<int> parse_s_list(const std::string& text) {
  const auto to_int = [&](const std::string& tok) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
      throw ConfigError("bad s-list '" + text + "'");
    }
    if (used != tok.size()) throw ConfigError("bad s-list '" + text + "'");
    return v;
  };
  std::vector<int> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string p;
    while (std::getline(ss, p, ':')) parts.push_back(p);
    if (parts.size() != 3) throw ConfigError("s-list range must be start:stop:step");
    const int a = to_int(parts[0]), b = to_int(parts[1]), step = to_int(parts[2]);
    if (step <= 0 || a > b) throw ConfigError("s-list range must satisfy start <= stop and step > 0");
    for (int s = a; s <= b; s += step) out.push_back(s);
  } else {
    std::stringstream ss(text);
    std::string p;
    while (std::getline(ss, p, ',')) {
      if (!p.empty()) out.push_back(to_int(p));
    }
  }
  if (out.empty()) throw ConfigError("s-list is empty");
  for (int s : out) {
    if (s < 1) throw ConfigError("s values must be >= 1");
  }
  return out;
}

}  // namespace sshl
