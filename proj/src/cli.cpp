#include "sshl/cli.hpp"

#include "CLI11.hpp"
#include "sshl/eval.hpp"
#include "sshl/hasher.hpp"
#include "sshl/ingest.hpp"
#include "sshl/kernels.hpp"
#include "sshl/lsh.hpp"
#include "sshl/model_io.hpp"
#include "sshl/trainer.hpp"

#include <omp.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <string>

namespace sshl::cli {

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

struct Options {
  int threads = 0;

  std::string data, unlabeled, out, log, hash_out, model, database, queries;
  std::string format = "auto";
  std::string kernels = "default";
  std::string mode = "supervised";
  std::string s_list = "10:50:5";
  int bits = 16;
  int groups = 0;
  int max_iter = 50;
  double c = 1000.0;
  double p = 2.0;
  double tol = 1e-4;
  double jitter = 1e-8;
  double svm_tol = 1e-3;
  double rho = 1.0;
  double delta = 0.05;
  std::uint64_t seed = 1;
};

const std::map<std::string, std::string> kFormats{{"auto", "auto"}, {"delimited", "delimited"}, {"sparse", "sparse"}};

Dataset read_data(const Options& o, const std::string& path) {
  if (o.format == "delimited") return load_dataset(path, DataFormat::delimited);
  if (o.format == "sparse") return load_dataset(path, DataFormat::sparse);
  return load_dataset(path);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw ParseError("cannot write '" + path + "'");
  return os;
}

void write_hash_file(std::ostream& os, const std::vector<HashCode>& codes, const std::vector<std::string>& labels) {
  for (std::size_t i = 0; i < codes.size(); ++i) os << i << '\t' << codes[i].to_string() << '\t' << labels[i] << '\n';
}

std::vector<int> require_labels(const Dataset& d, const std::string& what) {
  std::vector<int> out(d.size());
  for (std::size_t n = 0; n < d.size(); ++n) {
    if (!d.labels[n]) throw ParseError(what + " row " + std::to_string(n + 1) + " is unlabeled; retrieval needs labels");
    out[n] = *d.labels[n];
  }
  return out;
}

// Brings queries and database onto one label map so equal labels compare equal.
std::pair<Dataset, Dataset> aligned(const std::vector<long>& base, const Dataset& database, const Dataset& queries) {
  Dataset db = align_labels(database, base);
  Dataset q = align_labels(queries, db.label_values);
  return {std::move(db), std::move(q)};
}

// Stripping the leading "# " turns the echo into a --config file that
// reproduces the run.
void echo(std::ostream& out, const CLI::App* leaf, int threads) {
  std::string section = leaf->get_name();
  for (const CLI::App* p = leaf->get_parent(); p && p->get_parent(); p = p->get_parent()) {
    section = p->get_name() + "." + section;
  }
  out << "# resolved configuration\n# threads=" << threads << "\n# [" << section << "]\n";
  const std::string text = leaf->config_to_str(true, false);
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t end = text.find('\n', pos);
    const std::string line = text.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
    if (!line.empty()) out << "# " << line << '\n';
    if (end == std::string::npos) break;
    pos = end + 1;
  }
}

TrainMode parse_mode(const std::string& m) {
  if (m == "supervised") return TrainMode::supervised;
  if (m == "semi") return TrainMode::semi_supervised;
  return TrainMode::transductive;
}

int cmd_train(const Options& o, std::ostream& out) {
  TrainConfig cfg;
  cfg.bits = o.bits;
  cfg.c = o.c;
  cfg.p = o.p;
  cfg.kernels = parse_kernel_list(o.kernels);
  cfg.max_outer_iterations = o.max_iter;
  cfg.tolerance = o.tol;
  cfg.seed = o.seed;
  cfg.mode = parse_mode(o.mode);
  cfg.jitter = o.jitter;
  cfg.svm_kkt_tolerance = o.svm_tol;
  cfg.validate();

  Dataset data = read_data(o, o.data);
  if (cfg.mode == TrainMode::supervised && !o.unlabeled.empty()) {
    throw UsageError("--unlabeled requires --mode semi or --mode transductive");
  }
  if (cfg.mode == TrainMode::transductive && o.unlabeled.empty()) {
    throw UsageError("--mode transductive requires --unlabeled with the query samples");
  }
  if (o.groups > 0) {
    if (o.groups < data.groups) throw UsageError("--groups is smaller than the number of labels in --data");
    long next = data.label_values.empty() ? 1 : *std::max_element(data.label_values.begin(), data.label_values.end()) + 1;
    while (data.groups < o.groups) {
      data.label_values.push_back(next++);
      ++data.groups;
    }
  }

  Matrix extra;
  if (!o.unlabeled.empty()) {
    const Dataset u = read_data(o, o.unlabeled);
    if (u.dim() != data.dim()) {
      throw DimensionError("--unlabeled has " + std::to_string(u.dim()) + " features, --data has " +
                           std::to_string(data.dim()));
    }
    extra = u.features;
  }

  std::ofstream log = open_out(o.log.empty() ? o.out + ".log" : o.log);
  TrainState state;
  std::vector<HashCode> query_codes;
  std::vector<int> query_groups;
  if (cfg.mode == TrainMode::transductive) {
    auto result = train_transductive(data, extra, cfg, &log);
    state = std::move(result.state);
    query_codes = std::move(result.codes);
    query_groups = std::move(result.groups);
  } else {
    if (extra.rows() > 0) {
      const auto n0 = data.features.rows();
      data.features.conservativeResize(n0 + extra.rows(), Eigen::NoChange);
      data.features.bottomRows(extra.rows()) = extra;
      data.labels.resize(static_cast<std::size_t>(data.features.rows()));
    }
    state = train(data, cfg, &log);
  }
  save_model(state.model, o.out);

  const auto& last = state.history.back();
  out << "trained " << state.model.num_bits() << "-bit model on " << state.model.num_train() << " samples, "
      << state.model.groups() << " groups, " << state.model.num_kernels() << " kernels\n"
      << "iterations: " << last.iteration << (state.converged ? " (converged)" : " (iteration cap)") << '\n'
      << "surrogate: " << last.surrogate << "  distortion: " << last.distortion << '\n'
      << "model written to " << o.out << '\n';

  if (cfg.mode == TrainMode::transductive) {
    if (!o.hash_out.empty()) {
      std::ofstream hs = open_out(o.hash_out);
      std::vector<std::string> labels;
      for (int g : query_groups) labels.push_back(std::to_string(label_value(state.model, g)));
      write_hash_file(hs, query_codes, labels);
      out << "query codes written to " << o.hash_out << '\n';
    }
  }
  return 0;
}

int cmd_hash(const Options& o, std::ostream& out) {
  const Model model = load_model(o.model);
  const Dataset data = read_data(o, o.data);
  const auto codes = hash(model, data.features);
  const auto groups = classify(model.codebook, codes);
  std::vector<std::string> labels;
  for (int g : groups) labels.push_back(std::to_string(label_value(model, g)));
  std::ofstream os = open_out(o.out);
  write_hash_file(os, codes, labels);
  out << "hashed " << codes.size() << " samples into " << o.out << '\n';
  return 0;
}

// Shared by the model and LSH variants of retrieve / eval.
template <class Hasher>
int retrieval(const Options& o, const std::vector<long>& base_labels, Hasher&& hasher, bool precision_table,
              std::ostream& out) {
  const auto [db, q] = aligned(base_labels, read_data(o, o.database), read_data(o, o.queries));
  const LabeledCodes database{hasher(db.features), require_labels(db, "database")};
  const LabeledCodes queries{hasher(q.features), require_labels(q, "queries")};
  std::ofstream os = open_out(o.out);
  if (precision_table) {
    const auto s_values = parse_s_list(o.s_list);
    for (int s : s_values) {
      if (static_cast<std::size_t>(s) > database.codes.size()) {
        throw UsageError("--s-list value " + std::to_string(s) + " exceeds the database size " +
                         std::to_string(database.codes.size()));
      }
    }
    const auto precision = precision_at_s(queries, database, s_values);
    write_precision_table(os, s_values, precision);
    out << "queries: " << queries.codes.size() << "  database: " << database.codes.size() << '\n';
    for (std::size_t i = 0; i < s_values.size(); ++i) out << "precision@" << s_values[i] << " = " << precision[i] << '\n';
  } else {
    const auto pr = pr_curve(queries, database);
    write_pr_table(os, pr);
    out << "queries: " << queries.codes.size() << "  database: " << database.codes.size() << '\n';
    for (const auto& p : pr) {
      out << "r=" << p.radius << "  precision=" << p.precision << "  recall=" << p.recall << '\n';
    }
  }
  out << "table written to " << o.out << '\n';
  return 0;
}

int cmd_bound(const Options& o, std::ostream& out) {
  const Model model = load_model(o.model);
  Dataset data = align_labels(read_data(o, o.data), model.label_values);
  if (static_cast<std::size_t>(data.groups) != model.groups()) {
    throw ParseError("--data contains labels the model was not trained on");
  }
  write_bound_report(out, generalization_bound(model, data, o.rho, o.delta));
  return 0;
}

int cmd_lsh_train(const Options& o, std::ostream& out) {
  const Dataset data = read_data(o, o.data);
  LshModel model = lsh_train(data.dim(), static_cast<std::size_t>(o.bits), o.seed);
  model.standardization = Standardization::fit(data.features);
  save_lsh_model(model, o.out);
  out << "LSH model with " << model.bits() << " hyperplanes over " << model.dim() << " features written to " << o.out
      << '\n';
  return 0;
}

int cmd_lsh_hash(const Options& o, std::ostream& out) {
  const LshModel model = load_lsh_model(o.model);
  const Dataset data = read_data(o, o.data);
  const auto codes = lsh_hash(model, data.features);
  std::ofstream os = open_out(o.out);
  write_hash_file(os, codes, std::vector<std::string>(codes.size(), "?"));
  out << "hashed " << codes.size() << " samples into " << o.out << '\n';
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Hash learning with codewords in Hamming space, plus an LSH baseline", "sshl"};
  app.set_config("--config", "", "key=value configuration file (flags take precedence)");
  app.add_option("--threads", o.threads, "worker thread cap (0 = hardware parallelism)")->check(CLI::NonNegativeNumber);
  app.require_subcommand(1);

  const auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "input format")->transform(CLI::CheckedTransformer(kFormats))->capture_default_str();
  };

  auto* train = app.add_subcommand("train", "learn hash functions and codewords");
  train->add_option("--data", o.data, "training data file")->required();
  add_format(train);
  train->add_option("--bits", o.bits, "code length B")->capture_default_str();
  train->add_option("--c", o.c, "SVM regularization C")->capture_default_str();
  train->add_option("--p", o.p, "MKL norm exponent p")->capture_default_str();
  train->add_option("--kernels", o.kernels, "kernel list, e.g. linear,poly:2:1,gauss:0.5 or default")->capture_default_str();
  train->add_option("--mode", o.mode, "supervised | semi | transductive")
      ->check(CLI::IsMember({"supervised", "semi", "transductive"}))
      ->capture_default_str();
  train->add_option("--unlabeled", o.unlabeled, "extra unlabeled samples (semi) or query samples (transductive)");
  train->add_option("--groups", o.groups, "number of groups when labels do not reveal it (0 = from labels)")
      ->capture_default_str();
  train->add_option("--seed", o.seed, "random seed")->capture_default_str();
  train->add_option("--max-iter", o.max_iter, "outer iteration cap")->capture_default_str();
  train->add_option("--tol", o.tol, "relative surrogate decrease to stop at")->capture_default_str();
  train->add_option("--jitter", o.jitter, "ridge added to the combined kernel diagonal")->capture_default_str();
  train->add_option("--svm-tol", o.svm_tol, "SVM KKT violation tolerance")->capture_default_str();
  train->add_option("--out", o.out, "model file to write")->required();
  train->add_option("--log", o.log, "training log (default <out>.log)");
  train->add_option("--hash-out", o.hash_out, "transductive mode: hash file for the query samples");

  auto* hash_cmd = app.add_subcommand("hash", "hash samples with a trained model");
  hash_cmd->add_option("--model", o.model)->required();
  hash_cmd->add_option("--data", o.data)->required();
  add_format(hash_cmd);
  hash_cmd->add_option("--out", o.out)->required();

  const auto add_retrieval = [&](CLI::App* sub, bool with_s) {
    sub->add_option("--model", o.model)->required();
    sub->add_option("--database", o.database, "labeled database samples")->required();
    sub->add_option("--queries", o.queries, "labeled query samples")->required();
    add_format(sub);
    if (with_s) sub->add_option("--s-list", o.s_list, "start:stop:step or comma list")->capture_default_str();
    sub->add_option("--out", o.out)->required();
  };
  auto* retrieve = app.add_subcommand("retrieve", "precision of the s nearest database codes");
  add_retrieval(retrieve, true);
  auto* eval = app.add_subcommand("eval", "precision / recall by Hamming radius");
  add_retrieval(eval, false);

  auto* bound = app.add_subcommand("bound", "generalization bound diagnostic");
  bound->add_option("--model", o.model)->required();
  bound->add_option("--data", o.data, "labeled samples")->required();
  add_format(bound);
  bound->add_option("--rho", o.rho, "margin")->capture_default_str();
  bound->add_option("--delta", o.delta, "confidence, in (0, 1]")->capture_default_str();

  auto* lsh = app.add_subcommand("lsh", "random-hyperplane LSH baseline");
  lsh->require_subcommand(1);
  auto* lsh_train_cmd = lsh->add_subcommand("train", "draw hyperplanes");
  lsh_train_cmd->add_option("--data", o.data, "samples used for standardization")->required();
  add_format(lsh_train_cmd);
  lsh_train_cmd->add_option("--bits", o.bits)->capture_default_str();
  lsh_train_cmd->add_option("--seed", o.seed)->capture_default_str();
  lsh_train_cmd->add_option("--out", o.out)->required();
  auto* lsh_hash_cmd = lsh->add_subcommand("hash", "hash samples");
  lsh_hash_cmd->add_option("--model", o.model)->required();
  lsh_hash_cmd->add_option("--data", o.data)->required();
  add_format(lsh_hash_cmd);
  lsh_hash_cmd->add_option("--out", o.out)->required();
  auto* lsh_retrieve = lsh->add_subcommand("retrieve", "precision of the s nearest database codes");
  add_retrieval(lsh_retrieve, true);
  auto* lsh_eval = lsh->add_subcommand("eval", "precision / recall by Hamming radius");
  add_retrieval(lsh_eval, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  if (o.threads > 0) omp_set_num_threads(o.threads);

  try {
    const CLI::App* sub = app.get_subcommands().front();
    const CLI::App* leaf = sub->get_subcommands().empty() ? sub : sub->get_subcommands().front();
    echo(out, leaf, o.threads);
    if (*train) return cmd_train(o, out);
    if (*hash_cmd) return cmd_hash(o, out);
    if (*retrieve || *eval) {
      const Model model = load_model(o.model);
      return retrieval(o, model.label_values, [&](const Matrix& x) { return hash(model, x); }, bool(*retrieve), out);
    }
    if (*bound) return cmd_bound(o, out);
    if (*lsh_train_cmd) return cmd_lsh_train(o, out);
    if (*lsh_hash_cmd) return cmd_lsh_hash(o, out);
    if (*lsh_retrieve || *lsh_eval) {
      const LshModel model = load_lsh_model(o.model);
      return retrieval(o, {}, [&](const Matrix& x) { return lsh_hash(model, x); }, bool(*lsh_retrieve), out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace sshl::cli
