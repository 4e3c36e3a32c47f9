#include "sshl/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

namespace sshl {

namespace {

std::vector<std::string> tokenize(const std::string& line, const char* separators) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    const std::size_t start = line.find_first_not_of(separators, pos);
    if (start == std::string::npos) break;
    std::size_t end = line.find_first_of(separators, start);
    if (end == std::string::npos) end = line.size();
    out.push_back(line.substr(start, end - start));
    pos = end;
  }
  return out;
}

std::string where(std::size_t line) { return "line " + std::to_string(line) + ": "; }

double to_double(const std::string& tok, std::size_t line) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (!tok.empty() && tok.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || tok.empty()) {
    throw ParseError(where(line) + "'" + tok + "' is not a number");
  }
  return v;
}

long to_long(const std::string& tok, std::size_t line, const char* what) {
  long v = 0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (!tok.empty() && tok.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || tok.empty()) {
    throw ParseError(where(line) + "'" + tok + "' is not a valid " + what);
  }
  return v;
}

bool blank(const std::string& line) { return line.find_first_not_of(" \t\r") == std::string::npos; }

struct RawRows {
  std::vector<std::optional<long>> labels;
  std::vector<std::vector<double>> rows;
};

Dataset finish(RawRows raw, std::size_t dim) {
  if (raw.rows.empty()) throw ConfigError("dataset file contains no samples");
  std::map<long, int> remap;
  for (const auto& l : raw.labels) {
    if (l) remap.emplace(*l, 0);
  }
  Dataset data;
  for (auto& [value, group] : remap) {
    group = static_cast<int>(data.label_values.size());
    data.label_values.push_back(value);
  }
  data.groups = static_cast<int>(data.label_values.size());
  data.features.resize(static_cast<Eigen::Index>(raw.rows.size()), static_cast<Eigen::Index>(dim));
  data.labels.reserve(raw.rows.size());
  for (std::size_t n = 0; n < raw.rows.size(); ++n) {
    for (std::size_t d = 0; d < dim; ++d) {
      data.features(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d)) = d < raw.rows[n].size() ? raw.rows[n][d] : 0.0;
    }
    data.labels.push_back(raw.labels[n] ? std::optional<int>(remap.at(*raw.labels[n])) : std::nullopt);
  }
  return data;
}

std::optional<long> parse_label(const std::string& tok, std::size_t line) {
  if (tok == "?") return std::nullopt;
  return to_long(tok, line, "label");
}

Dataset parse_delimited(std::istream& in) {
  RawRows raw;
  std::string line;
  std::size_t lineno = 0;
  std::size_t dim = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    const auto tokens = tokenize(line, ", \t\r");
    if (tokens.empty()) throw ParseError(where(lineno) + "line has no label");
    std::vector<double> row;
    row.reserve(tokens.size() - 1);
    for (std::size_t i = 1; i < tokens.size(); ++i) row.push_back(to_double(tokens[i], lineno));
    if (raw.rows.empty()) {
      dim = row.size();
    } else if (row.size() != dim) {
      throw ParseError(where(lineno) + "expected " + std::to_string(dim) + " features, found " +
                       std::to_string(row.size()));
    }
    raw.labels.push_back(parse_label(tokens[0], lineno));
    raw.rows.push_back(std::move(row));
  }
  return finish(std::move(raw), dim);
}

Dataset parse_sparse(std::istream& in) {
  RawRows raw;
  std::string line;
  std::size_t lineno = 0;
  std::size_t dim = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    const auto tokens = tokenize(line, " \t\r");
    std::vector<double> row;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      const auto colon = tokens[i].find(':');
      if (colon == std::string::npos) throw ParseError(where(lineno) + "expected idx:val, found '" + tokens[i] + "'");
      const long idx = to_long(tokens[i].substr(0, colon), lineno, "feature index");
      if (idx < 1) throw ParseError(where(lineno) + "feature indices are 1-based, found " + std::to_string(idx));
      const auto slot = static_cast<std::size_t>(idx - 1);
      if (row.size() <= slot) row.resize(slot + 1, 0.0);
      row[slot] = to_double(tokens[i].substr(colon + 1), lineno);
    }
    dim = std::max(dim, row.size());
    raw.labels.push_back(parse_label(tokens[0], lineno));
    raw.rows.push_back(std::move(row));
  }
  return finish(std::move(raw), dim);
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

Dataset parse_dataset(std::istream& in, DataFormat format) {
  return format == DataFormat::sparse ? parse_sparse(in) : parse_delimited(in);
}

Dataset load_dataset(const std::string& path, DataFormat format) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return parse_dataset(in, format);
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::string line;
  while (std::getline(in, line) && blank(line)) {
  }
  const DataFormat format = line.find(':') != std::string::npos ? DataFormat::sparse : DataFormat::delimited;
  in.clear();
  in.seekg(0);
  return parse_dataset(in, format);
}

void write_delimited(std::ostream& out, const Dataset& data) {
  for (std::size_t n = 0; n < data.size(); ++n) {
    if (data.labels[n]) {
      const auto g = static_cast<std::size_t>(*data.labels[n]);
      out << (data.label_values.empty() ? static_cast<long>(g + 1) : data.label_values[g]);
    } else {
      out << '?';
    }
    for (Eigen::Index d = 0; d < data.features.cols(); ++d) {
      out << ',' << format_double(data.features(static_cast<Eigen::Index>(n), d));
    }
    out << '\n';
  }
}

void save_delimited(const Dataset& data, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ParseError("cannot write '" + path + "'");
  write_delimited(out, data);
}

std::pair<Dataset, Dataset> split(const Dataset& data, double train_fraction, std::uint64_t seed, bool stratified) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw ConfigError("train fraction must lie in (0, 1)");
  if (data.size() < 2) throw ConfigError("need at least 2 samples to split");
  std::mt19937_64 rng(seed);

  std::vector<std::size_t> train_rows;
  if (stratified) {
    // one stratum per group plus one for unlabeled rows
    std::vector<std::vector<std::size_t>> strata(static_cast<std::size_t>(data.groups) + 1);
    for (std::size_t n = 0; n < data.size(); ++n) {
      strata[data.labels[n] ? static_cast<std::size_t>(*data.labels[n]) : strata.size() - 1].push_back(n);
    }
    for (std::size_t s = 0; s < strata.size(); ++s) {
      auto& rows = strata[s];
      if (rows.empty()) continue;
      if (rows.size() < 2) {
        throw ConfigError("class " + std::to_string(s < data.label_values.size() ? data.label_values[s] : long(s + 1)) +
                          " has fewer than 2 samples; cannot stratify");
      }
      std::shuffle(rows.begin(), rows.end(), rng);
      const auto take = static_cast<std::size_t>(std::lround(train_fraction * static_cast<double>(rows.size())));
      train_rows.insert(train_rows.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(take));
    }
  } else {
    std::vector<std::size_t> rows(data.size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    std::shuffle(rows.begin(), rows.end(), rng);
    auto take = static_cast<std::size_t>(std::lround(train_fraction * static_cast<double>(rows.size())));
    take = std::clamp<std::size_t>(take, 1, rows.size() - 1);
    train_rows.assign(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(take));
  }
  std::sort(train_rows.begin(), train_rows.end());
  std::vector<std::size_t> test_rows;
  std::size_t k = 0;
  for (std::size_t n = 0; n < data.size(); ++n) {
    if (k < train_rows.size() && train_rows[k] == n) {
      ++k;
    } else {
      test_rows.push_back(n);
    }
  }
  return {data.subset(train_rows), data.subset(test_rows)};
}

Standardized standardize(const Dataset& train, const std::vector<Dataset>& apply_to) {
  Standardized out;
  out.stats = Standardization::fit(train.features);
  for (const auto& d : apply_to) {
    Dataset t = d;
    t.features = out.stats.apply(d.features);
    out.datasets.push_back(std::move(t));
  }
  return out;
}

Dataset align_labels(const Dataset& data, const std::vector<long>& label_values) {
  Dataset out = data;
  out.label_values = label_values;
  for (std::size_t n = 0; n < data.size(); ++n) {
    if (!data.labels[n]) continue;
    const auto g = static_cast<std::size_t>(*data.labels[n]);
    const long value = data.label_values.empty() ? static_cast<long>(g + 1) : data.label_values[g];
    const auto it = std::find(out.label_values.begin(), out.label_values.end(), value);
    if (it == out.label_values.end()) {
      out.label_values.push_back(value);
      out.labels[n] = static_cast<int>(out.label_values.size() - 1);
    } else {
      out.labels[n] = static_cast<int>(it - out.label_values.begin());
    }
  }
  out.groups = static_cast<int>(out.label_values.size());
  return out;
}

}  // namespace sshl
