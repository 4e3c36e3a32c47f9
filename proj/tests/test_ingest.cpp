#include "doctest.h"
#include "synthetic.hpp"

#include "sshl/ingest.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace sshl;

namespace {

Dataset parse(const std::string& text, DataFormat format = DataFormat::delimited) {
  std::istringstream in(text);
  return parse_dataset(in, format);
}

std::string error_of(const std::string& text, DataFormat format = DataFormat::delimited) {
  try {
    parse(text, format);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

// Blob features are continuous, so the first column identifies a row.
std::multiset<double> first_column(const Dataset& d) { return {d.features.col(0).begin(), d.features.col(0).end()}; }

}  // namespace

TEST_CASE("delimited parse example") {
  const Dataset d = parse("3,1.0,2.0\n?,0.0,1.0\n");
  CHECK(d.size() == 2);
  CHECK(d.dim() == 2);
  CHECK(d.labeled_indices() == std::vector<std::size_t>{0});
  CHECK(d.unlabeled_indices() == std::vector<std::size_t>{1});
  CHECK(d.groups == 1);
  CHECK(d.label_values == std::vector<long>{3});
  CHECK(d.features(0, 1) == 2.0);
  CHECK(d.features(1, 0) == 0.0);
}

TEST_CASE("whitespace separators and label remapping") {
  const Dataset d = parse("7 1 2\n\n-2\t3 4\n7, 5, 6\n");
  CHECK(d.size() == 3);
  CHECK(d.label_values == std::vector<long>{-2, 7});
  CHECK(*d.labels[0] == 1);
  CHECK(*d.labels[1] == 0);
  CHECK(d.features(2, 1) == 6.0);
}

TEST_CASE("sparse rows are densified to the largest index") {
  const Dataset d = parse("1 2:5.0\n2 1:1.5 3:-1\n", DataFormat::sparse);
  CHECK(d.dim() == 3);
  CHECK(d.features.row(0) == Eigen::RowVector3d(0.0, 5.0, 0.0));
  CHECK(d.features.row(1) == Eigen::RowVector3d(1.5, 0.0, -1.0));
  CHECK(error_of("1 0:2\n", DataFormat::sparse).find("1-based") != std::string::npos);
  CHECK(error_of("1 3\n", DataFormat::sparse).find("idx:val") != std::string::npos);
}

TEST_CASE("parse errors name the line") {
  CHECK(error_of("1,2,3\n1,2,3,4\n").find("line 2") != std::string::npos);
  CHECK(error_of("1,2,x\n").find("line 1") != std::string::npos);
  CHECK(error_of("1,2\nfoo,3\n").find("line 2") != std::string::npos);
  CHECK_THROWS_AS(parse("1,2,3\n1,2\n"), ParseError);
  CHECK_THROWS_AS(parse("1,abc\n"), ParseError);
  CHECK_THROWS_AS(parse(""), ConfigError);
  CHECK_THROWS_AS(parse("\n  \n"), ConfigError);
  CHECK_THROWS_AS(parse(",,\n"), ParseError);
}

TEST_CASE("load_dataset detects the format and reports missing files") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto sparse = (dir / "sshl_test_sparse.txt").string();
  std::ofstream(sparse) << "1 1:2 4:1\n2 2:3\n";
  CHECK(load_dataset(sparse).dim() == 4);
  std::filesystem::remove(sparse);
  CHECK_THROWS_AS(load_dataset((dir / "sshl_missing_file.csv").string()), ParseError);
}

TEST_CASE("delimited files round trip exactly") {
  Dataset d = testing::gaussian_blobs(30, 4, 3, 2.0, 1.0, 5);
  d.features(0, 0) = 1.0 / 3.0;
  d.features(1, 1) = -1e-300;
  d.labels[4].reset();
  std::ostringstream out;
  write_delimited(out, d);
  const Dataset back = parse(out.str());
  CHECK(back.features == d.features);
  CHECK(back.labels == d.labels);
  CHECK(back.label_values == d.label_values);
}

TEST_CASE("split sizes, disjointness and determinism") {
  const Dataset d = testing::gaussian_blobs(10, 2, 2, 2.0, 1.0, 1);
  const auto [train, test] = split(d, 0.5, 3, false);
  CHECK(train.size() == 5);
  CHECK(test.size() == 5);
  std::multiset<double> all = first_column(train);
  for (double v : first_column(test)) all.insert(v);
  CHECK(all == first_column(d));
  const auto again = split(d, 0.5, 3, false);
  CHECK(again.first.features == train.features);
  const auto other = split(d, 0.5, 4, false);
  CHECK(other.first.features != train.features);
  CHECK_THROWS_AS(split(d, 1.0, 1, false), ConfigError);
  CHECK_THROWS_AS(split(d, 0.0, 1, false), ConfigError);
}

TEST_CASE("stratified split keeps class proportions") {
  const Dataset d = testing::gaussian_blobs(20, 2, 2, 2.0, 1.0, 2);
  const auto [train, test] = split(d, 0.5, 7, true);
  int per_class[2] = {0, 0};
  for (const auto& l : train.labels) ++per_class[*l];
  CHECK(per_class[0] == 5);
  CHECK(per_class[1] == 5);
  CHECK(test.size() == 10);

  Dataset lonely = d;
  lonely.groups = 3;
  lonely.label_values.push_back(3);
  lonely.labels[0] = 2;
  CHECK_THROWS_AS(split(lonely, 0.5, 7, true), ConfigError);
}

TEST_CASE("standardize uses training statistics") {
  Dataset train;
  train.features.resize(2, 2);
  train.features << 0.0, 4.0, 2.0, 4.0;
  train.labels = {0, 0};
  train.groups = 1;
  Dataset test = train;
  test.features << 3.0, 1.0, -1.0, 4.0;
  const Standardized s = standardize(train, {train, test});
  CHECK(s.datasets[0].features.col(0) == Eigen::Vector2d(-1.0, 1.0));
  // the constant column passes through unchanged
  CHECK(s.stats.scale[1] == 1.0);
  CHECK(s.datasets[0].features.col(1) == Eigen::Vector2d(4.0, 4.0));
  // by hand with train mean (1, 0) and scale (1, 1)
  CHECK(s.datasets[1].features(0, 0) == 2.0);
  CHECK(s.datasets[1].features(1, 0) == -2.0);
  CHECK(s.datasets[1].features(0, 1) == 1.0);
}

TEST_CASE("align_labels rebases onto an existing label map") {
  const Dataset d = parse("5,1\n9,2\n7,3\n");
  const Dataset a = align_labels(d, {9, 5});
  CHECK(a.label_values == std::vector<long>{9, 5, 7});
  CHECK(a.groups == 3);
  CHECK(*a.labels[0] == 1);
  CHECK(*a.labels[1] == 0);
  CHECK(*a.labels[2] == 2);
}
