#pragma once

// Dataset files. Both formats are header-free, one sample per line.
//
//   delimited:  <label>,<x_1>,...,<x_D>     (commas or whitespace; label "?" = unlabeled)
//   sparse:     <label> <idx>:<val> ...     (1-based indices, densified to the max index)
//
// Labels are integers; they are remapped to group ids 0..G-1 in ascending
// order and the original values are kept in Dataset::label_values.

#include "sshl/core.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace sshl {

enum class DataFormat { delimited, sparse };

Dataset parse_dataset(std::istream& in, DataFormat format);
Dataset load_dataset(const std::string& path, DataFormat format);
/// Picks sparse when the first data line contains ':'.
Dataset load_dataset(const std::string& path);

/// Comma-separated, full precision, original label values.
void write_delimited(std::ostream& out, const Dataset& data);
void save_delimited(const Dataset& data, const std::string& path);

/// Seeded shuffle split. Stratified splits take round(fraction * n_c) of every
/// class (unlabeled rows form their own stratum).
std::pair<Dataset, Dataset> split(const Dataset& data, double train_fraction, std::uint64_t seed, bool stratified);

struct Standardized {
  Standardization stats;
  std::vector<Dataset> datasets;
};

/// Fits per-dimension statistics on `train` and applies them to every dataset
/// in `apply_to`.
Standardized standardize(const Dataset& train, const std::vector<Dataset>& apply_to);

/// Rebases `data` onto an existing label map so group ids line up. Labels
/// missing from the map are appended to it as new groups.
Dataset align_labels(const Dataset& data, const std::vector<long>& label_values);

}  // namespace sshl
