#pragma once

// Auxiliary two-valued variables: a continuous column is thresholded at its
// class-count-weighted mean of class means (x > t -> 1, x <= t -> 0).

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "fwmnbm/error.hpp"
#include "fwmnbm/schema.hpp"

namespace fwmnbm {

struct ClipThresholds {
  std::size_t column_count = 0;      // p of the schema the thresholds came from
  std::vector<std::size_t> columns;  // continuous column indices
  std::vector<double> values;        // one threshold per entry of `columns`

  friend bool operator==(const ClipThresholds&, const ClipThresholds&) = default;
};

// sum_k mu_k * n_k / n over classes present in `labels`.
inline double clip_threshold(std::span<const double> column, std::span<const int> labels) {
  if (column.size() != labels.size()) throw Error(ErrorKind::LengthMismatch, "column and labels differ in length");
  if (column.empty()) throw Error(ErrorKind::EmptyInput, "empty column");
  int K = 0;
  for (int y : labels) K = std::max(K, y);
  std::vector<double> sum(static_cast<std::size_t>(K), 0.0);
  std::vector<std::size_t> count(static_cast<std::size_t>(K), 0);
  for (std::size_t i = 0; i < column.size(); ++i) {
    if (labels[i] < 1) throw Error(ErrorKind::UnknownLabel, "class labels must be >= 1");
    const auto k = static_cast<std::size_t>(labels[i] - 1);
    sum[k] += column[i];
    ++count[k];
  }
  double weighted = 0.0;
  for (std::size_t k = 0; k < sum.size(); ++k) {
    if (count[k] == 0) continue;
    const double mu = sum[k] / static_cast<double>(count[k]);
    weighted += mu * static_cast<double>(count[k]);
  }
  return weighted / static_cast<double>(column.size());
}

inline ClipThresholds compute_thresholds(const Dataset& d) {
  if (!d.has_labels()) throw Error(ErrorKind::EmptyClassList, "thresholds need labeled data");
  const auto parts = split_by_kind(d);
  if (parts.continuous.empty()) throw Error(ErrorKind::NoContinuousColumns, "dataset has no continuous columns");
  ClipThresholds t;
  t.column_count = d.cols();
  t.columns = parts.continuous;
  for (auto j : parts.continuous) t.values.push_back(clip_threshold(d.column(j), d.labels()));
  return t;
}

inline std::vector<double> clip_column(std::span<const double> column, double threshold) {
  std::vector<double> out(column.size());
  for (std::size_t i = 0; i < column.size(); ++i) out[i] = column[i] > threshold ? 1.0 : 0.0;
  return out;
}

// One auxiliary binary column per continuous column, in `t.columns` order.
inline std::vector<std::vector<double>> clip(const Dataset& d, const ClipThresholds& t) {
  if (d.cols() != t.column_count || split_by_kind(d).continuous != t.columns) {
    throw Error(ErrorKind::SchemaMismatch, "thresholds were computed for a different schema");
  }
  std::vector<std::vector<double>> out;
  out.reserve(t.columns.size());
  for (std::size_t c = 0; c < t.columns.size(); ++c) out.push_back(clip_column(d.column(t.columns[c]), t.values[c]));
  return out;
}

}  // namespace fwmnbm
