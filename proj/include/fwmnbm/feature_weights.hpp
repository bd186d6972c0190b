#pragma once

// Feature weights from mutual information (nats). Each feature's
// correlation index is its MI with the label minus its mean MI with every
// other feature; a logistic transform maps the index into (0, 1) and the
// transformed values are normalized to sum to one. Continuous features take
// part through their clipped auxiliary binary column.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fwmnbm/clipping.hpp"
#include "fwmnbm/error.hpp"
#include "fwmnbm/estimation.hpp"
#include "fwmnbm/schema.hpp"

namespace fwmnbm {

enum class SigmoidSign {
  Decreasing,  // raw = 1 / (1 + e^{CI}), the printed transform
  Increasing,  // raw = 1 / (1 + e^{-CI})
};

inline std::string_view to_string(SigmoidSign sign) {
  return sign == SigmoidSign::Decreasing ? "literal" : "increasing";
}

inline SigmoidSign parse_sigmoid_sign(std::string_view text) {
  if (text == "literal") return SigmoidSign::Decreasing;
  if (text == "increasing") return SigmoidSign::Increasing;
  throw Error(ErrorKind::InvalidArgument, "unknown sigmoid sign '" + std::string(text) + "'");
}

struct WeightConfig {
  SigmoidSign sign = SigmoidSign::Decreasing;
};

struct FeatureWeight {
  std::string name;
  double mi_label = 0.0;
  double avg_pairwise_mi = 0.0;
  double ci = 0.0;
  double raw_weight = 0.0;
  double normalized_weight = 0.0;

  friend bool operator==(const FeatureWeight&, const FeatureWeight&) = default;
};

struct FeatureWeightReport {
  std::vector<FeatureWeight> features;

  std::vector<double> normalized() const {
    std::vector<double> out;
    out.reserve(features.size());
    for (const auto& f : features) out.push_back(f.normalized_weight);
    return out;
  }

  friend bool operator==(const FeatureWeightReport&, const FeatureWeightReport&) = default;
};

// Row-major joint table with its two marginals.
struct ContingencyTable {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> joint;
  std::vector<double> row_marginal;
  std::vector<double> col_marginal;

  double at(std::size_t a, std::size_t b) const { return joint[a * cols + b]; }
};

// sum P(a,b) ln(P(a,b) / (P(a) P(b))), floored at 0. Cells are expected to
// be truncated already, so no cell is exactly zero.
inline double mutual_information(const ContingencyTable& t) {
  if (t.joint.size() != t.rows * t.cols || t.row_marginal.size() != t.rows || t.col_marginal.size() != t.cols) {
    throw Error(ErrorKind::DimensionMismatch, "contingency table dimensions are inconsistent");
  }
  double mi = 0.0;
  for (std::size_t a = 0; a < t.rows; ++a) {
    for (std::size_t b = 0; b < t.cols; ++b) {
      const double p = t.at(a, b);
      if (p <= 0.0) continue;
      mi += p * std::log(p / (t.row_marginal[a] * t.col_marginal[b]));
    }
  }
  return std::max(mi, 0.0);
}

inline double mutual_information(const BinaryJoint& joint, const BinaryMarginal& marg_j, const BinaryMarginal& marg_jp) {
  ContingencyTable t;
  t.rows = 2;
  t.cols = 2;
  t.joint = {joint.truncated[0][0], joint.truncated[0][1], joint.truncated[1][0], joint.truncated[1][1]};
  t.row_marginal = {marg_j.p0, marg_j.p1};
  t.col_marginal = {marg_jp.p0, marg_jp.p1};
  return mutual_information(t);
}

inline double pairwise_mi(std::span<const double> col_j, std::span<const double> col_jp,
                          const TruncationConfig& cfg = {}) {
  const auto joint = estimate_joint_conditional(col_j, col_jp, cfg);
  return mutual_information(joint, estimate_marginal(col_j, cfg.xi), estimate_marginal(col_jp, cfg.xi));
}

// MI between a binary feature and the categorical label over a 2 x K table.
inline double mi_feature_label(std::span<const double> feature, std::span<const int> labels, int class_count,
                               const TruncationConfig& cfg = {}) {
  if (feature.size() != labels.size()) throw Error(ErrorKind::LengthMismatch, "feature and labels differ in length");
  if (class_count < 1) throw Error(ErrorKind::EmptyClassList, "no classes");
  const auto K = static_cast<std::size_t>(class_count);
  const double n = static_cast<double>(feature.size());
  std::vector<double> cells(2 * K, 0.0);
  std::vector<double> label_freq(K, 0.0);
  for (std::size_t i = 0; i < feature.size(); ++i) {
    if (labels[i] < 1 || labels[i] > class_count) throw Error(ErrorKind::UnknownLabel, "label outside 1..K");
    const auto k = static_cast<std::size_t>(labels[i] - 1);
    const auto a = feature[i] == 1.0 ? 1u : 0u;
    cells[a * K + k] += 1.0;
    label_freq[k] += 1.0;
  }
  for (auto& c : cells) c /= n;
  for (auto& f : label_freq) f /= n;

  const auto marg = estimate_marginal(feature, cfg.xi);
  ContingencyTable t;
  t.rows = 2;
  t.cols = K;
  t.joint = truncate_distribution(std::move(cells), cfg.xi);
  t.row_marginal = {marg.p0, marg.p1};
  t.col_marginal = truncate_distribution(std::move(label_freq), cfg.xi);
  return mutual_information(t);
}

// Mean of the pairwise MIs; an empty list (single feature) averages to 0.
inline double average_pairwise_mi(std::span<const double> pairwise_mis) {
  if (pairwise_mis.empty()) return 0.0;
  double sum = 0.0;
  for (double m : pairwise_mis) sum += m;
  return sum / static_cast<double>(pairwise_mis.size());
}

inline double correlation_index(double mi_label, std::span<const double> pairwise_mis) {
  return mi_label - average_pairwise_mi(pairwise_mis);
}

inline double sigmoid_weight(double ci, SigmoidSign sign) {
  return sign == SigmoidSign::Decreasing ? 1.0 / (1.0 + std::exp(ci)) : 1.0 / (1.0 + std::exp(-ci));
}

// Fills raw_weight and normalized_weight; other fields are left untouched.
inline std::vector<FeatureWeight> transform_and_normalize(std::span<const double> cis, const WeightConfig& cfg = {}) {
  if (cis.empty()) throw Error(ErrorKind::DimensionMismatch, "no features to weight");
  std::vector<FeatureWeight> out(cis.size());
  double total = 0.0;
  for (std::size_t j = 0; j < cis.size(); ++j) {
    out[j].ci = cis[j];
    out[j].raw_weight = sigmoid_weight(cis[j], cfg.sign);
    total += out[j].raw_weight;
  }
  for (auto& f : out) f.normalized_weight = f.raw_weight / total;
  return out;
}

// Binary view of every feature in schema order: two-valued columns as-is,
// continuous columns clipped.
inline std::vector<std::vector<double>> binary_view(const Dataset& d, const ClipThresholds& thresholds) {
  const auto parts = split_by_kind(d);
  std::vector<std::vector<double>> cols(d.cols());
  for (auto j : parts.two_valued) cols[j] = d.column(j);
  if (!parts.continuous.empty()) {
    auto clipped = clip(d, thresholds);
    for (std::size_t c = 0; c < parts.continuous.size(); ++c) cols[parts.continuous[c]] = std::move(clipped[c]);
  }
  return cols;
}

inline FeatureWeightReport compute_feature_weights(const Dataset& d, const ClipThresholds& thresholds,
                                                   const TruncationConfig& trunc = {},
                                                   const WeightConfig& cfg = {}) {
  if (!d.has_labels()) throw Error(ErrorKind::EmptyClassList, "feature weights need labeled data");
  const auto cols = binary_view(d, thresholds);
  const std::size_t p = cols.size();

  std::vector<double> pair(p * p, 0.0);
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = a + 1; b < p; ++b) {
      pair[a * p + b] = pair[b * p + a] = pairwise_mi(cols[a], cols[b], trunc);
    }
  }

  std::vector<double> mi_label(p);
  std::vector<double> avg_pair(p);
  std::vector<double> cis(p);
  std::vector<double> others;
  for (std::size_t j = 0; j < p; ++j) {
    mi_label[j] = mi_feature_label(cols[j], d.labels(), d.class_count(), trunc);
    others.clear();
    for (std::size_t b = 0; b < p; ++b) {
      if (b != j) others.push_back(pair[j * p + b]);
    }
    avg_pair[j] = average_pairwise_mi(others);
    cis[j] = mi_label[j] - avg_pair[j];
  }

  FeatureWeightReport report;
  report.features = transform_and_normalize(cis, cfg);
  for (std::size_t j = 0; j < p; ++j) {
    auto& f = report.features[j];
    f.name = d.schema().variable(j).name;
    f.mi_label = mi_label[j];
    f.avg_pairwise_mi = avg_pair[j];
  }
  return report;
}

}  // namespace fwmnbm
