#pragma once

// Feature-weighted mixed naive Bayes and its unweighted single-kind
// baselines. Scores are weighted log-posterior numerators,
//
//   score_k = ln p_k + sum_{two-valued j} FW_j [x_j ln t_kj + (1 - x_j) ln(1 - t_kj)]
//                    + sum_{continuous j} FW_j ln N(x_j; mu_kj, sigma_kj),
//
// evaluated in the linear form x~ . varphi_k + phi_k where x~ is the
// two-valued part of the row with a trailing 1.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fwmnbm/clipping.hpp"
#include "fwmnbm/error.hpp"
#include "fwmnbm/estimation.hpp"
#include "fwmnbm/feature_weights.hpp"
#include "fwmnbm/schema.hpp"

namespace fwmnbm {

inline constexpr std::string_view kModelFormatVersion = "fwmnbm-model/1";

struct ModelConfig {
  TruncationConfig truncation;
  WeightConfig weighting;
  double sigma_floor = kDefaultSigmaFloor;

  void validate() const {
    truncation.validate();
    if (!(sigma_floor > 0.0) || !std::isfinite(sigma_floor)) {
      throw Error(ErrorKind::InvalidArgument, "sigma floor must be positive");
    }
  }
};

// Non-owning bundle of the parameters the scoring routines read.
struct ScoringView {
  const DatasetSchema& schema;
  const ClassStats& stats;
  std::span<const double> weights;  // one per schema column
};

template <class M>
concept ScoringModel = requires(const M& m) {
  { m.scoring_view() } -> std::same_as<ScoringView>;
};

struct FwmnbmModel {
  DatasetSchema schema;
  LabelMapping label_mapping;
  int class_count = 0;
  ClassStats stats;
  FeatureWeightReport weights;
  ClipThresholds thresholds;
  ModelConfig config;
  std::string format_version{kModelFormatVersion};

  // Cached normalized weights in schema order; rebuilt by finalize().
  std::vector<double> weight_vector;

  void finalize() { weight_vector = weights.normalized(); }

  ScoringView scoring_view() const { return {schema, stats, weight_vector}; }

  void validate() const;
};

struct ScoreBreakdown {
  std::vector<double> x_tilde;  // two-valued entries then 1
  std::vector<double> varphi;   // weighted log-odds, then the constant term
  double phi = 0.0;             // weighted Gaussian log-density sum
  double score = 0.0;
};

namespace detail {

inline void check_row(const DatasetSchema& schema, std::span<const double> row) {
  if (row.size() != schema.size()) {
    throw Error(ErrorKind::SchemaMismatch, "row has " + std::to_string(row.size()) + " values, schema has " +
                                               std::to_string(schema.size()) + " columns");
  }
  for (std::size_t j = 0; j < row.size(); ++j) {
    const auto& v = schema.variable(j);
    if (!std::isfinite(row[j])) throw Error(ErrorKind::MalformedNumber, "column '" + v.name + "' is not finite");
    if (v.kind == VariableKind::TwoValued && row[j] != 0.0 && row[j] != 1.0) {
      throw Error(ErrorKind::NonBinaryValue, "column '" + v.name + "' must be 0 or 1");
    }
  }
}

inline double gaussian_log_density(double x, const GaussianParams& g) {
  const double var = g.sigma * g.sigma;
  const double r = x - g.mu;
  return -0.5 * std::log(2.0 * std::numbers::pi * var) - r * r / (2.0 * var);
}

inline std::vector<ScoreBreakdown> score_breakdown(const ScoringView& m, std::span<const double> row) {
  check_row(m.schema, row);
  const auto parts = split_by_kind(m.schema);
  const std::size_t K = m.stats.priors.size();
  std::vector<ScoreBreakdown> out(K);
  for (std::size_t k = 0; k < K; ++k) {
    auto& b = out[k];
    b.x_tilde.reserve(parts.two_valued.size() + 1);
    b.varphi.reserve(parts.two_valued.size() + 1);
    double constant = std::log(m.stats.priors[k]);
    for (std::size_t t = 0; t < parts.two_valued.size(); ++t) {
      const std::size_t j = parts.two_valued[t];
      const double theta = m.stats.theta[k][t];
      b.x_tilde.push_back(row[j]);
      b.varphi.push_back(m.weights[j] * std::log(theta / (1.0 - theta)));
      constant += m.weights[j] * std::log(1.0 - theta);
    }
    b.x_tilde.push_back(1.0);
    b.varphi.push_back(constant);

    for (std::size_t c = 0; c < parts.continuous.size(); ++c) {
      const std::size_t j = parts.continuous[c];
      b.phi += m.weights[j] * gaussian_log_density(row[j], m.stats.gaussian[k][c]);
    }
    double dot = 0.0;
    for (std::size_t t = 0; t < b.x_tilde.size(); ++t) dot += b.x_tilde[t] * b.varphi[t];
    b.score = dot + b.phi;
  }
  return out;
}

// Same quantity summed term by term, without the linear factorization.
inline std::vector<double> direct_log_numerator(const ScoringView& m, std::span<const double> row) {
  check_row(m.schema, row);
  const auto parts = split_by_kind(m.schema);
  const std::size_t K = m.stats.priors.size();
  std::vector<double> out(K);
  for (std::size_t k = 0; k < K; ++k) {
    double s = std::log(m.stats.priors[k]);
    for (std::size_t t = 0; t < parts.two_valued.size(); ++t) {
      const std::size_t j = parts.two_valued[t];
      const double theta = m.stats.theta[k][t];
      const double x = row[j];
      s += m.weights[j] * (x * std::log(theta) + (1.0 - x) * std::log(1.0 - theta));
    }
    for (std::size_t c = 0; c < parts.continuous.size(); ++c) {
      const std::size_t j = parts.continuous[c];
      const auto& g = m.stats.gaussian[k][c];
      const double z = (row[j] - g.mu) / g.sigma;
      s += m.weights[j] * (-std::log(g.sigma) - 0.5 * std::log(2.0 * std::numbers::pi) - 0.5 * z * z);
    }
    out[k] = s;
  }
  return out;
}

// First index of the maximum, so ties go to the smallest class.
inline int argmax_label(std::span<const double> scores) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < scores.size(); ++k) {
    if (scores[k] > scores[best]) best = k;
  }
  return static_cast<int>(best + 1);
}

inline std::vector<double> softmax(std::span<const double> scores) {
  const double top = *std::max_element(scores.begin(), scores.end());
  std::vector<double> out(scores.size());
  double total = 0.0;
  for (std::size_t k = 0; k < scores.size(); ++k) {
    out[k] = std::exp(scores[k] - top);
    total += out[k];
  }
  for (auto& p : out) p /= total;
  return out;
}

}  // namespace detail

template <ScoringModel M>
std::vector<ScoreBreakdown> score(const M& m, std::span<const double> row) {
  return detail::score_breakdown(m.scoring_view(), row);
}

template <ScoringModel M>
std::vector<double> direct_log_numerator(const M& m, std::span<const double> row) {
  return detail::direct_log_numerator(m.scoring_view(), row);
}

template <ScoringModel M>
std::vector<double> class_scores(const M& m, std::span<const double> row) {
  const auto breakdown = score(m, row);
  std::vector<double> out;
  out.reserve(breakdown.size());
  for (const auto& b : breakdown) out.push_back(b.score);
  return out;
}

template <ScoringModel M>
int predict(const M& m, std::span<const double> row) {
  return detail::argmax_label(class_scores(m, row));
}

template <ScoringModel M>
std::vector<double> posterior(const M& m, std::span<const double> row) {
  return detail::softmax(class_scores(m, row));
}

template <ScoringModel M>
std::vector<int> predict_all(const M& m, const Dataset& d) {
  std::vector<int> out(d.rows());
  for (std::size_t i = 0; i < d.rows(); ++i) out[i] = predict(m, d.row(i));
  return out;
}

namespace detail {

inline void check_trainable(const Dataset& d) {
  if (!d.has_labels()) throw Error(ErrorKind::EmptyClassList, "training data has no labels");
  if (d.class_count() < 2) throw Error(ErrorKind::SingleClass, "training data holds a single class");
  std::vector<std::size_t> counts(static_cast<std::size_t>(d.class_count()), 0);
  for (int y : d.labels()) ++counts[static_cast<std::size_t>(y - 1)];
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] < 2) {
      const std::string name = d.label_mapping().empty() ? std::to_string(k + 1) : d.label_mapping().token(static_cast<int>(k + 1));
      throw Error(ErrorKind::ClassTooSmall, "class '" + name + "' has " + std::to_string(counts[k]) +
                                                " rows, need at least 2");
    }
  }
}

inline LabelMapping mapping_or_indices(const Dataset& d) {
  if (!d.label_mapping().empty()) return d.label_mapping();
  std::vector<std::string> tokens;
  for (int k = 1; k <= d.class_count(); ++k) tokens.push_back(std::to_string(k));
  return LabelMapping(std::move(tokens));
}

inline bool in_band(double p, double xi) { return p >= xi && p <= 1.0 - xi; }

}  // namespace detail

inline FwmnbmModel train_fwmnbm(const Dataset& d, const ModelConfig& cfg = {}) {
  cfg.validate();
  detail::check_trainable(d);
  const auto parts = split_by_kind(d);

  FwmnbmModel m;
  m.schema = d.schema();
  m.label_mapping = detail::mapping_or_indices(d);
  m.class_count = d.class_count();
  m.config = cfg;
  if (parts.continuous.empty()) {
    m.thresholds.column_count = d.cols();
  } else {
    m.thresholds = compute_thresholds(d);
  }
  m.weights = compute_feature_weights(d, m.thresholds, cfg.truncation, cfg.weighting);
  m.stats = estimate_class_stats(d, cfg.truncation, cfg.sigma_floor);
  m.finalize();
  return m;
}

inline void FwmnbmModel::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::ModelFormat, what); };
  config.validate();
  const double xi = config.truncation.xi;
  const auto parts = split_by_kind(schema);
  const auto K = static_cast<std::size_t>(class_count);
  if (class_count < 2) fail("class_count must be at least 2");
  if (label_mapping.size() != K) fail("label_mapping size differs from class_count");
  if (stats.priors.size() != K || stats.theta.size() != K || stats.gaussian.size() != K) {
    fail("per-class parameter blocks must have class_count entries");
  }
  double prior_sum = 0.0;
  for (double p : stats.priors) {
    if (!detail::in_band(p, xi)) fail("prior outside [xi, 1 - xi]");
    prior_sum += p;
  }
  if (std::abs(prior_sum - 1.0) > 1e-9) fail("priors do not sum to 1");
  for (std::size_t k = 0; k < K; ++k) {
    if (stats.theta[k].size() != parts.two_valued.size()) fail("theta row size differs from two-valued column count");
    if (stats.gaussian[k].size() != parts.continuous.size()) fail("mu/sigma row size differs from continuous column count");
    for (double t : stats.theta[k]) {
      if (!detail::in_band(t, xi)) fail("theta outside [xi, 1 - xi]");
    }
    for (const auto& g : stats.gaussian[k]) {
      if (!std::isfinite(g.mu) || !(g.sigma >= config.sigma_floor) || !std::isfinite(g.sigma)) {
        fail("invalid Gaussian parameters");
      }
    }
  }
  if (weights.features.size() != schema.size()) fail("one feature weight per column required");
  double weight_sum = 0.0;
  for (std::size_t j = 0; j < schema.size(); ++j) {
    const auto& f = weights.features[j];
    if (f.name != schema.variable(j).name) fail("feature weight order differs from schema");
    if (!(f.normalized_weight > 0.0 && f.normalized_weight < 1.0) && schema.size() > 1) {
      fail("feature weight outside (0, 1)");
    }
    weight_sum += f.normalized_weight;
  }
  if (std::abs(weight_sum - 1.0) > 1e-9) fail("feature weights do not sum to 1");
  if (thresholds.column_count != schema.size() || thresholds.columns != parts.continuous ||
      thresholds.values.size() != parts.continuous.size()) {
    fail("thresholds do not match the schema");
  }
}

// Unweighted naive Bayes over one variable kind. Rows passed to it use the
// full source schema; the model keeps only its own columns.
struct BaselineModel {
  VariableKind kind = VariableKind::Continuous;
  std::vector<std::size_t> source_columns;
  std::size_t source_width = 0;
  DatasetSchema schema;
  LabelMapping label_mapping;
  int class_count = 0;
  ClassStats stats;
  std::vector<double> weights;

  ScoringView scoring_view() const { return {schema, stats, weights}; }

  std::vector<double> project(std::span<const double> row) const {
    if (row.size() != source_width) {
      throw Error(ErrorKind::SchemaMismatch, "row width differs from the training schema");
    }
    std::vector<double> out;
    out.reserve(source_columns.size());
    for (auto j : source_columns) out.push_back(row[j]);
    return out;
  }
};

namespace detail {

inline BaselineModel train_baseline(const Dataset& d, VariableKind kind, const ModelConfig& cfg) {
  cfg.validate();
  detail::check_trainable(d);
  const auto parts = split_by_kind(d);
  const auto& cols = kind == VariableKind::Continuous ? parts.continuous : parts.two_valued;
  if (cols.empty()) {
    throw Error(kind == VariableKind::Continuous ? ErrorKind::NoContinuousColumns : ErrorKind::NonBinaryColumn,
                std::string("dataset has no ") + std::string(to_string(kind)) + " columns");
  }
  const Dataset view = d.select_columns(cols);
  BaselineModel m;
  m.kind = kind;
  m.source_columns = cols;
  m.source_width = d.cols();
  m.schema = view.schema();
  m.label_mapping = mapping_or_indices(d);
  m.class_count = d.class_count();
  m.stats = estimate_class_stats(view, cfg.truncation, cfg.sigma_floor);
  m.weights.assign(cols.size(), 1.0);
  return m;
}

}  // namespace detail

// Gaussian naive Bayes on the continuous columns only.
inline BaselineModel train_gnbm(const Dataset& d, const ModelConfig& cfg = {}) {
  return detail::train_baseline(d, VariableKind::Continuous, cfg);
}

// Bernoulli naive Bayes on the two-valued columns only.
inline BaselineModel train_bnbm(const Dataset& d, const ModelConfig& cfg = {}) {
  return detail::train_baseline(d, VariableKind::TwoValued, cfg);
}

inline int predict_baseline(const BaselineModel& m, std::span<const double> row) {
  return predict(m, m.project(row));
}

inline std::vector<int> predict_baseline_all(const BaselineModel& m, const Dataset& d) {
  std::vector<int> out(d.rows());
  for (std::size_t i = 0; i < d.rows(); ++i) out[i] = predict_baseline(m, d.row(i));
  return out;
}

}  // namespace fwmnbm
