#pragma once

// Maximum-likelihood estimates with double truncation: every probability
// that can reach a logarithm is kept inside [xi, 1 - xi].

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "fwmnbm/error.hpp"
#include "fwmnbm/schema.hpp"

namespace fwmnbm {

enum class TruncationMode {
  ClampAll,           // clamp every estimate into [xi, 1 - xi]
  LiteralComplement,  // the largest class takes the complement of the others
};

inline std::string_view to_string(TruncationMode mode) {
  return mode == TruncationMode::ClampAll ? "clamp-all" : "literal";
}

inline TruncationMode parse_truncation_mode(std::string_view text) {
  if (text == "clamp-all") return TruncationMode::ClampAll;
  if (text == "literal") return TruncationMode::LiteralComplement;
  throw Error(ErrorKind::InvalidArgument, "unknown truncation mode '" + std::string(text) + "'");
}

inline constexpr double kDefaultXi = 1e-6;
inline constexpr double kDefaultSigmaFloor = 1e-9;

struct TruncationConfig {
  double xi = kDefaultXi;
  TruncationMode mode = TruncationMode::ClampAll;

  void validate() const {
    if (!(xi > 0.0 && xi < 0.5)) {
      throw Error(ErrorKind::InvalidArgument, "xi must lie in (0, 0.5), got " + format_double(xi));
    }
  }

  double clamp(double p) const { return std::clamp(p, xi, 1.0 - xi); }
};

// Clamps each cell into [xi, 1 - xi]. If any cell moved, the unclamped cells
// are rescaled so the total is 1 again; cells pushed across a bound by the
// rescale are pinned to it and the rescale repeats. Untouched distributions
// are returned as-is.
inline std::vector<double> truncate_distribution(std::vector<double> p, double xi) {
  const double lo = xi;
  const double hi = 1.0 - xi;
  bool clamped = false;
  std::vector<int> pinned(p.size(), 0);  // -1 at lo, +1 at hi
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= lo) {
      clamped = clamped || p[i] < lo;
      p[i] = lo;
      pinned[i] = -1;
    } else if (p[i] >= hi) {
      clamped = clamped || p[i] > hi;
      p[i] = hi;
      pinned[i] = 1;
    }
  }
  if (!clamped) return p;

  for (std::size_t round = 0; round <= 2 * p.size() + 1; ++round) {
    double fixed = 0.0;
    double free = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) (pinned[i] != 0 ? fixed : free) += p[i];
    if (free <= 0.0) {
      // Everything sits on a bound: release the side holding the surplus.
      if (fixed == 1.0) break;
      const int side = fixed > 1.0 ? 1 : -1;
      for (auto& s : pinned) {
        if (s == side) s = 0;
      }
      continue;
    }
    const double scale = (1.0 - fixed) / free;
    bool changed = false;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (pinned[i] != 0) continue;
      p[i] *= scale;
      if (p[i] < lo) {
        p[i] = lo;
        pinned[i] = -1;
        changed = true;
      } else if (p[i] > hi) {
        p[i] = hi;
        pinned[i] = 1;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return p;
}

namespace detail {

inline std::vector<std::size_t> class_counts(std::span<const int> labels, int class_count) {
  std::vector<std::size_t> counts(static_cast<std::size_t>(class_count), 0);
  for (int y : labels) {
    if (y < 1 || y > class_count) {
      throw Error(ErrorKind::UnknownLabel, "label " + std::to_string(y) + " outside 1.." +
                                               std::to_string(class_count));
    }
    ++counts[static_cast<std::size_t>(y - 1)];
  }
  return counts;
}

inline void require_binary(std::span<const double> column) {
  for (double x : column) {
    if (x != 0.0 && x != 1.0) throw Error(ErrorKind::NonBinaryColumn, "column holds a value other than 0/1");
  }
}

// Largest index attaining the maximum.
inline std::size_t last_argmax(std::span<const double> v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] >= v[best]) best = i;
  }
  return best;
}

}  // namespace detail

inline std::vector<double> estimate_priors(std::span<const int> labels, int class_count,
                                           const TruncationConfig& cfg = {}) {
  if (class_count < 1 || labels.empty()) throw Error(ErrorKind::EmptyClassList, "no classes to estimate");
  const auto counts = detail::class_counts(labels, class_count);
  const double n = static_cast<double>(labels.size());
  std::vector<double> raw(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) raw[k] = static_cast<double>(counts[k]) / n;

  if (cfg.mode == TruncationMode::ClampAll) return truncate_distribution(std::move(raw), cfg.xi);

  // Class with the largest count plays the role of class K.
  const std::size_t last = detail::last_argmax(raw);
  std::vector<double> out(raw.size());
  double others = 0.0;
  for (std::size_t k = 0; k < raw.size(); ++k) {
    if (k == last) continue;
    out[k] = cfg.clamp(raw[k]);
    others += out[k];
  }
  out[last] = cfg.clamp(1.0 - others);
  return out;
}

// Per-class response probability P(x = 1 | y = k).
inline std::vector<double> estimate_bernoulli(std::span<const double> column, std::span<const int> labels,
                                              int class_count, const TruncationConfig& cfg = {}) {
  if (column.size() != labels.size()) throw Error(ErrorKind::LengthMismatch, "column and labels differ in length");
  detail::require_binary(column);
  const auto counts = detail::class_counts(labels, class_count);
  std::vector<double> ones(counts.size(), 0.0);
  for (std::size_t i = 0; i < column.size(); ++i) ones[static_cast<std::size_t>(labels[i] - 1)] += column[i];

  std::vector<double> raw(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] == 0) {
      throw Error(ErrorKind::ClassTooSmall, "class " + std::to_string(k + 1) + " has no samples");
    }
    raw[k] = ones[k] / static_cast<double>(counts[k]);
  }

  std::vector<double> theta(raw.size());
  if (cfg.mode == TruncationMode::ClampAll) {
    for (std::size_t k = 0; k < raw.size(); ++k) theta[k] = cfg.clamp(raw[k]);
    return theta;
  }
  const std::size_t last = detail::last_argmax(raw);
  double others = 0.0;
  for (std::size_t k = 0; k < raw.size(); ++k) {
    if (k == last) continue;
    theta[k] = cfg.clamp(raw[k]);
    others += theta[k];
  }
  // The complement can leave [0, 1] for K > 2; clamp keeps it a probability.
  theta[last] = cfg.clamp(1.0 - others);
  return theta;
}

struct GaussianParams {
  double mu = 0.0;
  double sigma = 1.0;

  friend bool operator==(const GaussianParams&, const GaussianParams&) = default;
};

// Class mean and Bessel-corrected standard deviation, sigma floored.
inline std::vector<GaussianParams> estimate_gaussian(std::span<const double> column, std::span<const int> labels,
                                                     int class_count, double sigma_floor = kDefaultSigmaFloor) {
  if (column.size() != labels.size()) throw Error(ErrorKind::LengthMismatch, "column and labels differ in length");
  const auto counts = detail::class_counts(labels, class_count);
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] < 2) {
      throw Error(ErrorKind::ClassTooSmall, "class " + std::to_string(k + 1) + " has " +
                                                std::to_string(counts[k]) + " samples, need at least 2");
    }
  }
  std::vector<double> sum(counts.size(), 0.0);
  for (std::size_t i = 0; i < column.size(); ++i) sum[static_cast<std::size_t>(labels[i] - 1)] += column[i];
  std::vector<GaussianParams> out(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) out[k].mu = sum[k] / static_cast<double>(counts[k]);

  std::vector<double> sq(counts.size(), 0.0);
  for (std::size_t i = 0; i < column.size(); ++i) {
    const auto k = static_cast<std::size_t>(labels[i] - 1);
    const double r = column[i] - out[k].mu;
    sq[k] += r * r;
  }
  for (std::size_t k = 0; k < counts.size(); ++k) {
    out[k].sigma = std::max(std::sqrt(sq[k] / static_cast<double>(counts[k] - 1)), sigma_floor);
  }
  return out;
}

struct BinaryMarginal {
  double p1 = 0.5;  // P(x = 1)
  double p0 = 0.5;  // P(x = 0)
};

inline BinaryMarginal estimate_marginal(std::span<const double> column, double xi = kDefaultXi) {
  if (column.empty()) throw Error(ErrorKind::EmptyInput, "empty column");
  detail::require_binary(column);
  double ones = 0.0;
  double zeros = 0.0;
  for (double x : column) {
    ones += x;
    zeros += 1.0 - x;
  }
  const double n = static_cast<double>(column.size());
  const auto t = truncate_distribution({ones / n, zeros / n}, xi);
  return {t[0], t[1]};
}

// Joint distribution of two binary columns j and j'. Cells are indexed
// [a][b] = P(x_j = a, x_j' = b).
struct BinaryJoint {
  std::array<std::array<double, 2>, 2> raw{};
  std::array<std::array<double, 2>, 2> truncated{};
  double phi_hat = 0.0;        // P(x_j = 1 | x_j' = 1)
  double phi_prime_hat = 0.0;  // P(x_j = 0 | x_j' = 0)
  bool degenerate = false;     // a conditional had no supporting rows
};

// Conditional-factorized joint estimate. When x_j' is constant one of the
// conditionals is unconstrained and is replaced by the matching truncated
// marginal of x_j (independence completion).
inline BinaryJoint estimate_joint_conditional(std::span<const double> col_j, std::span<const double> col_jp,
                                           const TruncationConfig& cfg = {}) {
  if (col_j.size() != col_jp.size()) throw Error(ErrorKind::LengthMismatch, "binary columns differ in length");
  const auto marg_jp = estimate_marginal(col_jp, cfg.xi);
  const auto marg_j = estimate_marginal(col_j, cfg.xi);

  double sum_j = 0.0;
  double sum_jp = 0.0;
  double sum_both = 0.0;
  for (std::size_t i = 0; i < col_j.size(); ++i) {
    sum_j += col_j[i];
    sum_jp += col_jp[i];
    sum_both += col_j[i] * col_jp[i];
  }
  const double n = static_cast<double>(col_j.size());

  BinaryJoint out;
  if (sum_jp > 0.0) {
    out.phi_hat = sum_both / sum_jp;
  } else {
    out.phi_hat = marg_j.p1;
    out.degenerate = true;
  }
  if (n - sum_jp > 0.0) {
    out.phi_prime_hat = (n + sum_both - (sum_j + sum_jp)) / (n - sum_jp);
  } else {
    out.phi_prime_hat = marg_j.p0;
    out.degenerate = true;
  }

  out.raw[1][1] = marg_jp.p1 * out.phi_hat;
  out.raw[0][1] = marg_jp.p1 * (1.0 - out.phi_hat);
  out.raw[0][0] = marg_jp.p0 * out.phi_prime_hat;
  out.raw[1][0] = marg_jp.p0 * (1.0 - out.phi_prime_hat);

  const auto t = truncate_distribution({out.raw[0][0], out.raw[0][1], out.raw[1][0], out.raw[1][1]}, cfg.xi);
  out.truncated = {{{t[0], t[1]}, {t[2], t[3]}}};
  return out;
}

// Everything the classifier needs per class. theta is indexed
// [class][two-valued column position], gaussian [class][continuous position].
struct ClassStats {
  std::vector<std::size_t> counts;
  std::vector<double> priors;
  std::vector<std::vector<double>> theta;
  std::vector<std::vector<GaussianParams>> gaussian;
};

inline ClassStats estimate_class_stats(const Dataset& d, const TruncationConfig& cfg = {},
                                       double sigma_floor = kDefaultSigmaFloor) {
  if (!d.has_labels()) throw Error(ErrorKind::EmptyClassList, "dataset has no labels");
  const int K = d.class_count();
  const auto parts = split_by_kind(d);
  ClassStats stats;
  stats.counts = detail::class_counts(d.labels(), K);
  stats.priors = estimate_priors(d.labels(), K, cfg);
  stats.theta.assign(static_cast<std::size_t>(K), std::vector<double>(parts.two_valued.size()));
  stats.gaussian.assign(static_cast<std::size_t>(K), std::vector<GaussianParams>(parts.continuous.size()));
  for (std::size_t t = 0; t < parts.two_valued.size(); ++t) {
    const auto theta = estimate_bernoulli(d.column(parts.two_valued[t]), d.labels(), K, cfg);
    for (std::size_t k = 0; k < theta.size(); ++k) stats.theta[k][t] = theta[k];
  }
  for (std::size_t c = 0; c < parts.continuous.size(); ++c) {
    const auto g = estimate_gaussian(d.column(parts.continuous[c]), d.labels(), K, sigma_floor);
    for (std::size_t k = 0; k < g.size(); ++k) stats.gaussian[k][c] = g[k];
  }
  return stats;
}

}  // namespace fwmnbm
