#pragma once

// Statistical checks behind two facts the estimator relies on:
//  * clipping a standard bivariate normal pair with correlation rho at its
//    mean yields binary variables with correlation (2/pi) asin(rho);
//  * the conditional-factorized joint estimate of two binary columns equals
//    the plain contingency-table frequencies.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "fwmnbm/clipping.hpp"
#include "fwmnbm/error.hpp"
#include "fwmnbm/estimation.hpp"
#include "fwmnbm/random.hpp"

namespace fwmnbm {

struct ArcsineCheckResult {
  double rho = 0.0;
  double empirical_binary_corr = 0.0;
  double predicted = 0.0;
  double abs_error = 0.0;
  std::size_t sample_size = 0;
};

inline double arcsine_prediction(double rho) { return 2.0 / std::numbers::pi * std::asin(rho); }

inline double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) throw Error(ErrorKind::LengthMismatch, "pearson needs equal nonempty inputs");
  const double n = static_cast<double>(a.size());
  double ma = 0.0;
  double mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  return sab / std::sqrt(saa * sbb);
}

inline ArcsineCheckResult arcsine_check(double rho, std::size_t n, std::uint64_t seed) {
  if (!(std::abs(rho) < 1.0)) throw Error(ErrorKind::InvalidRho, "rho must satisfy |rho| < 1, got " + format_double(rho));
  if (n < 1000) throw Error(ErrorKind::InvalidArgument, "arcsine check needs n >= 1000");
  Rng rng(seed);
  const double tail = std::sqrt(1.0 - rho * rho);
  std::vector<double> a(n);
  std::vector<double> b(n);
  double sum_a = 0.0;
  double sum_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z1 = rng.normal();
    const double z2 = rng.normal();
    a[i] = z1;
    b[i] = rho * z1 + tail * z2;
    sum_a += a[i];
    sum_b += b[i];
  }
  const auto bin_a = clip_column(a, sum_a / static_cast<double>(n));
  const auto bin_b = clip_column(b, sum_b / static_cast<double>(n));

  ArcsineCheckResult r;
  r.rho = rho;
  r.sample_size = n;
  r.predicted = arcsine_prediction(rho);
  r.empirical_binary_corr = pearson(bin_a, bin_b);
  r.abs_error = std::abs(r.empirical_binary_corr - r.predicted);
  return r;
}

// Largest |joint estimate - count/n| over the four cells, before truncation.
inline double joint_oracle_error(std::span<const double> col_j, std::span<const double> col_jp) {
  if (col_j.size() != col_jp.size()) throw Error(ErrorKind::LengthMismatch, "binary columns differ in length");
  double ones_jp = 0.0;
  for (double x : col_jp) ones_jp += x;
  if (ones_jp == 0.0 || ones_jp == static_cast<double>(col_jp.size())) {
    throw Error(ErrorKind::DegenerateColumn, "second column is constant");
  }
  const auto joint = estimate_joint_conditional(col_j, col_jp);
  double counts[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
  for (std::size_t i = 0; i < col_j.size(); ++i) {
    counts[col_j[i] == 1.0 ? 1 : 0][col_jp[i] == 1.0 ? 1 : 0] += 1.0;
  }
  const double n = static_cast<double>(col_j.size());
  double worst = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) worst = std::max(worst, std::abs(joint.raw[a][b] - counts[a][b] / n));
  }
  return worst;
}

}  // namespace fwmnbm
