#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fwmnbm/error.hpp"
#include "fwmnbm/schema.hpp"

namespace fwmnbm {

// FAR and FDR treat every class other than `normal_class` as fault. A rate
// whose denominator is empty is absent rather than zero.
struct EvaluationReport {
  int class_count = 0;
  std::vector<std::vector<std::size_t>> confusion;  // [true - 1][pred - 1]
  std::size_t total = 0;
  std::optional<double> far;
  std::optional<double> fdr;
  double accuracy = 0.0;
};

inline EvaluationReport evaluate(std::span<const int> predicted, std::span<const int> truth, int normal_class = 1,
                                 int class_count = 0) {
  if (predicted.size() != truth.size()) {
    throw Error(ErrorKind::LengthMismatch, "predicted and true label sequences differ in length");
  }
  if (truth.empty()) throw Error(ErrorKind::EmptyInput, "no labels to evaluate");
  int K = class_count;
  for (int y : truth) K = std::max(K, y);
  for (int y : predicted) K = std::max(K, y);
  if (normal_class < 1 || normal_class > K) {
    throw Error(ErrorKind::InvalidArgument, "normal class " + std::to_string(normal_class) + " outside 1.." +
                                                std::to_string(K));
  }

  EvaluationReport r;
  r.class_count = K;
  r.total = truth.size();
  r.confusion.assign(static_cast<std::size_t>(K), std::vector<std::size_t>(static_cast<std::size_t>(K), 0));
  std::size_t normals = 0;
  std::size_t false_alarms = 0;
  std::size_t faults = 0;
  std::size_t detected = 0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const int t = truth[i];
    const int p = predicted[i];
    if (t < 1 || p < 1) throw Error(ErrorKind::UnknownLabel, "labels must be >= 1");
    ++r.confusion[static_cast<std::size_t>(t - 1)][static_cast<std::size_t>(p - 1)];
    if (t == p) ++correct;
    if (t == normal_class) {
      ++normals;
      if (p != normal_class) ++false_alarms;
    } else {
      ++faults;
      if (p != normal_class) ++detected;
    }
  }
  if (normals > 0) r.far = static_cast<double>(false_alarms) / static_cast<double>(normals);
  if (faults > 0) r.fdr = static_cast<double>(detected) / static_cast<double>(faults);
  r.accuracy = static_cast<double>(correct) / static_cast<double>(truth.size());
  return r;
}

// "FAR=<far> FDR=<fdr> ACC=<acc>", absent rates left empty.
inline std::string summary_line(const EvaluationReport& r) {
  auto fmt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  return "FAR=" + fmt(r.far) + " FDR=" + fmt(r.fdr) + " ACC=" + format_double(r.accuracy);
}

}  // namespace fwmnbm
