#pragma once

// Synthetic mixed-variable benchmark: five Gaussian variables and five
// two-valued variables under four operating conditions. normal1/fault1 form
// the training set and normal2/fault2 the test set (labels 1 = normal,
// 2 = fault).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "fwmnbm/error.hpp"
#include "fwmnbm/random.hpp"
#include "fwmnbm/schema.hpp"

namespace fwmnbm {

struct GaussianSpec {
  double mean = 0.0;
  double stddev = 1.0;
};

struct TwoValuedSpec {
  int base_value = 0;          // value before flipping
  double flip_fraction = 0.0;  // share of rows switched to the other value
};

struct ConditionSpec {
  std::string name;
  std::vector<GaussianSpec> continuous;
  std::vector<TwoValuedSpec> two_valued;
};

enum class Condition : std::size_t { Normal1 = 0, Fault1 = 1, Normal2 = 2, Fault2 = 3 };

struct SimulationPlan {
  std::vector<ConditionSpec> conditions;  // indexed by Condition
  std::size_t samples_per_condition = 1500;
  std::uint64_t seed = 42;

  const ConditionSpec& at(Condition c) const { return conditions.at(static_cast<std::size_t>(c)); }

  void validate() const {
    if (conditions.size() != 4) throw Error(ErrorKind::InvalidArgument, "a plan needs exactly four conditions");
    if (samples_per_condition < 1) throw Error(ErrorKind::InvalidArgument, "samples_per_condition must be >= 1");
    for (const auto& c : conditions) {
      if (c.continuous.size() != conditions[0].continuous.size() ||
          c.two_valued.size() != conditions[0].two_valued.size()) {
        throw Error(ErrorKind::InvalidArgument, "conditions disagree on variable counts");
      }
      for (const auto& g : c.continuous) {
        if (!(g.stddev > 0.0) || !std::isfinite(g.mean)) {
          throw Error(ErrorKind::InvalidArgument, "condition '" + c.name + "' has a non-positive std");
        }
      }
      for (const auto& t : c.two_valued) {
        if ((t.base_value != 0 && t.base_value != 1) || !(t.flip_fraction >= 0.0 && t.flip_fraction <= 1.0)) {
          throw Error(ErrorKind::InvalidArgument, "condition '" + c.name + "' has an invalid two-valued spec");
        }
      }
    }
  }
};

inline SimulationPlan default_plan(std::uint64_t seed = 42) {
  // Means and stds for x1..x5 per condition.
  const double means[4][5] = {{0.00, 0.00, 0.00, 0.00, 0.00},
                              {3.50, 4.50, 3.20, 2.20, 0.80},
                              {0.32, 0.28, 0.24, 0.01, 0.00},
                              {3.25, 4.40, 3.12, 2.15, 0.80}};
  const double stds[4][5] = {{1.50, 1.60, 0.80, 2.00, 1.40},
                             {1.00, 2.50, 1.70, 1.80, 2.70},
                             {1.49, 1.56, 0.88, 2.00, 1.40},
                             {1.25, 2.55, 1.73, 1.75, 2.70}};
  // x6..x10: base value under normal / fault, shared flip share.
  const int normal_base[5] = {0, 1, 0, 0, 1};
  const double flip[5] = {0.30, 0.25, 0.20, 0.15, 0.10};
  const char* names[4] = {"normal1", "fault1", "normal2", "fault2"};

  SimulationPlan plan;
  plan.seed = seed;
  plan.samples_per_condition = 1500;
  for (std::size_t c = 0; c < 4; ++c) {
    ConditionSpec spec;
    spec.name = names[c];
    const bool fault = c % 2 == 1;
    for (std::size_t j = 0; j < 5; ++j) spec.continuous.push_back({means[c][j], stds[c][j]});
    for (std::size_t j = 0; j < 5; ++j) {
      spec.two_valued.push_back({fault ? 1 - normal_base[j] : normal_base[j], flip[j]});
    }
    plan.conditions.push_back(std::move(spec));
  }
  return plan;
}

inline DatasetSchema simulation_schema(std::size_t continuous, std::size_t two_valued) {
  std::vector<VariableSpec> vars;
  for (std::size_t j = 0; j < continuous + two_valued; ++j) {
    vars.push_back({"x" + std::to_string(j + 1), j < continuous ? VariableKind::Continuous : VariableKind::TwoValued});
  }
  return DatasetSchema(std::move(vars), "label");
}

// Exact flip count for a share of n rows.
inline std::size_t flip_count(double fraction, std::size_t n) {
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
}

struct SimulatedData {
  Dataset train;
  Dataset test;
};

namespace detail {

// Appends n rows for one condition to `values` (row-major).
inline void generate_condition(const ConditionSpec& spec, std::size_t n, Rng& rng, std::vector<double>& values) {
  const std::size_t p1 = spec.continuous.size();
  const std::size_t p = p1 + spec.two_valued.size();
  const std::size_t offset = values.size();
  values.resize(offset + n * p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p1; ++j) {
      values[offset + i * p + j] = rng.normal(spec.continuous[j].mean, spec.continuous[j].stddev);
    }
  }
  std::vector<std::size_t> order(n);
  for (std::size_t t = 0; t < spec.two_valued.size(); ++t) {
    const auto& tv = spec.two_valued[t];
    const std::size_t col = p1 + t;
    for (std::size_t i = 0; i < n; ++i) values[offset + i * p + col] = tv.base_value;
    // Partial Fisher-Yates: the first `flips` entries are a uniform subset.
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t flips = flip_count(tv.flip_fraction, n);
    for (std::size_t i = 0; i < flips; ++i) {
      const std::size_t pick = i + static_cast<std::size_t>(rng.below(n - i));
      std::swap(order[i], order[pick]);
      values[offset + order[i] * p + col] = 1.0 - tv.base_value;
    }
  }
}

}  // namespace detail

inline SimulatedData generate(const SimulationPlan& plan) {
  plan.validate();
  Rng rng(plan.seed);
  const std::size_t n = plan.samples_per_condition;
  const auto schema = simulation_schema(plan.conditions[0].continuous.size(), plan.conditions[0].two_valued.size());
  const LabelMapping mapping({"1", "2"});

  auto build = [&](Condition normal, Condition fault) {
    std::vector<double> values;
    detail::generate_condition(plan.at(normal), n, rng, values);
    detail::generate_condition(plan.at(fault), n, rng, values);
    std::vector<int> labels(2 * n, 1);
    std::fill(labels.begin() + static_cast<std::ptrdiff_t>(n), labels.end(), 2);
    return Dataset(schema, std::move(values), std::move(labels), mapping);
  };
  Dataset train = build(Condition::Normal1, Condition::Fault1);
  Dataset test = build(Condition::Normal2, Condition::Fault2);
  return {std::move(train), std::move(test)};
}

inline std::string simulation_comment(const SimulationPlan& plan) {
  return "seed=" + std::to_string(plan.seed) + " generator=" + std::string(Rng::kName);
}

}  // namespace fwmnbm
