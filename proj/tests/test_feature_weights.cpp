#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "fwmnbm/feature_weights.hpp"
#include "fwmnbm/simgen.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace fwmnbm;

TEST(MutualInformation, IndependentColumnsGiveZero) {
  EXPECT_NEAR(pairwise_mi(std::vector<double>{1, 1, 0, 0}, std::vector<double>{1, 0, 1, 0}), 0.0, 1e-15);
  // Constant feature against a balanced label.
  EXPECT_NEAR(mi_feature_label(std::vector<double>{1, 1, 1, 1}, std::vector<int>{1, 2, 1, 2}, 2), 0.0, 1e-5);
}

TEST(MutualInformation, IdenticalColumnsApproachLn2) {
  const std::vector<double> x{1, 0, 1, 0};
  const double mi = pairwise_mi(x, x);
  EXPECT_NEAR(mi, std::log(2.0), 1e-4);
  EXPECT_LT(mi, std::log(2.0));
  EXPECT_NEAR(mi_feature_label(x, std::vector<int>{2, 1, 2, 1}, 2), std::log(2.0), 1e-4);
}

TEST(MutualInformation, FeatureUnrelatedToLabel) {
  EXPECT_NEAR(mi_feature_label(std::vector<double>{1, 0, 1, 0}, std::vector<int>{1, 1, 2, 2}, 2), 0.0, 1e-15);
}

TEST(MutualInformation, MatchesCountOracleOnFullTables) {
  std::mt19937_64 rng(21);
  int checked = 0;
  while (checked < 200) {
    const std::size_t n = 8 + rng() % 200;
    const auto a = oracle::random_binary(rng, n, 0.2 + 0.6 * static_cast<double>(rng() % 5) / 4.0);
    auto b = a;
    for (auto& v : b) {
      if (rng() % 3 == 0) v = 1.0 - v;
    }
    const auto c = oracle::contingency(a, b);
    if (c[0][0] == 0 || c[0][1] == 0 || c[1][0] == 0 || c[1][1] == 0) continue;
    const std::vector<std::vector<long>> counts{{static_cast<long>(c[0][0]), static_cast<long>(c[0][1])},
                                                {static_cast<long>(c[1][0]), static_cast<long>(c[1][1])}};
    EXPECT_NEAR(pairwise_mi(a, b), std::max(oracle::mi_from_counts(counts), 0.0), 1e-12);
    ++checked;
  }
}

TEST(MutualInformation, MatchesCountOracleAgainstThreeClassLabel) {
  std::mt19937_64 rng(22);
  int checked = 0;
  while (checked < 200) {
    const std::size_t n = 12 + rng() % 200;
    const auto x = oracle::random_binary(rng, n, 0.4);
    std::vector<int> y(n);
    std::vector<std::vector<long>> counts(2, std::vector<long>(3, 0));
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = 1 + static_cast<int>(rng() % 3);
      if (x[i] == 1.0 && rng() % 2) y[i] = 3;
      ++counts[static_cast<std::size_t>(x[i])][static_cast<std::size_t>(y[i] - 1)];
    }
    bool full = true;
    for (const auto& r : counts) full = full && std::all_of(r.begin(), r.end(), [](long c) { return c > 0; });
    if (!full) continue;
    EXPECT_NEAR(mi_feature_label(x, y, 3), std::max(oracle::mi_from_counts(counts), 0.0), 1e-12);
    ++checked;
  }
}

TEST(MutualInformation, SymmetricNonNegativeAndBounded) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng() % 50;
    const auto a = oracle::random_binary(rng, n, static_cast<double>(rng() % 11) / 10.0);
    const auto b = oracle::random_binary(rng, n, static_cast<double>(rng() % 11) / 10.0);
    const double ab = pairwise_mi(a, b);
    const double ba = pairwise_mi(b, a);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, std::log(2.0) + 1e-12);
    EXPECT_NEAR(ab, ba, 1e-12);
  }
}

TEST(MutualInformation, DimensionMismatch) {
  ContingencyTable t;
  t.rows = 2;
  t.cols = 2;
  t.joint = {0.25, 0.25, 0.5};
  t.row_marginal = {0.5, 0.5};
  t.col_marginal = {0.5, 0.5};
  EXPECT_EQ(kind_of([&] { mutual_information(t); }), ErrorKind::DimensionMismatch);
}

TEST(CorrelationIndex, Examples) {
  EXPECT_DOUBLE_EQ(correlation_index(0.5, std::vector<double>{0.2}), 0.3);
  EXPECT_DOUBLE_EQ(correlation_index(0.2, std::vector<double>{0.1, 0.3}), 0.0);
  EXPECT_DOUBLE_EQ(correlation_index(0.0, std::vector<double>{0.3, 0.3, 0.3}), -0.3);
  EXPECT_EQ(correlation_index(0.4, std::vector<double>{}), 0.4);
}

TEST(Transform, Examples) {
  const auto zero = transform_and_normalize(std::vector<double>{0.0, 0.0});
  EXPECT_DOUBLE_EQ(zero[0].raw_weight, 0.5);
  EXPECT_DOUBLE_EQ(zero[0].normalized_weight, 0.5);
  EXPECT_DOUBLE_EQ(zero[1].normalized_weight, 0.5);

  const auto single = transform_and_normalize(std::vector<double>{std::log(3.0)});
  EXPECT_NEAR(single[0].raw_weight, 0.25, 1e-15);
  EXPECT_DOUBLE_EQ(single[0].normalized_weight, 1.0);

  WeightConfig inc;
  inc.sign = SigmoidSign::Increasing;
  const auto pm = transform_and_normalize(std::vector<double>{1.0, -1.0}, inc);
  EXPECT_NEAR(pm[0].raw_weight, 0.7310585786, 1e-10);
  EXPECT_NEAR(pm[1].raw_weight, 0.2689414214, 1e-10);
  EXPECT_NEAR(pm[0].normalized_weight, 0.7310585786, 1e-10);
  EXPECT_NEAR(pm[1].normalized_weight, 0.2689414214, 1e-10);
}

TEST(Transform, EmptyRejected) {
  EXPECT_EQ(kind_of([] { transform_and_normalize(std::vector<double>{}); }), ErrorKind::DimensionMismatch);
}

TEST(Transform, MonotoneSumsToOneAndPermutes) {
  std::mt19937_64 rng(24);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (auto sign : {SigmoidSign::Decreasing, SigmoidSign::Increasing}) {
    const WeightConfig cfg{sign};
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> cis(1 + rng() % 12);
      for (auto& c : cis) c = normal(rng);
      const auto w = transform_and_normalize(cis, cfg);
      double total = 0.0;
      for (const auto& f : w) {
        EXPECT_GT(f.normalized_weight, 0.0);
        total += f.normalized_weight;
      }
      EXPECT_NEAR(total, 1.0, 1e-12);
      for (std::size_t a = 0; a < cis.size(); ++a) {
        for (std::size_t b = 0; b < cis.size(); ++b) {
          if (cis[a] < cis[b]) {
            if (sign == SigmoidSign::Decreasing) {
              EXPECT_GE(w[a].normalized_weight, w[b].normalized_weight);
            } else {
              EXPECT_LE(w[a].normalized_weight, w[b].normalized_weight);
            }
          }
        }
      }
      auto shuffled = cis;
      std::vector<std::size_t> idx(cis.size());
      std::iota(idx.begin(), idx.end(), std::size_t{0});
      std::shuffle(idx.begin(), idx.end(), rng);
      for (std::size_t j = 0; j < idx.size(); ++j) shuffled[j] = cis[idx[j]];
      const auto ws = transform_and_normalize(shuffled, cfg);
      for (std::size_t j = 0; j < idx.size(); ++j) {
        EXPECT_NEAR(ws[j].normalized_weight, w[idx[j]].normalized_weight, 1e-15);
      }
    }
  }
}

TEST(FeatureWeights, ReportOnSimulatedData) {
  const auto sim = generate(default_plan(42));
  const auto t = compute_thresholds(sim.train);
  const auto report = compute_feature_weights(sim.train, t);
  ASSERT_EQ(report.features.size(), 10u);
  double total = 0.0;
  for (std::size_t j = 0; j < 10; ++j) {
    const auto& f = report.features[j];
    EXPECT_EQ(f.name, "x" + std::to_string(j + 1));
    EXPECT_GE(f.mi_label, 0.0);
    EXPECT_GE(f.avg_pairwise_mi, 0.0);
    EXPECT_DOUBLE_EQ(f.ci, f.mi_label - f.avg_pairwise_mi);
    EXPECT_DOUBLE_EQ(f.raw_weight, 1.0 / (1.0 + std::exp(f.ci)));
    EXPECT_GT(f.normalized_weight, 0.0);
    total += f.normalized_weight;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  // Same input, same report, bit for bit.
  EXPECT_EQ(report, compute_feature_weights(sim.train, t));
}

TEST(FeatureWeights, SingleFeatureGetsFullWeight) {
  const Dataset d(DatasetSchema({{"t", VariableKind::TwoValued}}), {0, 1, 1, 0}, {1, 2, 2, 1});
  ClipThresholds none;
  none.column_count = 1;
  const auto report = compute_feature_weights(d, none);
  EXPECT_EQ(report.features[0].avg_pairwise_mi, 0.0);
  EXPECT_DOUBLE_EQ(report.features[0].normalized_weight, 1.0);
}
