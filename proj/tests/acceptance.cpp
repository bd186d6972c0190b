// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "fwmnbm/fwmnbm.hpp"
#include "oracles.hpp"

using namespace fwmnbm;
namespace fs = std::filesystem;

namespace {

// Accuracy of FWMNBM on the seed-42 benchmark, recorded from the first
// verified run.
constexpr double kPinnedCanonicalAccuracy = 0.994;
constexpr double kPinnedTolerance = 0.005;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

double accuracy(const std::vector<int>& pred, const Dataset& d) {
  return evaluate(pred, d.labels()).accuracy;
}

// Small random mixed dataset; every class gets at least two rows.
Dataset random_dataset(std::mt19937_64& rng, bool allow_constant) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t p = 1 + rng() % 8;
  const int K = 2 + static_cast<int>(rng() % 3);
  std::vector<VariableSpec> vars;
  for (std::size_t j = 0; j < p; ++j) {
    vars.push_back({"v" + std::to_string(j), rng() % 2 ? VariableKind::TwoValued : VariableKind::Continuous});
  }
  const std::size_t n = static_cast<std::size_t>(2 * K) + rng() % 60;
  std::vector<double> values;
  std::vector<int> labels;
  std::vector<double> shift(static_cast<std::size_t>(K));
  for (auto& s : shift) s = normal(rng) * 2.0;
  for (std::size_t i = 0; i < n; ++i) {
    const int k = i < static_cast<std::size_t>(2 * K) ? static_cast<int>(i) % K + 1
                                                      : 1 + static_cast<int>(rng() % static_cast<unsigned>(K));
    labels.push_back(k);
    for (std::size_t j = 0; j < p; ++j) {
      const bool constant = allow_constant && j == 0;
      if (vars[j].kind == VariableKind::TwoValued) {
        values.push_back(constant ? 1.0 : static_cast<double>(rng() % 4 < static_cast<unsigned>(k)));
      } else {
        values.push_back(constant ? 3.0 : shift[static_cast<std::size_t>(k - 1)] + normal(rng));
      }
    }
  }
  return Dataset(DatasetSchema(vars), std::move(values), std::move(labels));
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run(const std::string& cmd) { return std::system((cmd + " > /dev/null").c_str()); }

Outcome joint_equivalence() {
  const auto start = Clock::now();
  std::mt19937_64 rng(1001);
  double worst = 0.0;
  int pairs = 0;
  while (pairs < 100) {
    const std::size_t n = 2 + rng() % 49;
    const auto a = oracle::random_binary(rng, n, 0.1 + 0.8 * static_cast<double>(rng() % 9) / 8.0);
    const auto b = oracle::random_binary(rng, n, 0.1 + 0.8 * static_cast<double>(rng() % 9) / 8.0);
    const double ones = std::accumulate(b.begin(), b.end(), 0.0);
    if (ones == 0.0 || ones == static_cast<double>(n)) continue;
    worst = std::max(worst, joint_oracle_error(a, b));
    ++pairs;
  }
  const double t = seconds_since(start);
  std::ostringstream s;
  s << "max error " << worst << " over 100 pairs, " << t << " s";
  return {worst <= 1e-12 && t < 1.0, s.str()};
}

Outcome arcsine_law() {
  const auto start = Clock::now();
  bool ok = std::abs(arcsine_prediction(0.5) - 1.0 / 3.0) < 1e-15;
  double worst = 0.0;
  for (double rho : {-0.9, -0.5, 0.0, 0.5, 0.9}) {
    const auto r = arcsine_check(rho, 200000, 2024);
    worst = std::max(worst, r.abs_error);
    ok = ok && r.abs_error < 0.02;
  }
  const double t = seconds_since(start);
  std::ostringstream s;
  s << "max |empirical - predicted| " << worst << ", prediction(0.5) = " << format_double(arcsine_prediction(0.5))
    << ", " << t << " s";
  return {ok && t < 5.0, s.str()};
}

Outcome linear_form() {
  std::mt19937_64 rng(3003);
  std::normal_distribution<double> normal(0.0, 3.0);
  double worst = 0.0;
  int pairs = 0;
  while (pairs < 1000) {
    const auto d = random_dataset(rng, false);
    const auto m = train_fwmnbm(d);
    for (int r = 0; r < 10; ++r, ++pairs) {
      std::vector<double> row(d.cols());
      for (std::size_t j = 0; j < d.cols(); ++j) {
        row[j] = d.schema().variable(j).kind == VariableKind::TwoValued ? static_cast<double>(rng() % 2) : normal(rng);
      }
      const auto linear = class_scores(m, row);
      const auto direct = direct_log_numerator(m, row);
      for (std::size_t k = 0; k < linear.size(); ++k) worst = std::max(worst, std::abs(linear[k] - direct[k]));
    }
  }
  std::ostringstream s;
  s << "max |linear - direct| " << worst << " over " << pairs << " pairs";
  return {worst < 1e-9, s.str()};
}

Outcome probability_hygiene() {
  std::vector<std::string> problems;
  auto check_model = [&](const FwmnbmModel& m, const Dataset& rows, const std::string& tag) {
    const double xi = m.config.truncation.xi;
    auto in_band = [&](double p) { return p >= xi && p <= 1.0 - xi; };
    double prior_sum = 0.0;
    for (double p : m.stats.priors) {
      if (!in_band(p)) problems.push_back(tag + ": prior out of band");
      prior_sum += p;
    }
    if (std::abs(prior_sum - 1.0) > 1e-9) problems.push_back(tag + ": priors sum " + format_double(prior_sum));
    for (const auto& row : m.stats.theta) {
      for (double t : row) {
        if (!in_band(t)) problems.push_back(tag + ": theta out of band");
      }
    }
    double weight_sum = 0.0;
    for (double w : m.weight_vector) {
      if (!(w > 0.0)) problems.push_back(tag + ": non-positive weight");
      weight_sum += w;
    }
    if (std::abs(weight_sum - 1.0) > 1e-9) problems.push_back(tag + ": weights sum " + format_double(weight_sum));
    for (std::size_t i = 0; i < rows.rows(); ++i) {
      const auto post = posterior(m, rows.row(i));
      const double total = std::accumulate(post.begin(), post.end(), 0.0);
      if (std::abs(total - 1.0) > 1e-9) {
        problems.push_back(tag + ": posterior sum " + format_double(total));
        break;
      }
    }
    // Truncated joint tables used for the weights.
    const auto cols = binary_view(rows, m.thresholds);
    for (std::size_t a = 0; a + 1 < cols.size(); ++a) {
      const auto joint = estimate_joint_conditional(cols[a], cols[a + 1], m.config.truncation);
      for (const auto& r : joint.truncated) {
        if (!in_band(r[0]) || !in_band(r[1])) problems.push_back(tag + ": joint cell out of band");
      }
    }
  };

  const auto sim = generate(default_plan(42));
  const auto canonical = train_fwmnbm(sim.train);
  check_model(canonical, sim.test, "simulation");

  std::mt19937_64 rng(4004);
  for (int trial = 0; trial < 200; ++trial) {
    const auto d = random_dataset(rng, trial % 2 == 0);
    ModelConfig cfg;
    if (trial % 3 == 0) cfg.truncation.mode = TruncationMode::LiteralComplement;
    if (trial % 5 == 0) cfg.weighting.sign = SigmoidSign::Increasing;
    check_model(train_fwmnbm(d, cfg), d, "random#" + std::to_string(trial));
  }
  if (problems.empty()) return {true, "simulation model and 200 random models clean"};
  return {false, problems.front() + " (" + std::to_string(problems.size()) + " problems)"};
}

Outcome simulation_study() {
  std::ostringstream s;
  bool ok = true;
  int wins = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto sim = generate(default_plan(seed));
    const double fw = accuracy(predict_all(train_fwmnbm(sim.train), sim.test), sim.test);
    const double g = accuracy(predict_baseline_all(train_gnbm(sim.train), sim.test), sim.test);
    const double b = accuracy(predict_baseline_all(train_bnbm(sim.train), sim.test), sim.test);
    if (fw >= g && fw >= b) {
      ++wins;
    } else {
      ok = false;
      s << "seed " << seed << " FWMNBM " << fw << " GNBM " << g << " BNBM " << b << "; ";
    }
  }
  const auto canon = generate(default_plan(42));
  const double acc = accuracy(predict_all(train_fwmnbm(canon.train), canon.test), canon.test);
  const bool pinned = std::abs(acc - kPinnedCanonicalAccuracy) <= kPinnedTolerance;
  s << "FWMNBM best on " << wins << "/10 seeds, seed 42 accuracy " << format_double(acc) << " (pinned "
    << kPinnedCanonicalAccuracy << " +/- 0.005)";
  return {ok && pinned, s.str()};
}

Outcome estimator_oracles() {
  std::mt19937_64 rng(6006);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst_gauss = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double scale = std::pow(10.0, static_cast<double>(rng() % 7) - 3.0);
    const double shift = normal(rng) * 50.0;
    std::vector<double> xs;
    std::vector<int> ys;
    std::vector<std::vector<double>> per_class(2);
    for (int i = 0; i < 200; ++i) {
      const int k = 1 + i % 2;
      const double x = shift + scale * normal(rng);
      xs.push_back(x);
      ys.push_back(k);
      per_class[static_cast<std::size_t>(k - 1)].push_back(x);
    }
    const auto g = estimate_gaussian(xs, ys, 2);
    for (int k = 0; k < 2; ++k) {
      const auto ref = oracle::two_pass(per_class[static_cast<std::size_t>(k)]);
      worst_gauss = std::max(worst_gauss, std::abs(g[k].mu - ref.mean) / std::max(std::abs(ref.mean), scale));
      worst_gauss = std::max(worst_gauss, std::abs(g[k].sigma - ref.stddev) / ref.stddev);
    }
  }

  double worst_mi = 0.0;
  int tables = 0;
  while (tables < 200) {
    const std::size_t n = 12 + rng() % 200;
    const auto x = oracle::random_binary(rng, n, 0.45);
    std::vector<double> z(n);
    std::vector<int> y(n);
    const int K = tables % 2 == 0 ? 2 : 3;
    std::vector<std::vector<long>> c22(2, std::vector<long>(2, 0));
    std::vector<std::vector<long>> c2k(2, std::vector<long>(static_cast<std::size_t>(K), 0));
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = rng() % 3 == 0 ? 1.0 - x[i] : x[i];
      y[i] = x[i] == 1.0 && rng() % 2 ? K : 1 + static_cast<int>(rng() % static_cast<unsigned>(K));
      ++c22[static_cast<std::size_t>(x[i])][static_cast<std::size_t>(z[i])];
      ++c2k[static_cast<std::size_t>(x[i])][static_cast<std::size_t>(y[i] - 1)];
    }
    auto full = [](const std::vector<std::vector<long>>& c) {
      for (const auto& r : c) {
        for (long v : r) {
          if (v == 0) return false;
        }
      }
      return true;
    };
    if (!full(c22) || !full(c2k)) continue;
    worst_mi = std::max(worst_mi, std::abs(pairwise_mi(x, z) - std::max(0.0, oracle::mi_from_counts(c22))));
    worst_mi = std::max(worst_mi, std::abs(mi_feature_label(x, y, K) - std::max(0.0, oracle::mi_from_counts(c2k))));
    ++tables;
  }
  std::ostringstream s;
  s << "gaussian max rel error " << worst_gauss << ", MI max error " << worst_mi << " (2x2 and 2x3)";
  return {worst_gauss <= 1e-12 && worst_mi <= 1e-12, s.str()};
}

Outcome determinism_and_persistence(const fs::path& work) {
  std::ostringstream s;
  bool ok = true;
  const std::string cli = FWMNBM_CLI_PATH;
  const auto a = work / "det_a";
  const auto b = work / "det_b";
  ok = run(cli + " simulate --seed 42 --out-dir " + a.string()) == 0 &&
       run(cli + " simulate --seed 42 --out-dir " + b.string()) == 0;
  const bool same_csv = ok && read_file(a / "train.csv") == read_file(b / "train.csv") &&
                        read_file(a / "test.csv") == read_file(b / "test.csv") &&
                        !read_file(a / "train.csv").empty();
  s << (same_csv ? "simulated CSVs byte-identical" : "simulated CSVs differ");

  const auto sim = generate(default_plan(42));
  const auto model = train_fwmnbm(sim.train);
  const auto path = work / "persist.json";
  save_model(model, path.string());
  const auto loaded = load_model(path.string());
  std::size_t differing = 0;
  for (std::size_t i = 0; i < sim.test.rows(); ++i) {
    if (class_scores(model, sim.test.row(i)) != class_scores(loaded, sim.test.row(i))) ++differing;
  }
  const bool same_pred = predict_all(model, sim.test) == predict_all(loaded, sim.test) && differing == 0;
  s << ", reloaded model differs on " << differing << "/" << sim.test.rows() << " test rows";
  return {same_csv && same_pred, s.str()};
}

Outcome cli_smoke(const fs::path& work) {
  const std::string cli = FWMNBM_CLI_PATH;
  const auto dir = work / "e2e";
  const auto start = Clock::now();
  const int rc1 = run(cli + " simulate --seed 42 --out-dir " + dir.string());
  const int rc2 = run(cli + " train --data " + (dir / "train.csv").string() + " --schema " +
                      (dir / "schema.csv").string() + " --out " + (dir / "model.json").string());
  const auto summary = dir / "summary.txt";
  const int rc3 = std::system((cli + " evaluate --model " + (dir / "model.json").string() + " --data " +
                               (dir / "test.csv").string() + " > " + summary.string())
                                  .c_str());
  const double t = seconds_since(start);
  std::string line = read_file(summary);
  while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.pop_back();
  const bool shaped = line.rfind("FAR=", 0) == 0 && line.find(" FDR=") != std::string::npos &&
                      line.find(" ACC=") != std::string::npos;
  std::ostringstream s;
  s << "exit codes " << rc1 << "/" << rc2 << "/" << rc3 << ", '" << line << "', " << t << " s";
  return {rc1 == 0 && rc2 == 0 && rc3 == 0 && shaped && t < 30.0, s.str()};
}

}  // namespace

int main() {
  const fs::path work = fs::temp_directory_path() / ("fwmnbm_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(work);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"joint estimate matches contingency counts", joint_equivalence},
      {"arcsine law for clipped Gaussian pairs", arcsine_law},
      {"linear score form equals direct log numerator", linear_form},
      {"probability hygiene", probability_hygiene},
      {"simulation study ranking and pinned accuracy", simulation_study},
      {"estimator oracles", estimator_oracles},
      {"determinism and persistence", [&] { return determinism_and_persistence(work); }},
      {"end-to-end CLI", [&] { return cli_smoke(work); }},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %zu %s: %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str());
    failed += o.pass ? 0 : 1;
  }
  std::fflush(stdout);
  fs::remove_all(work);
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
