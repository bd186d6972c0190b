// fwmnbm command-line tool: simulate, train, predict, evaluate,
// inspect-weights, verify, compare.
//
// Exit codes: 0 ok, 1 usage, 2 data, 3 model, 4 io, 5 verification failed.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fwmnbm/fwmnbm.hpp"

namespace {

using namespace fwmnbm;

constexpr int kVerifyFailed = 5;

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot open '" + path + "'");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot open '" + path + "' for writing");
  return out;
}

void finish(std::ostream& out, const std::string& path) {
  out.flush();
  if (!out) throw Error(ErrorKind::IoFailure, "failed writing '" + path + "'");
}

struct DataOptions {
  std::string data;
  std::string schema;
  std::string label = "label";
  bool infer_kinds = false;
};

void add_data_options(CLI::App* cmd, DataOptions& o, const char* data_help) {
  cmd->add_option("--data", o.data, data_help)->required();
  cmd->add_option("--schema", o.schema, "Sidecar schema file with one 'name,kind' line per variable");
  cmd->add_option("--label", o.label, "Label column name when the schema file does not name one");
  cmd->add_flag("--infer-kinds", o.infer_kinds, "Treat columns holding only 0/1 as two-valued");
}

DatasetSchema load_schema(const DataOptions& o) {
  if (!o.schema.empty()) {
    auto in = open_in(o.schema);
    return parse_schema_file(in, o.label);
  }
  if (o.infer_kinds) {
    auto in = open_in(o.data);
    return infer_schema(in, o.label);
  }
  throw Error(ErrorKind::InvalidArgument, "either --schema or --infer-kinds is required");
}

Dataset load_dataset(const std::string& path, const DatasetSchema& schema, const CsvOptions& opts = {}) {
  auto in = open_in(path);
  return parse_csv(in, schema, opts);
}

struct ModelOptions {
  double xi = kDefaultXi;
  std::string truncation = "clamp-all";
  std::string sigmoid = "literal";

  ModelConfig config() const {
    ModelConfig cfg;
    cfg.truncation.xi = xi;
    cfg.truncation.mode = parse_truncation_mode(truncation);
    cfg.weighting.sign = parse_sigmoid_sign(sigmoid);
    cfg.validate();
    return cfg;
  }
};

void add_model_options(CLI::App* cmd, ModelOptions& o) {
  cmd->add_option("--xi", o.xi, "Probability truncation floor, in (0, 0.5)")->capture_default_str();
  cmd->add_option("--truncation", o.truncation, "clamp-all | literal")
      ->check(CLI::IsMember({"clamp-all", "literal"}))
      ->capture_default_str();
  cmd->add_option("--sigmoid", o.sigmoid, "literal | increasing")
      ->check(CLI::IsMember({"literal", "increasing"}))
      ->capture_default_str();
}

int resolve_normal_class(const LabelMapping& mapping, const std::string& token) {
  const auto k = mapping.find(token);
  if (!k) throw Error(ErrorKind::InvalidArgument, "normal class '" + token + "' is not a known label");
  return *k;
}

int cmd_simulate(std::uint64_t seed, const std::string& out_dir, std::size_t samples) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorKind::IoFailure, "cannot create '" + out_dir + "': " + ec.message());
  auto plan = default_plan(seed);
  if (samples > 0) plan.samples_per_condition = samples;
  const auto data = generate(plan);
  const auto comment = simulation_comment(plan);
  const auto dir = std::filesystem::path(out_dir);
  for (const auto& [name, d] : {std::pair{"train.csv", &data.train}, std::pair{"test.csv", &data.test}}) {
    const auto path = (dir / name).string();
    auto out = open_out(path);
    write_csv(out, *d, comment);
    finish(out, path);
  }
  const auto schema_path = (dir / "schema.csv").string();
  auto out = open_out(schema_path);
  write_schema_file(out, data.train.schema());
  finish(out, schema_path);
  std::cout << "wrote " << data.train.rows() << " training rows and " << data.test.rows() << " test rows to "
            << out_dir << " (" << comment << ")\n";
  return 0;
}

int cmd_train(const DataOptions& data, const ModelOptions& model, const std::string& out_path) {
  const auto cfg = model.config();
  const auto schema = load_schema(data);
  const auto d = load_dataset(data.data, schema);
  const auto m = train_fwmnbm(d, cfg);
  save_model(m, out_path);
  std::cout << "trained on " << d.rows() << " rows, " << d.cols() << " features, " << m.class_count
            << " classes -> " << out_path << '\n';
  return 0;
}

int cmd_predict(const std::string& model_path, const std::string& data_path, const std::string& out_path) {
  const auto m = load_model(model_path);
  CsvOptions opts;
  opts.mapping = &m.label_mapping;
  opts.require_labels = false;
  const auto d = load_dataset(data_path, m.schema, opts);

  std::ofstream file;
  if (!out_path.empty()) file = open_out(out_path);
  std::ostream& out = out_path.empty() ? std::cout : file;
  out << "row_index,predicted_label";
  for (int k = 1; k <= m.class_count; ++k) out << ",posterior_" << k;
  out << '\n';
  for (std::size_t i = 0; i < d.rows(); ++i) {
    const auto scores = class_scores(m, d.row(i));
    const auto post = detail::softmax(scores);
    out << i << ',' << m.label_mapping.token(detail::argmax_label(scores));
    for (double p : post) out << ',' << format_double(p);
    out << '\n';
  }
  finish(out, out_path.empty() ? "<stdout>" : out_path);
  return 0;
}

int cmd_evaluate(const std::string& model_path, const std::string& data_path, const std::string& normal,
                 const std::string& per_row) {
  const auto m = load_model(model_path);
  CsvOptions opts;
  opts.mapping = &m.label_mapping;
  const auto d = load_dataset(data_path, m.schema, opts);
  const int normal_class = resolve_normal_class(m.label_mapping, normal);
  const auto predicted = predict_all(m, d);
  const auto report = evaluate(predicted, d.labels(), normal_class, m.class_count);
  if (!per_row.empty()) {
    auto out = open_out(per_row);
    out << "index,true,pred\n";
    for (std::size_t i = 0; i < d.rows(); ++i) {
      out << i << ',' << m.label_mapping.token(d.labels()[i]) << ',' << m.label_mapping.token(predicted[i]) << '\n';
    }
    finish(out, per_row);
  }
  std::cout << summary_line(report) << '\n';
  return 0;
}

int cmd_inspect_weights(const std::string& model_path, const std::string& out_path) {
  const auto m = load_model(model_path);
  std::ofstream file;
  if (!out_path.empty()) file = open_out(out_path);
  std::ostream& out = out_path.empty() ? std::cout : file;
  out << "feature,mi_label,avg_pairwise_mi,ci,raw,normalized\n";
  for (const auto& f : m.weights.features) {
    out << f.name << ',' << format_double(f.mi_label) << ',' << format_double(f.avg_pairwise_mi) << ','
        << format_double(f.ci) << ',' << format_double(f.raw_weight) << ',' << format_double(f.normalized_weight)
        << '\n';
  }
  finish(out, out_path.empty() ? "<stdout>" : out_path);
  return 0;
}

int cmd_verify(std::uint64_t seed) {
  bool ok = true;
  std::cout << std::left << std::setw(10) << "check" << std::setw(10) << "param" << std::setw(16) << "observed"
            << std::setw(16) << "expected" << std::setw(10) << "tol" << "status\n";
  auto row = [&](const std::string& check, const std::string& param, double observed, double expected, double tol,
                 bool pass) {
    ok = ok && pass;
    std::cout << std::setw(10) << check << std::setw(10) << param << std::setw(16) << observed << std::setw(16)
              << expected << std::setw(10) << tol << (pass ? "PASS" : "FAIL") << '\n';
  };
  std::uint64_t s = seed;
  for (double rho : {-0.9, -0.5, 0.0, 0.5, 0.9}) {
    const auto r = arcsine_check(rho, 200000, s++);
    std::ostringstream p;
    p << rho;
    row("arcsine", p.str(), r.empirical_binary_corr, r.predicted, 0.02, r.abs_error < 0.02);
  }
  Rng rng(seed);
  double worst = 0.0;
  int pairs = 0;
  while (pairs < 100) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.below(49));
    std::vector<double> a(n);
    std::vector<double> b(n);
    double ones = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = static_cast<double>(rng.below(2));
      b[i] = static_cast<double>(rng.below(2));
      ones += b[i];
    }
    if (ones == 0.0 || ones == static_cast<double>(n)) continue;
    worst = std::max(worst, joint_oracle_error(a, b));
    ++pairs;
  }
  row("joint", "100 pairs", worst, 0.0, 1e-12, worst <= 1e-12);
  return ok ? 0 : kVerifyFailed;
}

int cmd_compare(const DataOptions& data, const ModelOptions& model, const std::string& test_path,
                const std::string& normal) {
  const auto cfg = model.config();
  const auto schema = load_schema(data);
  const auto train = load_dataset(data.data, schema);
  CsvOptions opts;
  opts.mapping = &train.label_mapping();
  const auto test = load_dataset(test_path, schema, opts);
  const int normal_class = resolve_normal_class(train.label_mapping(), normal);
  const int K = train.class_count();

  const auto m = train_fwmnbm(train, cfg);
  std::cout << "FWMNBM " << summary_line(evaluate(predict_all(m, test), test.labels(), normal_class, K)) << '\n';
  const auto parts = split_by_kind(train);
  if (!parts.continuous.empty()) {
    const auto g = train_gnbm(train, cfg);
    std::cout << "GNBM " << summary_line(evaluate(predict_baseline_all(g, test), test.labels(), normal_class, K))
              << '\n';
  }
  if (!parts.two_valued.empty()) {
    const auto b = train_bnbm(train, cfg);
    std::cout << "BNBM " << summary_line(evaluate(predict_baseline_all(b, test), test.labels(), normal_class, K))
              << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feature-weighted mixed naive Bayes for anomaly monitoring"};
  app.require_subcommand(1);

  std::uint64_t seed = 42;
  std::string out_dir;
  std::size_t samples = 0;
  auto* simulate = app.add_subcommand("simulate", "Write the synthetic benchmark as train.csv/test.csv/schema.csv");
  simulate->add_option("--seed", seed, "Generator seed")->capture_default_str();
  simulate->add_option("--out-dir", out_dir, "Output directory")->required();
  simulate->add_option("--samples", samples, "Rows per condition (default 1500)");

  DataOptions data;
  ModelOptions model;
  std::string model_path;
  std::string out_path;
  auto* train = app.add_subcommand("train", "Train a model from a labeled CSV");
  add_data_options(train, data, "Labeled training CSV");
  add_model_options(train, model);
  train->add_option("--out", out_path, "Model JSON path")->required();

  std::string data_path;
  auto* predict_cmd = app.add_subcommand("predict", "Label rows of a CSV with a trained model");
  predict_cmd->add_option("--model", model_path, "Model JSON")->required();
  predict_cmd->add_option("--data", data_path, "CSV to score")->required();
  predict_cmd->add_option("--out", out_path, "Predictions CSV (default stdout)");

  std::string normal = "1";
  std::string per_row;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Report FAR, FDR and accuracy on labeled data");
  evaluate_cmd->add_option("--model", model_path, "Model JSON")->required();
  evaluate_cmd->add_option("--data", data_path, "Labeled CSV")->required();
  evaluate_cmd->add_option("--normal-class", normal, "Label token of the normal class")->capture_default_str();
  evaluate_cmd->add_option("--per-row", per_row, "Write index,true,pred CSV here");

  auto* inspect = app.add_subcommand("inspect-weights", "Print the feature weight report as CSV");
  inspect->add_option("--model", model_path, "Model JSON")->required();
  inspect->add_option("--out", out_path, "Output CSV (default stdout)");

  auto* verify = app.add_subcommand("verify", "Run the clipping-correlation and joint-estimator checks");
  verify->add_option("--seed", seed, "Seed for the Monte-Carlo draws")->capture_default_str();

  std::string test_path;
  auto* compare = app.add_subcommand("compare", "Train FWMNBM, GNBM and BNBM and evaluate each on a test CSV");
  add_data_options(compare, data, "Labeled training CSV");
  add_model_options(compare, model);
  compare->add_option("--test", test_path, "Labeled test CSV")->required();
  compare->add_option("--normal-class", normal, "Label token of the normal class")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*simulate) return cmd_simulate(seed, out_dir, samples);
    if (*train) return cmd_train(data, model, out_path);
    if (*predict_cmd) return cmd_predict(model_path, data_path, out_path);
    if (*evaluate_cmd) return cmd_evaluate(model_path, data_path, normal, per_row);
    if (*inspect) return cmd_inspect_weights(model_path, out_path);
    if (*verify) return cmd_verify(seed);
    if (*compare) return cmd_compare(data, model, test_path, normal);
  } catch (const Error& e) {
    std::cerr << "fwmnbm: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "fwmnbm: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
