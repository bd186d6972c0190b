#pragma once

// JSON model files. Loading is strict: every field is required and unknown
// fields are rejected. Doubles are written in shortest round-trip form, so a
// save/load cycle reproduces every parameter bit for bit.

#include <fstream>
#include <initializer_list>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "fwmnbm/classifier.hpp"
#include "fwmnbm/error.hpp"

namespace fwmnbm {

namespace detail {

using json = nlohmann::json;

inline void expect_keys(const json& j, std::string_view where, std::initializer_list<std::string_view> keys) {
  if (!j.is_object()) throw Error(ErrorKind::ModelFormat, std::string(where) + " must be an object");
  std::set<std::string, std::less<>> wanted(keys.begin(), keys.end());
  for (const auto& [key, value] : j.items()) {
    if (!wanted.count(key)) throw Error(ErrorKind::ModelFormat, std::string(where) + " has unknown field '" + key + "'");
  }
  for (auto key : keys) {
    if (!j.contains(std::string(key))) {
      throw Error(ErrorKind::ModelFormat, std::string(where) + " lacks field '" + std::string(key) + "'");
    }
  }
}

inline double get_number(const json& j, std::string_view where) {
  if (!j.is_number()) throw Error(ErrorKind::ModelFormat, std::string(where) + " must be a number");
  return j.get<double>();
}

inline std::string get_string(const json& j, std::string_view where) {
  if (!j.is_string()) throw Error(ErrorKind::ModelFormat, std::string(where) + " must be a string");
  return j.get<std::string>();
}

inline std::vector<double> get_numbers(const json& j, std::string_view where) {
  if (!j.is_array()) throw Error(ErrorKind::ModelFormat, std::string(where) + " must be an array");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(get_number(v, where));
  return out;
}

inline std::vector<std::vector<double>> get_matrix(const json& j, std::string_view where) {
  if (!j.is_array()) throw Error(ErrorKind::ModelFormat, std::string(where) + " must be an array of arrays");
  std::vector<std::vector<double>> out;
  for (const auto& row : j) out.push_back(get_numbers(row, where));
  return out;
}

}  // namespace detail

inline nlohmann::json model_to_json(const FwmnbmModel& m) {
  using detail::json;
  json schema{{"label_name", m.schema.label_name()}, {"variables", json::array()}};
  for (const auto& v : m.schema.variables()) {
    schema["variables"].push_back({{"name", v.name}, {"kind", std::string(to_string(v.kind))}});
  }
  json mu = json::array();
  json sigma = json::array();
  json counts = json::array();
  for (std::size_t k = 0; k < m.stats.gaussian.size(); ++k) {
    json mu_row = json::array();
    json sigma_row = json::array();
    for (const auto& g : m.stats.gaussian[k]) {
      mu_row.push_back(g.mu);
      sigma_row.push_back(g.sigma);
    }
    mu.push_back(std::move(mu_row));
    sigma.push_back(std::move(sigma_row));
  }
  for (auto c : m.stats.counts) counts.push_back(c);
  json weights = json::array();
  for (const auto& f : m.weights.features) {
    weights.push_back({{"feature", f.name},
                       {"mi_label", f.mi_label},
                       {"avg_pairwise_mi", f.avg_pairwise_mi},
                       {"ci", f.ci},
                       {"raw", f.raw_weight},
                       {"normalized", f.normalized_weight}});
  }
  json thresholds = json::array();
  for (std::size_t c = 0; c < m.thresholds.columns.size(); ++c) {
    thresholds.push_back({{"feature", m.schema.variable(m.thresholds.columns[c]).name},
                          {"threshold", m.thresholds.values[c]}});
  }
  json config{{"xi", m.config.truncation.xi},
              {"truncation", std::string(to_string(m.config.truncation.mode))},
              {"sigmoid", std::string(to_string(m.config.weighting.sign))},
              {"sigma_floor", m.config.sigma_floor}};
  return json{{"format_version", m.format_version},
              {"schema", std::move(schema)},
              {"label_mapping", m.label_mapping.tokens()},
              {"class_count", m.class_count},
              {"class_counts", std::move(counts)},
              {"priors", m.stats.priors},
              {"theta", m.stats.theta},
              {"mu", std::move(mu)},
              {"sigma", std::move(sigma)},
              {"thresholds", std::move(thresholds)},
              {"weights", std::move(weights)},
              {"config", std::move(config)}};
}

inline FwmnbmModel model_from_json(const nlohmann::json& j) {
  using namespace detail;
  expect_keys(j, "model", {"format_version", "schema", "label_mapping", "class_count", "class_counts", "priors",
                           "theta", "mu", "sigma", "thresholds", "weights", "config"});
  FwmnbmModel m;
  m.format_version = get_string(j["format_version"], "format_version");
  if (m.format_version != kModelFormatVersion) {
    throw Error(ErrorKind::ModelFormat, "unsupported format_version '" + m.format_version + "'");
  }

  const auto& js = j["schema"];
  expect_keys(js, "schema", {"label_name", "variables"});
  if (!js["variables"].is_array()) throw Error(ErrorKind::ModelFormat, "schema.variables must be an array");
  std::vector<VariableSpec> vars;
  for (const auto& v : js["variables"]) {
    expect_keys(v, "schema.variables[]", {"name", "kind"});
    try {
      vars.push_back({get_string(v["name"], "variable name"), parse_variable_kind(get_string(v["kind"], "variable kind"))});
    } catch (const Error& e) {
      throw Error(ErrorKind::ModelFormat, e.what());
    }
  }
  try {
    m.schema = DatasetSchema(std::move(vars), get_string(js["label_name"], "schema.label_name"));
    std::vector<std::string> tokens;
    if (!j["label_mapping"].is_array()) throw Error(ErrorKind::ModelFormat, "label_mapping must be an array");
    for (const auto& t : j["label_mapping"]) tokens.push_back(get_string(t, "label_mapping[]"));
    m.label_mapping = LabelMapping(std::move(tokens));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ModelFormat) throw;
    throw Error(ErrorKind::ModelFormat, e.what());
  }
  if (!j["class_count"].is_number_integer()) throw Error(ErrorKind::ModelFormat, "class_count must be an integer");
  m.class_count = j["class_count"].get<int>();
  for (double c : get_numbers(j["class_counts"], "class_counts")) {
    if (c < 0 || c != std::floor(c)) throw Error(ErrorKind::ModelFormat, "class_counts must be whole numbers");
    m.stats.counts.push_back(static_cast<std::size_t>(c));
  }
  m.stats.priors = get_numbers(j["priors"], "priors");
  m.stats.theta = get_matrix(j["theta"], "theta");
  const auto mu = get_matrix(j["mu"], "mu");
  const auto sigma = get_matrix(j["sigma"], "sigma");
  if (mu.size() != sigma.size()) throw Error(ErrorKind::ModelFormat, "mu and sigma differ in shape");
  for (std::size_t k = 0; k < mu.size(); ++k) {
    if (mu[k].size() != sigma[k].size()) throw Error(ErrorKind::ModelFormat, "mu and sigma differ in shape");
    std::vector<GaussianParams> row;
    for (std::size_t c = 0; c < mu[k].size(); ++c) row.push_back({mu[k][c], sigma[k][c]});
    m.stats.gaussian.push_back(std::move(row));
  }

  const auto& jt = j["thresholds"];
  if (!jt.is_array()) throw Error(ErrorKind::ModelFormat, "thresholds must be an array");
  m.thresholds.column_count = m.schema.size();
  for (const auto& t : jt) {
    expect_keys(t, "thresholds[]", {"feature", "threshold"});
    const auto name = get_string(t["feature"], "thresholds[].feature");
    const auto idx = m.schema.index_of(name);
    if (!idx) throw Error(ErrorKind::ModelFormat, "threshold for unknown feature '" + name + "'");
    m.thresholds.columns.push_back(*idx);
    m.thresholds.values.push_back(get_number(t["threshold"], "thresholds[].threshold"));
  }

  const auto& jw = j["weights"];
  if (!jw.is_array()) throw Error(ErrorKind::ModelFormat, "weights must be an array");
  for (const auto& w : jw) {
    expect_keys(w, "weights[]", {"feature", "mi_label", "avg_pairwise_mi", "ci", "raw", "normalized"});
    FeatureWeight f;
    f.name = get_string(w["feature"], "weights[].feature");
    f.mi_label = get_number(w["mi_label"], "weights[].mi_label");
    f.avg_pairwise_mi = get_number(w["avg_pairwise_mi"], "weights[].avg_pairwise_mi");
    f.ci = get_number(w["ci"], "weights[].ci");
    f.raw_weight = get_number(w["raw"], "weights[].raw");
    f.normalized_weight = get_number(w["normalized"], "weights[].normalized");
    m.weights.features.push_back(std::move(f));
  }

  const auto& jc = j["config"];
  expect_keys(jc, "config", {"xi", "truncation", "sigmoid", "sigma_floor"});
  try {
    m.config.truncation.xi = get_number(jc["xi"], "config.xi");
    m.config.truncation.mode = parse_truncation_mode(get_string(jc["truncation"], "config.truncation"));
    m.config.weighting.sign = parse_sigmoid_sign(get_string(jc["sigmoid"], "config.sigmoid"));
    m.config.sigma_floor = get_number(jc["sigma_floor"], "config.sigma_floor");
    m.config.validate();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ModelFormat) throw;
    throw Error(ErrorKind::ModelFormat, e.what());
  }
  if (m.stats.counts.size() != static_cast<std::size_t>(std::max(m.class_count, 0))) {
    throw Error(ErrorKind::ModelFormat, "class_counts size differs from class_count");
  }
  m.validate();
  m.finalize();
  return m;
}

inline void save_model(const FwmnbmModel& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot open '" + path + "' for writing");
  out << model_to_json(m).dump(2) << '\n';
  if (!out) throw Error(ErrorKind::IoFailure, "failed writing '" + path + "'");
}

inline FwmnbmModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot open '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ModelFormat, "'" + path + "' is not valid JSON: " + e.what());
  }
  return model_from_json(j);
}

}  // namespace fwmnbm
