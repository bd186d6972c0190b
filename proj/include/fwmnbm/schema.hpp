#pragma once

// Mixed-kind dataset model and the CSV dialect shared by every tool:
// UTF-8, comma separated, header row first, '.' decimal point, LF or CRLF,
// no quoting. Lines starting with '#' are metadata comments.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "fwmnbm/error.hpp"

namespace fwmnbm {

enum class VariableKind { TwoValued, Continuous };

inline std::string_view to_string(VariableKind kind) {
  return kind == VariableKind::TwoValued ? "twovalued" : "continuous";
}

inline VariableKind parse_variable_kind(std::string_view text) {
  if (text == "twovalued" || text == "two-valued" || text == "binary" || text == "t") {
    return VariableKind::TwoValued;
  }
  if (text == "continuous" || text == "c") return VariableKind::Continuous;
  throw Error(ErrorKind::InvalidArgument, "unknown variable kind '" + std::string(text) + "'");
}

struct VariableSpec {
  std::string name;
  VariableKind kind = VariableKind::Continuous;

  friend bool operator==(const VariableSpec&, const VariableSpec&) = default;
};

class DatasetSchema {
 public:
  DatasetSchema() = default;

  DatasetSchema(std::vector<VariableSpec> variables, std::string label_name = "label")
      : variables_(std::move(variables)), label_name_(std::move(label_name)) {
    if (variables_.empty()) {
      throw Error(ErrorKind::SchemaMismatch, "schema needs at least one variable");
    }
    if (label_name_.empty()) throw Error(ErrorKind::SchemaMismatch, "empty label column name");
    std::unordered_set<std::string> seen;
    for (const auto& v : variables_) {
      if (v.name.empty()) throw Error(ErrorKind::SchemaMismatch, "empty variable name");
      if (v.name == label_name_ || !seen.insert(v.name).second) {
        throw Error(ErrorKind::SchemaMismatch, "duplicate column name '" + v.name + "'");
      }
    }
  }

  const std::vector<VariableSpec>& variables() const noexcept { return variables_; }
  const VariableSpec& variable(std::size_t j) const { return variables_.at(j); }
  const std::string& label_name() const noexcept { return label_name_; }

  std::size_t size() const noexcept { return variables_.size(); }

  std::size_t count(VariableKind kind) const {
    return static_cast<std::size_t>(std::count_if(
        variables_.begin(), variables_.end(), [kind](const auto& v) { return v.kind == kind; }));
  }

  std::optional<std::size_t> index_of(std::string_view name) const {
    for (std::size_t j = 0; j < variables_.size(); ++j) {
      if (variables_[j].name == name) return j;
    }
    return std::nullopt;
  }

  friend bool operator==(const DatasetSchema&, const DatasetSchema&) = default;

 private:
  std::vector<VariableSpec> variables_;
  std::string label_name_ = "label";
};

// Column indices of each kind, in schema order.
struct KindPartition {
  std::vector<std::size_t> continuous;
  std::vector<std::size_t> two_valued;
};

inline KindPartition split_by_kind(const DatasetSchema& schema) {
  KindPartition out;
  for (std::size_t j = 0; j < schema.size(); ++j) {
    if (schema.variable(j).kind == VariableKind::Continuous) {
      out.continuous.push_back(j);
    } else {
      out.two_valued.push_back(j);
    }
  }
  return out;
}

// Raw label tokens in class-index order: class k (1-based) is tokens[k-1].
class LabelMapping {
 public:
  LabelMapping() = default;
  explicit LabelMapping(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
    std::unordered_set<std::string> seen;
    for (const auto& t : tokens_) {
      if (t.empty() || !seen.insert(t).second) {
        throw Error(ErrorKind::SchemaMismatch, "label tokens must be nonempty and distinct");
      }
    }
  }

  std::size_t size() const noexcept { return tokens_.size(); }
  bool empty() const noexcept { return tokens_.empty(); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }

  const std::string& token(int label) const { return tokens_.at(static_cast<std::size_t>(label - 1)); }

  std::optional<int> find(std::string_view token) const {
    for (std::size_t k = 0; k < tokens_.size(); ++k) {
      if (tokens_[k] == token) return static_cast<int>(k + 1);
    }
    return std::nullopt;
  }

  // Appends the token if unseen; returns its 1-based index.
  int intern(std::string_view token) {
    if (auto k = find(token)) return *k;
    tokens_.emplace_back(token);
    return static_cast<int>(tokens_.size());
  }

  friend bool operator==(const LabelMapping&, const LabelMapping&) = default;

 private:
  std::vector<std::string> tokens_;
};

// n x p row-major matrix plus 1-based class labels. Labels may be empty for
// unlabeled (prediction-only) data.
class Dataset {
 public:
  Dataset(DatasetSchema schema, std::vector<double> values, std::vector<int> labels,
          LabelMapping mapping = {})
      : schema_(std::move(schema)),
        values_(std::move(values)),
        labels_(std::move(labels)),
        mapping_(std::move(mapping)) {
    const std::size_t p = schema_.size();
    if (values_.empty()) throw Error(ErrorKind::EmptyInput, "dataset has no rows");
    if (values_.size() % p != 0) {
      throw Error(ErrorKind::DimensionMismatch, "value count is not a multiple of the column count");
    }
    rows_ = values_.size() / p;
    if (!labels_.empty() && labels_.size() != rows_) {
      throw Error(ErrorKind::LengthMismatch, "label count differs from row count");
    }
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < p; ++j) {
        const double x = values_[i * p + j];
        if (!std::isfinite(x)) {
          throw Error(ErrorKind::MalformedNumber,
                      "non-finite value in column '" + schema_.variable(j).name + "'");
        }
        if (schema_.variable(j).kind == VariableKind::TwoValued && x != 0.0 && x != 1.0) {
          throw Error(ErrorKind::NonBinaryValue,
                      "column '" + schema_.variable(j).name + "' row " + std::to_string(i + 1) +
                          " holds a value other than 0/1");
        }
      }
    }
    int max_label = 0;
    for (int y : labels_) {
      if (y < 1) throw Error(ErrorKind::UnknownLabel, "class labels must be >= 1");
      max_label = std::max(max_label, y);
    }
    if (!mapping_.empty() && static_cast<std::size_t>(max_label) > mapping_.size()) {
      throw Error(ErrorKind::UnknownLabel, "label exceeds the label mapping");
    }
    class_count_ = mapping_.empty() ? max_label : static_cast<int>(mapping_.size());
  }

  const DatasetSchema& schema() const noexcept { return schema_; }
  const LabelMapping& label_mapping() const noexcept { return mapping_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return schema_.size(); }
  bool has_labels() const noexcept { return !labels_.empty(); }
  int class_count() const noexcept { return class_count_; }

  std::span<const int> labels() const noexcept { return labels_; }
  std::span<const double> values() const noexcept { return values_; }

  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(values_).subspan(i * cols(), cols());
  }

  double at(std::size_t i, std::size_t j) const { return values_[i * cols() + j]; }

  std::vector<double> column(std::size_t j) const {
    std::vector<double> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = at(i, j);
    return out;
  }

  // Rows restricted to the given columns, same labels.
  Dataset select_columns(std::span<const std::size_t> columns) const {
    std::vector<VariableSpec> vars;
    for (auto j : columns) vars.push_back(schema_.variable(j));
    std::vector<double> vals;
    vals.reserve(rows_ * columns.size());
    for (std::size_t i = 0; i < rows_; ++i) {
      for (auto j : columns) vals.push_back(at(i, j));
    }
    return Dataset(DatasetSchema(std::move(vars), schema_.label_name()), std::move(vals),
                   labels_, mapping_);
  }

 private:
  DatasetSchema schema_;
  std::vector<double> values_;
  std::vector<int> labels_;
  LabelMapping mapping_;
  std::size_t rows_ = 0;
  int class_count_ = 0;
};

inline KindPartition split_by_kind(const Dataset& d) { return split_by_kind(d.schema()); }

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

inline double parse_double(std::string_view text, std::string_view column, std::size_t line_no) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw Error(ErrorKind::MalformedNumber, "line " + std::to_string(line_no) + " column '" +
                                                std::string(column) + "': '" + std::string(text) +
                                                "' is not a finite decimal");
  }
  return value;
}

inline bool is_skippable(std::string_view line) {
  const auto t = trim(line);
  return t.empty() || t.front() == '#';
}

}  // namespace detail

// Shortest decimal that round-trips to the same double; locale independent.
inline std::string format_double(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

struct CsvOptions {
  // When set, label tokens must already be present in this mapping.
  const LabelMapping* mapping = nullptr;
  // When false, a file without the label column yields an unlabeled dataset.
  bool require_labels = true;
};

inline Dataset parse_csv(std::istream& in, const DatasetSchema& schema, const CsvOptions& opts = {}) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!detail::is_skippable(line)) {
      have_header = true;
      break;
    }
  }
  if (!have_header) throw Error(ErrorKind::EmptyInput, "no header line");

  const auto header = detail::split_fields(line);
  std::vector<std::string> header_names(header.begin(), header.end());
  auto find_header = [&](std::string_view name) -> std::optional<std::size_t> {
    const auto it = std::find(header_names.begin(), header_names.end(), name);
    if (it == header_names.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header_names.begin());
  };

  std::vector<std::size_t> source(schema.size());
  for (std::size_t j = 0; j < schema.size(); ++j) {
    const auto pos = find_header(schema.variable(j).name);
    if (!pos) {
      throw Error(ErrorKind::MissingColumn, "header lacks column '" + schema.variable(j).name + "'");
    }
    source[j] = *pos;
  }
  const auto label_pos = find_header(schema.label_name());
  if (!label_pos && opts.require_labels) {
    throw Error(ErrorKind::MissingColumn, "header lacks label column '" + schema.label_name() + "'");
  }

  LabelMapping mapping = opts.mapping ? *opts.mapping : LabelMapping{};
  std::vector<double> values;
  std::vector<int> labels;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::is_skippable(line)) continue;
    const auto fields = detail::split_fields(line);
    if (fields.size() != header_names.size()) {
      throw Error(ErrorKind::MalformedNumber, "line " + std::to_string(line_no) + " has " +
                                                  std::to_string(fields.size()) + " fields, expected " +
                                                  std::to_string(header_names.size()));
    }
    for (std::size_t j = 0; j < schema.size(); ++j) {
      const auto& var = schema.variable(j);
      const double x = detail::parse_double(fields[source[j]], var.name, line_no);
      if (var.kind == VariableKind::TwoValued && x != 0.0 && x != 1.0) {
        throw Error(ErrorKind::NonBinaryValue, "line " + std::to_string(line_no) + " column '" +
                                                   var.name + "' holds " + std::string(fields[source[j]]));
      }
      values.push_back(x);
    }
    if (label_pos) {
      const auto token = fields[*label_pos];
      if (token.empty()) {
        throw Error(ErrorKind::MalformedNumber, "line " + std::to_string(line_no) + " has an empty label");
      }
      if (opts.mapping) {
        const auto k = mapping.find(token);
        if (!k) {
          throw Error(ErrorKind::UnknownLabel,
                      "line " + std::to_string(line_no) + " label '" + std::string(token) + "' is unknown");
        }
        labels.push_back(*k);
      } else {
        labels.push_back(mapping.intern(token));
      }
    }
    ++rows;
  }
  if (rows == 0) throw Error(ErrorKind::EmptyInput, "no data rows after the header");
  return Dataset(schema, std::move(values), std::move(labels), std::move(mapping));
}

inline Dataset parse_csv(std::string_view text, const DatasetSchema& schema, const CsvOptions& opts = {}) {
  std::istringstream in{std::string(text)};
  return parse_csv(in, schema, opts);
}

// Writes the header, then one row per instance. Labels are written as their
// mapped tokens when a mapping exists, otherwise as integers.
inline void write_csv(std::ostream& out, const Dataset& d, std::string_view comment = {}) {
  if (!comment.empty()) out << "# " << comment << '\n';
  const auto& schema = d.schema();
  for (std::size_t j = 0; j < schema.size(); ++j) {
    out << schema.variable(j).name << ',';
  }
  out << schema.label_name() << '\n';
  for (std::size_t i = 0; i < d.rows(); ++i) {
    for (std::size_t j = 0; j < d.cols(); ++j) out << format_double(d.at(i, j)) << ',';
    if (d.has_labels()) {
      const int y = d.labels()[i];
      if (d.label_mapping().empty()) {
        out << y;
      } else {
        out << d.label_mapping().token(y);
      }
    }
    out << '\n';
  }
}

// Sidecar schema file: one "name,kind" line per variable; an optional
// "name,label" line names the label column.
inline DatasetSchema parse_schema_file(std::istream& in, std::string default_label = "label") {
  std::vector<VariableSpec> vars;
  std::string label = std::move(default_label);
  std::string line;
  while (std::getline(in, line)) {
    if (detail::is_skippable(line)) continue;
    const auto fields = detail::split_fields(line);
    if (fields.size() != 2 || fields[0].empty()) {
      throw Error(ErrorKind::SchemaMismatch, "schema line '" + line + "' is not 'name,kind'");
    }
    if (fields[1] == "label") {
      label = std::string(fields[0]);
    } else {
      vars.push_back({std::string(fields[0]), parse_variable_kind(fields[1])});
    }
  }
  return DatasetSchema(std::move(vars), std::move(label));
}

inline void write_schema_file(std::ostream& out, const DatasetSchema& schema) {
  for (const auto& v : schema.variables()) out << v.name << ',' << to_string(v.kind) << '\n';
  out << schema.label_name() << ",label\n";
}

// Opt-in kind inference: every non-label column whose values are all 0 or 1
// becomes two-valued. Only the header and numeric content are inspected.
inline DatasetSchema infer_schema(std::istream& in, const std::string& label_name = "label") {
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!detail::is_skippable(line)) {
      have_header = true;
      break;
    }
  }
  if (!have_header) throw Error(ErrorKind::EmptyInput, "no header line");
  const auto header = detail::split_fields(line);
  std::vector<std::string> names(header.begin(), header.end());
  std::vector<bool> binary(names.size(), true);
  std::size_t line_no = 1;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::is_skippable(line)) continue;
    const auto fields = detail::split_fields(line);
    if (fields.size() != names.size()) {
      throw Error(ErrorKind::MalformedNumber, "line " + std::to_string(line_no) + " has the wrong field count");
    }
    for (std::size_t j = 0; j < names.size(); ++j) {
      if (names[j] == label_name) continue;
      const double x = detail::parse_double(fields[j], names[j], line_no);
      if (x != 0.0 && x != 1.0) binary[j] = false;
    }
    ++rows;
  }
  if (rows == 0) throw Error(ErrorKind::EmptyInput, "no data rows after the header");
  std::vector<VariableSpec> vars;
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (names[j] == label_name) continue;
    vars.push_back({names[j], binary[j] ? VariableKind::TwoValued : VariableKind::Continuous});
  }
  return DatasetSchema(std::move(vars), label_name);
}

}  // namespace fwmnbm
