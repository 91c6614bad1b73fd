/*
 * Copyright 2026 The pkex Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "pkex/model_io.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <unordered_map>

#include "pkex/error.h"

namespace pkex {
namespace {

using nlohmann::json;

struct Record {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

// RFC 4180: comma separated, optional double quotes, "" escapes a quote,
// quoted fields may span lines. CRLF and LF are both accepted.
std::vector<Record> SplitCsv(const std::string& text, std::string_view source) {
  std::vector<Record> records;
  Record current;
  std::string field;
  std::size_t line = 1;
  current.line = 1;
  bool in_quotes = false;
  bool field_started = false;
  auto end_field = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    const bool blank = current.fields.size() == 1 && current.fields[0].empty();
    if (!blank) records.push_back(std::move(current));
    current = Record{};
    current.line = line;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started && !field.empty()) {
          throw Error(ErrorCode::kParse,
                      std::string(source) + ":" + std::to_string(line) +
                          ": stray quote inside unquoted field");
        }
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        ++line;
        end_record();
        break;
      default:
        field.push_back(c);
        field_started = true;
    }
  }
  if (in_quotes) {
    throw Error(ErrorCode::kParse, std::string(source) + ":" +
                                       std::to_string(current.line) +
                                       ": unterminated quoted field");
  }
  if (field_started || !field.empty() || !current.fields.empty()) end_record();
  return records;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::optional<double> ParseNumber(std::string_view text) {
  text = Trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty() ||
      !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::string FormatNumber(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kInvalidInput, "cannot open " + path.string());
  }
  return std::string(std::istreambuf_iterator<char>(in), {});
}

const json& Require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::kSchema, std::string("missing field \"") + key + "\"");
  }
  return j.at(key);
}

Eigen::VectorXd VectorFromJson(const json& j, const char* what) {
  if (!j.is_array()) {
    throw Error(ErrorCode::kSchema, std::string(what) + " must be an array");
  }
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) {
      throw Error(ErrorCode::kSchema, std::string(what) + " must hold numbers");
    }
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

json VectorToJson(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

}  // namespace

FittedModel FitKrr(const FeatureMatrix& x, const Eigen::VectorXd& y,
                   const ProductKernelSpec& kernel, double ridge) {
  ValidateFeatureMatrix(x, "training matrix");
  if (y.size() != x.rows()) {
    throw Error(ErrorCode::kInvalidInput,
                "target has " + std::to_string(y.size()) + " entries for " +
                    std::to_string(x.rows()) + " rows");
  }
  if (!(ridge >= 0.0) || !std::isfinite(ridge)) {
    throw Error(ErrorCode::kInvalidInput, "ridge must be a finite value >= 0");
  }
  if (!y.allFinite()) {
    throw Error(ErrorCode::kInvalidInput, "target has non-finite entries");
  }
  Eigen::MatrixXd system = ProductGram(kernel, x, x);
  system.diagonal().array() += ridge;
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(system);
  if (ldlt.info() != Eigen::Success || ldlt.rcond() < 1e-12) {
    throw Error(ErrorCode::kIllConditioned,
                "kernel system is numerically singular (reciprocal condition " +
                    FormatNumber(ldlt.rcond()) + "); use a larger ridge");
  }
  FittedModel model;
  model.alpha = ldlt.solve(y);
  model.train_x = x;
  model.kernel = kernel;
  model.bias = 0.0;
  return model;
}

Table ParseTable(std::istream& in, std::optional<std::string_view> target_column,
                 std::string_view source) {
  const std::string text(std::istreambuf_iterator<char>(in), {});
  const auto records = SplitCsv(text, source);
  if (records.empty()) {
    throw Error(ErrorCode::kParse, std::string(source) + ": empty file");
  }
  const auto& header = records.front().fields;
  std::optional<std::size_t> target_index;
  Table table;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string name(Trim(header[c]));
    if (target_column && name == *target_column) {
      target_index = c;
      table.target_name = name;
    } else {
      table.feature_names.push_back(name);
    }
  }
  if (target_column && !target_index) {
    throw Error(ErrorCode::kParse, std::string(source) + ": no column named \"" +
                                       std::string(*target_column) + "\"");
  }
  if (records.size() == 1) {
    throw Error(ErrorCode::kParse,
                std::string(source) + ": header present but no data rows");
  }
  if (table.feature_names.empty() && !target_index) {
    throw Error(ErrorCode::kParse, std::string(source) + ": no feature columns");
  }

  const auto n = static_cast<Eigen::Index>(records.size() - 1);
  table.x.resize(n, static_cast<Eigen::Index>(table.feature_names.size()));
  std::vector<std::string> raw_target;
  bool numeric_target = true;
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& rec = records[static_cast<std::size_t>(r) + 1];
    if (rec.fields.size() != header.size()) {
      throw Error(ErrorCode::kParse,
                  std::string(source) + ":" + std::to_string(rec.line) +
                      ": expected " + std::to_string(header.size()) +
                      " fields, found " + std::to_string(rec.fields.size()));
    }
    Eigen::Index col = 0;
    for (std::size_t c = 0; c < rec.fields.size(); ++c) {
      if (target_index && c == *target_index) {
        raw_target.push_back(std::string(Trim(rec.fields[c])));
        numeric_target = numeric_target && ParseNumber(rec.fields[c]).has_value();
        continue;
      }
      const auto v = ParseNumber(rec.fields[c]);
      if (!v) {
        throw Error(ErrorCode::kParse,
                    std::string(source) + ":" + std::to_string(rec.line) +
                        ": column \"" + header[c] + "\" has non-numeric value \"" +
                        rec.fields[c] + "\"");
      }
      table.x(r, col++) = *v;
    }
  }

  if (target_index) {
    Eigen::VectorXd target(n);
    if (numeric_target) {
      for (Eigen::Index r = 0; r < n; ++r) {
        target[r] = *ParseNumber(raw_target[static_cast<std::size_t>(r)]);
      }
    } else {
      table.target_categorical = true;
      std::unordered_map<std::string, double> codes;
      for (Eigen::Index r = 0; r < n; ++r) {
        const auto& level = raw_target[static_cast<std::size_t>(r)];
        auto [it, inserted] =
            codes.emplace(level, static_cast<double>(table.target_levels.size()));
        if (inserted) table.target_levels.push_back(level);
        target[r] = it->second;
      }
    }
    table.target = std::move(target);
  }
  return table;
}

Table LoadTable(const std::filesystem::path& path,
                std::optional<std::string_view> target_column) {
  std::istringstream in(ReadFile(path));
  return ParseTable(in, target_column, path.string());
}

void WriteTable(std::ostream& out, const std::vector<std::string>& names,
                const Eigen::MatrixXd& values) {
  if (names.size() != static_cast<std::size_t>(values.cols())) {
    throw Error(ErrorCode::kInvalidInput, "column name count mismatch");
  }
  for (std::size_t c = 0; c < names.size(); ++c) {
    out << (c ? "," : "") << names[c];
  }
  out << '\n';
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
      out << (c ? "," : "") << FormatNumber(values(r, c));
    }
    out << '\n';
  }
}

void SaveTable(const std::filesystem::path& path,
               const std::vector<std::string>& names,
               const Eigen::MatrixXd& values) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kInvalidInput, "cannot write " + path.string());
  WriteTable(out, names, values);
}

json KernelToJson(const ProductKernelSpec& spec) {
  json features = json::array();
  for (const auto& base : spec.per_feature) {
    features.push_back({{"kind", std::string(KindName(base.kind))},
                        {"bandwidth", base.bandwidth}});
  }
  return {{"features", features}};
}

ProductKernelSpec KernelFromJson(const json& j) {
  const json& features = Require(j, "features");
  if (!features.is_array()) {
    throw Error(ErrorCode::kSchema, "kernel \"features\" must be an array");
  }
  ProductKernelSpec spec;
  for (const auto& f : features) {
    const json& kind = Require(f, "kind");
    if (!kind.is_string()) throw Error(ErrorCode::kSchema, "kernel kind must be a string");
    BaseKernelSpec base;
    base.kind = KindFromName(kind.get<std::string>());
    if (f.contains("bandwidth")) {
      if (!f["bandwidth"].is_number()) {
        throw Error(ErrorCode::kSchema, "bandwidth must be a number");
      }
      base.bandwidth = f["bandwidth"].get<double>();
    } else if (base.kind != BaseKernelKind::kCategorical) {
      throw Error(ErrorCode::kSchema, "missing field \"bandwidth\"");
    }
    spec.per_feature.push_back(base);
  }
  spec.Validate();
  return spec;
}

json AttributionToJson(const Attribution& a) {
  return {{"phi", VectorToJson(a.phi)},
          {"v_full", a.v_full},
          {"v_empty", a.v_empty},
          {"method", std::string(MethodName(a.method))}};
}

Attribution AttributionFromJson(const json& j) {
  Attribution a;
  a.phi = VectorFromJson(Require(j, "phi"), "phi");
  a.v_full = Require(j, "v_full").get<double>();
  a.v_empty = Require(j, "v_empty").get<double>();
  a.method = MethodFromName(Require(j, "method").get<std::string>());
  return a;
}

json ModelToJson(const FittedModel& model) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < model.train_x.rows(); ++r) {
    rows.push_back(VectorToJson(model.train_x.row(r).transpose()));
  }
  return {{"schema_version", kModelSchemaVersion},
          {"alpha", VectorToJson(model.alpha)},
          {"bias", model.bias},
          {"kernel", KernelToJson(model.kernel)},
          {"train_X", rows}};
}

FittedModel ModelFromJson(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw Error(ErrorCode::kSchema, "model must be a JSON object");
  if (j.contains("schema_version")) {
    const json& version = j.at("schema_version");
    if (!version.is_number_integer() || version.get<int>() != kModelSchemaVersion) {
      throw Error(ErrorCode::kSchema,
                  "unsupported model schema_version " + version.dump() +
                      " (this build reads version " +
                      std::to_string(kModelSchemaVersion) + ")");
    }
  }
  FittedModel model;
  model.alpha = VectorFromJson(Require(j, "alpha"), "alpha");
  if (j.contains("bias")) {
    if (!j["bias"].is_number()) throw Error(ErrorCode::kSchema, "bias must be a number");
    model.bias = j["bias"].get<double>();
  }
  model.kernel = KernelFromJson(Require(j, "kernel"));
  const json& train = Require(j, "train_X");
  if (train.is_string()) {
    std::filesystem::path path = train.get<std::string>();
    if (path.is_relative()) path = base_dir / path;
    model.train_x = LoadTable(path).x;
  } else if (train.is_array() && !train.empty()) {
    const std::size_t cols = train[0].is_array() ? train[0].size() : 0;
    model.train_x.resize(static_cast<Eigen::Index>(train.size()),
                         static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < train.size(); ++r) {
      if (!train[r].is_array() || train[r].size() != cols) {
        throw Error(ErrorCode::kSchema, "train_X rows must have equal length");
      }
      model.train_x.row(static_cast<Eigen::Index>(r)) =
          VectorFromJson(train[r], "train_X row").transpose();
    }
  } else {
    throw Error(ErrorCode::kSchema,
                "train_X must be a CSV path or a non-empty array of rows");
  }
  model.Validate();
  return model;
}

void SaveModel(const FittedModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kInvalidInput, "cannot write " + path.string());
  out << ModelToJson(model).dump(2) << '\n';
}

FittedModel LoadModel(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(ReadFile(path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
  return ModelFromJson(j, path.parent_path());
}

}  // namespace pkex
