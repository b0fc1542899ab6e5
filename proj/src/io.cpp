// Copyright 2026 The pce Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "pce/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pce/error.hpp"

namespace pce {

using nlohmann::json;

namespace {

json parse_document(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string(what) + ": " + e.what());
  }
}

template <typename T>
T field(const json& doc, const char* key, const char* what) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw UsageError(std::string(what) + ": missing field '" + key + "'");
  }
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw UsageError(std::string(what) + ": field '" + key + "': " + e.what());
  }
}

PauliLabel label_of_size(const std::string& text, int n, const char* what) {
  PauliLabel a = PauliLabel::parse(text);
  if (a.num_qubits() != n) {
    throw UsageError(std::string(what) + ": label '" + text + "' does not have " + std::to_string(n) + " qubits");
  }
  return a;
}

void write_comments(std::ostream& out, const std::vector<std::string>& comments) {
  for (const auto& c : comments) {
    out << "# " << c << '\n';
  }
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) {
    return "nan";
  }
  if (std::isinf(x)) {
    return x > 0 ? "inf" : "-inf";
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string channel_to_json(const PauliChannel& channel, bool dense) {
  const int n = channel.num_qubits();
  std::ostringstream out;
  out << "{\"n\": " << n << ", \"format\": \"" << (dense ? "dense" : "sparse") << "\", \"entries\": [";
  if (dense) {
    PauliChannel d = channel.is_dense() ? channel : channel.to_dense();
    auto p = d.error_rates();
    for (std::size_t i = 0; i < p.size(); i++) {
      out << (i ? ", " : "") << format_double(p[i]);
    }
  } else {
    auto entries = channel.nonzero_entries();
    for (std::size_t i = 0; i < entries.size(); i++) {
      out << (i ? ", " : "") << "[\"" << entries[i].label.str() << "\", " << format_double(entries[i].probability)
          << "]";
    }
  }
  out << "]}\n";
  return out.str();
}

PauliChannel channel_from_json(const std::string& text) {
  constexpr const char* kWhat = "channel file";
  json doc = parse_document(text, kWhat);
  for (const auto& [key, value] : doc.items()) {
    if (key != "n" && key != "format" && key != "entries") {
      throw UsageError(std::string(kWhat) + ": unknown field '" + key + "'");
    }
  }
  const int n = field<int>(doc, "n", kWhat);
  if (n < 0 || n > kMaxLabelQubits) {
    throw UsageError(std::string(kWhat) + ": n out of range");
  }
  const std::string format = field<std::string>(doc, "format", kWhat);
  if (format == "dense") {
    auto p = field<std::vector<double>>(doc, "entries", kWhat);
    if (n > kDenseMaxQubits || p.size() != (std::size_t{1} << (2 * n))) {
      throw UsageError(std::string(kWhat) + ": dense entries must have 4^n values");
    }
    return PauliChannel::from_error_rates(std::move(p));
  }
  if (format != "sparse") {
    throw UsageError(std::string(kWhat) + ": format must be dense or sparse");
  }
  const json& entries = doc.at("entries");
  if (!entries.is_array()) {
    throw UsageError(std::string(kWhat) + ": entries must be an array");
  }
  std::vector<SparseEntry> support;
  for (const auto& e : entries) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_number()) {
      throw UsageError(std::string(kWhat) + ": sparse entries are [label, probability] pairs");
    }
    support.push_back({label_of_size(e[0].get<std::string>(), n, kWhat), e[1].get<double>()});
  }
  return PauliChannel::from_sparse(n, std::move(support));
}

std::string covering_to_json(const Covering& covering) {
  std::ostringstream out;
  out << "{\"m\": " << covering.num_qubits() << ", \"construction\": \"" << to_string(covering.kind())
      << "\", \"groups\": [";
  for (std::size_t g = 0; g < covering.size(); g++) {
    out << (g ? ",\n  " : "\n  ") << "[";
    const auto& gens = covering.group(g).generators();
    for (std::size_t j = 0; j < gens.size(); j++) {
      out << (j ? ", " : "") << '"' << gens[j].str() << '"';
    }
    out << "]";
  }
  out << "\n]}\n";
  return out.str();
}

Covering covering_from_json(const std::string& text) {
  constexpr const char* kWhat = "covering file";
  json doc = parse_document(text, kWhat);
  for (const auto& [key, value] : doc.items()) {
    if (key != "m" && key != "construction" && key != "groups") {
      throw UsageError(std::string(kWhat) + ": unknown field '" + key + "'");
    }
  }
  const int m = field<int>(doc, "m", kWhat);
  if (m < 0 || m > kMaxLabelQubits) {
    throw UsageError(std::string(kWhat) + ": m out of range");
  }
  const CoveringKind kind = doc.contains("construction")
                                ? covering_kind_from_string(field<std::string>(doc, "construction", kWhat))
                                : CoveringKind::kCustom;
  auto groups_text = field<std::vector<std::vector<std::string>>>(doc, "groups", kWhat);
  std::vector<StabilizerGroup> groups;
  groups.reserve(groups_text.size());
  for (const auto& gens_text : groups_text) {
    std::vector<PauliLabel> gens;
    for (const auto& t : gens_text) {
      gens.push_back(label_of_size(t, m, kWhat));
    }
    groups.emplace_back(m, std::move(gens));
  }
  return Covering(m, kind, std::move(groups));
}

void write_estimates_csv(std::ostream& out, const EstimateSet& estimates, const std::vector<std::string>& comments) {
  write_comments(out, comments);
  out << "label,lambda_hat,n_shots,stderr\n";
  for (std::size_t i = 0; i < estimates.size(); i++) {
    out << estimates.label(i).str() << ',' << format_double(estimates.lambda_hat(i)) << ',' << estimates.shots(i)
        << ',' << format_double(estimates.stderr_at(i)) << '\n';
  }
}

void write_decay_csv(std::ostream& out, const std::vector<DecaySeries>& series,
                     const std::vector<std::string>& comments) {
  write_comments(out, comments);
  out << "label,m,f_mean,shots\n";
  for (const auto& s : series) {
    const std::string label = s.label.str();
    for (const auto& p : s.points) {
      out << label << ',' << p.m << ',' << format_double(p.f_mean) << ',' << p.shots << '\n';
    }
  }
}

namespace {

double parse_csv_double(const std::string& field, const std::string& line) {
  char* end = nullptr;
  const double x = std::strtod(field.c_str(), &end);
  if (field.empty() || end != field.c_str() + field.size()) {
    throw UsageError("estimates csv: bad number '" + field + "' in row '" + line + "'");
  }
  return x;
}

int64_t parse_csv_int(const std::string& field, const std::string& line) {
  int64_t x = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), x);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
    throw UsageError("estimates csv: bad count '" + field + "' in row '" + line + "'");
  }
  return x;
}

}  // namespace

std::vector<EstimateRow> read_estimates_csv(std::istream& in) {
  std::vector<EstimateRow> rows;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') {
      continue;
    }
    if (header) {
      header = false;
      if (line != "label,lambda_hat,n_shots,stderr") {
        throw UsageError("estimates csv: unexpected header '" + line + "'");
      }
      continue;
    }
    std::stringstream ss(line);
    std::string label, lambda, shots, err;
    if (!std::getline(ss, label, ',') || !std::getline(ss, lambda, ',') || !std::getline(ss, shots, ',') ||
        !std::getline(ss, err, ',')) {
      throw UsageError("estimates csv: malformed row '" + line + "'");
    }
    rows.push_back({PauliLabel::parse(label), parse_csv_double(lambda, line), parse_csv_int(shots, line),
                    parse_csv_double(err, line)});
  }
  return rows;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw UsageError("cannot open '" + path + "' for reading");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw UsageError("cannot open '" + path + "' for writing");
  }
  out << text;
  if (!out) {
    throw UsageError("failed writing '" + path + "'");
  }
}

}  // namespace pce
