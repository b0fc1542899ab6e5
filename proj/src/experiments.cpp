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


#include "pce/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pce/dense_oracle.hpp"
#include "pce/error.hpp"
#include "pce/io.hpp"
#include "pce/parallel.hpp"
#include "pce/sampler.hpp"
#include "pce/wht.hpp"

namespace pce::experiments {

namespace {

using nlohmann::json;

// Stream ids. Each experiment draws from its own family so adding one never
// perturbs another.
constexpr uint64_t kChannelStream = 1;
constexpr uint64_t kEstimateStream = 2;
constexpr uint64_t kSweepStream = 3;
constexpr uint64_t kDiscriminateStream = 4;
constexpr uint64_t kBenchmarkStream = 5;
constexpr uint64_t kVerifyStream = 6;

constexpr int kSweepBatch = 20;
constexpr int kSweepMaxDoublings = 8;
constexpr int kMaxSweepQubits = 8;
constexpr int kMaxDiscriminateQubits = 10;
constexpr int kMaxDenseBenchmarkQubits = 8;
constexpr int kMaxDenseEstimateQubits = 12;

const std::set<std::string> kTopLevelFields = {
    "experiment", "n",      "k",         "channel",    "gate",       "prep",         "meas",    "covering",
    "epsilon",    "delta",  "samples",   "clamp",      "labels",     "k_list",       "n_list",  "trials",
    "success_rate", "lengths", "repetitions", "spam_sweep", "modes",  "max_shots",    "confidence", "level",
    "inject_fault", "plot", "seed",      "threads",    "output",     "format"};

const std::set<std::string> kExperiments = {"estimate", "sweep_ancilla", "discriminate", "benchmark", "verify"};

[[noreturn]] void fail(const std::string& what) { throw UsageError("config: " + what); }

int64_t get_int(const json& j, const std::string& key, int64_t lo, int64_t hi) {
  const json& v = j.at(key);
  if (!v.is_number_integer()) {
    fail("'" + key + "' must be an integer");
  }
  const int64_t x = v.get<int64_t>();
  if (x < lo || x > hi) {
    fail("'" + key + "' = " + std::to_string(x) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return x;
}

double get_double(const json& j, const std::string& key, double lo, double hi, bool open_lo = false) {
  const json& v = j.at(key);
  if (!v.is_number()) {
    fail("'" + key + "' must be a number");
  }
  const double x = v.get<double>();
  if (!(open_lo ? x > lo : x >= lo) || !(x <= hi)) {
    fail("'" + key + "' = " + format_double(x) + " out of range");
  }
  return x;
}

std::string get_string(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_string()) {
    fail("'" + key + "' must be a string");
  }
  return v.get<std::string>();
}

bool get_bool(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_boolean()) {
    fail("'" + key + "' must be true or false");
  }
  return v.get<bool>();
}

template <typename T, typename Fn>
std::vector<T> get_list(const json& j, const std::string& key, Fn&& item) {
  const json& v = j.at(key);
  if (!v.is_array()) {
    fail("'" + key + "' must be a list");
  }
  std::vector<T> out;
  for (std::size_t i = 0; i < v.size(); i++) {
    json wrapper = {{key, v[i]}};
    out.push_back(item(wrapper, key));
  }
  return out;
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) {
      fail("unknown field '" + it.key() + "' in " + where);
    }
  }
}

ChannelSpec parse_channel(const json& j, const std::string& where) {
  if (!j.is_object()) {
    fail("'" + where + "' must be an object");
  }
  if (!j.contains("type")) {
    fail("'" + where + "' needs a 'type'");
  }
  ChannelSpec s;
  s.type = get_string(j, "type");
  static const std::map<std::string, std::set<std::string>> kFields = {
      {"identity", {"type", "n"}},
      {"depolarizing", {"type", "n", "rate"}},
      {"fully_depolarizing", {"type", "n"}},
      {"spike", {"type", "n", "label", "sign"}},
      {"random_dirichlet", {"type", "n"}},
      {"random_sparse", {"type", "n", "support"}},
      {"tensor", {"type", "factors"}},
      {"file", {"type", "path"}},
  };
  auto fields = kFields.find(s.type);
  if (fields == kFields.end()) {
    fail("unknown channel type '" + s.type + "' in " + where);
  }
  check_keys(j, fields->second, where);
  if (j.contains("n")) {
    s.n = static_cast<int>(get_int(j, "n", 1, kMaxLabelQubits));
  }
  if (s.type == "depolarizing") {
    if (!j.contains("rate")) {
      fail(where + ": depolarizing needs 'rate'");
    }
    s.rate = get_double(j, "rate", 0, 1);
  } else if (s.type == "spike") {
    if (!j.contains("label")) {
      fail(where + ": spike needs 'label'");
    }
    s.label = get_string(j, "label");
    PauliLabel::parse(s.label);
    s.sign = j.contains("sign") ? static_cast<int>(get_int(j, "sign", -1, 1)) : 1;
    if (s.sign == 0) {
      fail(where + ": spike sign must be +1 or -1");
    }
    if (s.n >= 0 && static_cast<int>(s.label.size()) != s.n) {
      fail(where + ": spike label length does not match n");
    }
  } else if (s.type == "random_sparse") {
    if (!j.contains("support")) {
      fail(where + ": random_sparse needs 'support'");
    }
    s.support = static_cast<std::size_t>(get_int(j, "support", 1, int64_t{1} << 24));
  } else if (s.type == "tensor") {
    if (!j.contains("factors") || !j.at("factors").is_array() || j.at("factors").empty()) {
      fail(where + ": tensor needs a nonempty 'factors' list");
    }
    int total = 0;
    for (std::size_t i = 0; i < j.at("factors").size(); i++) {
      ChannelSpec f = parse_channel(j.at("factors")[i], where + ".factors[" + std::to_string(i) + "]");
      if (f.n < 0) {
        f.n = f.type == "spike" ? static_cast<int>(f.label.size()) : -1;
      }
      if (f.n < 0) {
        fail(where + ": every tensor factor needs an explicit 'n'");
      }
      total += f.n;
      s.factors.push_back(std::move(f));
    }
    s.n = total;
  } else if (s.type == "file") {
    if (!j.contains("path")) {
      fail(where + ": file channel needs 'path'");
    }
    s.path = get_string(j, "path");
  }
  return s;
}

void check_lengths(const std::vector<int>& lengths) {
  if (lengths.empty()) {
    fail("'lengths' must be nonempty");
  }
  for (std::size_t i = 0; i < lengths.size(); i++) {
    if (lengths[i] < 0 || (i > 0 && lengths[i] <= lengths[i - 1])) {
      fail("'lengths' must be nonnegative and strictly increasing");
    }
  }
}

void check_channel_size(const std::optional<ChannelSpec>& spec, int n, const std::string& name) {
  if (spec && spec->n >= 0 && spec->n != n) {
    fail("'" + name + "' acts on " + std::to_string(spec->n) + " qubits but n = " + std::to_string(n));
  }
}

void validate(const ExperimentConfig& c) {
  if (c.format != "csv" && c.format != "json") {
    fail("'format' must be csv or json");
  }
  if (c.experiment == "estimate") {
    if (c.n < 1) {
      fail("estimate needs n >= 1");
    }
    if (c.k < 0 || c.k > c.n) {
      fail("estimate needs 0 <= k <= n");
    }
    if (!c.channel) {
      fail("estimate needs a 'channel'");
    }
    check_channel_size(c.channel, c.n, "channel");
    if (c.n > kMaxDenseEstimateQubits && c.labels.empty()) {
      fail("n > " + std::to_string(kMaxDenseEstimateQubits) + " needs an explicit 'labels' list");
    }
  } else if (c.experiment == "sweep_ancilla") {
    if (c.n < 1 || c.n > kMaxSweepQubits) {
      fail("sweep_ancilla needs 1 <= n <= " + std::to_string(kMaxSweepQubits) + " (dense truth)");
    }
    if (c.k_list.empty()) {
      fail("sweep_ancilla needs a nonempty 'k_list'");
    }
    for (int k : c.k_list) {
      if (k < 0 || k > c.n) {
        fail("'k_list' entries must lie in [0, n]");
      }
    }
    check_channel_size(c.channel, c.n, "channel");
  } else if (c.experiment == "discriminate") {
    if (c.n_list.empty()) {
      fail("discriminate needs a nonempty 'n_list'");
    }
    for (int n : c.n_list) {
      if (n < 1 || n > kMaxDiscriminateQubits) {
        fail("'n_list' entries must lie in [1, " + std::to_string(kMaxDiscriminateQubits) + "]");
      }
    }
    if (c.modes.empty()) {
      fail("'modes' must be nonempty");
    }
    for (const auto& m : c.modes) {
      if (m != "bell" && m != "mub") {
        fail("'modes' entries must be bell or mub");
      }
    }
    if (!(c.confidence > 0.5 && c.confidence < 1)) {
      fail("'confidence' must lie in (0.5, 1)");
    }
  } else if (c.experiment == "benchmark") {
    if (c.n < 1) {
      fail("benchmark needs n >= 1");
    }
    if (!c.gate) {
      fail("benchmark needs a 'gate' channel");
    }
    check_channel_size(c.gate, c.n, "gate");
    check_channel_size(c.prep, c.n, "prep");
    check_channel_size(c.meas, c.n, "meas");
    check_lengths(c.lengths);
    if (c.n > kMaxDenseBenchmarkQubits && c.labels.empty()) {
      fail("n > " + std::to_string(kMaxDenseBenchmarkQubits) + " needs an explicit 'labels' list");
    }
  } else if (c.experiment == "verify") {
    if (c.level != "quick" && c.level != "full") {
      fail("'level' must be quick or full");
    }
    if (!c.inject_fault.empty() && c.inject_fault != "covering") {
      fail("'inject_fault' supports only \"covering\"");
    }
  }
  for (const auto& a : c.labels) {
    if (a.num_qubits() != c.n) {
      fail("label " + a.str() + " does not act on n = " + std::to_string(c.n) + " qubits");
    }
  }
}

std::string cell_text(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) {
    if (s->find_first_of(",\"\n") == std::string::npos) {
      return *s;
    }
    std::string quoted = "\"";
    for (char ch : *s) {
      quoted += ch;
      if (ch == '"') {
        quoted += '"';
      }
    }
    return quoted + "\"";
  }
  if (const auto* i = std::get_if<int64_t>(&c)) {
    return std::to_string(*i);
  }
  return format_double(std::get<double>(c));
}

json cell_json(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) {
    return *s;
  }
  if (const auto* i = std::get_if<int64_t>(&c)) {
    return *i;
  }
  const double x = std::get<double>(c);
  if (!std::isfinite(x)) {
    return nullptr;
  }
  return x;
}

double median_of(std::vector<double> v) {
  if (v.empty()) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

}  // namespace

uint64_t fnv1a64(const std::string& text) {
  uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

ExperimentConfig parse_config(const std::string& json_text, const Overrides& overrides) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) {
    fail("top level must be an object");
  }
  if (overrides.experiment) {
    if (j.contains("experiment") && j["experiment"] != *overrides.experiment) {
      fail("config is for '" + j["experiment"].dump() + "' but the command is '" + *overrides.experiment + "'");
    }
    j["experiment"] = *overrides.experiment;
  }
  if (overrides.seed) {
    j["seed"] = *overrides.seed;
  }
  if (overrides.threads) {
    j["threads"] = *overrides.threads;
  }
  if (overrides.output) {
    j["output"] = *overrides.output;
  }
  if (overrides.format) {
    j["format"] = *overrides.format;
  }
  if (overrides.level) {
    j["level"] = *overrides.level;
  }
  if (overrides.inject_fault) {
    j["inject_fault"] = *overrides.inject_fault;
  }
  check_keys(j, kTopLevelFields, "config");

  ExperimentConfig c;
  if (!j.contains("experiment")) {
    fail("missing 'experiment'");
  }
  c.experiment = get_string(j, "experiment");
  if (!kExperiments.count(c.experiment)) {
    fail("unknown experiment '" + c.experiment + "'");
  }
  if (j.contains("n")) c.n = static_cast<int>(get_int(j, "n", 1, kMaxLabelQubits));
  if (j.contains("k")) c.k = static_cast<int>(get_int(j, "k", 0, kMaxLabelQubits));
  if (j.contains("channel")) c.channel = parse_channel(j["channel"], "channel");
  if (j.contains("gate")) c.gate = parse_channel(j["gate"], "gate");
  if (j.contains("prep")) c.prep = parse_channel(j["prep"], "prep");
  if (j.contains("meas")) c.meas = parse_channel(j["meas"], "meas");
  if (j.contains("covering")) {
    const std::string kind = get_string(j, "covering");
    if (kind != "mub" && kind != "pauli-basis") {
      fail("'covering' must be mub or pauli-basis");
    }
    c.covering = covering_kind_from_string(kind);
  }
  if (j.contains("epsilon")) c.epsilon = get_double(j, "epsilon", 0, 1, true);
  if (j.contains("delta")) {
    c.delta = get_double(j, "delta", 0, 1, true);
    if (c.delta >= 1) fail("'delta' must be below 1");
  }
  if (j.contains("samples")) c.samples = get_int(j, "samples", 1, int64_t{1} << 40);
  if (j.contains("clamp")) c.clamp = get_bool(j, "clamp");
  if (j.contains("labels")) {
    c.labels = get_list<PauliLabel>(j, "labels", [](const json& w, const std::string& key) {
      return PauliLabel::parse(get_string(w, key));
    });
  }
  auto small_int = [](const json& w, const std::string& key) { return static_cast<int>(get_int(w, key, 0, 1 << 20)); };
  if (j.contains("k_list")) c.k_list = get_list<int>(j, "k_list", small_int);
  if (j.contains("n_list")) c.n_list = get_list<int>(j, "n_list", small_int);
  if (j.contains("trials")) c.trials = static_cast<int>(get_int(j, "trials", 1, 1000000));
  if (j.contains("success_rate")) c.success_rate = get_double(j, "success_rate", 0, 1, true);
  if (j.contains("lengths")) c.lengths = get_list<int>(j, "lengths", small_int);
  if (j.contains("repetitions")) c.repetitions = get_int(j, "repetitions", 1, int64_t{1} << 40);
  if (j.contains("spam_sweep")) {
    c.spam_sweep = get_list<double>(j, "spam_sweep",
                                    [](const json& w, const std::string& key) { return get_double(w, key, 0, 1); });
  }
  if (j.contains("modes")) c.modes = get_list<std::string>(j, "modes", get_string);
  if (j.contains("max_shots")) c.max_shots = get_int(j, "max_shots", 1, int64_t{1} << 40);
  if (j.contains("confidence")) c.confidence = get_double(j, "confidence", 0, 1);
  if (j.contains("level")) c.level = get_string(j, "level");
  if (j.contains("inject_fault")) c.inject_fault = get_string(j, "inject_fault");
  if (j.contains("plot")) c.plot = get_bool(j, "plot");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<int64_t>() >= 0)) {
      fail("'seed' must be a nonnegative integer");
    }
    c.seed = j["seed"].get<uint64_t>();
  }
  if (j.contains("threads")) c.threads = static_cast<int>(get_int(j, "threads", 1, 1024));
  if (j.contains("output")) c.output = get_string(j, "output");
  if (j.contains("format")) c.format = get_string(j, "format");
  validate(c);

  json canonical = j;
  canonical.erase("threads");
  canonical.erase("output");
  c.canonical = canonical.dump();
  char hash[32];
  std::snprintf(hash, sizeof(hash), "fnv1a64:%016llx", static_cast<unsigned long long>(fnv1a64(c.canonical)));
  c.config_hash = hash;
  return c;
}

PauliChannel build_channel(const ChannelSpec& spec, int default_n, Rng& rng) {
  const int n = spec.n >= 0 ? spec.n : default_n;
  if (spec.type == "identity") return channels::identity(n);
  if (spec.type == "depolarizing") return channels::depolarizing(n, spec.rate);
  if (spec.type == "fully_depolarizing") return channels::fully_depolarizing(n);
  if (spec.type == "spike") return channels::spike(n, PauliLabel::parse(spec.label), spec.sign);
  if (spec.type == "random_dirichlet") return channels::random_dirichlet(n, rng);
  if (spec.type == "random_sparse") return channels::random_sparse(n, spec.support, rng);
  if (spec.type == "tensor") {
    std::vector<PauliChannel> factors;
    for (const auto& f : spec.factors) {
      factors.push_back(build_channel(f, f.n, rng));
    }
    return channels::tensor(factors);
  }
  if (spec.type == "file") {
    PauliChannel ch = channel_from_json(read_text_file(spec.path));
    if (ch.num_qubits() != n) {
      throw UsageError("channel file '" + spec.path + "' acts on " + std::to_string(ch.num_qubits()) +
                       " qubits, expected " + std::to_string(n));
    }
    return ch;
  }
  throw UsageError("unknown channel type '" + spec.type + "'");
}

Covering build_covering(CoveringKind kind, int m) {
  return kind == CoveringKind::kPauliBasis ? pauli_basis_covering(m) : mub_covering(m);
}

void write_table_csv(std::ostream& out, const Table& table, const std::vector<std::string>& comments) {
  for (const auto& c : comments) {
    out << "# " << c << '\n';
  }
  for (std::size_t i = 0; i < table.columns.size(); i++) {
    out << (i ? "," : "") << table.columns[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); i++) {
      out << (i ? "," : "") << cell_text(row[i]);
    }
    out << '\n';
  }
}

void write_table_json(std::ostream& out, const Table& table, const std::vector<std::string>& comments) {
  json doc;
  doc["comments"] = comments;
  doc["columns"] = table.columns;
  doc["rows"] = json::array();
  for (const auto& row : table.rows) {
    json r = json::array();
    for (const auto& c : row) {
      r.push_back(cell_json(c));
    }
    doc["rows"].push_back(std::move(r));
  }
  out << doc.dump(1) << '\n';
}

EstimateRun run_estimate(const ExperimentConfig& c) {
  Rng rng = Rng::for_stream(c.seed, kChannelStream, 0);
  PauliChannel truth = build_channel(*c.channel, c.n, rng);
  Covering cov = build_covering(c.covering, c.n - c.k);
  const int64_t samples = c.samples > 0 ? c.samples : required_samples(c.n, c.k, c.epsilon, c.delta, cov.size());
  EstimateSet est = estimate_alg1(truth, c.k, cov, samples, RunOptions{c.seed, kEstimateStream, c.threads}, c.labels);
  if (c.clamp) {
    est = est.clamped();
  }
  return EstimateRun{std::move(truth), std::move(est), samples, cov.size()};
}

std::vector<SweepRow> run_sweep_ancilla(const ExperimentConfig& c) {
  ChannelSpec spec;
  spec.type = "random_dirichlet";
  if (c.channel) {
    spec = *c.channel;
  }
  std::vector<PauliChannel> truths;
  truths.reserve(static_cast<std::size_t>(c.trials));
  for (int t = 0; t < c.trials; t++) {
    Rng rng = Rng::for_stream(c.seed, derive_stream(kChannelStream, 1), static_cast<uint64_t>(t));
    truths.push_back(build_channel(spec, c.n, rng));
  }
  const int need = static_cast<int>(std::ceil(c.success_rate * c.trials - 1e-9));
  const int allowed_failures = c.trials - need;
  const double sweep_delta = std::min(0.5, std::max(1e-12, 1 - c.success_rate));

  std::vector<SweepRow> rows;
  for (int k : c.k_list) {
    const Covering cov = build_covering(c.covering, c.n - k);
    const uint64_t k_stream = derive_stream(kSweepStream, static_cast<uint64_t>(k));
    struct Eval {
      bool pass;
      double rate;
      int trials_run;
    };
    // Trials run in batches; a batch is only cut short at its boundary so
    // the verdict does not depend on the thread count.
    auto evaluate = [&](int64_t rounds) {
      int ok = 0, bad = 0, run = 0;
      for (int start = 0; start < c.trials; start += kSweepBatch) {
        const int count = std::min(kSweepBatch, c.trials - start);
        auto hits = parallel_map<char>(static_cast<std::size_t>(count), c.threads, [&](std::size_t i) {
          const auto t = static_cast<std::size_t>(start) + i;
          const EstimateSet est = estimate_alg1(truths[t], k, cov, rounds * static_cast<int64_t>(cov.size()),
                                                RunOptions{c.seed, derive_stream(k_stream, t), 1});
          return static_cast<char>(est.max_abs_error(truths[t]) <= c.epsilon);
        });
        for (char h : hits) {
          (h ? ok : bad)++;
        }
        run += count;
        if (bad > allowed_failures || ok >= need) {
          break;
        }
      }
      return Eval{bad <= allowed_failures, static_cast<double>(ok) / run, run};
    };
    SweepRow row;
    row.k = k;
    row.covering_size = cov.size();
    row.required = required_samples(c.n, k, c.epsilon, sweep_delta, cov.size());
    int64_t hi = row.required / static_cast<int64_t>(cov.size());
    Eval at_hi = evaluate(hi);
    for (int d = 0; !at_hi.pass && d < kSweepMaxDoublings; d++) {
      hi *= 2;
      at_hi = evaluate(hi);
    }
    if (!at_hi.pass) {
      row.n_min = -1;
      row.success_rate = at_hi.rate;
      row.trials_run = at_hi.trials_run;
      rows.push_back(row);
      continue;
    }
    int64_t lo = 0;  // zero rounds always fails
    while (hi - lo > 1) {
      const int64_t mid = lo + (hi - lo) / 2;
      Eval e = evaluate(mid);
      if (e.pass) {
        hi = mid;
        at_hi = e;
      } else {
        lo = mid;
      }
    }
    row.rounds_per_group = hi;
    row.n_min = hi * static_cast<int64_t>(cov.size());
    row.success_rate = at_hi.rate;
    row.trials_run = at_hi.trials_run;
    rows.push_back(row);
  }
  return rows;
}

namespace {

// Span of GF(2) vectors, reduced by leading bit.
struct XorBasis {
  uint64_t rows[64] = {};
  int rank = 0;
  bool insert(uint64_t v) {
    for (int b = 63; b >= 0 && v; b--) {
      if (!((v >> b) & 1U)) {
        continue;
      }
      if (!rows[b]) {
        rows[b] = v;
        rank++;
        return true;
      }
      v ^= rows[b];
    }
    return false;
  }
};

// Error label of the hypothesis channel: uniform (completely depolarizing)
// or uniform over labels commuting with a, which is spike(n, a, +1).
uint64_t draw_error(bool spike, uint64_t a, int n, Rng& rng) {
  for (;;) {
    const uint64_t c = rng.bits(2 * n);
    if (!spike || !symplectic_bits(a, c)) {
      return c;
    }
  }
}

}  // namespace

// Posterior bookkeeping. With prior 1/2 on "dep" and 1/(2(4^n - 1)) on each
// a, the likelihood ratio of a versus dep after h informative shots that a
// survived is 2^h, so
//   P(dep | data) = 1 / (1 + sum_a alive_a 2^(h_a) / (4^n - 1)).
// Candidates sharing a measurement basis share h, and the live ones form the
// nonzero part of an orthogonal complement, so counts come from ranks.
DiscriminationTrial discriminate_trial(const std::string& mode, int n, double confidence, int64_t max_shots,
                                       Rng& rng) {
  DiscriminationTrial trial;
  trial.spike = rng.bits(1) != 0;
  if (trial.spike) {
    do {
      trial.a = rng.bits(2 * n);
    } while (trial.a == 0);
  }
  const double log_labels = std::log2(std::ldexp(1.0, 2 * n) - 1);
  const double odds = confidence / (1 - confidence);
  auto weight = [&](int dim, int rank, int64_t h) {
    const double alive = std::ldexp(1.0, dim - rank) - 1;
    return alive * std::exp2(std::min(1000.0, static_cast<double>(h) - log_labels));
  };

  if (mode == "bell") {
    // k = n: the Bell outcome is the full error label; a survives iff it
    // commutes with every outcome.
    XorBasis span;
    for (int64_t shot = 1; shot <= max_shots; shot++) {
      span.insert(draw_error(trial.spike, trial.a, n, rng));
      const double w = weight(2 * n, span.rank, shot);
      trial.shots = shot;
      if (1 / (1 + w) >= confidence) {
        trial.decided_dep = true;
        trial.correct = !trial.spike;
        return trial;
      }
      if (span.rank == 2 * n - 1 && w >= odds) {
        trial.correct = trial.spike;
        return trial;
      }
    }
    trial.capped = true;
    return trial;
  }

  // k = 0: MUB groups round robin; a in group g with coefficients alpha
  // survives a shot on g iff alpha . e = 0.
  const Covering cov = mub_covering(n);
  const std::size_t groups = cov.size();
  std::vector<XorBasis> spans(groups);
  std::vector<int64_t> hits(groups, 0);
  std::vector<double> terms(groups);
  double total = 0;
  for (std::size_t g = 0; g < groups; g++) {
    terms[g] = weight(n, 0, 0);
    total += terms[g];
  }
  std::set<std::pair<int64_t, std::size_t>> singles;  // (hits, group) with one live candidate
  for (int64_t shot = 1; shot <= max_shots; shot++) {
    const std::size_t g = static_cast<std::size_t>(shot - 1) % groups;
    const uint64_t e = cov.group(g).syndrome_bits(draw_error(trial.spike, trial.a, n, rng));
    if (spans[g].rank == n - 1) {
      singles.erase({hits[g], g});
    }
    spans[g].insert(e);
    hits[g]++;
    if (spans[g].rank == n - 1) {
      singles.insert({hits[g], g});
    }
    const double updated = weight(n, spans[g].rank, hits[g]);
    total += updated - terms[g];
    terms[g] = updated;
    trial.shots = shot;
    if (1 / (1 + total) >= confidence) {
      trial.decided_dep = true;
      trial.correct = !trial.spike;
      return trial;
    }
    if (!singles.empty()) {
      const auto best = *singles.rbegin();
      const double w = weight(n, n - 1, best.first);
      if (w / (1 + total) >= confidence) {
        trial.correct = trial.spike && cov.group(best.second).contains(PauliLabel(trial.a, n));
        return trial;
      }
    }
  }
  trial.capped = true;
  return trial;
}

std::vector<DiscriminationRow> run_discriminate(const ExperimentConfig& c) {
  std::vector<DiscriminationRow> rows;
  for (std::size_t mi = 0; mi < c.modes.size(); mi++) {
    const std::string& mode = c.modes[mi];
    const uint64_t mode_stream = derive_stream(kDiscriminateStream, mode == "bell" ? 0 : 1);
    for (int n : c.n_list) {
      const uint64_t stream = derive_stream(mode_stream, static_cast<uint64_t>(n));
      auto trials = parallel_map<DiscriminationTrial>(static_cast<std::size_t>(c.trials), c.threads, [&](std::size_t t) {
        Rng rng = Rng::for_stream(c.seed, stream, t);
        return discriminate_trial(mode, n, c.confidence, c.max_shots, rng);
      });
      for (const char* hyp : {"dep", "spike", "all"}) {
        DiscriminationRow row;
        row.mode = mode;
        row.n = n;
        row.hypothesis = hyp;
        std::vector<double> shots;
        int correct = 0;
        for (const auto& t : trials) {
          const bool keep = std::string(hyp) == "all" || (std::string(hyp) == "spike") == t.spike;
          if (!keep) {
            continue;
          }
          shots.push_back(static_cast<double>(t.shots));
          correct += t.correct;
          row.capped += t.capped;
        }
        row.trials = static_cast<int>(shots.size());
        if (!shots.empty()) {
          row.success_rate = static_cast<double>(correct) / static_cast<double>(shots.size());
          row.median_shots = median_of(shots);
          double sum = 0, sq = 0;
          for (double s : shots) {
            sum += s;
            sq += s * s;
          }
          row.mean_shots = sum / static_cast<double>(shots.size());
          const double var = std::max(0.0, sq / static_cast<double>(shots.size()) - row.mean_shots * row.mean_shots);
          row.mean_stderr = std::sqrt(var / static_cast<double>(shots.size()));
          std::sort(shots.begin(), shots.end());
          const auto idx = static_cast<std::size_t>(std::ceil(0.9 * static_cast<double>(shots.size()))) - 1;
          row.p90_shots = static_cast<int64_t>(shots[std::min(idx, shots.size() - 1)]);
        } else {
          row.median_shots = row.mean_shots = row.mean_stderr = std::numeric_limits<double>::quiet_NaN();
        }
        rows.push_back(row);
      }
    }
  }
  return rows;
}

BenchmarkRun run_benchmark(const ExperimentConfig& c) {
  Rng rng0 = Rng::for_stream(c.seed, kChannelStream, 0);
  Rng rng1 = Rng::for_stream(c.seed, kChannelStream, 1);
  Rng rng2 = Rng::for_stream(c.seed, kChannelStream, 2);
  PauliChannel gate = build_channel(*c.gate, c.n, rng0);
  PauliChannel prep = c.prep ? build_channel(*c.prep, c.n, rng1) : channels::identity(c.n);
  PauliChannel meas = c.meas ? build_channel(*c.meas, c.n, rng2) : channels::identity(c.n);
  BenchmarkRun run{gate, {}, {}};
  const NoiseModel model(gate, prep, meas);
  run.base = benchmark_alg2(model, c.lengths, c.repetitions,
                            RunOptions{c.seed, derive_stream(kBenchmarkStream, 0), c.threads}, c.labels);
  for (std::size_t i = 0; i < c.spam_sweep.size(); i++) {
    const double s = c.spam_sweep[i];
    const NoiseModel noisy(gate, channels::depolarizing(c.n, s), channels::depolarizing(c.n, s));
    run.spam.push_back(SpamPoint{s, benchmark_alg2(noisy, c.lengths, c.repetitions,
                                                   RunOptions{c.seed, derive_stream(kBenchmarkStream, i + 1), c.threads},
                                                   c.labels)});
  }
  return run;
}

namespace {

CheckResult check_wht(int per_n, Rng& rng) {
  CheckResult r{"wht_round_trip", true, 0, 1e-12, ""};
  for (int n = 1; n <= 6; n++) {
    for (int t = 0; t < per_n; t++) {
      const PauliChannel ch = channels::random_dirichlet(n, rng);
      const auto p = ch.error_rates();
      const auto back = wht_inverse(wht_forward(p));
      for (std::size_t i = 0; i < back.size(); i++) {
        r.deviation = std::max(r.deviation, std::abs(back[i] - p[i]));
      }
    }
  }
  r.passed = r.deviation < r.tolerance;
  r.detail = std::to_string(per_n) + " channels per n in 1..6";
  return r;
}

CheckResult check_coverings(bool inject_fault) {
  CheckResult r{"covering", true, 0, 0, ""};
  std::ostringstream detail;
  int checked = 0;
  for (int m = 0; m <= 6; m++) {
    Covering cov = mub_covering(m);
    if (inject_fault && m == 3) {
      std::vector<StabilizerGroup> groups(cov.groups().begin(), cov.groups().end() - 1);
      cov = Covering(m, CoveringKind::kCustom, std::move(groups));
    }
    const CoveringReport rep = verify_covering(cov);
    const std::size_t want = m == 0 ? 1 : (std::size_t{1} << m) + 1;
    checked++;
    if (!rep.ok || cov.size() != want) {
      r.passed = false;
      r.deviation += static_cast<double>(rep.uncovered.size());
      detail << "mub m=" << m << ": " << cov.size() << " groups, " << rep.uncovered.size() << " uncovered";
      for (std::size_t i = 0; i < rep.uncovered.size() && i < 8; i++) {
        detail << (i ? " " : " [") << rep.uncovered[i].str();
      }
      if (!rep.uncovered.empty()) {
        detail << (rep.uncovered.size() > 8 ? " ...]" : "]");
      }
      for (const auto& e : rep.group_errors) {
        detail << "; " << e;
      }
      detail << "; ";
    }
  }
  std::size_t groups = 1;
  for (int m = 1; m <= 5; m++) {
    groups *= 3;
    const Covering cov = pauli_basis_covering(m);
    const CoveringReport rep = verify_covering(cov);
    checked++;
    if (!rep.ok || cov.size() != groups) {
      r.passed = false;
      r.deviation += static_cast<double>(rep.uncovered.size());
      detail << "pauli-basis m=" << m << " failed; ";
    }
  }
  r.detail = r.passed ? std::to_string(checked) + " coverings valid" : detail.str();
  return r;
}

CheckResult check_oracle(int per_case, Rng& rng) {
  CheckResult r{"oracle_equivalence", true, 0, 1e-10, ""};
  int cases = 0;
  for (int n = 1; n <= 3; n++) {
    for (int k = 0; k <= n; k++) {
      const Covering cov = mub_covering(n - k);
      for (int t = 0; t < per_case; t++) {
        const PauliChannel ch = channels::random_dirichlet(n, rng);
        for (const auto& g : cov.groups()) {
          const auto fast = outcome_distribution_alg1(ch, k, g).dense_table();
          const auto brute = dense::alg1_distribution_dense(ch, k, g);
          const auto walsh = dense::alg1_distribution_walsh(ch, k, g);
          for (std::size_t i = 0; i < fast.size(); i++) {
            r.deviation = std::max({r.deviation, std::abs(fast[i] - brute[i]), std::abs(fast[i] - walsh[i])});
          }
          cases++;
        }
      }
    }
  }
  r.passed = r.deviation <= r.tolerance;
  r.detail = std::to_string(cases) + " (channel, group) cases, n <= 3";
  return r;
}

CheckResult check_information_bound(int per_case, Rng& rng) {
  CheckResult r{"information_bound", true, -std::numeric_limits<double>::infinity(), 1e-9, ""};
  int violations = 0, total = 0;
  double worst_ratio = 0;
  for (int n = 1; n <= 2; n++) {
    for (int k : {0, n}) {
      for (int t = 0; t < per_case; t++) {
        // Alternate orthonormal bases and overcomplete frames.
        const std::size_t outcomes = t % 2 ? 0 : (std::size_t{1} << (n + k)) + static_cast<std::size_t>(t % 7);
        const dense::Strategy s = dense::random_strategy(n, k, outcomes, rng);
        const dense::MutualInfoResult m = dense::mutual_info_check(s);
        r.deviation = std::max(r.deviation, m.information - m.bound);
        worst_ratio = std::max(worst_ratio, m.information / m.bound);
        violations += !m.within_bound;
        total++;
      }
    }
  }
  r.passed = violations == 0;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%d violations over %d strategies; max I/bound = %.4f", violations, total,
                worst_ratio);
  r.detail = buf;
  return r;
}

CheckResult check_teleport(int per_n, Rng& rng) {
  CheckResult r{"teleportation", true, 0, 1e-10, ""};
  std::normal_distribution<double> normal;
  for (int n = 1; n <= 2; n++) {
    for (int t = 0; t < per_n; t++) {
      const PauliChannel ch = channels::random_dirichlet(n, rng);
      const dense::DenseState choi = dense::choi_state(ch);
      dense::Vector psi(Eigen::Index{1} << n);
      for (Eigen::Index i = 0; i < psi.size(); i++) {
        const double re = normal(rng);
        psi(i) = dense::Complex(re, normal(rng));
      }
      const dense::DenseState rho = dense::DenseState::pure(psi.normalized());
      const dense::Matrix expected = dense::DenseChannel::from_pauli(ch).apply(rho.matrix());
      for (const auto& b : dense::teleport_branches(choi, rho)) {
        r.deviation = std::max(r.deviation, std::abs(b.probability - std::ldexp(1.0, -2 * n)));
        r.deviation = std::max(r.deviation, (b.state - expected).cwiseAbs().maxCoeff());
      }
    }
  }
  r.passed = r.deviation <= r.tolerance;
  r.detail = std::to_string(per_n) + " channels per n in {1, 2}, every branch";
  return r;
}

CheckResult check_benchmark_oracle(Rng& rng) {
  CheckResult r{"benchmark_oracle", true, 0, 1e-9, ""};
  for (int n = 1; n <= 2; n++) {
    const NoiseModel model(channels::random_dirichlet(n, rng), channels::depolarizing(n, 0.05),
                           channels::random_dirichlet(n, rng));
    const auto dm = dense::DenseNoiseModel::from_pauli(model);
    for (int m = 0; m <= 4; m++) {
      const auto e = dense::alg2_expectations_dense(dm, m);
      for (std::size_t a = 0; a < e.size(); a++) {
        r.deviation = std::max(r.deviation, std::abs(e[a] - model.expected_statistic(PauliLabel(a, n), m)));
      }
    }
  }
  const auto ad = dense::DenseChannel::amplitude_damping(0.2);
  const auto dm = dense::DenseNoiseModel::with_spam(
      ad, dense::DenseChannel::from_pauli(channels::depolarizing(1, 0.05)), dense::DenseChannel::amplitude_damping(0.1));
  for (int m = 0; m <= 4; m++) {
    const auto e = dense::alg2_expectations_dense(dm, m);
    for (uint64_t a = 0; a < 4; a++) {
      const PauliLabel label(a, 1);
      const double closed = dense::spam_constant_dense(dm, label) * std::pow(ad.twirl_eigenvalue(label), m);
      r.deviation = std::max(r.deviation, std::abs(e[a] - closed));
    }
  }
  r.passed = r.deviation <= r.tolerance;
  r.detail = "Pauli noise n <= 2 and amplitude damping n = 1, m <= 4";
  return r;
}

}  // namespace

std::vector<CheckResult> run_verify(const ExperimentConfig& c) {
  const bool full = c.level == "full";
  std::vector<CheckResult> out;
  Rng rng = Rng::for_stream(c.seed, kVerifyStream, 0);
  out.push_back(check_wht(full ? 100 : 10, rng));
  out.push_back(check_coverings(c.inject_fault == "covering"));
  out.push_back(check_oracle(full ? 20 : 3, rng));
  out.push_back(check_information_bound(full ? 500 : 50, rng));
  out.push_back(check_teleport(full ? 20 : 5, rng));
  out.push_back(check_benchmark_oracle(rng));
  return out;
}

namespace {

Table estimates_table(const EstimateSet& est) {
  Table t{"estimates", {"label", "lambda_hat", "n_shots", "stderr"}, {}};
  t.rows.reserve(est.size());
  for (std::size_t i = 0; i < est.size(); i++) {
    t.rows.push_back({est.label(i).str(), est.lambda_hat(i), est.shots(i), est.stderr_at(i)});
  }
  return t;
}

Table decay_table(const std::vector<DecaySeries>& series) {
  Table t{"decay", {"label", "m", "f_mean", "shots"}, {}};
  for (const auto& s : series) {
    const std::string label = s.label.str();
    for (const auto& p : s.points) {
      t.rows.push_back({label, static_cast<int64_t>(p.m), p.f_mean, p.shots});
    }
  }
  return t;
}

Table fits_table(const BenchmarkResult& r) {
  Table t{"fits",
          {"label", "amplitude", "rate", "amplitude_stderr", "rate_stderr", "points_used", "residual_norm", "error"},
          {}};
  for (std::size_t i = 0; i < r.series.size(); i++) {
    const DecayFit& f = r.fits[i];
    const bool ok = r.fit_errors[i].empty();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    t.rows.push_back({r.series[i].label.str(), ok ? f.amplitude : nan, ok ? f.rate : nan,
                      ok ? f.amplitude_stderr : nan, ok ? f.rate_stderr : nan,
                      static_cast<int64_t>(ok ? f.points_used : 0), ok ? f.residual_norm : nan,
                      r.fit_errors[i]});
  }
  return t;
}

std::string decay_plot_script(const BenchmarkResult& r, std::size_t max_labels) {
  std::ostringstream s;
  s << "# gnuplot -p decay.gp\n"
    << "set datafile separator ','\n"
    << "set datafile commentschars '#'\n"
    << "set key outside\n"
    << "set logscale y\n"
    << "set xlabel 'm'\n"
    << "set ylabel 'mean F'\n"
    << "labels = \"";
  std::size_t shown = 0;
  for (std::size_t i = 1; i < r.series.size() && shown < max_labels; i++, shown++) {
    s << (shown ? " " : "") << r.series[i].label.str();
  }
  s << "\"\n"
    << "plot for [l in labels] 'decay.csv' using 2:(strcol(1) eq l ? $3 : 1/0) every ::1 with linespoints title l\n";
  return s.str();
}

std::string sweep_plot_script() {
  return "# gnuplot -p sweep.gp\n"
         "set datafile separator ','\n"
         "set datafile commentschars '#'\n"
         "set logscale y\n"
         "set xlabel 'ancilla qubits k'\n"
         "set ylabel 'N_min'\n"
         "plot 'sweep.csv' using 1:3 every ::1 with linespoints title 'measured', \\\n"
         "     'sweep.csv' using 1:4 every ::1 with lines title 'Hoeffding bound'\n";
}

// Short form for human-facing summary lines; tables keep full precision.
std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

}  // namespace

CommandOutput run_command(const ExperimentConfig& c) {
  CommandOutput out;
  if (c.experiment == "estimate") {
    const EstimateRun run = run_estimate(c);
    out.tables.push_back(estimates_table(run.estimates));
    out.summary.emplace_back("samples", std::to_string(run.samples));
    out.summary.emplace_back("covering_size", std::to_string(run.covering_size));
    out.summary.emplace_back("max_abs_error", fmt(run.estimates.max_abs_error(run.truth)));
  } else if (c.experiment == "sweep_ancilla") {
    const auto rows = run_sweep_ancilla(c);
    Table t{"sweep", {"k", "covering_size", "n_min", "required_samples", "rounds_per_group", "success_rate",
                      "success_stderr", "trials_run"}, {}};
    for (const auto& r : rows) {
      const double se = std::sqrt(std::max(0.0, r.success_rate * (1 - r.success_rate)) / std::max(1, r.trials_run));
      t.rows.push_back({static_cast<int64_t>(r.k), static_cast<int64_t>(r.covering_size), r.n_min, r.required,
                        r.rounds_per_group, r.success_rate, se, static_cast<int64_t>(r.trials_run)});
    }
    out.tables.push_back(std::move(t));
    for (std::size_t i = 1; i < rows.size(); i++) {
      if (rows[i - 1].n_min > 0 && rows[i].n_min > 0) {
        out.summary.emplace_back("ratio_k" + std::to_string(rows[i - 1].k) + "_k" + std::to_string(rows[i].k),
                                 fmt(static_cast<double>(rows[i - 1].n_min) / static_cast<double>(rows[i].n_min)));
      }
    }
    if (c.plot) {
      out.files.emplace_back("sweep.gp", sweep_plot_script());
    }
  } else if (c.experiment == "discriminate") {
    const auto rows = run_discriminate(c);
    Table t{"discriminate", {"mode", "n", "hypothesis", "trials", "success_rate", "median_shots", "mean_shots",
                             "mean_stderr", "p90_shots", "capped"}, {}};
    for (const auto& r : rows) {
      t.rows.push_back({r.mode, static_cast<int64_t>(r.n), r.hypothesis, static_cast<int64_t>(r.trials),
                        r.success_rate, r.median_shots, r.mean_shots, r.mean_stderr, r.p90_shots,
                        static_cast<int64_t>(r.capped)});
    }
    out.tables.push_back(std::move(t));
  } else if (c.experiment == "benchmark") {
    const BenchmarkRun run = run_benchmark(c);
    out.tables.push_back(estimates_table(run.base.estimates));
    out.tables.push_back(decay_table(run.base.series));
    out.tables.push_back(fits_table(run.base));
    if (!run.spam.empty()) {
      Table t{"spam_sweep", {"spam", "label", "lambda_hat", "stderr", "fit_error"}, {}};
      for (const auto& p : run.spam) {
        for (std::size_t i = 0; i < p.result.estimates.size(); i++) {
          t.rows.push_back({p.strength, p.result.estimates.label(i).str(), p.result.estimates.lambda_hat(i),
                            p.result.estimates.stderr_at(i), static_cast<int64_t>(!p.result.fit_errors[i].empty())});
        }
      }
      out.tables.push_back(std::move(t));
    }
    int failed = 0;
    for (const auto& e : run.base.fit_errors) {
      failed += !e.empty();
    }
    out.summary.emplace_back("fit_errors", std::to_string(failed));
    {
      double worst = 0;
      for (std::size_t i = 0; i < run.base.estimates.size(); i++) {
        if (run.base.fit_errors[i].empty()) {
          worst = std::max(worst, std::abs(run.base.estimates.lambda_hat(i) -
                                           run.gate.eigenvalue(run.base.estimates.label(i))));
        }
      }
      out.summary.emplace_back("max_abs_error", fmt(worst));
    }
    if (c.plot) {
      out.files.emplace_back("decay.gp", decay_plot_script(run.base, 8));
    }
  } else if (c.experiment == "verify") {
    const auto checks = run_verify(c);
    Table t{"verify", {"check", "status", "deviation", "tolerance", "detail"}, {}};
    bool all = true;
    for (const auto& r : checks) {
      t.rows.push_back({r.name, std::string(r.passed ? "pass" : "FAIL"), r.deviation, r.tolerance,
                        r.detail});
      all = all && r.passed;
      out.summary.emplace_back(r.name, std::string(r.passed ? "PASS" : "FAIL") + "  deviation=" + fmt(r.deviation) +
                                           " tolerance=" + fmt(r.tolerance) + "  " + r.detail);
    }
    out.tables.push_back(std::move(t));
    out.exit_code = all ? kExitOk : kExitVerification;
  } else {
    throw UsageError("unknown experiment '" + c.experiment + "'");
  }
  return out;
}

}  // namespace pce::experiments
