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


#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pce/channel.hpp"
#include "pce/estimation.hpp"
#include "pce/pauli.hpp"
#include "pce/stabilizer.hpp"

// Experiment drivers behind the command-line tool. Each run_* function is a
// pure function of the parsed config: all randomness is derived from
// config.seed through fixed stream ids, and thread count only affects speed.

namespace pce::experiments {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitCapability = 3,
  kExitVerification = 4,
};

/// Named channel constructor. `n` < 0 means "the experiment's n".
struct ChannelSpec {
  std::string type;
  int n = -1;
  double rate = 0;
  std::string label;
  int sign = 1;
  std::size_t support = 0;
  std::string path;
  std::vector<ChannelSpec> factors;
};

struct ExperimentConfig {
  std::string experiment;
  int n = 0;
  int k = 0;
  std::optional<ChannelSpec> channel;
  std::optional<ChannelSpec> gate;
  std::optional<ChannelSpec> prep;
  std::optional<ChannelSpec> meas;
  CoveringKind covering = CoveringKind::kMub;
  double epsilon = 0.1;
  double delta = 0.05;
  int64_t samples = 0;  // 0: use required_samples(n, k, epsilon, delta, |O|)
  bool clamp = false;
  std::vector<PauliLabel> labels;
  std::vector<int> k_list;
  std::vector<int> n_list;
  int trials = 20;
  double success_rate = 0.9;
  std::vector<int> lengths = default_lengths();
  int64_t repetitions = 10000;
  std::vector<double> spam_sweep;
  std::vector<std::string> modes{"bell", "mub"};
  int64_t max_shots = 1000000;
  double confidence = 0.9;
  std::string level = "quick";
  std::string inject_fault;
  bool plot = false;

  uint64_t seed = 0;
  int threads = 1;
  std::string output = "out";
  std::string format = "csv";

  /// Canonical JSON of every field that affects results (not threads or
  /// output paths), and its FNV-1a hash.
  std::string canonical;
  std::string config_hash;
};

/// Flag values that replace the corresponding config fields.
struct Overrides {
  std::optional<std::string> experiment;
  std::optional<uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> output;
  std::optional<std::string> format;
  std::optional<std::string> level;
  std::optional<std::string> inject_fault;
};

/// Parses and validates a JSON config. Unknown fields, wrong types and
/// out-of-range values throw UsageError; nothing is computed.
ExperimentConfig parse_config(const std::string& json_text, const Overrides& overrides = {});

uint64_t fnv1a64(const std::string& text);

PauliChannel build_channel(const ChannelSpec& spec, int default_n, Rng& rng);
Covering build_covering(CoveringKind kind, int m);

/// Tidy output table; cells print as CSV fields or JSON values.
using Cell = std::variant<std::string, int64_t, double>;
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

void write_table_csv(std::ostream& out, const Table& table, const std::vector<std::string>& comments);
void write_table_json(std::ostream& out, const Table& table, const std::vector<std::string>& comments);

struct CommandOutput {
  std::vector<Table> tables;
  /// Extra text files (name, content), e.g. gnuplot scripts.
  std::vector<std::pair<std::string, std::string>> files;
  /// Key/value lines for stdout and the metadata JSON.
  std::vector<std::pair<std::string, std::string>> summary;
  int exit_code = kExitOk;
};

// --- estimate ---------------------------------------------------------------

struct EstimateRun {
  PauliChannel truth;
  EstimateSet estimates;
  int64_t samples = 0;
  std::size_t covering_size = 0;
};
EstimateRun run_estimate(const ExperimentConfig& config);

// --- sweep over ancilla size -------------------------------------------------

struct SweepRow {
  int k = 0;
  std::size_t covering_size = 0;
  int64_t rounds_per_group = 0;  // N_min / |O|
  int64_t n_min = 0;             // -1 if no tested N succeeded
  int64_t required = 0;          // required_samples at delta = 1 - success_rate
  double success_rate = 0;       // at N_min, over the trials evaluated
  int trials_run = 0;
};
std::vector<SweepRow> run_sweep_ancilla(const ExperimentConfig& config);

// --- hypothesis discrimination -------------------------------------------------

struct DiscriminationRow {
  std::string mode;        // "bell" (k = n) or "mub" (k = 0)
  int n = 0;
  std::string hypothesis;  // "dep", "spike" or "all"
  int trials = 0;
  double success_rate = 0;
  double median_shots = 0;
  double mean_shots = 0;
  double mean_stderr = 0;
  int64_t p90_shots = 0;
  int capped = 0;          // trials that hit max_shots undecided
};

/// Result of one sequential identification trial.
struct DiscriminationTrial {
  bool spike = false;   // true hypothesis
  uint64_t a = 0;       // spike label when spike
  bool decided_dep = false;
  bool correct = false;
  int64_t shots = 0;
  bool capped = false;
};

/// Sequential Bayesian identification between the completely depolarizing
/// channel and spike(n, a, +1) with a uniform, either from Bell outcomes
/// (mode "bell") or from syndromes of MUB groups used round-robin ("mub").
DiscriminationTrial discriminate_trial(const std::string& mode, int n, double confidence, int64_t max_shots,
                                       Rng& rng);
std::vector<DiscriminationRow> run_discriminate(const ExperimentConfig& config);

// --- benchmarking -----------------------------------------------------------

struct SpamPoint {
  double strength = 0;
  BenchmarkResult result;
};
struct BenchmarkRun {
  PauliChannel gate;
  BenchmarkResult base;
  std::vector<SpamPoint> spam;
};
BenchmarkRun run_benchmark(const ExperimentConfig& config);

// --- verification -----------------------------------------------------------

struct CheckResult {
  std::string name;
  bool passed = false;
  double deviation = 0;
  double tolerance = 0;
  std::string detail;
};
std::vector<CheckResult> run_verify(const ExperimentConfig& config);

/// Dispatches on config.experiment and renders tables.
CommandOutput run_command(const ExperimentConfig& config);

/// Full CLI: argument parsing, config loading, output files, exit codes.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pce::experiments
