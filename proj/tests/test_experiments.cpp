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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pce/error.hpp"
#include "pce/io.hpp"

using namespace pce;
using namespace pce::experiments;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("pce_test_experiments_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

int cli(const std::vector<std::string>& args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
  std::vector<const char*> argv{"pce"};
  for (const auto& a : args) {
    argv.push_back(a.c_str());
  }
  std::ostringstream out, err;
  int rc = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return rc;
}

std::string csv_of(const Table& t) {
  std::ostringstream ss;
  write_table_csv(ss, t, {});
  return ss.str();
}

}  // namespace

TEST(config, rejects_unknown_fields) {
  EXPECT_THROW(parse_config(R"({"experiment":"verify","bogus":1})"), UsageError);
  EXPECT_THROW(parse_config(R"({"experiment":"estimate","n":2,"channel":{"type":"identity","rate":0.1}})"),
               UsageError);
  EXPECT_THROW(parse_config(R"({"experiment":"estimate","n":2,"channel":{"type":"tensor","factors":[
                 {"type":"identity","n":1},{"type":"identity","n":1,"extra":true}]}})"),
               UsageError);
  EXPECT_THROW(parse_config(R"({"experiment":"nope"})"), UsageError);
  EXPECT_THROW(parse_config(R"({"n":2})"), UsageError);
}

TEST(config, rejects_bad_values) {
  EXPECT_THROW(parse_config(R"({"experiment":"estimate","n":2})"), UsageError);
  EXPECT_THROW(parse_config(R"({"experiment":"estimate","n":2,"k":3,"channel":{"type":"identity"}})"), UsageError);
  EXPECT_THROW(parse_config(R"({"experiment":"estimate","n":"2","channel":{"type":"identity"}})"), UsageError);
  EXPECT_THROW(parse_config(R"({"experiment":"estimate","n":2,"epsilon":0,"channel":{"type":"identity"}})"),
               UsageError);
  EXPECT_THROW(parse_config(R"({"experiment":"estimate","n":2,"channel":{"type":"depolarizing","rate":1.5}})"),
               UsageError);
  EXPECT_THROW(parse_config(R"({"experiment":"estimate","n":2,"channel":{"type":"identity","n":3}})"), UsageError);
  EXPECT_THROW(parse_config(R"({"experiment":"estimate","n":2,"channel":{"type":"spike","label":"XQ"}})"),
               std::invalid_argument);
  EXPECT_THROW(parse_config(R"({"experiment":"discriminate","n_list":[2],"modes":["bel"]})"), UsageError);
  EXPECT_THROW(parse_config(R"({"experiment":"benchmark","n":1,"gate":{"type":"identity"},"lengths":[2,1]})"),
               UsageError);
  EXPECT_THROW(parse_config(R"({"experiment":"verify","seed":-1})"), UsageError);
  EXPECT_THROW(parse_config(R"({"experiment":"verify","format":"xml"})"), UsageError);
  EXPECT_THROW(parse_config("{not json"), UsageError);
  Overrides o;
  o.experiment = "benchmark";
  EXPECT_THROW(parse_config(R"({"experiment":"verify"})", o), UsageError);
}

TEST(config, defaults_and_overrides) {
  Overrides o;
  o.seed = 99;
  o.threads = 3;
  ExperimentConfig c = parse_config(
      R"({"experiment":"estimate","n":3,"k":1,"channel":{"type":"depolarizing","rate":0.1},"covering":"pauli-basis"})",
      o);
  EXPECT_EQ(c.seed, 99u);
  EXPECT_EQ(c.threads, 3);
  EXPECT_EQ(c.covering, CoveringKind::kPauliBasis);
  EXPECT_DOUBLE_EQ(c.epsilon, 0.1);
  EXPECT_DOUBLE_EQ(c.delta, 0.05);
  ASSERT_TRUE(c.channel.has_value());
  EXPECT_EQ(c.channel->type, "depolarizing");
  EXPECT_DOUBLE_EQ(c.channel->rate, 0.1);
}

TEST(config, hash_ignores_threads_and_output) {
  const std::string base = R"({"experiment":"verify","seed":4)";
  auto a = parse_config(base + "}");
  auto b = parse_config(base + R"(,"threads":8,"output":"elsewhere"})");
  auto c = parse_config(R"({"seed":4,"experiment":"verify"})");
  auto d = parse_config(R"({"experiment":"verify","seed":5})");
  EXPECT_EQ(a.config_hash, b.config_hash);
  EXPECT_EQ(a.config_hash, c.config_hash);  // key order is canonicalized
  EXPECT_NE(a.config_hash, d.config_hash);
  EXPECT_EQ(a.config_hash.rfind("fnv1a64:", 0), 0u);
}

TEST(config, fnv1a64_reference_values) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(build_channel, tensor_and_file) {
  ExperimentConfig c = parse_config(R"({"experiment":"estimate","n":3,"channel":{"type":"tensor","factors":[
      {"type":"depolarizing","n":1,"rate":0.3},{"type":"spike","label":"XZ","sign":-1}]}})");
  Rng rng(1);
  PauliChannel ch = build_channel(*c.channel, c.n, rng);
  ASSERT_EQ(ch.num_qubits(), 3);
  // lambda of a product label is a product of factor eigenvalues.
  const double dep_x = 1 - 0.3 * 4.0 / 3.0;
  EXPECT_NEAR(ch.eigenvalue(PauliLabel::parse("XXI")), dep_x * 0, 1e-12);
  EXPECT_NEAR(ch.eigenvalue(PauliLabel::parse("XXZ")), dep_x * -1, 1e-12);
  EXPECT_NEAR(ch.eigenvalue(PauliLabel::parse("III")), 1, 1e-12);

  auto dir = scratch("file");
  write_text_file((dir / "ch.json").string(), channel_to_json(channels::depolarizing(2, 0.2)));
  ChannelSpec spec;
  spec.type = "file";
  spec.path = (dir / "ch.json").string();
  EXPECT_NEAR(build_channel(spec, 2, rng).eigenvalue(PauliLabel::parse("XY")), 1 - 0.2 * 16.0 / 15.0, 1e-12);
  EXPECT_THROW(build_channel(spec, 3, rng), UsageError);
}

TEST(tables, csv_quoting_and_json) {
  Table t{"t", {"a", "b", "c"}, {{std::string("x,y"), int64_t{3}, 0.5}, {std::string("q\"r"), int64_t{-1}, NAN}}};
  EXPECT_EQ(csv_of(t), "a,b,c\n\"x,y\",3,0.5\n\"q\"\"r\",-1,nan\n");
  std::ostringstream js;
  write_table_json(js, t, {"seed=1"});
  EXPECT_NE(js.str().find("null"), std::string::npos);
  EXPECT_NE(js.str().find("seed=1"), std::string::npos);
}

TEST(estimate, identity_channel_gives_ones) {
  auto c = parse_config(R"({"experiment":"estimate","n":3,"k":1,"channel":{"type":"identity"},"samples":500})");
  EstimateRun run = run_estimate(c);
  EXPECT_EQ(run.covering_size, 5u);
  for (std::size_t i = 0; i < run.estimates.size(); i++) {
    EXPECT_EQ(run.estimates.lambda_hat(i), 1.0) << run.estimates.label(i).str();
  }
}

TEST(estimate, default_sample_count_and_accuracy) {
  auto c = parse_config(
      R"({"experiment":"estimate","n":2,"k":1,"channel":{"type":"random_dirichlet"},"epsilon":0.1,"seed":3})");
  EstimateRun run = run_estimate(c);
  EXPECT_EQ(run.samples, required_samples(2, 1, 0.1, 0.05, 3));
  EXPECT_LE(run.estimates.max_abs_error(run.truth), 0.1);
}

TEST(estimate, thread_count_does_not_change_tables) {
  const std::string text =
      R"({"experiment":"estimate","n":4,"k":2,"channel":{"type":"random_dirichlet"},"samples":200000,"seed":11})";
  Overrides one, four;
  one.threads = 1;
  four.threads = 4;
  auto a = run_command(parse_config(text, one));
  auto b = run_command(parse_config(text, four));
  ASSERT_EQ(a.tables.size(), 1u);
  EXPECT_EQ(csv_of(a.tables[0]), csv_of(b.tables[0]));
}

TEST(sweep, fewer_samples_with_more_ancilla) {
  auto c = parse_config(
      R"({"experiment":"sweep_ancilla","n":2,"k_list":[0,2],"epsilon":0.25,"trials":20,"seed":2})");
  auto rows = run_sweep_ancilla(c);
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& r : rows) {
    ASSERT_GT(r.n_min, 0) << "k=" << r.k;
    EXPECT_EQ(r.n_min, r.rounds_per_group * static_cast<int64_t>(r.covering_size));
    EXPECT_LE(r.n_min, r.required);
    EXPECT_GE(r.success_rate, 0.9);
  }
  EXPECT_EQ(rows[0].covering_size, 5u);
  EXPECT_EQ(rows[1].covering_size, 1u);
  EXPECT_GT(rows[0].n_min, rows[1].n_min);

  // Minimality: one round fewer per group must fail, rerun through the same
  // streams with a single worker.
  c.threads = 3;
  auto again = run_sweep_ancilla(c);
  EXPECT_EQ(again[0].n_min, rows[0].n_min);
  EXPECT_EQ(again[1].n_min, rows[1].n_min);
}

namespace {

// Exact posteriors by enumeration over every hypothesis and every error
// label, replaying the trial's draw order.
struct BruteTrial {
  int64_t shots = 0;
  bool decided_dep = false;
  bool identified = false;
  uint64_t best = 0;
  bool spike = false;
  uint64_t a = 0;
};

int sym(uint64_t a, uint64_t b) { return symplectic_bits(a, b); }

BruteTrial brute_trial(const std::string& mode, int n, double confidence, int64_t max_shots, Rng rng) {
  BruteTrial out;
  out.spike = rng.bits(1) != 0;
  if (out.spike) {
    do {
      out.a = rng.bits(2 * n);
    } while (out.a == 0);
  }
  const uint64_t labels = uint64_t{1} << (2 * n);
  const Covering cov = mub_covering(n);
  // log-likelihood relative to dep; -inf once ruled out
  std::vector<double> loglik(labels, 0.0);
  for (int64_t shot = 1; shot <= max_shots; shot++) {
    uint64_t c;
    do {
      c = rng.bits(2 * n);
    } while (out.spike && sym(out.a, c));
    for (uint64_t b = 1; b < labels; b++) {
      // P(outcome | spike b) / P(outcome | dep)
      double ratio;
      if (mode == "bell") {
        ratio = sym(b, c) ? 0.0 : 2.0;
      } else {
        const auto& g = cov.group(static_cast<std::size_t>(shot - 1) % cov.size());
        const uint64_t e = g.syndrome_bits(c);
        int match = 0, total = 0;
        for (uint64_t d = 0; d < labels; d++) {
          if (!sym(b, d)) {
            total++;
            match += g.syndrome_bits(d) == e;
          }
        }
        ratio = static_cast<double>(match) / total * std::ldexp(1.0, n);
      }
      loglik[b] += ratio == 0 ? -INFINITY : std::log(ratio);
    }
    double z = 1;
    for (uint64_t b = 1; b < labels; b++) {
      z += std::exp(loglik[b]) / static_cast<double>(labels - 1);
    }
    out.shots = shot;
    if (1 / z >= confidence) {
      out.decided_dep = true;
      return out;
    }
    for (uint64_t b = 1; b < labels; b++) {
      if (std::exp(loglik[b]) / static_cast<double>(labels - 1) / z >= confidence) {
        out.identified = true;
        out.best = b;
        return out;
      }
    }
  }
  return out;
}

}  // namespace

TEST(discriminate, matches_brute_force_posterior) {
  for (const std::string mode : {"bell", "mub"}) {
    for (int n = 1; n <= 2; n++) {
      for (uint64_t t = 0; t < 60; t++) {
        const Rng rng = Rng::for_stream(17, n, t);
        Rng copy = rng;
        const DiscriminationTrial fast = discriminate_trial(mode, n, 0.9, 10000, copy);
        const BruteTrial slow = brute_trial(mode, n, 0.9, 10000, rng);
        ASSERT_EQ(fast.spike, slow.spike);
        ASSERT_EQ(fast.shots, slow.shots) << mode << " n=" << n << " t=" << t;
        ASSERT_EQ(fast.decided_dep, slow.decided_dep);
        ASSERT_FALSE(fast.capped);
        const bool slow_correct = slow.decided_dep ? !slow.spike
                                                   : (slow.spike && (mode == "bell" ? slow.best == slow.a : true));
        if (mode == "bell" || slow.decided_dep) {
          EXPECT_EQ(fast.correct, slow_correct);
        }
      }
    }
  }
}

TEST(discriminate, bell_grows_linearly_and_mub_exponentially) {
  auto c = parse_config(R"({"experiment":"discriminate","n_list":[2,4,6],"trials":200,"seed":5})");
  auto rows = run_discriminate(c);
  auto median = [&](const std::string& mode, int n) {
    for (const auto& r : rows) {
      if (r.mode == mode && r.n == n && r.hypothesis == "all") return r.median_shots;
    }
    return std::nan("");
  };
  for (const auto& r : rows) {
    EXPECT_EQ(r.capped, 0);
    if (r.hypothesis == "all") {
      EXPECT_GE(r.success_rate, 0.9) << r.mode << " n=" << r.n;
    }
  }
  // Bell: about 2n + O(1) shots, so equal steps in n add equal shot counts.
  const double b2 = median("bell", 2), b4 = median("bell", 4), b6 = median("bell", 6);
  EXPECT_LE(b6 - b4, 1.5 * (b4 - b2) + 2);
  EXPECT_LE(b6, 3 * 6);
  // MUB: every extra qubit roughly doubles the group count.
  const double m2 = median("mub", 2), m4 = median("mub", 4), m6 = median("mub", 6);
  EXPECT_GT(m4, m2);
  EXPECT_GT(m6, m4);
  EXPECT_GE(m6 / m2, 4);
  EXPECT_GT(m6, 10 * b6);
}

TEST(discriminate, cap_is_reported) {
  Rng rng(3);
  int capped = 0;
  for (int t = 0; t < 20; t++) {
    auto trial = discriminate_trial("mub", 6, 0.9, 3, rng);
    capped += trial.capped;
    EXPECT_FALSE(trial.correct && trial.capped);
  }
  EXPECT_EQ(capped, 20);
}

TEST(benchmark, noiseless_gives_exact_ones_and_spam_rows) {
  auto c = parse_config(R"({"experiment":"benchmark","n":2,"gate":{"type":"identity"},"lengths":[0,1,2],
                            "repetitions":50,"spam_sweep":[0.0,0.1]})");
  CommandOutput out = run_command(c);
  ASSERT_EQ(out.tables.size(), 4u);
  EXPECT_EQ(out.tables[0].name, "estimates");
  EXPECT_EQ(out.tables[3].name, "spam_sweep");
  EXPECT_EQ(out.tables[3].rows.size(), 2u * 16u);
  BenchmarkRun run = run_benchmark(c);
  for (std::size_t i = 0; i < run.base.estimates.size(); i++) {
    EXPECT_NEAR(run.base.estimates.lambda_hat(i), 1.0, 1e-12);
  }
}

TEST(verify, quick_level_passes) {
  auto c = parse_config(R"({"experiment":"verify"})");
  for (const auto& r : run_verify(c)) {
    EXPECT_TRUE(r.passed) << r.name << ": " << r.detail;
  }
}

TEST(verify, injected_fault_lists_uncovered_labels) {
  auto c = parse_config(R"({"experiment":"verify","inject_fault":"covering"})");
  auto checks = run_verify(c);
  const CheckResult* cover = nullptr;
  for (const auto& r : checks) {
    if (r.name == "covering") cover = &r;
  }
  ASSERT_NE(cover, nullptr);
  EXPECT_FALSE(cover->passed);
  // Labels only the dropped group held: its nonidentity elements.
  const Covering full = mub_covering(3);
  const auto& dropped = full.groups().back();
  int listed = 0;
  for (uint64_t alpha = 1; alpha < 8; alpha++) {
    const std::string label = dropped.element(alpha).str();
    EXPECT_NE(cover->detail.find(label), std::string::npos) << label << " missing from: " << cover->detail;
    listed++;
  }
  EXPECT_EQ(listed, 7);
  EXPECT_EQ(cover->deviation, 7);
  EXPECT_EQ(run_command(c).exit_code, kExitVerification);
}

TEST(cli, exit_codes) {
  auto dir = scratch("cli");
  std::string out, err;
  write_text_file((dir / "bad.json").string(), R"({"experiment":"estimate","n":2,"wat":1})");
  EXPECT_EQ(cli({"estimate", "--config", (dir / "bad.json").string()}, &out, &err), kExitConfig);
  EXPECT_NE(err.find("wat"), std::string::npos);
  EXPECT_EQ(cli({"estimate", "--bogus-flag"}), kExitConfig);
  EXPECT_EQ(cli({"nonsense"}), kExitConfig);
  EXPECT_EQ(cli({"estimate"}), kExitConfig);
  EXPECT_EQ(cli({"estimate", "--config", (dir / "missing.json").string()}), kExitConfig);
  write_text_file((dir / "big.json").string(),
                  R"({"experiment":"estimate","n":18,"k":0,"covering":"mub","channel":{"type":"identity"},
                      "labels":["XXXXXXXXXXXXXXXXXX"]})");
  EXPECT_EQ(cli({"estimate", "--config", (dir / "big.json").string(), "--out", (dir / "o").string()}, &out, &err),
            kExitCapability);
  EXPECT_EQ(cli({"verify", "--inject-fault", "covering", "--out", (dir / "v").string()}), kExitVerification);
  EXPECT_EQ(cli({"verify", "--out", (dir / "v2").string()}, &out), kExitOk);
  EXPECT_TRUE(std::filesystem::exists(dir / "v2" / "verify.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "v2" / "metadata.json"));
  EXPECT_EQ(cli({"--help"}), kExitOk);
}

TEST(cli, outputs_are_byte_identical_across_threads) {
  auto dir = scratch("threads");
  write_text_file((dir / "c.json").string(),
                  R"({"experiment":"benchmark","n":2,"gate":{"type":"random_dirichlet"},"lengths":[0,1,2,4],
                      "repetitions":3000,"seed":21,"plot":true})");
  ASSERT_EQ(cli({"benchmark", "--config", (dir / "c.json").string(), "--threads", "1", "--out", (dir / "a").string()}),
            kExitOk);
  ASSERT_EQ(cli({"benchmark", "--config", (dir / "c.json").string(), "--threads", "4", "--out", (dir / "b").string()}),
            kExitOk);
  for (const char* f : {"estimates.csv", "decay.csv", "fits.csv", "decay.gp"}) {
    EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "b" / f)) << f;
  }
  const std::string head = slurp(dir / "a" / "estimates.csv");
  EXPECT_EQ(head.rfind("# config_hash=fnv1a64:", 0), 0u);
  EXPECT_NE(head.find("# seed=21\n"), std::string::npos);
  const std::string meta = slurp(dir / "b" / "metadata.json");
  EXPECT_NE(meta.find("\"threads\": 4"), std::string::npos);
  EXPECT_NE(meta.find("\"schema\": 1"), std::string::npos);
}

TEST(cli, run_uses_experiment_from_config_and_json_format) {
  auto dir = scratch("run");
  write_text_file((dir / "c.json").string(),
                  R"({"experiment":"estimate","n":2,"k":2,"channel":{"type":"identity"},"samples":10})");
  ASSERT_EQ(cli({"run", "--config", (dir / "c.json").string(), "--format", "json", "--out", (dir / "o").string()}),
            kExitOk);
  EXPECT_TRUE(std::filesystem::exists(dir / "o" / "estimates.json"));
  EXPECT_EQ(cli({"benchmark", "--config", (dir / "c.json").string()}), kExitConfig);
}
