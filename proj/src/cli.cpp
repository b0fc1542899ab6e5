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


#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pce/error.hpp"
#include "pce/experiments.hpp"
#include "pce/io.hpp"

#ifndef PCE_GIT_DESCRIBE
#define PCE_GIT_DESCRIBE "unknown"
#endif
#ifndef PCE_VERSION
#define PCE_VERSION "0.0.0"
#endif

namespace pce::experiments {

namespace {

using nlohmann::json;

const std::map<std::string, std::string> kSubcommands = {
    {"estimate", "estimate"},         {"sweep-ancilla", "sweep_ancilla"}, {"discriminate", "discriminate"},
    {"benchmark", "benchmark"},       {"verify", "verify"},               {"run", ""},
};

int write_outputs(const ExperimentConfig& config, const std::string& command, const CommandOutput& result,
                  double seconds, std::ostream& out) {
  namespace fs = std::filesystem;
  const fs::path dir(config.output);
  fs::create_directories(dir);
  const std::vector<std::string> comments = {"config_hash=" + config.config_hash,
                                             "seed=" + std::to_string(config.seed),
                                             std::string("git_describe=") + PCE_GIT_DESCRIBE};
  json outputs = json::array();
  for (const auto& table : result.tables) {
    const std::string name = table.name + "." + config.format;
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) {
      throw UsageError("cannot write " + (dir / name).string());
    }
    if (config.format == "json") {
      write_table_json(f, table, comments);
    } else {
      write_table_csv(f, table, comments);
    }
    outputs.push_back(name);
  }
  for (const auto& [name, text] : result.files) {
    write_text_file((dir / name).string(), text);
    outputs.push_back(name);
  }

  json meta;
  meta["schema"] = 1;
  meta["command"] = command;
  meta["config"] = json::parse(config.canonical);
  meta["config"]["threads"] = config.threads;
  meta["config"]["output"] = config.output;
  meta["config_hash"] = config.config_hash;
  meta["seed"] = config.seed;
  meta["threads"] = config.threads;
  meta["git_describe"] = PCE_GIT_DESCRIBE;
  meta["version"] = PCE_VERSION;
  meta["timings"] = {{"total_seconds", seconds}};
  meta["outputs"] = outputs;
  json summary = json::object();
  for (const auto& [k, v] : result.summary) {
    summary[k] = v;
  }
  meta["summary"] = summary;
  write_text_file((dir / "metadata.json").string(), meta.dump(2) + "\n");

  for (const auto& [k, v] : result.summary) {
    out << k << ": " << v << '\n';
  }
  out << "wrote " << outputs.size() << " output(s) to " << dir.string() << '\n';
  return result.exit_code;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pauli channel eigenvalue estimation experiments", "pce"};
  app.require_subcommand(1, 1);
  std::string config_path;
  std::optional<uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> output, format, level, inject_fault;
  for (const auto& [name, experiment] : kSubcommands) {
    CLI::App* sub = app.add_subcommand(name, experiment.empty() ? "run the experiment named in the config"
                                                                : "run the " + name + " experiment");
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--seed", seed, "root seed (overrides config)");
    sub->add_option("--threads", threads, "worker threads (overrides config)")->check(CLI::PositiveNumber);
    sub->add_option("--out", output, "output directory (overrides config)");
    sub->add_option("--format", format, "table format")->check(CLI::IsMember({"csv", "json"}));
    if (name == "verify") {
      sub->add_option("--level", level, "quick or full")->check(CLI::IsMember({"quick", "full"}));
      sub->add_option("--inject-fault", inject_fault, "deliberately break a check")
          ->check(CLI::IsMember({"covering"}));
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    Overrides o;
    const std::string& experiment = kSubcommands.at(command);
    if (!experiment.empty()) {
      o.experiment = experiment;
    }
    o.seed = seed;
    o.threads = threads;
    o.output = output;
    o.format = format;
    o.level = level;
    o.inject_fault = inject_fault;
    std::string text;
    if (!config_path.empty()) {
      text = read_text_file(config_path);
    } else if (command == "verify") {
      text = "{}";
    } else {
      throw UsageError(command + " needs --config FILE");
    }
    const ExperimentConfig config = parse_config(text, o);
    const auto start = std::chrono::steady_clock::now();
    const CommandOutput result = run_command(config);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return write_outputs(config, command, result, seconds, out);
  } catch (const std::invalid_argument& e) {
    // UsageError and ParseError.
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const CapabilityError& e) {
    err << "unsupported: " << e.what() << '\n';
    return kExitCapability;
  }
}

}  // namespace pce::experiments
