/*
 * Copyright 2026 The kgrank Authors.
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

// kgrank command-line tool. Every flag maps onto one key of the flat
// experiment configuration; `--config FILE` supplies a base that flags
// override, and `run FILE` executes a configuration file as is.

#include <cstdio>
#include <exception>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kgrank/errors.hpp"
#include "kgrank/experiment.hpp"
#include "kgrank/io.hpp"
#include "nlohmann/json.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

enum class Kind { kString, kNumber, kNumberList };

struct Flag {
  const char* name;  // without leading dashes
  const char* key;
  Kind kind;
  const char* help;
};

// Flags shared by all subcommands.
const Flag kFlags[] = {
    {"train", "train", Kind::kString, "training triples (TSV)"},
    {"valid", "valid", Kind::kString, "validation triples, used for filtering"},
    {"test", "test", Kind::kString, "test triples"},
    {"kg-left", "kg_left", Kind::kString, "left graph triples"},
    {"kg-right", "kg_right", Kind::kString, "right graph triples"},
    {"alignment", "alignment", Kind::kString, "aligned entity pairs (TSV)"},
    {"scores", "scores", Kind::kString, "score dump (JSON Lines)"},
    {"report", "report", Kind::kString, "metric report to convert"},
    {"embeddings", "embeddings", Kind::kString, "pre-trained translational table"},
    {"save-embeddings", "save_embeddings", Kind::kString, "write the trained table here"},
    {"scorer", "scorer", Kind::kString,
     "constant|random|oracle|noisy_similarity|translational"},
    {"seed", "seed", Kind::kNumber, "scorer seed"},
    {"sigma", "sigma", Kind::kNumber, "noise level for noisy_similarity"},
    {"dim", "dim", Kind::kNumber, "embedding dimension"},
    {"margin", "margin", Kind::kNumber, "translational margin"},
    {"lr", "lr", Kind::kNumber, "translational learning rate"},
    {"epochs", "epochs", Kind::kNumber, "translational epochs"},
    {"negatives", "negatives", Kind::kNumber, "negatives per positive"},
    {"variant", "variant", Kind::kString, "optimistic|pessimistic|realistic"},
    {"side", "side", Kind::kString, "pooled|averaged"},
    {"ks", "ks", Kind::kNumberList, "Hits@k cutoffs, e.g. 1,3,10"},
    {"train-fraction", "train_fraction", Kind::kNumber, "alignment share used for training"},
    {"fractions", "fractions", Kind::kNumberList, "sweep train fractions"},
    {"sizes", "sizes", Kind::kNumberList, "sweep evaluation sizes"},
    {"seeds", "seeds", Kind::kNumberList, "sweep seeds"},
    {"threads", "threads", Kind::kNumber, "worker threads (results do not depend on it)"},
    {"out", "out", Kind::kString, "output file; stdout when omitted"},
    {"format", "format", Kind::kString, "json|csv"},
};

nlohmann::json parse_number(const std::string& flag, const std::string& text) {
  nlohmann::json v;
  try {
    v = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception&) {
    throw kgrank::ConfigError("--" + flag + ": expected a number, got '" + text + "'");
  }
  if (!v.is_number()) {
    throw kgrank::ConfigError("--" + flag + ": expected a number, got '" + text + "'");
  }
  return v;
}

struct TaskOptions {
  std::string config_file;
  std::map<std::string, std::string> values;
  bool filtered = false;
  bool unfiltered = false;
  bool filter_negatives = false;
};

void add_task_options(CLI::App* cmd, TaskOptions& opts) {
  cmd->add_option("--config", opts.config_file, "JSON configuration used as a base")
      ->check(CLI::ExistingFile);
  for (const auto& flag : kFlags) {
    cmd->add_option_function<std::string>(
        std::string("--") + flag.name,
        [&opts, &flag](const std::string& v) { opts.values[flag.name] = v; }, flag.help);
  }
  auto* f = cmd->add_flag("--filtered", opts.filtered, "filtered setting (default)");
  auto* u = cmd->add_flag("--unfiltered", opts.unfiltered, "raw setting");
  f->excludes(u);
  cmd->add_flag("--filter-negatives", opts.filter_negatives,
                "resample corruptions that are known triples");
}

nlohmann::json build_config(std::string_view task, const TaskOptions& opts) {
  nlohmann::json j = nlohmann::json::object();
  if (!opts.config_file.empty()) {
    try {
      j = nlohmann::json::parse(kgrank::read_text_file(opts.config_file));
    } catch (const nlohmann::json::exception& e) {
      throw kgrank::ConfigError(opts.config_file + ": " + e.what());
    }
    if (!j.is_object()) throw kgrank::ConfigError(opts.config_file + ": expected a JSON object");
  }
  j["task"] = task;
  for (const auto& flag : kFlags) {
    const auto it = opts.values.find(flag.name);
    if (it == opts.values.end()) continue;
    switch (flag.kind) {
      case Kind::kString:
        j[flag.key] = it->second;
        break;
      case Kind::kNumber:
        j[flag.key] = parse_number(flag.name, it->second);
        break;
      case Kind::kNumberList: {
        nlohmann::json list = nlohmann::json::array();
        std::stringstream ss(it->second);
        std::string item;
        while (std::getline(ss, item, ',')) list.push_back(parse_number(flag.name, item));
        j[flag.key] = list;
        break;
      }
    }
  }
  if (opts.filtered) j["filtered"] = true;
  if (opts.unfiltered) j["filtered"] = false;
  if (opts.filter_negatives) j["filter_negatives"] = true;
  return j;
}

int execute(const nlohmann::json& j) {
  const auto config = kgrank::config_from_json(j);
  const auto outcome = kgrank::run_experiment(config);
  for (const auto& w : outcome.warnings) std::cerr << "warning: " << w << '\n';
  if (config.out.empty()) {
    std::cout << outcome.primary;
    if (!outcome.primary.empty() && outcome.primary.back() != '\n') std::cout << '\n';
  } else {
    for (const auto& p : outcome.written) std::cerr << "wrote " << p.string() << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tie-aware ranking evaluation for link prediction and entity alignment",
               "kgrank"};
  app.set_version_flag("--version", std::string(kgrank::version()));
  app.require_subcommand(1);

  const std::vector<std::pair<kgrank::Task, const char*>> tasks = {
      {kgrank::Task::kRank, "rank a score dump and report metrics"},
      {kgrank::Task::kEvalLp, "evaluate a scorer on link prediction"},
      {kgrank::Task::kEvalEa, "evaluate a scorer on entity alignment"},
      {kgrank::Task::kSweep, "entity alignment metrics over test-set sizes"},
      {kgrank::Task::kDegrees, "degree correlation of aligned entities"},
      {kgrank::Task::kReport, "convert a metric report between formats"},
  };
  std::vector<TaskOptions> options(tasks.size());
  std::vector<CLI::App*> commands;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    auto* cmd = app.add_subcommand(std::string(kgrank::to_string(tasks[i].first)), tasks[i].second);
    add_task_options(cmd, options[i]);
    commands.push_back(cmd);
  }
  std::string run_file;
  auto* run = app.add_subcommand("run", "execute a JSON configuration file");
  run->add_option("config", run_file, "configuration file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (run->parsed()) {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(kgrank::read_text_file(run_file));
      } catch (const nlohmann::json::exception& e) {
        throw kgrank::ConfigError(run_file + ": " + e.what());
      }
      return execute(j);
    }
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      if (commands[i]->parsed()) {
        return execute(build_config(kgrank::to_string(tasks[i].first), options[i]));
      }
    }
  } catch (const kgrank::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const kgrank::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const kgrank::InvalidInputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}
