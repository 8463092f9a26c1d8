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

// Experiment configuration and the runner behind the command-line tool.
//
// A configuration is one flat JSON object whose keys mirror the CLI flags:
//
//   {"task": "eval-lp", "train": "train.txt", "test": "test.txt",
//    "scorer": "translational", "seed": 7, "epochs": 50, "ks": [1, 10],
//    "out": "report.json", "format": "json"}
//
// Unknown keys are rejected. Every output is written next to a run manifest
// (`<out>.manifest.json`) that records the configuration, its hash, the seeds
// and the tool version. Outputs only appear once the whole run succeeded.

#ifndef KGRANK_EXPERIMENT_HPP_
#define KGRANK_EXPERIMENT_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "kgrank/lp.hpp"
#include "kgrank/rank.hpp"
#include "kgrank/scorers.hpp"

namespace kgrank {

std::string_view version();

enum class Task { kRank, kEvalLp, kEvalEa, kSweep, kDegrees, kReport };
enum class OutputFormat { kJson, kCsv };

std::string_view to_string(Task task);
std::optional<Task> parse_task(std::string_view name);
std::string_view to_string(OutputFormat format);
std::optional<OutputFormat> parse_output_format(std::string_view name);

struct ExperimentConfig {
  Task task = Task::kRank;

  // Inputs. Empty = not given.
  std::string train;
  std::string valid;
  std::string test;
  std::string kg_left;
  std::string kg_right;
  std::string alignment;
  std::string scores;       // score dump (rank)
  std::string report;       // report to convert (report)
  std::string embeddings;   // pre-trained table; sidecar at <path>.json

  ScorerSpec scorer;
  RankVariant variant = RankVariant::kRealistic;
  bool filtered = true;
  SideHandling side = SideHandling::kPooled;
  std::vector<std::int64_t> ks = {1, 3, 10};

  // eval-ea: share of the alignment held out as training pairs.
  double train_fraction = 0.0;
  // sweep grid; each cell's scorer is seeded with the cell seed.
  std::vector<double> fractions;
  std::vector<std::int64_t> sizes;
  std::vector<std::uint64_t> seeds;

  // Does not affect results.
  int threads = 1;

  std::string out;  // empty: primary output goes to RunOutcome::primary
  OutputFormat format = OutputFormat::kJson;
  std::string save_embeddings;  // translational only
};

nlohmann::json to_json(const ExperimentConfig& config);
// Throws ConfigError on unknown keys, wrong types or unknown enum names.
ExperimentConfig config_from_json(const nlohmann::json& j);

// Everything checkable before work starts: required inputs present and
// existing, value ranges, scorer/task compatibility. Throws ConfigError.
void validate_config(const ExperimentConfig& config);

struct RunOutcome {
  std::vector<std::filesystem::path> written;
  std::vector<std::string> warnings;
  // Primary output text; also what went to `out` when it is set.
  std::string primary;
};

// Runs a validated configuration; outputs are written atomically.
RunOutcome run_experiment(const ExperimentConfig& config);

// "fnv1a64:" followed by 16 hex digits, over the canonical JSON of the
// result-affecting fields of `config`.
std::string config_hash(const ExperimentConfig& config);

}  // namespace kgrank

#endif  // KGRANK_EXPERIMENT_HPP_
