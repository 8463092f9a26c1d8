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

#include "kgrank/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "kgrank/ea.hpp"
#include "kgrank/errors.hpp"
#include "kgrank/io.hpp"
#include "kgrank/metrics.hpp"

#ifndef KGRANK_VERSION
#define KGRANK_VERSION "0.0.0"
#endif

namespace kgrank {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "task",    "train",   "valid",     "test",   "kg_left",   "kg_right",         "alignment",
      "scores",  "report",  "embeddings", "scorer", "seed",      "sigma",            "dim",
      "margin",  "lr",      "epochs",    "negatives", "filter_negatives", "variant", "filtered",
      "side",    "ks",      "train_fraction", "fractions", "sizes", "seeds",        "threads",
      "out",     "format",  "save_embeddings"};
  return keys;
}

template <typename T>
void read_key(const json& j, const char* key, T& target) {
  if (!j.contains(key)) return;
  try {
    target = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

template <typename T, typename Parse>
void read_enum(const json& j, const char* key, T& target, Parse parse) {
  std::string name;
  read_key(j, key, name);
  if (name.empty()) return;
  const auto value = parse(name);
  if (!value) throw ConfigError(std::string("unknown ") + key + " '" + name + "'");
  target = *value;
}

void require_file(const std::string& path, const char* what) {
  if (path.empty()) throw ConfigError(std::string("missing input: ") + what);
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) {
    throw ConfigError(std::string(what) + " '" + path + "' does not exist");
  }
}

void optional_file(const std::string& path, const char* what) {
  if (!path.empty()) require_file(path, what);
}

std::string fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json hashed_config(const ExperimentConfig& config) {
  auto j = to_json(config);
  j.erase("threads");
  j.erase("out");
  return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Outputs staged as "<final>.tmp" and renamed once everything succeeded.
class Staging {
 public:
  ~Staging() {
    for (const auto& [tmp, final_path] : files_) {
      std::error_code ec;
      fs::remove(tmp, ec);
    }
  }

  fs::path stage(const fs::path& final_path) {
    auto tmp = final_path;
    tmp += ".tmp";
    files_.emplace_back(tmp, final_path);
    return tmp;
  }

  void write(const fs::path& final_path, const std::string& content) {
    const auto tmp = stage(final_path);
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) throw Error("cannot write " + tmp.string());
  }

  std::vector<fs::path> commit() {
    std::vector<fs::path> written;
    for (const auto& [tmp, final_path] : files_) {
      fs::rename(tmp, final_path);
      written.push_back(final_path);
    }
    files_.clear();
    return written;
  }

 private:
  std::vector<std::pair<fs::path, fs::path>> files_;
};

std::string render(const MetricReport& report, OutputFormat format) {
  return format == OutputFormat::kJson ? dump(to_json(report)) : to_csv(report);
}

struct AlignmentInputs {
  Vocabulary left;
  Vocabulary right;
  KnowledgeGraph left_graph;
  KnowledgeGraph right_graph;
  std::vector<AlignedPair> pairs;
};

AlignmentInputs load_alignment_inputs(const ExperimentConfig& config,
                                      std::vector<std::string>& warnings) {
  AlignmentInputs in;
  if (!config.kg_left.empty()) {
    const fs::path left_path(config.kg_left);
    const fs::path right_path(config.kg_right);
    auto left = load_triple_splits(std::span(&left_path, 1));
    auto right = load_triple_splits(std::span(&right_path, 1));
    warnings.insert(warnings.end(), left.warnings.begin(), left.warnings.end());
    warnings.insert(warnings.end(), right.warnings.begin(), right.warnings.end());
    in.left_graph = left.graph(0);
    in.right_graph = right.graph(0);
    in.left = in.left_graph.entities;
    in.right = in.right_graph.entities;
  } else {
    std::vector<std::string> ls;
    std::vector<std::string> rs;
    for (const auto& [l, r] : load_alignment_labels(config.alignment)) {
      ls.push_back(l);
      rs.push_back(r);
    }
    in.left = Vocabulary::sorted(std::move(ls));
    in.right = Vocabulary::sorted(std::move(rs));
  }
  in.pairs = load_alignment(config.alignment, in.left, in.right, &warnings).test;
  std::sort(in.pairs.begin(), in.pairs.end());
  return in;
}

json seeds_used(const ExperimentConfig& config) {
  auto seeds = json::array();
  if (config.task == Task::kSweep) {
    for (const auto s : config.seeds) seeds.push_back(s);
  } else if (config.task == Task::kEvalLp || config.task == Task::kEvalEa) {
    seeds.push_back(config.scorer.seed);
  }
  return seeds;
}

}  // namespace

std::string_view version() { return KGRANK_VERSION; }

std::string_view to_string(Task task) {
  switch (task) {
    case Task::kRank:
      return "rank";
    case Task::kEvalLp:
      return "eval-lp";
    case Task::kEvalEa:
      return "eval-ea";
    case Task::kSweep:
      return "sweep";
    case Task::kDegrees:
      return "analyze-degrees";
    case Task::kReport:
      return "report";
  }
  return "unknown";
}

std::optional<Task> parse_task(std::string_view name) {
  for (const auto t : {Task::kRank, Task::kEvalLp, Task::kEvalEa, Task::kSweep, Task::kDegrees,
                       Task::kReport}) {
    if (name == to_string(t)) return t;
  }
  return std::nullopt;
}

std::string_view to_string(OutputFormat format) {
  return format == OutputFormat::kJson ? "json" : "csv";
}

std::optional<OutputFormat> parse_output_format(std::string_view name) {
  if (name == "json") return OutputFormat::kJson;
  if (name == "csv") return OutputFormat::kCsv;
  return std::nullopt;
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["task"] = std::string(to_string(c.task));
  j["train"] = c.train;
  j["valid"] = c.valid;
  j["test"] = c.test;
  j["kg_left"] = c.kg_left;
  j["kg_right"] = c.kg_right;
  j["alignment"] = c.alignment;
  j["scores"] = c.scores;
  j["report"] = c.report;
  j["embeddings"] = c.embeddings;
  j["scorer"] = std::string(to_string(c.scorer.kind));
  j["seed"] = c.scorer.seed;
  j["sigma"] = c.scorer.sigma;
  j["dim"] = c.scorer.dimension;
  j["margin"] = c.scorer.margin;
  j["lr"] = c.scorer.learning_rate;
  j["epochs"] = c.scorer.epochs;
  j["negatives"] = c.scorer.negatives;
  j["filter_negatives"] = c.scorer.filter_negatives;
  j["variant"] = std::string(to_string(c.variant));
  j["filtered"] = c.filtered;
  j["side"] = std::string(to_string(c.side));
  j["ks"] = c.ks;
  j["train_fraction"] = c.train_fraction;
  j["fractions"] = c.fractions;
  j["sizes"] = c.sizes;
  j["seeds"] = c.seeds;
  j["threads"] = c.threads;
  j["out"] = c.out;
  j["format"] = std::string(to_string(c.format));
  j["save_embeddings"] = c.save_embeddings;
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!known_keys().contains(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  ExperimentConfig c;
  read_enum(j, "task", c.task, parse_task);
  read_key(j, "train", c.train);
  read_key(j, "valid", c.valid);
  read_key(j, "test", c.test);
  read_key(j, "kg_left", c.kg_left);
  read_key(j, "kg_right", c.kg_right);
  read_key(j, "alignment", c.alignment);
  read_key(j, "scores", c.scores);
  read_key(j, "report", c.report);
  read_key(j, "embeddings", c.embeddings);
  read_enum(j, "scorer", c.scorer.kind, parse_scorer_kind);
  read_key(j, "seed", c.scorer.seed);
  read_key(j, "sigma", c.scorer.sigma);
  read_key(j, "dim", c.scorer.dimension);
  read_key(j, "margin", c.scorer.margin);
  read_key(j, "lr", c.scorer.learning_rate);
  read_key(j, "epochs", c.scorer.epochs);
  read_key(j, "negatives", c.scorer.negatives);
  read_key(j, "filter_negatives", c.scorer.filter_negatives);
  read_enum(j, "variant", c.variant, parse_rank_variant);
  read_key(j, "filtered", c.filtered);
  read_enum(j, "side", c.side, parse_side_handling);
  read_key(j, "ks", c.ks);
  read_key(j, "train_fraction", c.train_fraction);
  read_key(j, "fractions", c.fractions);
  read_key(j, "sizes", c.sizes);
  read_key(j, "seeds", c.seeds);
  read_key(j, "threads", c.threads);
  read_key(j, "out", c.out);
  read_enum(j, "format", c.format, parse_output_format);
  read_key(j, "save_embeddings", c.save_embeddings);
  return c;
}

void validate_config(const ExperimentConfig& c) {
  if (c.threads < 1) throw ConfigError("threads must be >= 1");
  for (const auto k : c.ks) {
    if (k < 1) throw ConfigError("ks must be positive");
  }
  c.scorer.validate();
  switch (c.task) {
    case Task::kRank:
      require_file(c.scores, "score dump");
      break;
    case Task::kReport:
      require_file(c.report, "report");
      break;
    case Task::kEvalLp:
      require_file(c.train, "training triples");
      require_file(c.test, "test triples");
      optional_file(c.valid, "validation triples");
      if (!c.embeddings.empty()) {
        require_file(c.embeddings, "embedding table");
        require_file(c.embeddings + ".json", "embedding sidecar");
      } else if (c.scorer.kind == ScorerKind::kNoisySimilarity) {
        throw ConfigError("scorer 'noisy_similarity' is not available for link prediction");
      }
      if (!c.save_embeddings.empty() && c.scorer.kind != ScorerKind::kTranslational) {
        throw ConfigError("save_embeddings needs the translational scorer");
      }
      break;
    case Task::kEvalEa:
    case Task::kSweep:
    case Task::kDegrees:
      require_file(c.alignment, "alignment");
      if (c.task == Task::kDegrees || !c.kg_left.empty() || !c.kg_right.empty()) {
        require_file(c.kg_left, "left graph");
        require_file(c.kg_right, "right graph");
      }
      if (c.task != Task::kDegrees && c.scorer.kind == ScorerKind::kTranslational) {
        throw ConfigError("scorer 'translational' is not available for entity alignment");
      }
      if (!(c.train_fraction >= 0.0 && c.train_fraction < 1.0)) {
        throw ConfigError("train_fraction must lie in [0, 1)");
      }
      if (c.task == Task::kSweep) {
        if (c.fractions.empty() || c.sizes.empty() || c.seeds.empty()) {
          throw ConfigError("sweep needs fractions, sizes and seeds");
        }
        for (const double f : c.fractions) {
          if (!(f >= 0.0 && f <= 1.0)) throw ConfigError("fractions must lie in [0, 1]");
        }
        for (const auto s : c.sizes) {
          if (s < 1) throw ConfigError("sizes must be positive");
        }
      }
      break;
  }
}

std::string config_hash(const ExperimentConfig& config) {
  return fnv1a64(hashed_config(config).dump());
}

RunOutcome run_experiment(const ExperimentConfig& config) {
  validate_config(config);
  RunOutcome outcome;
  Staging staging;
  auto& warnings = outcome.warnings;

  switch (config.task) {
    case Task::kRank: {
      outcome.primary =
          render(evaluate_score_dump(config.scores, config.variant, config.ks), config.format);
      break;
    }
    case Task::kReport: {
      json j;
      try {
        j = json::parse(read_text_file(config.report));
      } catch (const json::parse_error& e) {
        throw ParseError(config.report, 0, e.what());
      }
      outcome.primary = render(report_from_json(j), config.format);
      break;
    }
    case Task::kEvalLp: {
      std::vector<fs::path> paths = {config.train, config.test};
      if (!config.valid.empty()) paths.emplace_back(config.valid);
      const auto data = load_triple_splits(paths);
      warnings.insert(warnings.end(), data.warnings.begin(), data.warnings.end());
      const auto train = data.graph(0);
      const auto& test = data.splits[1];
      const auto index = build_filter_index(data.entities.size(), data.relations.size(),
                                            data.splits);
      std::unique_ptr<LpScorer> scorer;
      if (!config.embeddings.empty()) {
        auto loaded = read_embeddings(config.embeddings, config.embeddings + ".json");
        if (loaded.entities.labels() != data.entities.labels() ||
            loaded.relations.labels() != data.relations.labels()) {
          throw InvalidInputError("embedding vocabulary does not match the dataset");
        }
        scorer = std::make_unique<TranslationalScorer>(std::move(loaded.table));
      } else if (config.scorer.kind == ScorerKind::kTranslational) {
        auto trained = train_translational(train, config.scorer);
        if (!config.save_embeddings.empty()) {
          const fs::path bin(config.save_embeddings);
          auto sidecar = bin;
          sidecar += ".json";
          write_embeddings(trained.scorer->table(), data.entities, data.relations,
                           staging.stage(bin), staging.stage(sidecar));
        }
        scorer = std::move(trained.scorer);
      } else {
        const auto all = data.merged();
        scorer = make_lp_scorer(config.scorer, train, all.triples);
      }
      const auto ranks = evaluate_lp(*scorer, test, index,
                                     LpOptions{config.filtered, config.side, config.threads});
      outcome.primary = render(summarize(ranks, config.ks, config.variant), config.format);
      break;
    }
    case Task::kEvalEa: {
      const auto in = load_alignment_inputs(config, warnings);
      const auto split = split_alignment(in.pairs, config.train_fraction, config.scorer.seed);
      if (split.test.empty()) throw ConfigError("no test pairs left after the train split");
      const auto scorer = make_ea_scorer(config.scorer, in.pairs, in.left.size(), in.right.size());
      const auto ranks = evaluate_ea(*scorer, split.test, config.threads);
      outcome.primary = render(summarize(ranks, config.ks, config.variant), config.format);
      break;
    }
    case Task::kSweep: {
      const auto in = load_alignment_inputs(config, warnings);
      SweepOptions options;
      options.train_fractions = config.fractions;
      options.eval_sizes = config.sizes;
      options.seeds = config.seeds;
      options.ks = config.ks;
      options.variant = config.variant;
      options.threads = config.threads;
      const auto factory = [&](const AlignmentSet&, std::uint64_t seed) {
        auto spec = config.scorer;
        spec.seed = seed;
        return make_ea_scorer(spec, in.pairs, in.left.size(), in.right.size());
      };
      const auto result = test_size_sweep(factory, in.pairs, options);
      if (config.format == OutputFormat::kCsv) {
        outcome.primary = to_csv(result);
      } else {
        auto rows = json::array();
        for (const auto& row : result.rows) {
          rows.push_back({{"train_fraction", row.train_fraction},
                          {"train_size", row.train_size},
                          {"eval_size", row.eval_size},
                          {"seed", row.seed},
                          {"report", to_json(row.report)}});
        }
        outcome.primary = dump(rows);
      }
      break;
    }
    case Task::kDegrees: {
      const auto in = load_alignment_inputs(config, warnings);
      const auto analysis = degree_profile(in.left_graph, in.right_graph, in.pairs);
      json summary = {{"n_pairs", analysis.pairs.size()},
                      {"spearman_rho", analysis.correlation.rho},
                      {"p_value", analysis.correlation.p_value}};
      if (config.format == OutputFormat::kCsv) {
        outcome.primary = to_csv(analysis, in.left, in.right);
        if (!config.out.empty()) {
          staging.write(config.out + ".summary.json", dump(summary));
        }
      } else {
        auto pairs = json::array();
        for (std::size_t i = 0; i < analysis.pairs.size(); ++i) {
          pairs.push_back({{"left", in.left.label(analysis.pairs[i].left)},
                           {"right", in.right.label(analysis.pairs[i].right)},
                           {"left_degree", analysis.degrees[i].first},
                           {"right_degree", analysis.degrees[i].second}});
        }
        summary["pairs"] = std::move(pairs);
        outcome.primary = dump(summary);
      }
      break;
    }
  }

  if (!config.out.empty()) {
    staging.write(config.out, outcome.primary);
    std::vector<std::string> names;
    names.push_back(fs::path(config.out).filename().string());
    if (config.task == Task::kDegrees && config.format == OutputFormat::kCsv) {
      names.push_back(fs::path(config.out + ".summary.json").filename().string());
    }
    if (!config.save_embeddings.empty() && config.task == Task::kEvalLp &&
        config.embeddings.empty()) {
      names.push_back(fs::path(config.save_embeddings).filename().string());
      names.push_back(fs::path(config.save_embeddings + ".json").filename().string());
    }
    json manifest = {{"tool", "kgrank"},
                     {"version", std::string(version())},
                     {"task", std::string(to_string(config.task))},
                     {"config", hashed_config(config)},
                     {"config_hash", config_hash(config)},
                     {"seeds", seeds_used(config)},
                     {"outputs", names},
                     {"warnings", warnings}};
    staging.write(config.out + ".manifest.json", dump(manifest));
  }
  outcome.written = staging.commit();
  return outcome;
}

}  // namespace kgrank
