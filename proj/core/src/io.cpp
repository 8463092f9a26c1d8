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

#include "kgrank/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string_view>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "kgrank/errors.hpp"

namespace kgrank {
namespace {

// Calls fn(line_number, fields) for every non-blank line.
template <typename Fn>
void for_each_tsv_line(const std::filesystem::path& path, std::size_t columns, Fn&& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  std::string line;
  std::size_t number = 0;
  std::vector<std::string> fields;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    fields.clear();
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      const auto len = tab == std::string::npos ? std::string::npos : tab - start;
      fields.push_back(line.substr(start, len));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() != columns) {
      throw ParseError(path.string(), number,
                       "expected " + std::to_string(columns) + " tab-separated columns, found " +
                           std::to_string(fields.size()));
    }
    for (const auto& f : fields) {
      if (f.empty()) throw ParseError(path.string(), number, "empty field");
    }
    fn(number, fields);
  }
}

struct RawTriple {
  std::string head;
  std::string relation;
  std::string tail;
  friend auto operator<=>(const RawTriple&, const RawTriple&) = default;
};

std::vector<RawTriple> read_raw_triples(const std::filesystem::path& path,
                                        std::vector<std::string>& warnings) {
  std::vector<RawTriple> raw;
  std::set<RawTriple> seen;
  std::size_t duplicates = 0;
  for_each_tsv_line(path, 3, [&](std::size_t, const std::vector<std::string>& f) {
    RawTriple t{f[0], f[1], f[2]};
    if (seen.insert(t).second) {
      raw.push_back(std::move(t));
    } else {
      ++duplicates;
    }
  });
  if (raw.empty()) throw InvalidInputError(path.string() + ": no triples");
  if (duplicates > 0) {
    warnings.push_back(path.string() + ": dropped " + std::to_string(duplicates) +
                       " duplicate triple line(s)");
  }
  return raw;
}

[[noreturn]] void fail(const std::string& path, std::size_t line, const std::string& what) {
  throw ParseError(path, line, what);
}

}  // namespace

KnowledgeGraph TripleSplits::graph(std::size_t split) const {
  return KnowledgeGraph{entities, relations, splits.at(split)};
}

KnowledgeGraph TripleSplits::merged() const {
  KnowledgeGraph g{entities, relations, {}};
  for (const auto& s : splits) g.triples.insert(g.triples.end(), s.begin(), s.end());
  std::sort(g.triples.begin(), g.triples.end());
  g.triples.erase(std::unique(g.triples.begin(), g.triples.end()), g.triples.end());
  return g;
}

TripleSplits load_triple_splits(std::span<const std::filesystem::path> paths) {
  TripleSplits out;
  std::vector<std::vector<RawTriple>> raw;
  std::vector<std::string> entity_labels;
  std::vector<std::string> relation_labels;
  for (const auto& p : paths) {
    raw.push_back(read_raw_triples(p, out.warnings));
    for (const auto& t : raw.back()) {
      entity_labels.push_back(t.head);
      entity_labels.push_back(t.tail);
      relation_labels.push_back(t.relation);
    }
  }
  out.entities = Vocabulary::sorted(std::move(entity_labels));
  out.relations = Vocabulary::sorted(std::move(relation_labels));
  for (const auto& split : raw) {
    auto& ids = out.splits.emplace_back();
    ids.reserve(split.size());
    for (const auto& t : split) {
      ids.push_back(Triple{*out.entities.find(t.head), *out.relations.find(t.relation),
                           *out.entities.find(t.tail)});
    }
  }
  return out;
}

KnowledgeGraph load_triples(const std::filesystem::path& path) {
  return load_triple_splits(std::span(&path, 1)).graph(0);
}

std::vector<std::pair<std::string, std::string>> load_alignment_labels(
    const std::filesystem::path& path, std::vector<std::string>* warnings) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::set<std::pair<std::string, std::string>> seen;
  std::size_t duplicates = 0;
  for_each_tsv_line(path, 2, [&](std::size_t, const std::vector<std::string>& f) {
    auto p = std::make_pair(f[0], f[1]);
    if (seen.insert(p).second) {
      pairs.push_back(std::move(p));
    } else {
      ++duplicates;
    }
  });
  if (pairs.empty()) throw InvalidInputError(path.string() + ": no alignment pairs");
  if (duplicates > 0 && warnings != nullptr) {
    warnings->push_back(path.string() + ": dropped " + std::to_string(duplicates) +
                        " duplicate alignment line(s)");
  }
  return pairs;
}

AlignmentSet load_alignment(const std::filesystem::path& path, const Vocabulary& left,
                            const Vocabulary& right, std::vector<std::string>* warnings) {
  AlignmentSet set;
  std::set<AlignedPair> seen;
  std::vector<std::string> unknown;
  std::size_t first_bad_line = 0;
  std::size_t duplicates = 0;
  for_each_tsv_line(path, 2, [&](std::size_t line, const std::vector<std::string>& f) {
    const auto l = left.find(f[0]);
    const auto r = right.find(f[1]);
    if (!l) unknown.push_back("'" + f[0] + "' (left, line " + std::to_string(line) + ")");
    if (!r) unknown.push_back("'" + f[1] + "' (right, line " + std::to_string(line) + ")");
    if (!l || !r) {
      if (first_bad_line == 0) first_bad_line = line;
      return;
    }
    const AlignedPair p{*l, *r};
    if (seen.insert(p).second) {
      set.test.push_back(p);
    } else {
      ++duplicates;
    }
  });
  if (!unknown.empty()) {
    std::string message = "unknown label(s): ";
    for (std::size_t i = 0; i < unknown.size(); ++i) {
      message += (i > 0 ? ", " : "") + unknown[i];
    }
    throw ParseError(path.string(), first_bad_line, message);
  }
  if (set.test.empty()) throw InvalidInputError(path.string() + ": no alignment pairs");
  if (duplicates > 0 && warnings != nullptr) {
    warnings->push_back(path.string() + ": dropped " + std::to_string(duplicates) +
                        " duplicate alignment line(s)");
  }
  return set;
}

ScoreRecord parse_score_record(const std::string& text, const std::string& path,
                               std::size_t line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(path, line, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) fail(path, line, "record must be a JSON object");
  ScoreRecord rec;
  if (j.contains("id")) {
    const auto& id = j["id"];
    if (id.is_string()) {
      rec.id = id.get<std::string>();
    } else if (id.is_number_integer()) {
      rec.id = id.dump();
    } else {
      fail(path, line, "\"id\" must be a string or integer");
    }
  }
  if (!j.contains("scores") || !j["scores"].is_array()) {
    fail(path, line, "missing \"scores\" array");
  }
  for (const auto& s : j["scores"]) {
    if (!s.is_number()) fail(path, line, "scores must be numbers");
    const double v = s.get<double>();
    if (!std::isfinite(v)) fail(path, line, "non-finite score");
    rec.scores.push_back(v);
  }
  if (rec.scores.empty()) fail(path, line, "empty \"scores\"");
  if (!j.contains("true_index") || !j["true_index"].is_number_integer()) {
    fail(path, line, "missing integer \"true_index\"");
  }
  const auto index = j["true_index"].get<std::int64_t>();
  if (index < 0 || static_cast<std::size_t>(index) >= rec.scores.size()) {
    fail(path, line, "true_index " + std::to_string(index) + " out of bounds");
  }
  rec.true_index = static_cast<std::size_t>(index);
  if (j.contains("mask") && !j["mask"].is_null()) {
    if (!j["mask"].is_array()) fail(path, line, "\"mask\" must be an array of booleans");
    for (const auto& m : j["mask"]) {
      if (!m.is_boolean()) fail(path, line, "\"mask\" must be an array of booleans");
      rec.mask.push_back(m.get<bool>() ? 1 : 0);
    }
    if (rec.mask.size() != rec.scores.size()) fail(path, line, "mask length differs from scores");
    if (rec.mask[rec.true_index] != 0) fail(path, line, "mask excludes the true candidate");
  }
  return rec;
}

namespace {

template <typename Fn>
void for_each_dump_record(const std::filesystem::path& path, Fn&& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), 0, "cannot open score dump");
  std::string line;
  std::size_t number = 0;
  bool any = false;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    fn(parse_score_record(line, path.string(), number));
    any = true;
  }
  if (!any) throw InvalidInputError(path.string() + ": empty score dump");
}

}  // namespace

std::vector<ScoreRecord> read_score_dump(const std::filesystem::path& path) {
  std::vector<ScoreRecord> records;
  for_each_dump_record(path, [&](ScoreRecord rec) { records.push_back(std::move(rec)); });
  return records;
}

RankCollection rank_score_dump(const std::filesystem::path& path) {
  RankCollection rc;
  for_each_dump_record(path, [&](const ScoreRecord& rec) {
    rc.records.push_back(rank_record(ScoredCandidates{rec.scores, rec.true_index, rec.mask}));
  });
  return rc;
}

MetricReport evaluate_score_dump(const std::filesystem::path& path, RankVariant variant,
                                 std::span<const std::int64_t> ks) {
  return summarize(rank_score_dump(path), ks, variant);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace kgrank
