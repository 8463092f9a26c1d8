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

// Dataset and score-dump readers.
//
// Triple files: UTF-8, three tab-separated columns head/relation/tail, no
// header. Alignment files: two tab-separated columns left/right. For both,
// CRLF endings are accepted and blank lines are skipped; a line with the
// wrong column count or an empty field is a ParseError carrying its line
// number. Duplicate lines are dropped with a warning.
//
// Score dumps are JSON Lines, one object per instance:
//   {"id": "q1", "scores": [0.5, 0.9], "true_index": 0, "mask": [false, true]}
// "id" and "mask" are optional.

#ifndef KGRANK_IO_HPP_
#define KGRANK_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kgrank/ea.hpp"
#include "kgrank/graph.hpp"
#include "kgrank/metrics.hpp"
#include "kgrank/rank.hpp"

namespace kgrank {

// Several splits over one shared vocabulary. Ids follow sorted label order,
// so they do not depend on the order the files are listed in.
struct TripleSplits {
  Vocabulary entities;
  Vocabulary relations;
  std::vector<std::vector<Triple>> splits;
  std::vector<std::string> warnings;

  KnowledgeGraph graph(std::size_t split) const;
  // Union of all splits as one graph (duplicates across splits kept once).
  KnowledgeGraph merged() const;
};

TripleSplits load_triple_splits(std::span<const std::filesystem::path> paths);
KnowledgeGraph load_triples(const std::filesystem::path& path);

// Raw label pairs in file order, de-duplicated.
std::vector<std::pair<std::string, std::string>> load_alignment_labels(
    const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr);

// Pairs resolved against the vocabularies; all pairs land in `test`.
// Unknown labels raise a ParseError that lists every offender with its line.
AlignmentSet load_alignment(const std::filesystem::path& path, const Vocabulary& left,
                            const Vocabulary& right, std::vector<std::string>* warnings = nullptr);

struct ScoreRecord {
  std::string id;
  std::vector<double> scores;
  std::size_t true_index = 0;
  CandidateMask mask;
};

// Parses one dump line. Throws ParseError (tagged with `path`/`line`) on bad
// JSON, missing fields, non-numeric or non-finite scores, or an invalid index.
ScoreRecord parse_score_record(const std::string& text, const std::string& path,
                               std::size_t line);

std::vector<ScoreRecord> read_score_dump(const std::filesystem::path& path);
RankCollection rank_score_dump(const std::filesystem::path& path);
MetricReport evaluate_score_dump(const std::filesystem::path& path, RankVariant variant,
                                 std::span<const std::int64_t> ks);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace kgrank

#endif  // KGRANK_IO_HPP_
