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

// Link-prediction evaluation: every test triple is scored against all
// entities as head and as tail; in the filtered setting other known-true
// completions are removed from the candidate set before ranking.

#ifndef KGRANK_LP_HPP_
#define KGRANK_LP_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kgrank/graph.hpp"
#include "kgrank/metrics.hpp"
#include "kgrank/rank.hpp"

namespace kgrank {

// Scores candidate completions of a partial triple. Implementations must be
// deterministic and safe for concurrent const calls.
class LpScorer {
 public:
  virtual ~LpScorer() = default;

  // One score per candidate for (head, relation, candidate).
  virtual std::vector<double> score_tails(EntityId head, RelationId relation,
                                          std::span<const EntityId> candidates) const = 0;
  // One score per candidate for (candidate, relation, tail).
  virtual std::vector<double> score_heads(RelationId relation, EntityId tail,
                                          std::span<const EntityId> candidates) const = 0;
};

// Known-true completions grouped by (head, relation) and (relation, tail).
class FilterIndex {
 public:
  FilterIndex() = default;
  FilterIndex(std::size_t num_entities, std::size_t num_relations)
      : num_entities_(num_entities), num_relations_(num_relations) {}

  std::size_t num_entities() const { return num_entities_; }
  std::size_t num_relations() const { return num_relations_; }

  // Sorted, unique. Empty when the key is unknown.
  std::span<const EntityId> known_tails(EntityId head, RelationId relation) const;
  std::span<const EntityId> known_heads(RelationId relation, EntityId tail) const;

  std::size_t num_tail_keys() const { return tails_.size(); }
  std::size_t num_head_keys() const { return heads_.size(); }

 private:
  friend FilterIndex build_filter_index(std::size_t, std::size_t,
                                        std::span<const std::vector<Triple>>);

  static std::uint64_t key(std::int32_t a, std::int32_t b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
  }

  std::size_t num_entities_ = 0;
  std::size_t num_relations_ = 0;
  std::unordered_map<std::uint64_t, std::vector<EntityId>> tails_;
  std::unordered_map<std::uint64_t, std::vector<EntityId>> heads_;
};

// Union of `splits`, grouped both ways. Throws InvalidInputError on an
// out-of-vocabulary id.
FilterIndex build_filter_index(std::size_t num_entities, std::size_t num_relations,
                               std::span<const std::vector<Triple>> splits);

// Mask over all entities for predicting `side` of `triple` (kLeft = head,
// kRight = tail). Every known-true entity except the triple's own is masked.
CandidateMask candidate_mask(const FilterIndex& index, const Triple& triple, Side side);

enum class SideHandling { kPooled, kAveraged };

std::string_view to_string(SideHandling handling);
std::optional<SideHandling> parse_side_handling(std::string_view name);

struct LpOptions {
  bool filtered = true;
  SideHandling side_handling = SideHandling::kPooled;
  int threads = 1;
};

// Head-side and tail-side records for one triple. Scorer output of the wrong
// length or with non-finite values raises ScorerContractError.
std::pair<RankRecord, RankRecord> evaluate_triple(const LpScorer& scorer, const Triple& triple,
                                                  const FilterIndex& index, bool filtered);

// Pooled: records (head, tail) per triple in input order, labelled kLeft and
// kRight. Averaged: one record per triple holding the sum of both sides with
// scale 2, labelled kBoth.
RankCollection evaluate_lp(const LpScorer& scorer, std::span<const Triple> test,
                           const FilterIndex& index, const LpOptions& options = {});

}  // namespace kgrank

#endif  // KGRANK_LP_HPP_
