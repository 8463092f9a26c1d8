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

#include "kgrank/lp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "kgrank/errors.hpp"
#include "parallel.hpp"

namespace kgrank {
namespace {

void check_scores(std::span<const double> scores, std::size_t expected) {
  if (scores.size() != expected) {
    throw ScorerContractError("scorer returned " + std::to_string(scores.size()) +
                              " scores for " + std::to_string(expected) + " candidates");
  }
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) {
      throw ScorerContractError("scorer returned a non-finite score for candidate " +
                                std::to_string(i));
    }
  }
}

void check_triple(const FilterIndex& index, const Triple& triple) {
  check_vocabulary(std::span(&triple, 1), index.num_entities(), index.num_relations());
}

std::vector<EntityId> all_entities(std::size_t n) {
  std::vector<EntityId> ids(n);
  std::iota(ids.begin(), ids.end(), EntityId{0});
  return ids;
}

std::pair<RankRecord, RankRecord> evaluate_with(const LpScorer& scorer, const Triple& triple,
                                                const FilterIndex& index, bool filtered,
                                                std::span<const EntityId> entities) {
  const auto rank_side = [&](Side side, const std::vector<double>& scores) {
    check_scores(scores, entities.size());
    const CandidateMask mask = filtered ? candidate_mask(index, triple, side) : CandidateMask{};
    const auto truth = static_cast<std::size_t>(side == Side::kLeft ? triple.head : triple.tail);
    return rank_record(ScoredCandidates{scores, truth, mask});
  };
  const auto head =
      rank_side(Side::kLeft, scorer.score_heads(triple.relation, triple.tail, entities));
  const auto tail =
      rank_side(Side::kRight, scorer.score_tails(triple.head, triple.relation, entities));
  return {head, tail};
}

}  // namespace

std::span<const EntityId> FilterIndex::known_tails(EntityId head, RelationId relation) const {
  const auto it = tails_.find(key(head, relation));
  if (it == tails_.end()) return {};
  return it->second;
}

std::span<const EntityId> FilterIndex::known_heads(RelationId relation, EntityId tail) const {
  const auto it = heads_.find(key(relation, tail));
  if (it == heads_.end()) return {};
  return it->second;
}

FilterIndex build_filter_index(std::size_t num_entities, std::size_t num_relations,
                               std::span<const std::vector<Triple>> splits) {
  FilterIndex index(num_entities, num_relations);
  for (const auto& split : splits) {
    check_vocabulary(split, num_entities, num_relations);
    for (const auto& t : split) {
      index.tails_[FilterIndex::key(t.head, t.relation)].push_back(t.tail);
      index.heads_[FilterIndex::key(t.relation, t.tail)].push_back(t.head);
    }
  }
  for (auto* map : {&index.tails_, &index.heads_}) {
    for (auto& [k, ids] : *map) {
      std::sort(ids.begin(), ids.end());
      ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    }
  }
  return index;
}

CandidateMask candidate_mask(const FilterIndex& index, const Triple& triple, Side side) {
  check_triple(index, triple);
  if (side == Side::kBoth) throw InvalidInputError("candidate_mask needs a single side");
  CandidateMask mask(index.num_entities(), 0);
  const bool heads = side == Side::kLeft;
  const auto known = heads ? index.known_heads(triple.relation, triple.tail)
                           : index.known_tails(triple.head, triple.relation);
  const EntityId truth = heads ? triple.head : triple.tail;
  for (const auto e : known) {
    if (e != truth) mask[static_cast<std::size_t>(e)] = 1;
  }
  return mask;
}

std::string_view to_string(SideHandling handling) {
  return handling == SideHandling::kPooled ? "pooled" : "averaged";
}

std::optional<SideHandling> parse_side_handling(std::string_view name) {
  if (name == "pooled") return SideHandling::kPooled;
  if (name == "averaged") return SideHandling::kAveraged;
  return std::nullopt;
}

std::pair<RankRecord, RankRecord> evaluate_triple(const LpScorer& scorer, const Triple& triple,
                                                  const FilterIndex& index, bool filtered) {
  check_triple(index, triple);
  const auto entities = all_entities(index.num_entities());
  return evaluate_with(scorer, triple, index, filtered, entities);
}

RankCollection evaluate_lp(const LpScorer& scorer, std::span<const Triple> test,
                           const FilterIndex& index, const LpOptions& options) {
  if (test.empty()) throw InvalidInputError("empty test set");
  if (index.num_entities() == 0) throw InvalidInputError("filter index has no entities");
  check_vocabulary(test, index.num_entities(), index.num_relations());
  const auto entities = all_entities(index.num_entities());

  std::vector<std::pair<RankRecord, RankRecord>> per_triple(test.size());
  internal::parallel_for(test.size(), options.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      per_triple[i] = evaluate_with(scorer, test[i], index, options.filtered, entities);
    }
  });

  RankCollection rc;
  if (options.side_handling == SideHandling::kPooled) {
    rc.records.reserve(2 * test.size());
    rc.sides.reserve(2 * test.size());
    for (const auto& [head, tail] : per_triple) {
      rc.records.push_back(head);
      rc.sides.push_back(Side::kLeft);
      rc.records.push_back(tail);
      rc.sides.push_back(Side::kRight);
    }
  } else {
    rc.scale = 2;
    rc.records.reserve(test.size());
    for (const auto& [head, tail] : per_triple) {
      rc.records.push_back(RankRecord{
          head.optimistic + tail.optimistic, head.pessimistic + tail.pessimistic,
          head.twice_realistic + tail.twice_realistic,
          head.candidate_count + tail.candidate_count});
    }
    rc.sides.assign(rc.records.size(), Side::kBoth);
  }
  return rc;
}

}  // namespace kgrank
