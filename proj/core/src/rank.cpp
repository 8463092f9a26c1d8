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

#include "kgrank/rank.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kgrank/errors.hpp"

namespace kgrank {
namespace {

struct Counts {
  std::int64_t greater = 0;
  std::int64_t greater_equal = 0;
  std::int64_t active = 0;
};

void check_shape(const ScoredCandidates& candidates) {
  const auto n = candidates.scores.size();
  if (n == 0) {
    throw InvalidInputError("empty candidate list");
  }
  if (candidates.true_index >= n) {
    throw InvalidInputError("true_index " + std::to_string(candidates.true_index) +
                            " out of range for " + std::to_string(n) + " candidates");
  }
  if (!candidates.mask.empty()) {
    if (candidates.mask.size() != n) {
      throw InvalidInputError("mask length " + std::to_string(candidates.mask.size()) +
                              " differs from score count " + std::to_string(n));
    }
    if (candidates.mask[candidates.true_index] != 0) {
      throw InvalidInputError("mask excludes the true candidate");
    }
  }
}

[[noreturn]] void throw_non_finite(std::span<const double> scores) {
  const auto it = std::find_if(scores.begin(), scores.end(),
                               [](double s) { return !std::isfinite(s); });
  throw InvalidInputError("non-finite score at index " +
                          std::to_string(it - scores.begin()));
}

// Single pass. Finiteness is folded into the same loop: any NaN/inf makes
// `bad` nonzero and the slow path reports which one.
Counts count(const ScoredCandidates& candidates) {
  check_shape(candidates);
  const auto scores = candidates.scores;
  const double alpha = scores[candidates.true_index];
  Counts c;
  bool bad = false;
  if (candidates.mask.empty()) {
    for (const double s : scores) {
      bad |= !std::isfinite(s);
      c.greater += static_cast<std::int64_t>(s > alpha);
      c.greater_equal += static_cast<std::int64_t>(s >= alpha);
    }
    c.active = static_cast<std::int64_t>(scores.size());
  } else {
    const auto mask = candidates.mask;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const double s = scores[i];
      bad |= !std::isfinite(s);
      const auto keep = static_cast<std::int64_t>(mask[i] == 0);
      c.greater += keep & static_cast<std::int64_t>(s > alpha);
      c.greater_equal += keep & static_cast<std::int64_t>(s >= alpha);
      c.active += keep;
    }
  }
  if (bad) throw_non_finite(scores);
  return c;
}

}  // namespace

std::string_view to_string(RankVariant variant) {
  switch (variant) {
    case RankVariant::kOptimistic:
      return "optimistic";
    case RankVariant::kPessimistic:
      return "pessimistic";
    case RankVariant::kRealistic:
      return "realistic";
  }
  return "unknown";
}

std::optional<RankVariant> parse_rank_variant(std::string_view name) {
  if (name == "optimistic") return RankVariant::kOptimistic;
  if (name == "pessimistic") return RankVariant::kPessimistic;
  if (name == "realistic") return RankVariant::kRealistic;
  return std::nullopt;
}

void validate(const ScoredCandidates& candidates) { count(candidates); }

std::int64_t optimistic_rank(const ScoredCandidates& candidates) {
  return count(candidates).greater + 1;
}

std::int64_t pessimistic_rank(const ScoredCandidates& candidates) {
  return count(candidates).greater_equal;
}

HalfInteger realistic_rank(const ScoredCandidates& candidates) {
  const auto c = count(candidates);
  return HalfInteger{c.greater + 1 + c.greater_equal};
}

std::int64_t nondeterministic_rank(const ScoredCandidates& candidates,
                                   std::span<const std::size_t> tie_order) {
  const auto c = count(candidates);
  const auto scores = candidates.scores;
  const double alpha = scores[candidates.true_index];
  const auto tied = static_cast<std::size_t>(c.greater_equal - c.greater);
  if (tie_order.size() != tied) {
    throw InvalidInputError("tie_order has " + std::to_string(tie_order.size()) +
                            " entries, expected " + std::to_string(tied));
  }
  std::vector<std::uint8_t> seen(scores.size(), 0);
  std::optional<std::size_t> position;
  for (std::size_t k = 0; k < tie_order.size(); ++k) {
    const auto idx = tie_order[k];
    const bool masked = !candidates.mask.empty() && candidates.mask[idx] != 0;
    if (idx >= scores.size() || masked || scores[idx] != alpha || seen[idx]) {
      throw InvalidInputError("tie_order is not a permutation of the tied candidates");
    }
    seen[idx] = 1;
    if (idx == candidates.true_index) position = k;
  }
  // Unreachable when the checks above pass; the true index is always tied.
  if (!position) throw InvalidInputError("tie_order misses the true candidate");
  return c.greater + 1 + static_cast<std::int64_t>(*position);
}

RankRecord rank_record(const ScoredCandidates& candidates) {
  const auto c = count(candidates);
  RankRecord r;
  r.optimistic = c.greater + 1;
  r.pessimistic = c.greater_equal;
  r.twice_realistic = r.optimistic + r.pessimistic;
  r.candidate_count = c.active;
  return r;
}

}  // namespace kgrank
