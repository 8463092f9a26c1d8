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

// Rank of a true candidate within a scored candidate list.
//
// Ties are exact score equality. Four tie-handling variants are provided:
//   optimistic    1 + #{candidates scoring strictly higher}
//   pessimistic   #{candidates scoring higher or equal}, the true one included
//   realistic     mean of the two, an exact half-integer
//   non-deterministic  position under a caller-supplied order of the ties
// The deterministic variants are computed by counting in one pass; nothing
// is sorted.

#ifndef KGRANK_RANK_HPP_
#define KGRANK_RANK_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kgrank {

// Nonzero entries mark candidates excluded from ranking.
using CandidateMask = std::vector<std::uint8_t>;

// Non-owning view of one test instance. Higher score = more plausible.
struct ScoredCandidates {
  std::span<const double> scores;
  std::size_t true_index = 0;
  // Empty span means "no mask". Otherwise same length as `scores`.
  std::span<const std::uint8_t> mask = {};
};

// A value n/2 with integer n, kept exact.
struct HalfInteger {
  std::int64_t twice = 0;

  double value() const { return static_cast<double>(twice) / 2.0; }
  friend auto operator<=>(const HalfInteger&, const HalfInteger&) = default;
};

struct RankRecord {
  std::int64_t optimistic = 1;
  std::int64_t pessimistic = 1;
  // 2 * realistic rank == optimistic + pessimistic.
  std::int64_t twice_realistic = 2;
  // Number of unmasked candidates, the true one included.
  std::int64_t candidate_count = 1;

  double realistic() const { return static_cast<double>(twice_realistic) / 2.0; }
  friend bool operator==(const RankRecord&, const RankRecord&) = default;
};

enum class RankVariant { kOptimistic, kPessimistic, kRealistic };

std::string_view to_string(RankVariant variant);
// Accepts "optimistic", "pessimistic" and "realistic".
std::optional<RankVariant> parse_rank_variant(std::string_view name);

// Throws InvalidInputError unless every invariant of `candidates` holds.
void validate(const ScoredCandidates& candidates);

std::int64_t optimistic_rank(const ScoredCandidates& candidates);
std::int64_t pessimistic_rank(const ScoredCandidates& candidates);
HalfInteger realistic_rank(const ScoredCandidates& candidates);

// Position of the true candidate when candidates tied with it are ordered as
// `tie_order`. `tie_order` must list every unmasked index whose score equals
// the true score, the true index included, exactly once. Diagnostic only.
std::int64_t nondeterministic_rank(const ScoredCandidates& candidates,
                                   std::span<const std::size_t> tie_order);

// All deterministic variants plus the effective candidate count, one scan.
RankRecord rank_record(const ScoredCandidates& candidates);

}  // namespace kgrank

#endif  // KGRANK_RANK_HPP_
