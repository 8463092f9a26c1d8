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

// Entity-alignment evaluation. Candidates for a query are only the entities
// of the other graph that occur in the evaluated test alignment, so the
// candidate-set size follows the test-set size.

#ifndef KGRANK_EA_HPP_
#define KGRANK_EA_HPP_

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kgrank/graph.hpp"
#include "kgrank/metrics.hpp"

namespace kgrank {

struct AlignedPair {
  EntityId left = 0;
  EntityId right = 0;

  friend auto operator<=>(const AlignedPair&, const AlignedPair&) = default;
};

struct AlignmentSet {
  std::vector<AlignedPair> train;
  std::vector<AlignedPair> test;

  // train followed by test.
  std::vector<AlignedPair> pairs() const;
  // Throws InvalidInputError if train and test overlap or an id is out of range.
  void validate(std::size_t num_left, std::size_t num_right) const;
};

// Shuffles the sorted, de-duplicated `pairs` with `seed` and puts the first
// round(train_fraction * n) into train. Both parts are returned sorted.
AlignmentSet split_alignment(std::span<const AlignedPair> pairs, double train_fraction,
                             std::uint64_t seed);

// Scores cross-graph candidate pairs. Deterministic, safe for concurrent
// const calls.
class EaScorer {
 public:
  virtual ~EaScorer() = default;

  virtual std::vector<double> score_right(EntityId left,
                                          std::span<const EntityId> right_candidates) const = 0;
  virtual std::vector<double> score_left(EntityId right,
                                         std::span<const EntityId> left_candidates) const = 0;
};

struct CandidateSets {
  std::vector<EntityId> left;   // sorted, unique
  std::vector<EntityId> right;  // sorted, unique
};

CandidateSets build_candidate_sets(std::span<const AlignedPair> test);

// For each test pair, in order: a left->right record (kLeft) and a
// right->left record (kRight). Alternative true matches are not filtered.
RankCollection evaluate_ea(const EaScorer& scorer, std::span<const AlignedPair> test,
                           int threads = 1);

// Builds the scorer for one (train/test split, seed) cell of a sweep.
using EaScorerFactory =
    std::function<std::unique_ptr<EaScorer>(const AlignmentSet& split, std::uint64_t seed)>;

struct SweepOptions {
  std::vector<double> train_fractions = {0.3};
  std::vector<std::int64_t> eval_sizes;
  std::vector<std::uint64_t> seeds = {0};
  std::vector<std::int64_t> ks = {1, 10};
  RankVariant variant = RankVariant::kRealistic;
  int threads = 1;
};

struct SweepRow {
  double train_fraction = 0.0;
  std::int64_t train_size = 0;
  std::int64_t eval_size = 0;
  std::uint64_t seed = 0;
  MetricReport report;
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

// Throws ConfigError on duplicate grid values, fractions outside [0, 1] or
// an eval size larger than the smallest test split.
void validate_sweep(std::size_t num_pairs, const SweepOptions& options);

// For every (fraction, seed): split, build one scorer, shuffle the test pairs
// and evaluate on nested prefixes of each eval size. Rows are ordered by
// fraction, seed, then eval size as given.
SweepResult test_size_sweep(const EaScorerFactory& factory, std::span<const AlignedPair> pairs,
                            const SweepOptions& options);

// Long format: one line per (row, metric).
std::string to_csv(const SweepResult& result);

struct SpearmanResult {
  double rho = 0.0;
  double p_value = 1.0;
};

// Average (fractional) ranks, 1-based; ties share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values);

// Spearman's rho as the Pearson correlation of average ranks; two-sided p
// from the t approximation with n - 2 degrees of freedom. Throws
// InvalidInputError for length mismatch or n < 3, DegenerateEvaluationError
// for constant input.
SpearmanResult spearman(std::span<const double> x, std::span<const double> y);

struct DegreeAnalysis {
  std::vector<AlignedPair> pairs;
  std::vector<std::pair<std::int64_t, std::int64_t>> degrees;  // (left, right) per pair
  SpearmanResult correlation;
};

DegreeAnalysis degree_profile(const KnowledgeGraph& left, const KnowledgeGraph& right,
                              std::span<const AlignedPair> alignment);

// left,right,left_degree,right_degree
std::string to_csv(const DegreeAnalysis& analysis, const Vocabulary& left,
                   const Vocabulary& right);

}  // namespace kgrank

#endif  // KGRANK_EA_HPP_
