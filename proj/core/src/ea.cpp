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

#include "kgrank/ea.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

#include "kgrank/errors.hpp"
#include "parallel.hpp"

namespace kgrank {
namespace {

// Decorrelates the subset shuffle from the train/test split of the same seed.
constexpr std::uint64_t kSubsetStream = 0xD1B54A32D192ED03ULL;

std::vector<AlignedPair> sorted_unique(std::span<const AlignedPair> pairs) {
  std::vector<AlignedPair> out(pairs.begin(), pairs.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::size_t index_of(const std::vector<EntityId>& sorted, EntityId id) {
  return static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), id) -
                                  sorted.begin());
}

RankRecord rank_query(const std::vector<double>& scores, std::size_t expected,
                      std::size_t truth) {
  if (scores.size() != expected) {
    throw ScorerContractError("scorer returned " + std::to_string(scores.size()) +
                              " scores for " + std::to_string(expected) + " candidates");
  }
  for (const double s : scores) {
    if (!std::isfinite(s)) throw ScorerContractError("scorer returned a non-finite score");
  }
  return rank_record(ScoredCandidates{scores, truth});
}

std::int64_t test_size_for(std::size_t n, double fraction) {
  return static_cast<std::int64_t>(n) - std::llround(fraction * static_cast<double>(n));
}

template <typename T>
bool has_duplicates(std::vector<T> values) {
  std::sort(values.begin(), values.end());
  return std::adjacent_find(values.begin(), values.end()) != values.end();
}

// 2 * average rank for every value, so ranks stay integral.
std::vector<std::int64_t> twice_average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<std::int64_t> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    // Positions i+1..j share (i+1+j)/2.
    const auto twice = static_cast<std::int64_t>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = twice;
    i = j;
  }
  return ranks;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string quoted = "\"";
  for (const char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

std::string format_g6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

std::vector<AlignedPair> AlignmentSet::pairs() const {
  std::vector<AlignedPair> all(train);
  all.insert(all.end(), test.begin(), test.end());
  return all;
}

void AlignmentSet::validate(std::size_t num_left, std::size_t num_right) const {
  const auto in_range = [&](const AlignedPair& p) {
    return p.left >= 0 && p.right >= 0 && static_cast<std::size_t>(p.left) < num_left &&
           static_cast<std::size_t>(p.right) < num_right;
  };
  const std::set<AlignedPair> train_set(train.begin(), train.end());
  for (const auto& p : train) {
    if (!in_range(p)) throw InvalidInputError("train alignment pair out of vocabulary");
  }
  for (const auto& p : test) {
    if (!in_range(p)) throw InvalidInputError("test alignment pair out of vocabulary");
    if (train_set.contains(p)) throw InvalidInputError("train and test alignments overlap");
  }
}

AlignmentSet split_alignment(std::span<const AlignedPair> pairs, double train_fraction,
                             std::uint64_t seed) {
  if (!(train_fraction >= 0.0 && train_fraction <= 1.0)) {
    throw InvalidInputError("train fraction must lie in [0, 1]");
  }
  auto all = sorted_unique(pairs);
  std::mt19937_64 rng(seed);
  std::shuffle(all.begin(), all.end(), rng);
  const auto n_train = static_cast<std::size_t>(
      std::llround(train_fraction * static_cast<double>(all.size())));
  AlignmentSet split;
  split.train.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n_train));
  split.test.assign(all.begin() + static_cast<std::ptrdiff_t>(n_train), all.end());
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

CandidateSets build_candidate_sets(std::span<const AlignedPair> test) {
  if (test.empty()) throw InvalidInputError("empty test alignment");
  CandidateSets sets;
  sets.left.reserve(test.size());
  sets.right.reserve(test.size());
  for (const auto& p : test) {
    sets.left.push_back(p.left);
    sets.right.push_back(p.right);
  }
  for (auto* v : {&sets.left, &sets.right}) {
    std::sort(v->begin(), v->end());
    v->erase(std::unique(v->begin(), v->end()), v->end());
  }
  return sets;
}

RankCollection evaluate_ea(const EaScorer& scorer, std::span<const AlignedPair> test,
                           int threads) {
  const auto candidates = build_candidate_sets(test);
  std::vector<RankRecord> records(2 * test.size());
  internal::parallel_for(test.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto& p = test[i];
      records[2 * i] = rank_query(scorer.score_right(p.left, candidates.right),
                                  candidates.right.size(), index_of(candidates.right, p.right));
      records[2 * i + 1] = rank_query(scorer.score_left(p.right, candidates.left),
                                      candidates.left.size(), index_of(candidates.left, p.left));
    }
  });
  RankCollection rc;
  rc.records = std::move(records);
  rc.sides.reserve(rc.records.size());
  for (std::size_t i = 0; i < test.size(); ++i) {
    rc.sides.push_back(Side::kLeft);
    rc.sides.push_back(Side::kRight);
  }
  return rc;
}

void validate_sweep(std::size_t num_pairs, const SweepOptions& options) {
  if (options.train_fractions.empty() || options.eval_sizes.empty() || options.seeds.empty()) {
    throw ConfigError("sweep needs at least one train fraction, eval size and seed");
  }
  if (has_duplicates(options.train_fractions) || has_duplicates(options.eval_sizes) ||
      has_duplicates(options.seeds)) {
    throw ConfigError("sweep grid values must be unique");
  }
  for (const auto k : options.ks) {
    if (k < 1) throw ConfigError("hits@k needs k >= 1");
  }
  for (const double f : options.train_fractions) {
    if (!(f >= 0.0 && f <= 1.0)) throw ConfigError("train fractions must lie in [0, 1]");
    const auto available = test_size_for(num_pairs, f);
    for (const auto size : options.eval_sizes) {
      if (size < 1) throw ConfigError("eval sizes must be positive");
      if (size > available) {
        throw ConfigError("eval size " + std::to_string(size) + " exceeds the " +
                          std::to_string(available) + " test pairs left at train fraction " +
                          format_g6(f));
      }
    }
  }
}

SweepResult test_size_sweep(const EaScorerFactory& factory, std::span<const AlignedPair> pairs,
                            const SweepOptions& options) {
  const auto unique_pairs = sorted_unique(pairs);
  validate_sweep(unique_pairs.size(), options);
  SweepResult result;
  for (const double fraction : options.train_fractions) {
    for (const auto seed : options.seeds) {
      const auto split = split_alignment(unique_pairs, fraction, seed);
      const auto scorer = factory(split, seed);
      if (!scorer) throw ConfigError("scorer factory returned no scorer");
      auto order = split.test;
      std::mt19937_64 rng(seed ^ kSubsetStream);
      std::shuffle(order.begin(), order.end(), rng);
      for (const auto size : options.eval_sizes) {
        const std::span<const AlignedPair> subset(order.data(), static_cast<std::size_t>(size));
        const auto ranks = evaluate_ea(*scorer, subset, options.threads);
        result.rows.push_back(SweepRow{fraction, static_cast<std::int64_t>(split.train.size()),
                                       size, seed, summarize(ranks, options.ks, options.variant)});
      }
    }
  }
  return result;
}

std::string to_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "train_fraction,train_size,eval_size,seed,metric,value\n";
  for (const auto& row : result.rows) {
    const auto line = [&](std::string_view metric, const std::string& value) {
      out << format_g6(row.train_fraction) << ',' << row.train_size << ',' << row.eval_size
          << ',' << row.seed << ',' << metric << ',' << value << '\n';
    };
    const auto& r = row.report;
    line("n_instances", std::to_string(r.n_instances));
    line("mean_rank", format_g6(r.mean_rank));
    line("mean_reciprocal_rank", format_g6(r.mean_reciprocal_rank));
    line("expected_mean_rank", format_g6(r.expected_mean_rank));
    line("adjusted_mean_rank", format_g6(r.adjusted_mean_rank));
    line("adjusted_mean_rank_index", format_g6(r.adjusted_mean_rank_index));
    for (const auto& [k, v] : r.hits_at_k) line("hits_at_" + std::to_string(k), format_g6(v));
  }
  return out.str();
}

std::vector<double> average_ranks(std::span<const double> values) {
  const auto twice = twice_average_ranks(values);
  std::vector<double> out(twice.size());
  std::transform(twice.begin(), twice.end(), out.begin(),
                 [](std::int64_t t) { return static_cast<double>(t) / 2.0; });
  return out;
}

SpearmanResult spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidInputError("spearman inputs differ in length");
  if (x.size() < 3) throw InvalidInputError("spearman needs at least 3 observations");
  for (const auto* v : {&x, &y}) {
    for (const double d : *v) {
      if (std::isnan(d)) throw InvalidInputError("spearman input contains NaN");
    }
  }
  const auto n = static_cast<std::int64_t>(x.size());
  const auto rx = twice_average_ranks(x);
  const auto ry = twice_average_ranks(y);
  // Average ranks always have mean (n+1)/2; center in doubled units.
  __int128 sxy = 0;
  __int128 sxx = 0;
  __int128 syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const __int128 a = rx[i] - (n + 1);
    const __int128 b = ry[i] - (n + 1);
    sxy += a * b;
    sxx += a * a;
    syy += b * b;
  }
  if (sxx == 0 || syy == 0) {
    throw DegenerateEvaluationError("spearman undefined for constant input");
  }
  SpearmanResult result;
  result.rho = std::clamp(static_cast<double>(sxy) /
                              std::sqrt(static_cast<double>(sxx) * static_cast<double>(syy)),
                          -1.0, 1.0);
  const double dof = static_cast<double>(n - 2);
  const double one_minus = 1.0 - result.rho * result.rho;
  if (one_minus <= 0.0) {
    result.p_value = 0.0;
  } else {
    const double t = std::abs(result.rho) * std::sqrt(dof / one_minus);
    const boost::math::students_t dist(dof);
    result.p_value = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, t)));
  }
  return result;
}

DegreeAnalysis degree_profile(const KnowledgeGraph& left, const KnowledgeGraph& right,
                              std::span<const AlignedPair> alignment) {
  const auto left_degree = entity_degrees(left.triples, left.num_entities());
  const auto right_degree = entity_degrees(right.triples, right.num_entities());
  DegreeAnalysis analysis;
  analysis.pairs.assign(alignment.begin(), alignment.end());
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& p : alignment) {
    if (p.left < 0 || p.right < 0 || static_cast<std::size_t>(p.left) >= left_degree.size() ||
        static_cast<std::size_t>(p.right) >= right_degree.size()) {
      throw InvalidInputError("aligned entity out of vocabulary");
    }
    const auto dl = left_degree[static_cast<std::size_t>(p.left)];
    const auto dr = right_degree[static_cast<std::size_t>(p.right)];
    analysis.degrees.emplace_back(dl, dr);
    xs.push_back(static_cast<double>(dl));
    ys.push_back(static_cast<double>(dr));
  }
  analysis.correlation = spearman(xs, ys);
  return analysis;
}

std::string to_csv(const DegreeAnalysis& analysis, const Vocabulary& left,
                   const Vocabulary& right) {
  std::ostringstream out;
  out << "left,right,left_degree,right_degree\n";
  for (std::size_t i = 0; i < analysis.pairs.size(); ++i) {
    out << csv_field(left.label(analysis.pairs[i].left)) << ','
        << csv_field(right.label(analysis.pairs[i].right))
        << ',' << analysis.degrees[i].first << ',' << analysis.degrees[i].second << '\n';
  }
  return out.str();
}

}  // namespace kgrank
