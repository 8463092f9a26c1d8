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

#include "kgrank/metrics.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "kgrank/errors.hpp"
#include "support/oracles.hpp"

namespace kgrank {
namespace {

constexpr auto kReal = RankVariant::kRealistic;

// Realistic rank r (integer or half-integer) realised by the tightest tie
// span: integer r -> opt = pess = r; r + 0.5 -> opt = r, pess = r + 1.
RankRecord record(double rank, std::int64_t count) {
  const auto twice = static_cast<std::int64_t>(std::llround(2 * rank));
  const std::int64_t opt = twice / 2;
  return RankRecord{opt, twice - opt, twice, count};
}

RankCollection collection(const std::vector<double>& ranks,
                          const std::vector<std::int64_t>& counts) {
  RankCollection rc;
  for (std::size_t i = 0; i < ranks.size(); ++i) rc.records.push_back(record(ranks[i], counts[i]));
  return rc;
}

RankCollection collection(const std::vector<double>& ranks) {
  return collection(ranks, std::vector<std::int64_t>(ranks.size(), 10));
}

TEST(HitsAtK, Examples) {
  EXPECT_DOUBLE_EQ(hits_at_k(collection({1, 3, 5}), 3, kReal), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(hits_at_k(collection({1, 3, 5}), 5, kReal), 1.0);
  EXPECT_DOUBLE_EQ(hits_at_k(collection({2.5}), 2, kReal), 0.0);
  EXPECT_DOUBLE_EQ(hits_at_k(collection({2.5}), 3, kReal), 1.0);
}

TEST(HitsAtK, VariantSelectsTieBreaking) {
  // opt 2, pess 3.
  const auto rc = collection({2.5});
  EXPECT_DOUBLE_EQ(hits_at_k(rc, 2, RankVariant::kOptimistic), 1.0);
  EXPECT_DOUBLE_EQ(hits_at_k(rc, 2, RankVariant::kPessimistic), 0.0);
}

TEST(HitsAtK, Errors) {
  EXPECT_THROW(hits_at_k(RankCollection{}, 1, kReal), InvalidInputError);
  EXPECT_THROW(hits_at_k(collection({1}), 0, kReal), InvalidInputError);
}

TEST(MeanRank, Examples) {
  EXPECT_DOUBLE_EQ(mean_rank(collection({1, 3, 5}), kReal), 3.0);
  EXPECT_DOUBLE_EQ(mean_rank(collection({1, 1, 1}), kReal), 1.0);
  EXPECT_DOUBLE_EQ(mean_rank(collection({2.5, 3.5}), kReal), 3.0);
  EXPECT_THROW(mean_rank(RankCollection{}, kReal), InvalidInputError);
}

TEST(MeanReciprocalRank, Examples) {
  EXPECT_NEAR(mean_reciprocal_rank(collection({1, 3, 5}), kReal), (1 + 1.0 / 3 + 0.2) / 3, 1e-15);
  EXPECT_NEAR(mean_reciprocal_rank(collection({1, 3, 5}), kReal), 0.5111, 1e-4);
  EXPECT_DOUBLE_EQ(mean_reciprocal_rank(collection({1, 1}), kReal), 1.0);
  EXPECT_DOUBLE_EQ(mean_reciprocal_rank(collection({2}), kReal), 0.5);
  EXPECT_THROW(mean_reciprocal_rank(RankCollection{}, kReal), InvalidInputError);
}

TEST(ExpectedMeanRank, Examples) {
  const std::vector<std::int64_t> a = {9, 19};
  const std::vector<std::int64_t> b = {1};
  const std::vector<std::int64_t> c = {5, 5};
  EXPECT_DOUBLE_EQ(expected_mean_rank(a), 7.5);
  EXPECT_DOUBLE_EQ(expected_mean_rank(b), 1.0);
  EXPECT_DOUBLE_EQ(expected_mean_rank(c), 3.0);
  EXPECT_THROW(expected_mean_rank(std::span<const std::int64_t>{}), InvalidInputError);
}

TEST(AdjustedMeanRank, Examples) {
  EXPECT_DOUBLE_EQ(adjusted_mean_rank(collection({1, 1}, {5, 5})), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(adjusted_mean_rank(collection({3, 5.5}, {5, 10})), 1.0);
  EXPECT_DOUBLE_EQ(adjusted_mean_rank(collection({2, 3}, {5, 5})), 2.5 / 3.0);
  EXPECT_THROW(adjusted_mean_rank(RankCollection{}), InvalidInputError);
}

TEST(AdjustedMeanRankIndex, Examples) {
  EXPECT_EQ(adjusted_mean_rank_index(collection({1, 1, 1}, {2, 50, 7})), 1.0);
  EXPECT_EQ(adjusted_mean_rank_index(collection({1.5, 25.5, 4}, {2, 50, 7})), 0.0);
  EXPECT_DOUBLE_EQ(adjusted_mean_rank_index(collection({2, 3}, {5, 5})), 0.25);
  EXPECT_EQ(adjusted_mean_rank_index(collection({2, 50, 7}, {2, 50, 7})), -1.0);
}

TEST(AdjustedMeanRankIndex, DegenerateCandidateSets) {
  EXPECT_THROW(adjusted_mean_rank_index(collection({1, 1}, {1, 1})), DegenerateEvaluationError);
  // Singletons contribute zero to both sums in a mixed collection.
  EXPECT_DOUBLE_EQ(adjusted_mean_rank_index(collection({1, 2, 3}, {1, 5, 5})), 0.25);
}

TEST(AdjustedMeanRankIndex, FromSummaryStatistics) {
  EXPECT_NEAR(adjusted_mean_rank_index(7000.0, (40943.0 + 1) / 2), 1 - 6999.0 / 20471.0, 1e-15);
  EXPECT_THROW(adjusted_mean_rank_index(1.0, 1.0), DegenerateEvaluationError);
}

TEST(Summarize, Examples) {
  const std::vector<std::int64_t> ks = {1, 10};
  const auto report = summarize(collection({1, 3, 5}, {10, 10, 10}), ks);
  EXPECT_DOUBLE_EQ(report.hits_at_k.at(1), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(report.hits_at_k.at(10), 1.0);
  EXPECT_DOUBLE_EQ(report.mean_rank, 3.0);
  EXPECT_DOUBLE_EQ(report.adjusted_mean_rank_index, 1.0 - 2.0 / 4.5);
  EXPECT_NEAR(report.adjusted_mean_rank_index, 0.5556, 1e-4);
  EXPECT_EQ(report.n_instances, 3);

  const auto no_hits = summarize(collection({1, 3, 5}), std::span<const std::int64_t>{});
  EXPECT_TRUE(no_hits.hits_at_k.empty());

  const auto single = summarize(collection({1}, {2}), ks);
  EXPECT_DOUBLE_EQ(single.mean_rank, 1.0);
  EXPECT_DOUBLE_EQ(single.adjusted_mean_rank_index, 1.0);

  EXPECT_THROW(summarize(RankCollection{}, ks), InvalidInputError);
}

TEST(Summarize, AmriIgnoresVariantChoice) {
  const std::vector<std::int64_t> ks = {1};
  const auto rc = collection({2.5, 1.5}, {4, 4});
  const auto opt = summarize(rc, ks, RankVariant::kOptimistic);
  const auto real = summarize(rc, ks, RankVariant::kRealistic);
  EXPECT_NE(opt.mean_rank, real.mean_rank);
  EXPECT_EQ(opt.adjusted_mean_rank_index, real.adjusted_mean_rank_index);
}

TEST(Summarize, SideBreakdown) {
  auto rc = collection({1, 3, 2, 4}, {5, 5, 5, 5});
  rc.sides = {Side::kLeft, Side::kRight, Side::kLeft, Side::kRight};
  const std::vector<std::int64_t> ks = {1};
  const auto report = summarize(rc, ks);
  ASSERT_EQ(report.sides.size(), 2u);
  EXPECT_EQ(report.sides[0].first, "left");
  EXPECT_DOUBLE_EQ(report.sides[0].second.mean_rank, 1.5);
  EXPECT_EQ(report.sides[1].first, "right");
  EXPECT_DOUBLE_EQ(report.sides[1].second.mean_rank, 3.5);
}

TEST(Summarize, ScaledCollectionsDivideOut) {
  // One record per triple holding head + tail sums: ranks 1 and 3, counts 4 and 6.
  RankCollection rc;
  rc.scale = 2;
  rc.records.push_back(RankRecord{4, 4, 8, 10});
  const std::vector<std::int64_t> ks = {2};
  const auto report = summarize(rc, ks);
  EXPECT_DOUBLE_EQ(report.mean_rank, 2.0);
  EXPECT_DOUBLE_EQ(report.expected_mean_rank, 3.0);
  EXPECT_DOUBLE_EQ(report.hits_at_k.at(2), 1.0);
  EXPECT_DOUBLE_EQ(report.adjusted_mean_rank_index, 1.0 - 1.0 / 2.0);
}

RankCollection random_collection(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<std::int64_t> count(1, 200);
  RankCollection rc;
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = count(rng);
    const auto opt = std::uniform_int_distribution<std::int64_t>(1, c)(rng);
    const auto pess = std::uniform_int_distribution<std::int64_t>(opt, c)(rng);
    rc.records.push_back(RankRecord{opt, pess, opt + pess, c});
  }
  return rc;
}

double relative_error(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

TEST(MetricProperties, MatchNaiveReference) {
  std::mt19937_64 rng(21);
  const std::vector<std::int64_t> ks = {1, 3, 10, 100};
  for (int trial = 0; trial < 200; ++trial) {
    auto rc = random_collection(rng, 1 + rng() % 1000);
    if (std::all_of(rc.records.begin(), rc.records.end(),
                    [](const RankRecord& r) { return r.candidate_count == 1; })) {
      continue;
    }
    for (const auto variant : {RankVariant::kOptimistic, RankVariant::kPessimistic, kReal}) {
      std::vector<double> ranks;
      std::vector<double> counts;
      std::vector<double> realistic;
      for (const auto& r : rc.records) {
        const double mid = (r.optimistic + r.pessimistic) / 2.0;
        ranks.push_back(variant == RankVariant::kOptimistic    ? r.optimistic
                        : variant == RankVariant::kPessimistic ? r.pessimistic
                                                               : mid);
        realistic.push_back(mid);
        counts.push_back(static_cast<double>(r.candidate_count));
      }
      const auto report = summarize(rc, ks, variant);
      using N = testing::NaiveMetrics;
      for (const auto k : ks) {
        EXPECT_LE(relative_error(report.hits_at_k.at(k), N::hits(ranks, static_cast<double>(k))),
                  1e-12);
      }
      EXPECT_LE(relative_error(report.mean_rank, N::mean(ranks)), 1e-12);
      EXPECT_LE(relative_error(report.mean_reciprocal_rank, N::mrr(ranks)), 1e-12);
      EXPECT_LE(relative_error(report.expected_mean_rank, N::expected_mr(counts)), 1e-12);
      EXPECT_NEAR(report.adjusted_mean_rank_index, N::amri(realistic, counts), 1e-12);
    }
  }
}

TEST(MetricProperties, BoundsAndMonotonicity) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 200; ++trial) {
    const auto rc = random_collection(rng, 1 + rng() % 300);
    std::int64_t max_count = 0;
    for (const auto& r : rc.records) max_count = std::max(max_count, r.candidate_count);
    std::vector<std::int64_t> ks;
    for (std::int64_t k = 1; k <= max_count; k += 1 + k / 4) ks.push_back(k);
    ks.push_back(max_count);
    const auto report = [&] {
      try {
        return summarize(rc, ks);
      } catch (const DegenerateEvaluationError&) {
        return MetricReport{};
      }
    }();
    if (report.n_instances == 0) continue;
    double previous = 0.0;
    for (const auto& [k, h] : report.hits_at_k) {
      EXPECT_GE(h, previous);
      previous = h;
    }
    EXPECT_DOUBLE_EQ(report.hits_at_k.at(max_count), 1.0);
    EXPECT_GE(report.mean_rank, 1.0);
    EXPECT_LE(report.mean_rank, static_cast<double>(max_count));
    EXPECT_GT(report.mean_reciprocal_rank, 0.0);
    EXPECT_LE(report.mean_reciprocal_rank, 1.0);
    EXPECT_GE(report.adjusted_mean_rank_index, -1.0);
    EXPECT_LE(report.adjusted_mean_rank_index, 1.0);
  }
}

TEST(MetricProperties, ConstantScorerIdentityIsExact) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    RankCollection rc;
    const auto n = 1 + rng() % 500;
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<std::int64_t>(2 + rng() % 100000);
      rc.records.push_back(RankRecord{1, c, c + 1, c});
    }
    EXPECT_EQ(adjusted_mean_rank_index(rc), 0.0);
    EXPECT_EQ(adjusted_mean_rank(rc), 1.0);
  }
}

TEST(MetricProperties, AmriIsOneOnlyForPerfectRanks) {
  auto rc = collection({1, 1, 1}, {3, 4, 5});
  EXPECT_EQ(adjusted_mean_rank_index(rc), 1.0);
  rc.records[1] = record(1.5, 4);
  EXPECT_LT(adjusted_mean_rank_index(rc), 1.0);
}

TEST(MetricProperties, UniformRanksGiveAmriNearZero) {
  // AMRI = 1 - sum(r-1) / sum((C-1)/2); under uniform ranks its standard
  // deviation is sqrt(sum((C^2-1)/12)) / sum((C-1)/2).
  std::mt19937_64 rng(24);
  int inside = 0;
  for (int trial = 0; trial < 100; ++trial) {
    RankCollection rc;
    double variance = 0;
    double denominator = 0;
    for (int i = 0; i < 2000; ++i) {
      const std::int64_t c = 2 + static_cast<std::int64_t>(rng() % 300);
      const auto r = std::uniform_int_distribution<std::int64_t>(1, c)(rng);
      rc.records.push_back(RankRecord{r, r, 2 * r, c});
      variance += (static_cast<double>(c) * c - 1) / 12.0;
      denominator += (c - 1) / 2.0;
    }
    const double sd = std::sqrt(variance) / denominator;
    inside += std::abs(adjusted_mean_rank_index(rc)) <= 2.5758 * sd;
  }
  EXPECT_GE(inside, 95);
}

TEST(MetricReportIo, JsonRoundTripIsExact) {
  std::mt19937_64 rng(25);
  auto rc = random_collection(rng, 500);
  rc.sides.resize(rc.size());
  for (std::size_t i = 0; i < rc.size(); ++i) rc.sides[i] = i % 2 ? Side::kRight : Side::kLeft;
  const std::vector<std::int64_t> ks = {1, 3, 10};
  const auto report = summarize(rc, ks, RankVariant::kPessimistic);
  const auto text = to_json(report).dump();
  EXPECT_EQ(report_from_json(nlohmann::json::parse(text)), report);
  EXPECT_TRUE(to_json(report).at("mrr_informational").get<bool>());
}

TEST(MetricReportIo, MalformedJsonRejected) {
  EXPECT_THROW(report_from_json(nlohmann::json::parse(R"({"mean_rank": 1})")), InvalidInputError);
  EXPECT_THROW(report_from_json(nlohmann::json::parse(
                   R"({"rank_variant": "bogus", "n_instances": 1, "hits_at_k": {}})")),
               InvalidInputError);
}

TEST(MetricReportIo, CsvLayout) {
  auto rc = collection({1, 3}, {4, 4});
  rc.sides = {Side::kLeft, Side::kRight};
  const std::vector<std::int64_t> ks = {1, 10};
  const auto csv = to_csv(summarize(rc, ks));
  EXPECT_EQ(csv,
            "scope,rank_variant,n_instances,mean_rank,mean_reciprocal_rank,expected_mean_rank,"
            "adjusted_mean_rank,adjusted_mean_rank_index,hits_at_1,hits_at_10\n"
            "all,realistic,2,2,0.666667,2.5,0.8,0.333333,0.5,1\n"
            "left,realistic,1,1,1,2.5,0.4,1,1,1\n"
            "right,realistic,1,3,0.333333,2.5,1.2,-0.333333,0,1\n");
}

}  // namespace
}  // namespace kgrank
