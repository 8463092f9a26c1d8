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

// Aggregation of per-instance ranks: Hits@k, MR, MRR, expected MR, AMR and
// the adjusted mean rank index (AMRI).
//
// Sums over ranks and candidate counts are carried out on exact integers, so
// MR, expected MR, AMR and AMRI do not depend on summation order. MRR uses
// compensated summation in record order.

#ifndef KGRANK_METRICS_HPP_
#define KGRANK_METRICS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "kgrank/rank.hpp"

namespace kgrank {

// Which prediction direction produced a record. For link prediction kLeft is
// head prediction (?, r, t) and kRight is tail prediction (h, r, ?). For
// alignment kLeft is a left-graph query ranked against right candidates.
enum class Side { kLeft, kRight, kBoth };

std::string_view to_string(Side side);

struct RankCollection {
  std::vector<RankRecord> records;
  // Either empty or one label per record.
  std::vector<Side> sides;
  // Every record holds the sum of `scale` per-side records (2 when head and
  // tail ranks are averaged per triple). Rank values and candidate counts are
  // the stored fields divided by `scale`.
  std::int64_t scale = 1;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
};

// Records with the given side label, same scale.
RankCollection select_side(const RankCollection& rc, Side side);

double hits_at_k(const RankCollection& rc, std::int64_t k, RankVariant variant);
double mean_rank(const RankCollection& rc, RankVariant variant);
double mean_reciprocal_rank(const RankCollection& rc, RankVariant variant);

// (1/2n) * sum(|S_i| + 1).
double expected_mean_rank(std::span<const std::int64_t> candidate_counts);
double expected_mean_rank(const RankCollection& rc);

// MR / E[MR], realistic ranks.
double adjusted_mean_rank(const RankCollection& rc);

// 1 - (MR - 1) / E[MR - 1], realistic ranks. Throws DegenerateEvaluationError
// when every candidate set has a single element.
double adjusted_mean_rank_index(const RankCollection& rc);

// Same index from reported summary statistics alone.
double adjusted_mean_rank_index(double mean_rank, double expected_mean_rank);

struct MetricReport {
  RankVariant variant = RankVariant::kRealistic;
  std::int64_t n_instances = 0;
  std::map<std::int64_t, double> hits_at_k;
  double mean_rank = 0.0;
  // Reported for compatibility; prefer MR / AMRI for model comparison.
  double mean_reciprocal_rank = 0.0;
  double expected_mean_rank = 0.0;
  double adjusted_mean_rank = 0.0;
  double adjusted_mean_rank_index = 0.0;
  // Per-side breakdown, present when the collection carries side labels.
  std::vector<std::pair<std::string, MetricReport>> sides;

  friend bool operator==(const MetricReport&, const MetricReport&) = default;
};

// Hits@k, MR and MRR use `variant`; AMR and AMRI always use realistic ranks.
MetricReport summarize(const RankCollection& rc, std::span<const std::int64_t> ks,
                       RankVariant variant = RankVariant::kRealistic);

nlohmann::json to_json(const MetricReport& report);
MetricReport report_from_json(const nlohmann::json& j);

// Flat CSV: one header line, then one row for the whole collection
// ("all") followed by one row per side. 6 significant digits.
std::string to_csv(const MetricReport& report);

}  // namespace kgrank

#endif  // KGRANK_METRICS_HPP_
