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
#include <cstdio>
#include <sstream>

#include "kgrank/errors.hpp"

namespace kgrank {
namespace {

void require_non_empty(const RankCollection& rc) {
  if (rc.empty()) throw InvalidInputError("empty rank collection");
  if (rc.scale < 1) throw InvalidInputError("rank collection scale must be >= 1");
}

// Rank in units of 1 / (2 * scale).
std::int64_t scaled_rank(const RankRecord& r, RankVariant variant) {
  switch (variant) {
    case RankVariant::kOptimistic:
      return 2 * r.optimistic;
    case RankVariant::kPessimistic:
      return 2 * r.pessimistic;
    case RankVariant::kRealistic:
      return r.twice_realistic;
  }
  return r.twice_realistic;
}

// Neumaier summation, fixed order.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

std::string format_g6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

std::string_view to_string(Side side) {
  switch (side) {
    case Side::kLeft:
      return "left";
    case Side::kRight:
      return "right";
    case Side::kBoth:
      return "both";
  }
  return "unknown";
}

RankCollection select_side(const RankCollection& rc, Side side) {
  RankCollection out;
  out.scale = rc.scale;
  for (std::size_t i = 0; i < rc.sides.size() && i < rc.records.size(); ++i) {
    if (rc.sides[i] == side) {
      out.records.push_back(rc.records[i]);
      out.sides.push_back(side);
    }
  }
  return out;
}

double hits_at_k(const RankCollection& rc, std::int64_t k, RankVariant variant) {
  require_non_empty(rc);
  if (k < 1) throw InvalidInputError("k must be >= 1");
  const std::int64_t bound = 2 * rc.scale * k;
  std::int64_t hits = 0;
  for (const auto& r : rc.records) hits += scaled_rank(r, variant) <= bound;
  return static_cast<double>(hits) / static_cast<double>(rc.size());
}

double mean_rank(const RankCollection& rc, RankVariant variant) {
  require_non_empty(rc);
  std::int64_t total = 0;
  for (const auto& r : rc.records) total += scaled_rank(r, variant);
  return static_cast<double>(total) /
         (2.0 * static_cast<double>(rc.scale) * static_cast<double>(rc.size()));
}

double mean_reciprocal_rank(const RankCollection& rc, RankVariant variant) {
  require_non_empty(rc);
  const double unit = 2.0 * static_cast<double>(rc.scale);
  CompensatedSum sum;
  for (const auto& r : rc.records) {
    sum.add(unit / static_cast<double>(scaled_rank(r, variant)));
  }
  return sum.value() / static_cast<double>(rc.size());
}

double expected_mean_rank(std::span<const std::int64_t> candidate_counts) {
  if (candidate_counts.empty()) throw InvalidInputError("empty candidate count list");
  std::int64_t total = 0;
  for (const auto c : candidate_counts) {
    if (c < 1) throw InvalidInputError("candidate count must be >= 1");
    total += c + 1;
  }
  return static_cast<double>(total) / (2.0 * static_cast<double>(candidate_counts.size()));
}

double expected_mean_rank(const RankCollection& rc) {
  require_non_empty(rc);
  std::int64_t total = 0;
  for (const auto& r : rc.records) total += r.candidate_count + rc.scale;
  return static_cast<double>(total) /
         (2.0 * static_cast<double>(rc.scale) * static_cast<double>(rc.size()));
}

double adjusted_mean_rank(const RankCollection& rc) {
  require_non_empty(rc);
  std::int64_t ranks = 0;
  std::int64_t expected = 0;
  for (const auto& r : rc.records) {
    ranks += r.twice_realistic;
    expected += r.candidate_count + rc.scale;
  }
  return static_cast<double>(ranks) / static_cast<double>(expected);
}

double adjusted_mean_rank_index(const RankCollection& rc) {
  require_non_empty(rc);
  // In units of 1/(2*scale): sum(r_i - 1) = sum(t_i) - 2*scale*n and
  // E[sum(r_i - 1)] = (sum(c_i) - scale*n), the latter already halved.
  const auto n = static_cast<std::int64_t>(rc.size());
  std::int64_t ranks = 0;
  std::int64_t counts = 0;
  for (const auto& r : rc.records) {
    ranks += r.twice_realistic;
    counts += r.candidate_count;
  }
  const std::int64_t excess = ranks - 2 * rc.scale * n;
  const std::int64_t expected_excess = counts - rc.scale * n;
  if (expected_excess == 0) {
    throw DegenerateEvaluationError(
        "AMRI undefined: every candidate set has a single element");
  }
  return 1.0 - static_cast<double>(excess) / static_cast<double>(expected_excess);
}

double adjusted_mean_rank_index(double mean_rank, double expected_mean_rank) {
  if (!(expected_mean_rank > 1.0)) {
    throw DegenerateEvaluationError("AMRI undefined: expected mean rank must exceed 1");
  }
  return 1.0 - (mean_rank - 1.0) / (expected_mean_rank - 1.0);
}

MetricReport summarize(const RankCollection& rc, std::span<const std::int64_t> ks,
                       RankVariant variant) {
  require_non_empty(rc);
  if (!rc.sides.empty() && rc.sides.size() != rc.records.size()) {
    throw InvalidInputError("side labels do not match record count");
  }
  MetricReport report;
  report.variant = variant;
  report.n_instances = static_cast<std::int64_t>(rc.size());
  for (const auto k : ks) report.hits_at_k[k] = hits_at_k(rc, k, variant);
  report.mean_rank = mean_rank(rc, variant);
  report.mean_reciprocal_rank = mean_reciprocal_rank(rc, variant);
  report.expected_mean_rank = expected_mean_rank(rc);
  report.adjusted_mean_rank = adjusted_mean_rank(rc);
  report.adjusted_mean_rank_index = adjusted_mean_rank_index(rc);
  if (!rc.sides.empty()) {
    for (const auto side : {Side::kLeft, Side::kRight, Side::kBoth}) {
      auto part = select_side(rc, side);
      if (part.empty()) continue;
      part.sides.clear();
      report.sides.emplace_back(std::string(to_string(side)), summarize(part, ks, variant));
    }
  }
  return report;
}

nlohmann::json to_json(const MetricReport& report) {
  nlohmann::json j;
  j["n_instances"] = report.n_instances;
  j["rank_variant"] = std::string(to_string(report.variant));
  auto hits = nlohmann::json::object();
  for (const auto& [k, v] : report.hits_at_k) hits[std::to_string(k)] = v;
  j["hits_at_k"] = std::move(hits);
  j["mean_rank"] = report.mean_rank;
  j["mean_reciprocal_rank"] = report.mean_reciprocal_rank;
  j["mrr_informational"] = true;
  j["expected_mean_rank"] = report.expected_mean_rank;
  j["adjusted_mean_rank"] = report.adjusted_mean_rank;
  j["adjusted_mean_rank_index"] = report.adjusted_mean_rank_index;
  if (!report.sides.empty()) {
    auto sides = nlohmann::json::object();
    for (const auto& [name, sub] : report.sides) sides[name] = to_json(sub);
    j["sides"] = std::move(sides);
  }
  return j;
}

MetricReport report_from_json(const nlohmann::json& j) {
  try {
    MetricReport report;
    const auto variant = parse_rank_variant(j.at("rank_variant").get<std::string>());
    if (!variant) throw InvalidInputError("unknown rank_variant in report");
    report.variant = *variant;
    report.n_instances = j.at("n_instances").get<std::int64_t>();
    for (const auto& [k, v] : j.at("hits_at_k").items()) {
      report.hits_at_k[std::stoll(k)] = v.get<double>();
    }
    report.mean_rank = j.at("mean_rank").get<double>();
    report.mean_reciprocal_rank = j.at("mean_reciprocal_rank").get<double>();
    report.expected_mean_rank = j.at("expected_mean_rank").get<double>();
    report.adjusted_mean_rank = j.at("adjusted_mean_rank").get<double>();
    report.adjusted_mean_rank_index = j.at("adjusted_mean_rank_index").get<double>();
    if (j.contains("sides")) {
      for (const auto side : {Side::kLeft, Side::kRight, Side::kBoth}) {
        const std::string name(to_string(side));
        if (j["sides"].contains(name)) {
          report.sides.emplace_back(name, report_from_json(j["sides"][name]));
        }
      }
    }
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInputError(std::string("malformed report JSON: ") + e.what());
  } catch (const std::logic_error& e) {
    throw InvalidInputError(std::string("malformed report JSON: ") + e.what());
  }
}

std::string to_csv(const MetricReport& report) {
  std::ostringstream out;
  out << "scope,rank_variant,n_instances,mean_rank,mean_reciprocal_rank,"
         "expected_mean_rank,adjusted_mean_rank,adjusted_mean_rank_index";
  for (const auto& [k, v] : report.hits_at_k) out << ",hits_at_" << k;
  out << '\n';
  const auto row = [&out](std::string_view scope, const MetricReport& r) {
    out << scope << ',' << to_string(r.variant) << ',' << r.n_instances << ','
        << format_g6(r.mean_rank) << ',' << format_g6(r.mean_reciprocal_rank) << ','
        << format_g6(r.expected_mean_rank) << ',' << format_g6(r.adjusted_mean_rank) << ','
        << format_g6(r.adjusted_mean_rank_index);
    for (const auto& [k, v] : r.hits_at_k) out << ',' << format_g6(v);
    out << '\n';
  };
  row("all", report);
  for (const auto& [name, sub] : report.sides) row(name, sub);
  return out.str();
}

}  // namespace kgrank
