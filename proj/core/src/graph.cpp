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

#include "kgrank/graph.hpp"

#include <algorithm>

#include "kgrank/errors.hpp"

namespace kgrank {

Vocabulary::Vocabulary(std::vector<std::string> labels) : labels_(std::move(labels)) {
  index_.reserve(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!index_.emplace(labels_[i], static_cast<std::int32_t>(i)).second) {
      throw InvalidInputError("duplicate vocabulary label '" + labels_[i] + "'");
    }
  }
}

Vocabulary Vocabulary::sorted(std::vector<std::string> labels) {
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  return Vocabulary(std::move(labels));
}

Vocabulary Vocabulary::numbered(std::size_t n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return Vocabulary(std::move(labels));
}

std::optional<std::int32_t> Vocabulary::find(std::string_view label) const {
  const auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t TripleHash::operator()(const Triple& t) const noexcept {
  std::uint64_t h = static_cast<std::uint32_t>(t.head);
  h = h * 0x9E3779B97F4A7C15ULL + static_cast<std::uint32_t>(t.relation);
  h = h * 0x9E3779B97F4A7C15ULL + static_cast<std::uint32_t>(t.tail);
  return static_cast<std::size_t>(h ^ (h >> 29));
}

void check_vocabulary(std::span<const Triple> triples, std::size_t num_entities,
                      std::size_t num_relations) {
  const auto entity_ok = [&](EntityId e) {
    return e >= 0 && static_cast<std::size_t>(e) < num_entities;
  };
  for (const auto& t : triples) {
    if (!entity_ok(t.head) || !entity_ok(t.tail) || t.relation < 0 ||
        static_cast<std::size_t>(t.relation) >= num_relations) {
      throw InvalidInputError("triple (" + std::to_string(t.head) + ", " +
                              std::to_string(t.relation) + ", " + std::to_string(t.tail) +
                              ") is out of vocabulary");
    }
  }
}

std::vector<std::int64_t> entity_degrees(std::span<const Triple> triples,
                                         std::size_t num_entities) {
  std::vector<std::int64_t> degree(num_entities, 0);
  for (const auto& t : triples) {
    if (t.head < 0 || t.tail < 0 || static_cast<std::size_t>(t.head) >= num_entities ||
        static_cast<std::size_t>(t.tail) >= num_entities) {
      throw InvalidInputError("triple references an unknown entity");
    }
    ++degree[static_cast<std::size_t>(t.head)];
    ++degree[static_cast<std::size_t>(t.tail)];
  }
  return degree;
}

}  // namespace kgrank
