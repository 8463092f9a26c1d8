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

#ifndef KGRANK_GRAPH_HPP_
#define KGRANK_GRAPH_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace kgrank {

using EntityId = std::int32_t;
using RelationId = std::int32_t;

// Dense ids 0..size()-1 with string labels.
class Vocabulary {
 public:
  Vocabulary() = default;
  // Ids follow the order of `labels`, which must be free of duplicates.
  explicit Vocabulary(std::vector<std::string> labels);
  // Builds a vocabulary over the sorted, de-duplicated labels.
  static Vocabulary sorted(std::vector<std::string> labels);
  // Ids 0..n-1 labelled "0".."n-1"; for synthetic data.
  static Vocabulary numbered(std::size_t n);

  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  const std::string& label(std::int32_t id) const {
    return labels_.at(static_cast<std::size_t>(id));
  }
  std::optional<std::int32_t> find(std::string_view label) const;
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::int32_t> index_;
};

struct Triple {
  EntityId head = 0;
  RelationId relation = 0;
  EntityId tail = 0;

  friend auto operator<=>(const Triple&, const Triple&) = default;
};

struct TripleHash {
  std::size_t operator()(const Triple& t) const noexcept;
};

struct KnowledgeGraph {
  Vocabulary entities;
  Vocabulary relations;
  std::vector<Triple> triples;

  std::size_t num_entities() const { return entities.size(); }
  std::size_t num_relations() const { return relations.size(); }
};

// Throws InvalidInputError on the first out-of-vocabulary component.
void check_vocabulary(std::span<const Triple> triples, std::size_t num_entities,
                      std::size_t num_relations);

// In-degree + out-degree of every entity; a self-loop counts twice.
std::vector<std::int64_t> entity_degrees(std::span<const Triple> triples, std::size_t num_entities);

}  // namespace kgrank

#endif  // KGRANK_GRAPH_HPP_
