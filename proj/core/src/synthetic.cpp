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

#include "kgrank/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

#include "kgrank/errors.hpp"

namespace kgrank::synthetic {

KnowledgeGraph grid_graph(std::int32_t width, std::int32_t height) {
  if (width < 1 || height < 1) throw InvalidInputError("grid needs positive dimensions");
  KnowledgeGraph g;
  g.entities = Vocabulary::numbered(static_cast<std::size_t>(width) * height);
  g.relations = Vocabulary({"east", "west", "south", "north"});
  const auto id = [width](std::int32_t x, std::int32_t y) { return y * width + x; };
  for (std::int32_t y = 0; y < height; ++y) {
    for (std::int32_t x = 0; x < width; ++x) {
      if (x + 1 < width) {
        g.triples.push_back({id(x, y), 0, id(x + 1, y)});
        g.triples.push_back({id(x + 1, y), 1, id(x, y)});
      }
      if (y + 1 < height) {
        g.triples.push_back({id(x, y), 2, id(x, y + 1)});
        g.triples.push_back({id(x, y + 1), 3, id(x, y)});
      }
    }
  }
  return g;
}

KnowledgeGraph random_graph(std::int32_t num_entities, std::int32_t num_relations,
                            std::size_t num_triples, std::uint64_t seed) {
  if (num_entities < 2 || num_relations < 1) throw InvalidInputError("graph too small");
  const auto capacity = static_cast<double>(num_entities) * (num_entities - 1) * num_relations;
  if (static_cast<double>(num_triples) > capacity / 2) {
    throw InvalidInputError("too many triples requested for a random graph");
  }
  KnowledgeGraph g;
  g.entities = Vocabulary::numbered(static_cast<std::size_t>(num_entities));
  g.relations = Vocabulary::numbered(static_cast<std::size_t>(num_relations));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int32_t> entity(0, num_entities - 1);
  std::uniform_int_distribution<std::int32_t> relation(0, num_relations - 1);
  std::unordered_set<Triple, TripleHash> seen;
  while (g.triples.size() < num_triples) {
    const Triple t{entity(rng), relation(rng), entity(rng)};
    if (t.head == t.tail || !seen.insert(t).second) continue;
    g.triples.push_back(t);
  }
  return g;
}

std::pair<std::vector<Triple>, std::vector<Triple>> split_triples(std::span<const Triple> triples,
                                                                  double test_fraction,
                                                                  std::uint64_t seed) {
  std::vector<Triple> all(triples.begin(), triples.end());
  std::mt19937_64 rng(seed);
  std::shuffle(all.begin(), all.end(), rng);
  const auto n_test =
      static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(all.size())));
  std::vector<Triple> test(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n_test));
  std::vector<Triple> train(all.begin() + static_cast<std::ptrdiff_t>(n_test), all.end());
  return {std::move(train), std::move(test)};
}

std::vector<AlignedPair> identity_alignment(std::int32_t n) {
  std::vector<AlignedPair> pairs;
  pairs.reserve(static_cast<std::size_t>(std::max(0, n)));
  for (std::int32_t i = 0; i < n; ++i) pairs.push_back({i, i});
  return pairs;
}

}  // namespace kgrank::synthetic
