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

// Seeded synthetic datasets for tests and benchmarks.

#ifndef KGRANK_SYNTHETIC_HPP_
#define KGRANK_SYNTHETIC_HPP_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "kgrank/ea.hpp"
#include "kgrank/graph.hpp"

namespace kgrank::synthetic {

// Entities on a width x height grid with relations "east", "west", "south"
// and "north" linking 4-neighbours. Entity id = y * width + x.
KnowledgeGraph grid_graph(std::int32_t width, std::int32_t height);

// `num_triples` distinct uniformly drawn triples (no self-loops).
KnowledgeGraph random_graph(std::int32_t num_entities, std::int32_t num_relations,
                            std::size_t num_triples, std::uint64_t seed);

// Shuffled split; the first round(test_fraction * n) triples become test.
// Returns (train, test).
std::pair<std::vector<Triple>, std::vector<Triple>> split_triples(std::span<const Triple> triples,
                                                                  double test_fraction,
                                                                  std::uint64_t seed);

// Pairs (i, i) for i in [0, n).
std::vector<AlignedPair> identity_alignment(std::int32_t n);

}  // namespace kgrank::synthetic

#endif  // KGRANK_SYNTHETIC_HPP_
