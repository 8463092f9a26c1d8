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

// Reference scorers: degenerate baselines (constant, uniform random, oracle),
// a synthetic alignment scorer with tunable noise, and a small translational
// embedding model trained with a margin ranking loss.

#ifndef KGRANK_SCORERS_HPP_
#define KGRANK_SCORERS_HPP_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "kgrank/ea.hpp"
#include "kgrank/graph.hpp"
#include "kgrank/lp.hpp"

namespace kgrank {

enum class ScorerKind { kConstant, kRandom, kOracle, kNoisySimilarity, kTranslational };

std::string_view to_string(ScorerKind kind);
std::optional<ScorerKind> parse_scorer_kind(std::string_view name);

struct ScorerSpec {
  ScorerKind kind = ScorerKind::kRandom;
  std::uint64_t seed = 0;
  double sigma = 1.0;             // noisy_similarity
  std::int32_t dimension = 32;    // noisy_similarity, translational
  double margin = 1.0;            // translational
  double learning_rate = 0.01;    // translational
  std::int32_t epochs = 100;      // translational
  std::int32_t negatives = 1;     // translational, per positive
  bool filter_negatives = false;  // translational: resample known-true corruptions

  // Throws ConfigError for parameters outside their ranges.
  void validate() const;
};

// Scores every candidate 0.
class ConstantScorer final : public LpScorer, public EaScorer {
 public:
  std::vector<double> score_tails(EntityId, RelationId,
                                  std::span<const EntityId> candidates) const override;
  std::vector<double> score_heads(RelationId, EntityId,
                                  std::span<const EntityId> candidates) const override;
  std::vector<double> score_right(EntityId, std::span<const EntityId> candidates) const override;
  std::vector<double> score_left(EntityId, std::span<const EntityId> candidates) const override;
};

// Uniform [0, 1) scores, a pure function of (seed, query, candidate).
class RandomScorer final : public LpScorer, public EaScorer {
 public:
  explicit RandomScorer(std::uint64_t seed) : seed_(seed) {}

  std::vector<double> score_tails(EntityId head, RelationId relation,
                                  std::span<const EntityId> candidates) const override;
  std::vector<double> score_heads(RelationId relation, EntityId tail,
                                  std::span<const EntityId> candidates) const override;
  std::vector<double> score_right(EntityId left,
                                  std::span<const EntityId> candidates) const override;
  std::vector<double> score_left(EntityId right,
                                 std::span<const EntityId> candidates) const override;

 private:
  std::uint64_t seed_;
};

// 1 for known-true triples, 0 otherwise.
class LpOracleScorer final : public LpScorer {
 public:
  explicit LpOracleScorer(std::span<const Triple> truths);

  std::vector<double> score_tails(EntityId head, RelationId relation,
                                  std::span<const EntityId> candidates) const override;
  std::vector<double> score_heads(RelationId relation, EntityId tail,
                                  std::span<const EntityId> candidates) const override;

 private:
  std::unordered_set<Triple, TripleHash> truths_;
};

// 1 for aligned pairs, 0 otherwise.
class EaOracleScorer final : public EaScorer {
 public:
  explicit EaOracleScorer(std::span<const AlignedPair> pairs);

  std::vector<double> score_right(EntityId left,
                                  std::span<const EntityId> candidates) const override;
  std::vector<double> score_left(EntityId right,
                                 std::span<const EntityId> candidates) const override;

 private:
  std::vector<AlignedPair> pairs_;  // sorted
};

// Each aligned pair shares a standard-normal latent vector; each side sees
// it plus N(0, sigma^2) noise per coordinate. Unaligned entities get their
// own latent vector. Score = -||left - right||.
class NoisySimilarityScorer final : public EaScorer {
 public:
  NoisySimilarityScorer(std::span<const AlignedPair> pairs, std::size_t num_left,
                        std::size_t num_right, std::int32_t dimension, double sigma,
                        std::uint64_t seed);

  std::vector<double> score_right(EntityId left,
                                  std::span<const EntityId> candidates) const override;
  std::vector<double> score_left(EntityId right,
                                 std::span<const EntityId> candidates) const override;

 private:
  std::vector<double> distances(std::span<const double> query, const std::vector<double>& table,
                                std::span<const EntityId> candidates) const;

  std::size_t dimension_;
  std::vector<double> left_;   // num_left x dimension
  std::vector<double> right_;  // num_right x dimension
};

// Row-major entity and relation vectors.
struct EmbeddingTable {
  std::int32_t dimension = 0;
  std::vector<float> entities;
  std::vector<float> relations;

  std::size_t num_entities() const;
  std::size_t num_relations() const;
  std::span<const float> entity(EntityId e) const;
  std::span<const float> relation(RelationId r) const;
  // Throws InvalidInputError on non-finite entries or inconsistent sizes.
  void validate() const;
};

// Score of (h, r, t) = -||h + r - t||_2.
class TranslationalScorer final : public LpScorer {
 public:
  explicit TranslationalScorer(EmbeddingTable table);

  const EmbeddingTable& table() const { return table_; }
  double score(EntityId head, RelationId relation, EntityId tail) const;

  std::vector<double> score_tails(EntityId head, RelationId relation,
                                  std::span<const EntityId> candidates) const override;
  std::vector<double> score_heads(RelationId relation, EntityId tail,
                                  std::span<const EntityId> candidates) const override;

 private:
  EmbeddingTable table_;
};

struct TrainingResult {
  std::unique_ptr<TranslationalScorer> scorer;
  // Mean hinge loss per (positive, negative) pair, one entry per epoch.
  std::vector<double> epoch_losses;
};

// Single-threaded SGD on max(0, margin + d(pos) - d(neg)) with uniformly
// corrupted heads or tails. Entity vectors are renormalised to unit length
// at the start of every epoch. Deterministic given spec.seed.
TrainingResult train_translational(const KnowledgeGraph& train, const ScorerSpec& spec);

// Binary layout, little-endian:
//   8 bytes  magic "KGRKEMB1"
//   u32      dimension
//   u64      entity count
//   u64      relation count
//   f32[]    entity vectors, then relation vectors, row-major
// The JSON sidecar holds {"format", "version", "dimension", "entities",
// "relations"} with the label vocabularies in id order.
void write_embeddings(const EmbeddingTable& table, const Vocabulary& entities,
                      const Vocabulary& relations, const std::filesystem::path& binary,
                      const std::filesystem::path& sidecar);

struct LoadedEmbeddings {
  EmbeddingTable table;
  Vocabulary entities;
  Vocabulary relations;
};

LoadedEmbeddings read_embeddings(const std::filesystem::path& binary,
                                 const std::filesystem::path& sidecar);

// Builds a link-prediction scorer. `train` feeds the translational model;
// `truths` feeds the oracle.
std::unique_ptr<LpScorer> make_lp_scorer(const ScorerSpec& spec, const KnowledgeGraph& train,
                                         std::span<const Triple> truths);

// Builds an alignment scorer. `pairs` is the full ground-truth alignment.
std::unique_ptr<EaScorer> make_ea_scorer(const ScorerSpec& spec,
                                         std::span<const AlignedPair> pairs,
                                         std::size_t num_left, std::size_t num_right);

}  // namespace kgrank

#endif  // KGRANK_SCORERS_HPP_
