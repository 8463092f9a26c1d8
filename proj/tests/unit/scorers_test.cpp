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

#include "kgrank/scorers.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <vector>

#include "gtest/gtest.h"
#include "kgrank/errors.hpp"
#include "kgrank/synthetic.hpp"

namespace kgrank {
namespace {

namespace fs = std::filesystem;

TEST(ScorerKind, Names) {
  for (const auto kind : {ScorerKind::kConstant, ScorerKind::kRandom, ScorerKind::kOracle,
                          ScorerKind::kNoisySimilarity, ScorerKind::kTranslational}) {
    EXPECT_EQ(parse_scorer_kind(to_string(kind)), kind);
  }
  EXPECT_EQ(parse_scorer_kind("transe"), std::nullopt);
}

TEST(ScorerSpec, Validate) {
  ScorerSpec spec;
  EXPECT_NO_THROW(spec.validate());
  spec.sigma = -1;
  EXPECT_THROW(spec.validate(), ConfigError);
  spec = {};
  spec.dimension = 0;
  EXPECT_THROW(spec.validate(), ConfigError);
  spec = {};
  spec.epochs = -1;
  EXPECT_THROW(spec.validate(), ConfigError);
  spec = {};
  spec.learning_rate = 0;
  EXPECT_THROW(spec.validate(), ConfigError);
}

TEST(RandomScorer, SeededAndInUnitInterval) {
  const std::vector<EntityId> candidates = {0, 1, 2, 3, 4, 5, 6, 7};
  const RandomScorer a(5);
  const RandomScorer b(5);
  const RandomScorer c(6);
  const auto sa = a.score_tails(1, 0, candidates);
  EXPECT_EQ(sa, b.score_tails(1, 0, candidates));
  EXPECT_NE(sa, c.score_tails(1, 0, candidates));
  EXPECT_NE(sa, a.score_heads(0, 1, candidates));
  EXPECT_NE(sa, a.score_right(1, candidates));
  for (const double s : sa) {
    EXPECT_GE(s, 0.0);
    EXPECT_LT(s, 1.0);
  }
  // A candidate's score does not depend on which other candidates are present.
  const std::vector<EntityId> subset = {3, 6};
  const auto ss = a.score_tails(1, 0, subset);
  EXPECT_EQ(ss[0], sa[3]);
  EXPECT_EQ(ss[1], sa[6]);
}

TEST(OracleScorers, ScoreTruthHighest) {
  const std::vector<Triple> truths = {{0, 0, 2}};
  const LpOracleScorer lp(truths);
  const std::vector<EntityId> candidates = {1, 2, 3};
  const auto tails = lp.score_tails(0, 0, candidates);
  EXPECT_GT(tails[1], tails[0]);
  EXPECT_EQ(tails[0], tails[2]);
  const auto heads = lp.score_heads(0, 2, std::vector<EntityId>{0, 1});
  EXPECT_GT(heads[0], heads[1]);

  const std::vector<AlignedPair> pairs = {{0, 5}, {1, 4}};
  const EaOracleScorer ea(pairs);
  const auto right = ea.score_right(1, std::vector<EntityId>{5, 4});
  EXPECT_GT(right[1], right[0]);
}

TEST(NoisySimilarity, SigmaControlsDifficulty) {
  const auto pairs = synthetic::identity_alignment(300);
  const NoisySimilarityScorer exact(pairs, 300, 300, 16, 0.0, 1);
  EXPECT_EQ(adjusted_mean_rank_index(evaluate_ea(exact, pairs)), 1.0);

  const NoisySimilarityScorer moderate(pairs, 300, 300, 16, 0.5, 1);
  const double mid = adjusted_mean_rank_index(evaluate_ea(moderate, pairs));
  EXPECT_GT(mid, 0.3);
  EXPECT_LT(mid, 1.0);

  const NoisySimilarityScorer hopeless(pairs, 300, 300, 16, 1000.0, 1);
  EXPECT_NEAR(adjusted_mean_rank_index(evaluate_ea(hopeless, pairs)), 0.0, 0.1);

  const NoisySimilarityScorer again(pairs, 300, 300, 16, 0.5, 1);
  EXPECT_EQ(evaluate_ea(again, pairs).records, evaluate_ea(moderate, pairs).records);
}

TEST(NoisySimilarity, RejectsOutOfRangePairs) {
  const std::vector<AlignedPair> pairs = {{0, 3}};
  EXPECT_THROW(NoisySimilarityScorer(pairs, 1, 3, 4, 1.0, 0), InvalidInputError);
}

struct GridSetup {
  KnowledgeGraph train;
  std::vector<Triple> test;
  std::vector<Triple> all;
};

GridSetup grid_setup() {
  auto grid = synthetic::grid_graph(5, 10);
  auto [train, test] = synthetic::split_triples(grid.triples, 0.2, 7);
  GridSetup s;
  s.all = grid.triples;
  s.test = test;
  s.train = grid;
  s.train.triples = train;
  return s;
}

double test_amri(const LpScorer& scorer, const GridSetup& s) {
  const std::vector<Triple> known[] = {s.train.triples, s.test};
  const auto index = build_filter_index(50, 4, known);
  return adjusted_mean_rank_index(evaluate_lp(scorer, s.test, index, LpOptions{}));
}

TEST(Translational, UntrainedIsNearChance) {
  const auto s = grid_setup();
  ScorerSpec spec;
  spec.kind = ScorerKind::kTranslational;
  spec.epochs = 0;
  spec.seed = 3;
  const auto result = train_translational(s.train, spec);
  EXPECT_TRUE(result.epoch_losses.empty());
  // Random embeddings: chance level up to small-sample noise.
  EXPECT_LT(std::abs(test_amri(*result.scorer, s)), 0.25);
}

TEST(Translational, TrainingLearnsGrid) {
  const auto s = grid_setup();
  ScorerSpec spec;
  spec.kind = ScorerKind::kTranslational;
  spec.seed = 3;
  spec.epochs = 200;
  spec.learning_rate = 0.01;
  const auto result = train_translational(s.train, spec);
  ASSERT_EQ(result.epoch_losses.size(), 200u);
  EXPECT_LT(result.epoch_losses.back(), result.epoch_losses.front());
  double early = 0;
  double late = 0;
  for (int i = 0; i < 20; ++i) {
    early += result.epoch_losses[i];
    late += result.epoch_losses[180 + i];
  }
  EXPECT_LT(late, early);
  EXPECT_GT(test_amri(*result.scorer, s), 0.3);

  const auto rerun = train_translational(s.train, spec);
  EXPECT_EQ(rerun.epoch_losses, result.epoch_losses);
  EXPECT_EQ(rerun.scorer->table().entities, result.scorer->table().entities);
}

TEST(Translational, ScoreIsNegativeDistance) {
  EmbeddingTable table;
  table.dimension = 2;
  table.entities = {0, 0, 3, 4, 1, 0};
  table.relations = {0, 0};
  const TranslationalScorer scorer(table);
  EXPECT_DOUBLE_EQ(scorer.score(0, 0, 1), -5.0);
  EXPECT_DOUBLE_EQ(scorer.score(0, 0, 0), 0.0);
  const auto tails = scorer.score_tails(0, 0, std::vector<EntityId>{1, 2});
  EXPECT_DOUBLE_EQ(tails[0], -5.0);
  EXPECT_DOUBLE_EQ(tails[1], -1.0);
}

class EmbeddingFiles : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("kgrank_emb_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST_F(EmbeddingFiles, RoundTrip) {
  EmbeddingTable table;
  table.dimension = 3;
  table.entities = {0.5f, -1.25f, 3.0f, 1e-7f, 2.0f, -0.0f};
  table.relations = {7.0f, 8.0f, 9.0f};
  const Vocabulary entities({"a", "b"});
  const Vocabulary relations({"r"});
  write_embeddings(table, entities, relations, dir_ / "e.bin", dir_ / "e.json");
  EXPECT_EQ(fs::file_size(dir_ / "e.bin"), 8u + 4u + 8u + 8u + 9u * 4u);
  const auto loaded = read_embeddings(dir_ / "e.bin", dir_ / "e.json");
  EXPECT_EQ(loaded.table.dimension, 3);
  EXPECT_EQ(loaded.table.entities, table.entities);
  EXPECT_EQ(loaded.table.relations, table.relations);
  EXPECT_EQ(loaded.entities.labels(), entities.labels());
  EXPECT_EQ(loaded.relations.labels(), relations.labels());
}

TEST_F(EmbeddingFiles, RejectsCorruption) {
  EmbeddingTable table;
  table.dimension = 1;
  table.entities = {1.0f};
  table.relations = {2.0f};
  write_embeddings(table, Vocabulary({"a"}), Vocabulary({"r"}), dir_ / "e.bin", dir_ / "e.json");
  {
    std::fstream f(dir_ / "e.bin", std::ios::in | std::ios::out | std::ios::binary);
    f.write("XXXX", 4);
  }
  EXPECT_THROW(read_embeddings(dir_ / "e.bin", dir_ / "e.json"), ParseError);

  write_embeddings(table, Vocabulary({"a"}), Vocabulary({"r"}), dir_ / "e.bin", dir_ / "e.json");
  fs::resize_file(dir_ / "e.bin", fs::file_size(dir_ / "e.bin") - 2);
  EXPECT_THROW(read_embeddings(dir_ / "e.bin", dir_ / "e.json"), ParseError);
  EXPECT_THROW(read_embeddings(dir_ / "missing.bin", dir_ / "e.json"), ParseError);
}

TEST(Factories, RejectIncompatibleKinds) {
  const auto grid = synthetic::grid_graph(3, 3);
  ScorerSpec spec;
  spec.kind = ScorerKind::kNoisySimilarity;
  EXPECT_THROW(make_lp_scorer(spec, grid, grid.triples), ConfigError);
  spec.kind = ScorerKind::kTranslational;
  const auto pairs = synthetic::identity_alignment(3);
  EXPECT_THROW(make_ea_scorer(spec, pairs, 3, 3), ConfigError);
  spec.kind = ScorerKind::kConstant;
  EXPECT_NE(make_lp_scorer(spec, grid, grid.triples), nullptr);
  EXPECT_NE(make_ea_scorer(spec, pairs, 3, 3), nullptr);
}

}  // namespace
}  // namespace kgrank
