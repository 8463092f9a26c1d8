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

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numeric>
#include <random>
#include <string>

#include <nlohmann/json.hpp>

#include "kgrank/errors.hpp"

namespace kgrank {
namespace {

enum : std::uint64_t { kTailQuery = 1, kHeadQuery = 2, kRightQuery = 3, kLeftQuery = 4 };

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t as_u64(std::int32_t v) { return static_cast<std::uint32_t>(v); }

double unit_interval(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

std::vector<double> hashed_scores(std::uint64_t seed, std::uint64_t tag, std::uint64_t a,
                                  std::uint64_t b, std::span<const EntityId> candidates) {
  const std::uint64_t query = splitmix(splitmix(splitmix(seed ^ splitmix(tag)) ^ a) ^ b);
  std::vector<double> scores(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    scores[i] = unit_interval(splitmix(query ^ as_u64(candidates[i])));
  }
  return scores;
}

void put_u32(std::ostream& out, std::uint32_t v) {
  std::array<char, 4> b{};
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b.data(), b.size());
}

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> b{};
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b.data(), b.size());
}

std::uint64_t get_le(std::istream& in, int bytes, const std::string& path) {
  std::array<unsigned char, 8> b{};
  in.read(reinterpret_cast<char*>(b.data()), bytes);
  if (!in) throw ParseError(path, 0, "truncated embedding file");
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

constexpr std::string_view kMagic = "KGRKEMB1";

void normalize(std::span<float> v) {
  double norm = 0.0;
  for (const float x : v) norm += static_cast<double>(x) * x;
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    for (auto& x : v) x = static_cast<float>(x / norm);
  }
}

}  // namespace

std::string_view to_string(ScorerKind kind) {
  switch (kind) {
    case ScorerKind::kConstant:
      return "constant";
    case ScorerKind::kRandom:
      return "random";
    case ScorerKind::kOracle:
      return "oracle";
    case ScorerKind::kNoisySimilarity:
      return "noisy_similarity";
    case ScorerKind::kTranslational:
      return "translational";
  }
  return "unknown";
}

std::optional<ScorerKind> parse_scorer_kind(std::string_view name) {
  for (const auto kind : {ScorerKind::kConstant, ScorerKind::kRandom, ScorerKind::kOracle,
                          ScorerKind::kNoisySimilarity, ScorerKind::kTranslational}) {
    if (name == to_string(kind)) return kind;
  }
  return std::nullopt;
}

void ScorerSpec::validate() const {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ConfigError("sigma must be >= 0");
  if (dimension < 1) throw ConfigError("embedding dimension must be >= 1");
  if (!(margin > 0.0) || !std::isfinite(margin)) throw ConfigError("margin must be > 0");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning rate must be > 0");
  }
  if (epochs < 0) throw ConfigError("epochs must be >= 0");
  if (negatives < 1) throw ConfigError("negatives per positive must be >= 1");
}

std::vector<double> ConstantScorer::score_tails(EntityId, RelationId,
                                                std::span<const EntityId> candidates) const {
  return std::vector<double>(candidates.size(), 0.0);
}

std::vector<double> ConstantScorer::score_heads(RelationId, EntityId,
                                                std::span<const EntityId> candidates) const {
  return std::vector<double>(candidates.size(), 0.0);
}

std::vector<double> ConstantScorer::score_right(EntityId,
                                                std::span<const EntityId> candidates) const {
  return std::vector<double>(candidates.size(), 0.0);
}

std::vector<double> ConstantScorer::score_left(EntityId,
                                               std::span<const EntityId> candidates) const {
  return std::vector<double>(candidates.size(), 0.0);
}

std::vector<double> RandomScorer::score_tails(EntityId head, RelationId relation,
                                              std::span<const EntityId> candidates) const {
  return hashed_scores(seed_, kTailQuery, as_u64(head), as_u64(relation), candidates);
}

std::vector<double> RandomScorer::score_heads(RelationId relation, EntityId tail,
                                              std::span<const EntityId> candidates) const {
  return hashed_scores(seed_, kHeadQuery, as_u64(relation), as_u64(tail), candidates);
}

std::vector<double> RandomScorer::score_right(EntityId left,
                                              std::span<const EntityId> candidates) const {
  return hashed_scores(seed_, kRightQuery, as_u64(left), 0, candidates);
}

std::vector<double> RandomScorer::score_left(EntityId right,
                                             std::span<const EntityId> candidates) const {
  return hashed_scores(seed_, kLeftQuery, as_u64(right), 0, candidates);
}

LpOracleScorer::LpOracleScorer(std::span<const Triple> truths)
    : truths_(truths.begin(), truths.end()) {}

std::vector<double> LpOracleScorer::score_tails(EntityId head, RelationId relation,
                                                std::span<const EntityId> candidates) const {
  std::vector<double> scores(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    scores[i] = truths_.contains(Triple{head, relation, candidates[i]}) ? 1.0 : 0.0;
  }
  return scores;
}

std::vector<double> LpOracleScorer::score_heads(RelationId relation, EntityId tail,
                                                std::span<const EntityId> candidates) const {
  std::vector<double> scores(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    scores[i] = truths_.contains(Triple{candidates[i], relation, tail}) ? 1.0 : 0.0;
  }
  return scores;
}

EaOracleScorer::EaOracleScorer(std::span<const AlignedPair> pairs)
    : pairs_(pairs.begin(), pairs.end()) {
  std::sort(pairs_.begin(), pairs_.end());
}

std::vector<double> EaOracleScorer::score_right(EntityId left,
                                                std::span<const EntityId> candidates) const {
  std::vector<double> scores(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    scores[i] = std::binary_search(pairs_.begin(), pairs_.end(), AlignedPair{left, candidates[i]})
                    ? 1.0
                    : 0.0;
  }
  return scores;
}

std::vector<double> EaOracleScorer::score_left(EntityId right,
                                               std::span<const EntityId> candidates) const {
  std::vector<double> scores(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    scores[i] = std::binary_search(pairs_.begin(), pairs_.end(), AlignedPair{candidates[i], right})
                    ? 1.0
                    : 0.0;
  }
  return scores;
}

NoisySimilarityScorer::NoisySimilarityScorer(std::span<const AlignedPair> pairs,
                                             std::size_t num_left, std::size_t num_right,
                                             std::int32_t dimension, double sigma,
                                             std::uint64_t seed)
    : dimension_(static_cast<std::size_t>(dimension)) {
  if (dimension < 1) throw InvalidInputError("dimension must be >= 1");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InvalidInputError("sigma must be >= 0");
  std::vector<AlignedPair> sorted(pairs.begin(), pairs.end());
  std::sort(sorted.begin(), sorted.end());

  // Latent vector ids; an entity aligned several times keeps its first.
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> left_latent(num_left, kNone);
  std::vector<std::size_t> right_latent(num_right, kNone);
  std::size_t latents = 0;
  for (const auto& p : sorted) {
    if (p.left < 0 || p.right < 0 || static_cast<std::size_t>(p.left) >= num_left ||
        static_cast<std::size_t>(p.right) >= num_right) {
      throw InvalidInputError("alignment pair out of range");
    }
    auto& l = left_latent[static_cast<std::size_t>(p.left)];
    auto& r = right_latent[static_cast<std::size_t>(p.right)];
    if (l == kNone && r == kNone) {
      l = r = latents++;
    } else if (l == kNone) {
      l = r;
    } else if (r == kNone) {
      r = l;
    }
  }
  for (auto* ids : {&left_latent, &right_latent}) {
    for (auto& id : *ids) {
      if (id == kNone) id = latents++;
    }
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> latent(latents * dimension_);
  for (auto& x : latent) x = normal(rng);
  const auto observe = [&](const std::vector<std::size_t>& ids, std::vector<double>& out) {
    out.resize(ids.size() * dimension_);
    for (std::size_t e = 0; e < ids.size(); ++e) {
      for (std::size_t k = 0; k < dimension_; ++k) {
        out[e * dimension_ + k] = latent[ids[e] * dimension_ + k] + sigma * normal(rng);
      }
    }
  };
  observe(left_latent, left_);
  observe(right_latent, right_);
}

std::vector<double> NoisySimilarityScorer::distances(std::span<const double> query,
                                                     const std::vector<double>& table,
                                                     std::span<const EntityId> candidates) const {
  std::vector<double> scores(candidates.size());
  const std::size_t rows = table.size() / dimension_;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto c = static_cast<std::size_t>(candidates[i]);
    if (candidates[i] < 0 || c >= rows) throw InvalidInputError("candidate out of range");
    const double* row = table.data() + c * dimension_;
    double sq = 0.0;
    for (std::size_t k = 0; k < dimension_; ++k) {
      const double d = query[k] - row[k];
      sq += d * d;
    }
    scores[i] = -std::sqrt(sq);
  }
  return scores;
}

std::vector<double> NoisySimilarityScorer::score_right(EntityId left,
                                                       std::span<const EntityId> candidates) const {
  const auto l = static_cast<std::size_t>(left);
  if (left < 0 || l >= left_.size() / dimension_) throw InvalidInputError("query out of range");
  return distances(std::span(left_).subspan(l * dimension_, dimension_), right_, candidates);
}

std::vector<double> NoisySimilarityScorer::score_left(EntityId right,
                                                      std::span<const EntityId> candidates) const {
  const auto r = static_cast<std::size_t>(right);
  if (right < 0 || r >= right_.size() / dimension_) throw InvalidInputError("query out of range");
  return distances(std::span(right_).subspan(r * dimension_, dimension_), left_, candidates);
}

std::size_t EmbeddingTable::num_entities() const {
  return dimension > 0 ? entities.size() / static_cast<std::size_t>(dimension) : 0;
}

std::size_t EmbeddingTable::num_relations() const {
  return dimension > 0 ? relations.size() / static_cast<std::size_t>(dimension) : 0;
}

std::span<const float> EmbeddingTable::entity(EntityId e) const {
  const auto d = static_cast<std::size_t>(dimension);
  return std::span(entities).subspan(static_cast<std::size_t>(e) * d, d);
}

std::span<const float> EmbeddingTable::relation(RelationId r) const {
  const auto d = static_cast<std::size_t>(dimension);
  return std::span(relations).subspan(static_cast<std::size_t>(r) * d, d);
}

void EmbeddingTable::validate() const {
  if (dimension < 1) throw InvalidInputError("embedding dimension must be >= 1");
  const auto d = static_cast<std::size_t>(dimension);
  if (entities.size() % d != 0 || relations.size() % d != 0) {
    throw InvalidInputError("embedding sizes are not multiples of the dimension");
  }
  const auto finite = [](float x) { return std::isfinite(x); };
  if (!std::all_of(entities.begin(), entities.end(), finite) ||
      !std::all_of(relations.begin(), relations.end(), finite)) {
    throw InvalidInputError("embedding table contains non-finite values");
  }
}

TranslationalScorer::TranslationalScorer(EmbeddingTable table) : table_(std::move(table)) {
  table_.validate();
}

double TranslationalScorer::score(EntityId head, RelationId relation, EntityId tail) const {
  const auto h = table_.entity(head);
  const auto r = table_.relation(relation);
  const auto t = table_.entity(tail);
  double sq = 0.0;
  for (std::size_t k = 0; k < h.size(); ++k) {
    const double d = static_cast<double>(h[k]) + r[k] - t[k];
    sq += d * d;
  }
  return -std::sqrt(sq);
}

std::vector<double> TranslationalScorer::score_tails(EntityId head, RelationId relation,
                                                     std::span<const EntityId> candidates) const {
  const auto d = static_cast<std::size_t>(table_.dimension);
  std::vector<double> query(d);
  const auto h = table_.entity(head);
  const auto r = table_.relation(relation);
  for (std::size_t k = 0; k < d; ++k) query[k] = static_cast<double>(h[k]) + r[k];
  std::vector<double> scores(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto t = table_.entity(candidates[i]);
    double sq = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      const double diff = query[k] - t[k];
      sq += diff * diff;
    }
    scores[i] = -std::sqrt(sq);
  }
  return scores;
}

std::vector<double> TranslationalScorer::score_heads(RelationId relation, EntityId tail,
                                                     std::span<const EntityId> candidates) const {
  const auto d = static_cast<std::size_t>(table_.dimension);
  std::vector<double> query(d);
  const auto r = table_.relation(relation);
  const auto t = table_.entity(tail);
  // ||h + r - t|| = ||h - (t - r)||
  for (std::size_t k = 0; k < d; ++k) query[k] = static_cast<double>(t[k]) - r[k];
  std::vector<double> scores(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto h = table_.entity(candidates[i]);
    double sq = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      const double diff = h[k] - query[k];
      sq += diff * diff;
    }
    scores[i] = -std::sqrt(sq);
  }
  return scores;
}

TrainingResult train_translational(const KnowledgeGraph& train, const ScorerSpec& spec) {
  spec.validate();
  if (train.triples.empty()) throw InvalidInputError("no training triples");
  if (train.num_entities() < 2) throw InvalidInputError("need at least two entities");
  check_vocabulary(train.triples, train.num_entities(), train.num_relations());

  const auto d = static_cast<std::size_t>(spec.dimension);
  const auto n_entities = train.num_entities();
  std::mt19937_64 rng(spec.seed);
  const double bound = 6.0 / std::sqrt(static_cast<double>(d));
  std::uniform_real_distribution<float> init(static_cast<float>(-bound),
                                             static_cast<float>(bound));

  EmbeddingTable table;
  table.dimension = spec.dimension;
  table.entities.resize(n_entities * d);
  table.relations.resize(train.num_relations() * d);
  for (auto& x : table.entities) x = init(rng);
  for (auto& x : table.relations) x = init(rng);
  for (std::size_t r = 0; r < train.num_relations(); ++r) {
    normalize(std::span(table.relations).subspan(r * d, d));
  }

  const std::unordered_set<Triple, TripleHash> known(train.triples.begin(), train.triples.end());
  std::uniform_int_distribution<EntityId> pick_entity(0, static_cast<EntityId>(n_entities - 1));
  std::vector<std::size_t> order(train.triples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  std::vector<double> pos(d);
  std::vector<double> neg(d);
  const auto lr = static_cast<float>(spec.learning_rate);
  const auto row = [&](std::vector<float>& v, std::int32_t id) {
    return std::span(v).subspan(static_cast<std::size_t>(id) * d, d);
  };
  const auto residual = [&](const Triple& t, std::vector<double>& out) {
    const auto h = row(table.entities, t.head);
    const auto r = row(table.relations, t.relation);
    const auto tl = row(table.entities, t.tail);
    double sq = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      out[k] = static_cast<double>(h[k]) + r[k] - tl[k];
      sq += out[k] * out[k];
    }
    return std::sqrt(sq);
  };
  // Moves h + r - t along -sign * grad of its norm.
  const auto step = [&](const Triple& t, const std::vector<double>& res, double dist, float sign) {
    if (dist <= 0.0) return;
    auto h = row(table.entities, t.head);
    auto r = row(table.relations, t.relation);
    auto tl = row(table.entities, t.tail);
    for (std::size_t k = 0; k < d; ++k) {
      const auto g = static_cast<float>(res[k] / dist) * lr * sign;
      h[k] -= g;
      r[k] -= g;
      tl[k] += g;
    }
  };

  TrainingResult result;
  for (std::int32_t epoch = 0; epoch < spec.epochs; ++epoch) {
    for (std::size_t e = 0; e < n_entities; ++e) {
      normalize(std::span(table.entities).subspan(e * d, d));
    }
    std::shuffle(order.begin(), order.end(), rng);
    double total = 0.0;
    for (const auto idx : order) {
      const Triple& positive = train.triples[idx];
      for (std::int32_t k = 0; k < spec.negatives; ++k) {
        Triple negative = positive;
        const bool corrupt_head = (rng() & 1U) != 0;
        for (int attempt = 0; attempt < 16; ++attempt) {
          const EntityId e = pick_entity(rng);
          (corrupt_head ? negative.head : negative.tail) = e;
          if (!spec.filter_negatives || !known.contains(negative)) break;
        }
        const double d_pos = residual(positive, pos);
        const double d_neg = residual(negative, neg);
        const double loss = spec.margin + d_pos - d_neg;
        if (loss > 0.0) {
          total += loss;
          step(positive, pos, d_pos, 1.0F);
          step(negative, neg, d_neg, -1.0F);
        }
      }
    }
    result.epoch_losses.push_back(
        total / static_cast<double>(order.size() * static_cast<std::size_t>(spec.negatives)));
  }
  result.scorer = std::make_unique<TranslationalScorer>(std::move(table));
  return result;
}

void write_embeddings(const EmbeddingTable& table, const Vocabulary& entities,
                      const Vocabulary& relations, const std::filesystem::path& binary,
                      const std::filesystem::path& sidecar) {
  table.validate();
  if (entities.size() != table.num_entities() || relations.size() != table.num_relations()) {
    throw InvalidInputError("vocabulary sizes do not match the embedding table");
  }
  std::ofstream out(binary, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + binary.string() + " for writing");
  out.write(kMagic.data(), static_cast<std::streamsize>(kMagic.size()));
  put_u32(out, static_cast<std::uint32_t>(table.dimension));
  put_u64(out, table.num_entities());
  put_u64(out, table.num_relations());
  for (const auto* v : {&table.entities, &table.relations}) {
    for (const float x : *v) put_u32(out, std::bit_cast<std::uint32_t>(x));
  }
  if (!out) throw Error("failed writing " + binary.string());

  nlohmann::json meta;
  meta["format"] = "kgrank-embeddings";
  meta["version"] = 1;
  meta["dimension"] = table.dimension;
  meta["entities"] = entities.labels();
  meta["relations"] = relations.labels();
  std::ofstream side(sidecar, std::ios::trunc);
  if (!side) throw Error("cannot open " + sidecar.string() + " for writing");
  side << meta.dump(2) << '\n';
  if (!side) throw Error("failed writing " + sidecar.string());
}

LoadedEmbeddings read_embeddings(const std::filesystem::path& binary,
                                 const std::filesystem::path& sidecar) {
  const auto path = binary.string();
  std::ifstream in(binary, std::ios::binary);
  if (!in) throw ParseError(path, 0, "cannot open embedding file");
  std::string magic(kMagic.size(), '\0');
  in.read(magic.data(), static_cast<std::streamsize>(magic.size()));
  if (!in || magic != kMagic) throw ParseError(path, 0, "bad magic bytes");
  LoadedEmbeddings loaded;
  auto& table = loaded.table;
  table.dimension = static_cast<std::int32_t>(get_le(in, 4, path));
  const auto n_entities = get_le(in, 8, path);
  const auto n_relations = get_le(in, 8, path);
  if (table.dimension < 1) throw ParseError(path, 0, "dimension must be >= 1");
  const auto d = static_cast<std::uint64_t>(table.dimension);
  table.entities.resize(n_entities * d);
  table.relations.resize(n_relations * d);
  for (auto* v : {&table.entities, &table.relations}) {
    for (auto& x : *v) x = std::bit_cast<float>(static_cast<std::uint32_t>(get_le(in, 4, path)));
  }
  if (in.peek() != std::char_traits<char>::eof()) throw ParseError(path, 0, "trailing bytes");
  table.validate();

  std::ifstream side(sidecar);
  if (!side) throw ParseError(sidecar.string(), 0, "cannot open embedding sidecar");
  try {
    const auto meta = nlohmann::json::parse(side);
    if (meta.at("format").get<std::string>() != "kgrank-embeddings" ||
        meta.at("dimension").get<std::int32_t>() != table.dimension) {
      throw ParseError(sidecar.string(), 0, "sidecar does not describe this table");
    }
    loaded.entities = Vocabulary(meta.at("entities").get<std::vector<std::string>>());
    loaded.relations = Vocabulary(meta.at("relations").get<std::vector<std::string>>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(sidecar.string(), 0, e.what());
  }
  if (loaded.entities.size() != n_entities || loaded.relations.size() != n_relations) {
    throw ParseError(sidecar.string(), 0, "vocabulary sizes do not match the binary table");
  }
  return loaded;
}

std::unique_ptr<LpScorer> make_lp_scorer(const ScorerSpec& spec, const KnowledgeGraph& train,
                                         std::span<const Triple> truths) {
  spec.validate();
  switch (spec.kind) {
    case ScorerKind::kConstant:
      return std::make_unique<ConstantScorer>();
    case ScorerKind::kRandom:
      return std::make_unique<RandomScorer>(spec.seed);
    case ScorerKind::kOracle:
      return std::make_unique<LpOracleScorer>(truths);
    case ScorerKind::kTranslational:
      return std::move(train_translational(train, spec).scorer);
    case ScorerKind::kNoisySimilarity:
      break;
  }
  throw ConfigError("scorer '" + std::string(to_string(spec.kind)) +
                    "' is not available for link prediction");
}

std::unique_ptr<EaScorer> make_ea_scorer(const ScorerSpec& spec,
                                         std::span<const AlignedPair> pairs,
                                         std::size_t num_left, std::size_t num_right) {
  spec.validate();
  switch (spec.kind) {
    case ScorerKind::kConstant:
      return std::make_unique<ConstantScorer>();
    case ScorerKind::kRandom:
      return std::make_unique<RandomScorer>(spec.seed);
    case ScorerKind::kOracle:
      return std::make_unique<EaOracleScorer>(pairs);
    case ScorerKind::kNoisySimilarity:
      return std::make_unique<NoisySimilarityScorer>(pairs, num_left, num_right, spec.dimension,
                                                     spec.sigma, spec.seed);
    case ScorerKind::kTranslational:
      break;
  }
  throw ConfigError("scorer '" + std::string(to_string(spec.kind)) +
                    "' is not available for entity alignment");
}

}  // namespace kgrank
