// Copyright 2026 The alignaudit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Embedding-based candidate filtering: embed the item and every skill of its
// pool, rank skills by cosine similarity, keep the top n.

#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "alignaudit/taxonomy.hpp"

namespace alignaudit {

inline constexpr size_t kDefaultFilterN = 15;

struct EmbeddingVector {
  std::vector<double> components;
  std::string provider_id;

  size_t dimension() const { return components.size(); }
};

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  /// Throws EmptyText for blank input, ProviderUnavailable / DimensionMismatch
  /// for provider failures.
  virtual EmbeddingVector embed(std::string_view text) = 0;
  virtual std::string id() const = 0;
  virtual size_t dimension() const = 0;
};

/// Lowercased alphanumeric tokens minus a short English stopword list.
std::vector<std::string> embedding_tokens(std::string_view text);

/// Deterministic offline embedder. Each distinct token t with count c adds
/// c * sign_j(t) to every component j, where sign_j(t) is bit (j mod 64) of
///   mix64(fnv1a64(t) ^ seed ^ (j / 64) * 0x9e3779b97f4a7c15)
/// read as +1 / -1. Cosine similarity then tracks bag-of-words overlap.
class HashProjectionEmbedder final : public EmbeddingProvider {
 public:
  explicit HashProjectionEmbedder(size_t dimension = 256, std::uint64_t seed = 0);

  EmbeddingVector embed(std::string_view text) override;
  std::string id() const override;
  size_t dimension() const override { return dimension_; }

 private:
  size_t dimension_;
  std::uint64_t seed_;
};

struct RemoteEmbedderConfig {
  std::string endpoint = "https://api.openai.com";  // scheme://host[:port]
  std::string path = "/v1/embeddings";
  std::string model = "all-MiniLM-L6-v2";
  size_t dimension = 384;
  std::string api_key;  // empty: no Authorization header
  std::chrono::seconds timeout{30};
};

/// OpenAI-compatible embeddings endpoint:
///   POST {"model": ..., "input": text} -> {"data": [{"embedding": [...]}]}
class RemoteEmbedder final : public EmbeddingProvider {
 public:
  explicit RemoteEmbedder(RemoteEmbedderConfig config);

  EmbeddingVector embed(std::string_view text) override;
  std::string id() const override;
  size_t dimension() const override { return config_.dimension; }

 private:
  RemoteEmbedderConfig config_;
};

/// Memoizes another provider, optionally persisted as JSON lines keyed by
/// (provider id, SHA-256 of text). Safe for concurrent use.
class CachedEmbedder final : public EmbeddingProvider {
 public:
  CachedEmbedder(EmbeddingProvider& inner, std::filesystem::path cache_file = {});

  EmbeddingVector embed(std::string_view text) override;
  std::string id() const override { return inner_.id(); }
  size_t dimension() const override { return inner_.dimension(); }

  size_t hits() const;
  size_t misses() const;

 private:
  EmbeddingProvider& inner_;
  std::filesystem::path cache_file_;
  mutable std::mutex mu_;
  std::unordered_map<std::string, std::vector<double>> cache_;
  size_t hits_ = 0;
  size_t misses_ = 0;
};

/// prompt, stem and explanation joined by single newlines, blanks skipped.
std::string item_text_for_embedding(const Item& item);

enum class SkillTextMode { NameAndStatement, StatementOnly };

std::string_view to_string(SkillTextMode m);
std::string skill_text_for_embedding(const Skill& skill, SkillTextMode mode = SkillTextMode::NameAndStatement);

/// Throws DimensionMismatch, ZeroVector.
double cosine_similarity(std::span<const double> a, std::span<const double> b);
double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

struct ScoredSkill {
  std::string skill_id;
  double score = 0.0;
};

struct RankedCandidates {
  std::string item_id;
  std::vector<ScoredSkill> entries;  // score descending, ties by skill_id ascending

  /// 1-based rank of a skill, 0 when absent.
  size_t rank_of(std::string_view skill_id) const;
};

RankedCandidates rank_candidates(std::string_view item_id, const EmbeddingVector& item_vec,
                                 const std::map<std::string, EmbeddingVector>& skill_vecs);

/// First min(n, size) ids in rank order; default n is 15.
std::vector<std::string> filter_top_n(const RankedCandidates& ranked, size_t n = kDefaultFilterN);

/// Embeds every skill of a pool once; repeated calls reuse the vectors.
class SkillEmbeddingIndex {
 public:
  SkillEmbeddingIndex(EmbeddingProvider& provider, SkillTextMode mode) : provider_(provider), mode_(mode) {}

  const std::map<std::string, EmbeddingVector>& pool_vectors(const SkillCatalog& catalog, Grade grade,
                                                             Subject subject);

 private:
  EmbeddingProvider& provider_;
  SkillTextMode mode_;
  std::mutex mu_;
  std::map<std::pair<Grade, Subject>, std::map<std::string, EmbeddingVector>> pools_;
};

}  // namespace alignaudit
