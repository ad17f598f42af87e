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

#include "alignaudit/retrieval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "alignaudit/error.hpp"
#include "alignaudit/kernels.hpp"
#include "alignaudit/random.hpp"
#include "alignaudit/table_io.hpp"

namespace alignaudit {
namespace {

const std::unordered_set<std::string_view>& stopwords() {
  static const std::unordered_set<std::string_view> words = {
      "a",  "an", "the", "of",  "and", "or",   "to",   "in",   "on",    "is",   "are",  "be",
      "by", "for", "with", "as", "at", "it",  "its", "that", "this", "what", "which", "from"};
  return words;
}

bool token_char(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

}  // namespace

std::vector<std::string> embedding_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::string tok;
  auto flush = [&] {
    if (!tok.empty() && !stopwords().count(tok)) out.push_back(tok);
    tok.clear();
  };
  for (char ch : text) {
    auto c = static_cast<unsigned char>(ch);
    if (token_char(c)) {
      tok.push_back(static_cast<char>(c < 0x80 ? std::tolower(c) : c));
    } else {
      flush();
    }
  }
  flush();
  return out;
}

HashProjectionEmbedder::HashProjectionEmbedder(size_t dimension, std::uint64_t seed)
    : dimension_(dimension), seed_(seed) {
  if (dimension == 0) throw Error(ErrorCode::InvalidConfig, "embedding dimension must be positive");
}

std::string HashProjectionEmbedder::id() const {
  return "hash-projection:d=" + std::to_string(dimension_) + ":seed=" + std::to_string(seed_);
}

EmbeddingVector HashProjectionEmbedder::embed(std::string_view text) {
  if (trim(text).empty()) throw Error(ErrorCode::EmptyText, "cannot embed empty text");
  std::map<std::string, int> counts;
  for (auto& t : embedding_tokens(text)) ++counts[t];

  EmbeddingVector v{std::vector<double>(dimension_, 0.0), id()};
  std::span<double> out(v.components);
  for (const auto& [token, count] : counts) {
    const std::uint64_t base = fnv1a64(token);
    for (size_t block = 0; block * 64 < dimension_; ++block) {
      const std::uint64_t bits = mix64(base ^ seed_ ^ (block * 0x9e3779b97f4a7c15ULL));
      const size_t len = std::min<size_t>(64, dimension_ - block * 64);
      kernels::add_signs(out.subspan(block * 64, len), bits, static_cast<double>(count));
    }
  }
  return v;
}

CachedEmbedder::CachedEmbedder(EmbeddingProvider& inner, std::filesystem::path cache_file)
    : inner_(inner), cache_file_(std::move(cache_file)) {
  if (cache_file_.empty() || !std::filesystem::exists(cache_file_)) return;
  std::ifstream in(cache_file_);
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      cache_[j.at("key").get<std::string>()] = j.at("embedding").get<std::vector<double>>();
    } catch (const nlohmann::json::exception&) {
      // a torn trailing line from an interrupted run is skipped
    }
  }
}

EmbeddingVector CachedEmbedder::embed(std::string_view text) {
  const std::string key = inner_.id() + ":" + sha256_hex(text);
  {
    std::lock_guard lock(mu_);
    if (auto it = cache_.find(key); it != cache_.end()) {
      ++hits_;
      return {it->second, inner_.id()};
    }
  }
  auto v = inner_.embed(text);
  std::lock_guard lock(mu_);
  ++misses_;
  if (cache_.emplace(key, v.components).second && !cache_file_.empty()) {
    std::ofstream out(cache_file_, std::ios::app);
    nlohmann::json rec{{"key", key}, {"provider", inner_.id()}, {"embedding", v.components}};
    out << rec.dump() << '\n';
  }
  return v;
}

size_t CachedEmbedder::hits() const {
  std::lock_guard lock(mu_);
  return hits_;
}

size_t CachedEmbedder::misses() const {
  std::lock_guard lock(mu_);
  return misses_;
}

std::string item_text_for_embedding(const Item& item) {
  std::string out;
  for (const std::string* part : {&item.prompt_text, &item.stem_text, &item.explanation_text}) {
    if (trim(*part).empty()) continue;
    if (!out.empty()) out.push_back('\n');
    out.append(*part);
  }
  return out;
}

std::string_view to_string(SkillTextMode m) {
  return m == SkillTextMode::NameAndStatement ? "name+statement" : "statement";
}

std::string skill_text_for_embedding(const Skill& skill, SkillTextMode mode) {
  if (mode == SkillTextMode::StatementOnly) return skill.skill_statement;
  return skill.skill_name + ": " + skill.skill_statement;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::DimensionMismatch, std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
  const auto r = kernels::dot_norms(a, b);
  if (r.a_sq == 0.0 || r.b_sq == 0.0) throw Error(ErrorCode::ZeroVector, "cosine of a zero vector");
  return r.dot / (std::sqrt(r.a_sq) * std::sqrt(r.b_sq));
}

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
  return cosine_similarity(std::span<const double>(a.components), std::span<const double>(b.components));
}

size_t RankedCandidates::rank_of(std::string_view skill_id) const {
  for (size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].skill_id == skill_id) return i + 1;
  }
  return 0;
}

RankedCandidates rank_candidates(std::string_view item_id, const EmbeddingVector& item_vec,
                                 const std::map<std::string, EmbeddingVector>& skill_vecs) {
  RankedCandidates out{std::string(item_id), {}};
  out.entries.reserve(skill_vecs.size());
  for (const auto& [id, vec] : skill_vecs) out.entries.push_back({id, cosine_similarity(item_vec, vec)});
  std::sort(out.entries.begin(), out.entries.end(), [](const ScoredSkill& a, const ScoredSkill& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.skill_id < b.skill_id;
  });
  return out;
}

std::vector<std::string> filter_top_n(const RankedCandidates& ranked, size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidConfig, "filter size must be at least 1");
  std::vector<std::string> ids;
  const size_t m = std::min(n, ranked.entries.size());
  ids.reserve(m);
  for (size_t i = 0; i < m; ++i) ids.push_back(ranked.entries[i].skill_id);
  return ids;
}

const std::map<std::string, EmbeddingVector>& SkillEmbeddingIndex::pool_vectors(const SkillCatalog& catalog,
                                                                                Grade grade, Subject subject) {
  std::lock_guard lock(mu_);
  auto [it, inserted] = pools_.try_emplace({grade, subject});
  if (inserted) {
    try {
      for (const auto& s : catalog.candidate_pool(grade, subject)) {
        it->second.emplace(s.skill_id, provider_.embed(skill_text_for_embedding(s, mode_)));
      }
    } catch (...) {
      pools_.erase(it);
      throw;
    }
  }
  return it->second;
}

}  // namespace alignaudit
