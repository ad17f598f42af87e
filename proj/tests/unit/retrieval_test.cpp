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
#include <cmath>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "alignaudit/error.hpp"
#include "alignaudit/kernels.hpp"
#include "alignaudit/table_io.hpp"
#include "test_support.hpp"

namespace alignaudit {
namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::Io;
}

EmbeddingVector vec(std::vector<double> c) { return {std::move(c), "test"}; }

TEST(Cosine, HandComputed) {
  const std::vector<double> a = {1, 2, 2};
  const std::vector<double> b = {2, 1, 2};
  EXPECT_NEAR(cosine_similarity(a, b), 8.0 / 9.0, 1e-15);
  EXPECT_NEAR(cosine_similarity(a, a), 1.0, 1e-15);
  const std::vector<double> neg = {-1, -2, -2};
  EXPECT_NEAR(cosine_similarity(a, neg), -1.0, 1e-15);
}

TEST(Cosine, Errors) {
  const std::vector<double> a = {1, 2};
  const std::vector<double> b = {1, 2, 3};
  const std::vector<double> z = {0, 0};
  EXPECT_EQ(code_of([&] { cosine_similarity(a, b); }), ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([&] { cosine_similarity(a, z); }), ErrorCode::ZeroVector);
}

TEST(Cosine, ScaleInvariantAndBounded) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  for (int t = 0; t < 200; ++t) {
    const size_t n = 1 + rng() % 50;
    std::vector<double> a(n), b(n);
    for (size_t i = 0; i < n; ++i) {
      a[i] = g(rng);
      b[i] = g(rng);
    }
    const double c = cosine_similarity(a, b);
    EXPECT_LE(std::abs(c), 1.0 + 1e-12);
    auto scaled = a;
    for (auto& x : scaled) x *= 37.5;
    EXPECT_NEAR(cosine_similarity(scaled, b), c, 1e-12);
    EXPECT_NEAR(cosine_similarity(b, a), c, 1e-12);
  }
}

TEST(Tokens, LowercasedWithoutStopwords) {
  EXPECT_EQ(embedding_tokens("The Apple, an apple-pie and 3 cats!"),
            (std::vector<std::string>{"apple", "apple", "pie", "3", "cats"}));
  EXPECT_TRUE(embedding_tokens("the of a").empty());
}

// Components computed independently from the documented hash formula.
TEST(HashProjection, PinnedComponents) {
  HashProjectionEmbedder e4(4, 0);
  EXPECT_EQ(e4.embed("The apple, an apple and a Banana!").components, (std::vector<double>{1, -1, -1, -1}));
  HashProjectionEmbedder e4s(4, 7);
  EXPECT_EQ(e4s.embed("The apple, an apple and a Banana!").components, (std::vector<double>{-1, -1, 3, -3}));
  HashProjectionEmbedder e70(70, 3);
  const auto v = e70.embed("count to ten").components;
  ASSERT_EQ(v.size(), 70u);
  EXPECT_EQ(std::vector<double>(v.begin() + 60, v.end()),
            (std::vector<double>{-2, 0, 0, 2, -2, -2, 0, 2, 0, -2}));
  EXPECT_EQ(e70.id(), "hash-projection:d=70:seed=3");
}

TEST(HashProjection, SameUnderEveryIsa) {
  const auto saved = kernels::active_isa();
  HashProjectionEmbedder e(300, 9);
  kernels::set_isa(kernels::Isa::Scalar);
  const auto want = e.embed("fractions on a number line, halves and fourths").components;
  for (auto isa : {kernels::Isa::Avx2, kernels::Isa::Neon}) {
    if (!kernels::isa_supported(isa)) continue;
    kernels::set_isa(isa);
    EXPECT_EQ(e.embed("fractions on a number line, halves and fourths").components, want);
  }
  kernels::set_isa(saved);
}

TEST(HashProjection, OverlapRaisesSimilarity) {
  HashProjectionEmbedder e(512, 0);
  const auto q = e.embed("compare fractions with like denominators");
  const auto near = e.embed("compare two fractions that have like denominators");
  const auto far = e.embed("identify the main character of a story");
  EXPECT_GT(cosine_similarity(q, near), cosine_similarity(q, far));
  EXPECT_EQ(code_of([&] { e.embed("  "); }), ErrorCode::EmptyText);
  EXPECT_EQ(code_of([] { HashProjectionEmbedder(0, 0); }), ErrorCode::InvalidConfig);
}

TEST(Ranking, MatchesBruteForce) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> coord(-3, 3);  // small integers force ties
  for (int t = 0; t < 100; ++t) {
    const size_t n = 1 + rng() % 25;
    std::map<std::string, EmbeddingVector> skills;
    for (size_t i = 0; i < n; ++i) {
      std::vector<double> c(3);
      do {
        for (auto& x : c) x = coord(rng);
      } while (c[0] == 0 && c[1] == 0 && c[2] == 0);
      skills.emplace("S" + std::to_string(rng() % 1000) + "_" + std::to_string(i), vec(c));
    }
    const auto item = vec({1.0, 0.5, -0.25});
    const auto ranked = rank_candidates("I", item, skills);
    ASSERT_EQ(ranked.entries.size(), skills.size());
    // every entry outranks exactly the ones it beats by (score desc, id asc)
    for (const auto& [id, v] : skills) {
      const double s = cosine_similarity(item, v);
      size_t better = 0;
      for (const auto& [id2, v2] : skills) {
        const double s2 = cosine_similarity(item, v2);
        if (s2 > s || (s2 == s && id2 < id)) ++better;
      }
      EXPECT_EQ(ranked.rank_of(id), better + 1);
    }
    EXPECT_EQ(ranked.rank_of("absent"), 0u);
    for (size_t top : {1, 3, 15, 40}) {
      const auto kept = filter_top_n(ranked, top);
      EXPECT_EQ(kept.size(), std::min(top, skills.size()));
      for (size_t i = 0; i < kept.size(); ++i) EXPECT_EQ(kept[i], ranked.entries[i].skill_id);
    }
  }
  EXPECT_EQ(code_of([] { filter_top_n(RankedCandidates{}, 0); }), ErrorCode::InvalidConfig);
}

TEST(Ranking, InvariantToSkillScaling) {
  std::map<std::string, EmbeddingVector> a = {{"1", vec({1, 0})}, {"2", vec({1, 1})}, {"3", vec({0, 1})}};
  auto b = a;
  b["2"] = vec({5, 5});
  const auto item = vec({2, 1});
  const auto ra = rank_candidates("I", item, a);
  const auto rb = rank_candidates("I", item, b);
  for (size_t i = 0; i < ra.entries.size(); ++i) EXPECT_EQ(ra.entries[i].skill_id, rb.entries[i].skill_id);
  EXPECT_EQ(ra.entries[0].skill_id, "2");
}

class CountingEmbedder final : public EmbeddingProvider {
 public:
  EmbeddingVector embed(std::string_view text) override {
    ++calls;
    return {{static_cast<double>(text.size()), 1.0}, id()};
  }
  std::string id() const override { return "counting"; }
  size_t dimension() const override { return 2; }
  int calls = 0;
};

TEST(CachedEmbedder, MemoizesAndPersists) {
  testing::TempDir dir;
  CountingEmbedder inner;
  {
    CachedEmbedder c(inner, dir / "emb.jsonl");
    EXPECT_EQ(c.embed("abc").components, (std::vector<double>{3, 1}));
    c.embed("abc");
    c.embed("hello");
    EXPECT_EQ(inner.calls, 2);
    EXPECT_EQ(c.hits(), 1u);
    EXPECT_EQ(c.misses(), 2u);
  }
  // a torn trailing line is ignored
  std::ofstream(dir / "emb.jsonl", std::ios::app) << "{\"key\": \"trunc";
  CachedEmbedder again(inner, dir / "emb.jsonl");
  EXPECT_EQ(again.embed("hello").components, (std::vector<double>{5, 1}));
  EXPECT_EQ(inner.calls, 2);
}

TEST(SkillText, Modes) {
  const auto s = testing::make_skill("1", Grade::K, Subject::Math, "d", "Count", "Count to 10.");
  EXPECT_EQ(skill_text_for_embedding(s), "Count: Count to 10.");
  EXPECT_EQ(skill_text_for_embedding(s, SkillTextMode::StatementOnly), "Count to 10.");
  Item it = testing::make_item("I", Grade::K, Subject::Math, "stem");
  it.explanation_text = "why";
  EXPECT_EQ(item_text_for_embedding(it), "stem\nwhy");
}

TEST(SkillEmbeddingIndex, EmbedsEachPoolOnce) {
  const auto cat = testing::mini_catalog();
  CountingEmbedder inner;
  SkillEmbeddingIndex index(inner, SkillTextMode::NameAndStatement);
  const auto& v = index.pool_vectors(cat, Grade::K, Subject::Math);
  EXPECT_EQ(v.size(), 6u);
  index.pool_vectors(cat, Grade::K, Subject::Math);
  EXPECT_EQ(inner.calls, 6);
}

}  // namespace
}  // namespace alignaudit
