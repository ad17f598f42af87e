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

#include "alignaudit/taxonomy.hpp"

#include <algorithm>

#include <gtest/gtest.h>

#include "alignaudit/error.hpp"
#include "test_support.hpp"

namespace alignaudit {
namespace {

using testing::make_item;
using testing::make_skill;

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::Io;
}

TEST(Grades, ParseVariants) {
  EXPECT_EQ(parse_grade("K"), Grade::K);
  EXPECT_EQ(parse_grade(" kg "), Grade::K);
  EXPECT_EQ(parse_grade("Grade 3"), Grade::G3);
  EXPECT_EQ(parse_grade("5"), Grade::G5);
  EXPECT_FALSE(parse_grade("6"));
  EXPECT_FALSE(parse_grade(""));
  EXPECT_EQ(parse_subject("Mathematics"), Subject::Math);
  EXPECT_EQ(parse_subject("ELA"), Subject::Reading);
  EXPECT_FALSE(parse_subject("Science"));
  for (Grade g : kAllGrades) EXPECT_EQ(parse_grade(to_string(g)), g);
}

TEST(RelationBetween, AllTiers) {
  const auto a = make_skill("1", Grade::G2, Subject::Math, "Fractions", "n", "s");
  const auto same_domain = make_skill("2", Grade::G2, Subject::Math, "Fractions ", "n", "s");
  const auto other_domain = make_skill("3", Grade::G2, Subject::Math, "Geometry", "n", "s");
  const auto other_subject = make_skill("4", Grade::G2, Subject::Reading, "Fractions", "n", "s");
  const auto other_grade = make_skill("5", Grade::G3, Subject::Math, "Fractions", "n", "s");
  EXPECT_EQ(relation_between(a, a), RelationTier::Same);
  EXPECT_EQ(relation_between(a, same_domain), RelationTier::SameDomainDiffSkill);
  EXPECT_EQ(relation_between(a, other_domain), RelationTier::SameSubjectDiffDomain);
  EXPECT_EQ(relation_between(a, other_subject), RelationTier::DiffSubject);
  EXPECT_EQ(code_of([&] { relation_between(a, other_grade); }), ErrorCode::CrossGradeComparison);
}

TEST(RelationBetween, Symmetric) {
  const auto cat = testing::mini_catalog();
  for (const auto& a : cat.skills()) {
    for (const auto& b : cat.grade_pool(a.grade)) EXPECT_EQ(relation_between(a, b), relation_between(b, a));
  }
}

TEST(SkillCatalog, PoolsAreSortedAndPartition) {
  const auto cat = testing::mini_catalog();
  size_t total = 0;
  for (Grade g : {Grade::K, Grade::G1}) {
    size_t grade_total = 0;
    for (Subject s : kAllSubjects) {
      auto pool = cat.candidate_pool(g, s);
      EXPECT_EQ(pool.size(), 6u);
      EXPECT_TRUE(std::is_sorted(pool.begin(), pool.end(),
                                 [](const Skill& a, const Skill& b) { return a.skill_id < b.skill_id; }));
      for (const auto& sk : pool) {
        EXPECT_EQ(sk.grade, g);
        EXPECT_EQ(sk.subject, s);
      }
      grade_total += pool.size();
    }
    EXPECT_EQ(cat.grade_pool(g).size(), grade_total);
    total += grade_total;
  }
  EXPECT_EQ(total, cat.size());
  EXPECT_TRUE(cat.candidate_pool(Grade::G5, Subject::Math).empty());
}

TEST(SkillCatalog, Lookup) {
  const auto cat = testing::mini_catalog();
  EXPECT_EQ(cat.at("105").skill_id, "105");
  EXPECT_EQ(cat.find("999"), nullptr);
  EXPECT_EQ(code_of([&] { cat.at("999"); }), ErrorCode::UnknownSkill);
}

TEST(SkillCatalog, RejectsBadSkills) {
  EXPECT_EQ(code_of([] {
              SkillCatalog::from_skills({make_skill("1", Grade::K, Subject::Math, "d", "n", "s"),
                                         make_skill("1", Grade::G1, Subject::Math, "d", "n", "s")});
            }),
            ErrorCode::DuplicateSkillId);
  EXPECT_EQ(code_of([] { SkillCatalog::from_skills({make_skill("1", Grade::K, Subject::Math, "d", "n", "  ")}); }),
            ErrorCode::EmptyStatement);
}

TEST(LoadSkills, ReportsBadRows) {
  std::vector<Record> rows = {{{"skill_id", "1"},
                               {"grade", "7"},
                               {"subject", "Math"},
                               {"domain", "d"},
                               {"skill_name", "n"},
                               {"skill_statement", "s"}}};
  EXPECT_EQ(code_of([&] { load_skills(rows); }), ErrorCode::InvalidGradeOrSubject);
  rows[0].erase("domain");
  EXPECT_EQ(code_of([&] { load_skills(rows); }), ErrorCode::InvalidRecord);
}

TEST(LoadSkills, BundledTaxonomy) {
  const auto cat = load_skills_file(testing::source_path("data/skills.csv"));
  EXPECT_EQ(cat.size(), 320u);
  size_t total = 0;
  for (Grade g : kAllGrades) {
    for (Subject s : kAllSubjects) total += cat.candidate_pool(g, s).size();
  }
  EXPECT_EQ(total, cat.size());
}

TEST(ItemBank, RejectsBadItems) {
  EXPECT_EQ(code_of([] {
              ItemBank::from_items({make_item("A", Grade::K, Subject::Math, "x"), make_item("A", Grade::K, Subject::Math, "y")});
            }),
            ErrorCode::DuplicateItemId);
  EXPECT_EQ(code_of([] { ItemBank::from_items({make_item("A", Grade::K, Subject::Math, " ")}); }),
            ErrorCode::EmptyItemText);
  const auto bank = ItemBank::from_items({make_item("A", Grade::K, Subject::Math, "x")});
  EXPECT_EQ(code_of([&] { bank.at("B"); }), ErrorCode::UnknownItem);
}

TEST(ItemBank, BundledBankKeepsFileOrder) {
  const auto bank = load_items_file(testing::source_path("data/items.csv"));
  ASSERT_EQ(bank.size(), 60u);
  EXPECT_EQ(bank.items().front().item_id, "I001");
  EXPECT_EQ(bank.items().back().item_id, "I060");
  const auto cat = load_skills_file(testing::source_path("data/skills.csv"));
  for (const auto& it : bank.items()) {
    ASSERT_TRUE(it.aligned_skill_id);
    const Skill& s = cat.at(*it.aligned_skill_id);
    EXPECT_EQ(s.grade, it.grade) << it.item_id;
    EXPECT_EQ(s.subject, it.subject) << it.item_id;
  }
}

}  // namespace
}  // namespace alignaudit
