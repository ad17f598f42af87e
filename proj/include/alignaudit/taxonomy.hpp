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

// Skills taxonomy and item bank. Both are immutable once loaded.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "alignaudit/table_io.hpp"

namespace alignaudit {

/// Ordered K < 1 < ... < 5.
enum class Grade : std::uint8_t { K = 0, G1, G2, G3, G4, G5 };
enum class Subject : std::uint8_t { Math, Reading };

inline constexpr Grade kAllGrades[] = {Grade::K, Grade::G1, Grade::G2, Grade::G3, Grade::G4, Grade::G5};
inline constexpr Subject kAllSubjects[] = {Subject::Math, Subject::Reading};

std::string_view to_string(Grade g);
std::string_view to_string(Subject s);

/// Accepts "K"/"KG"/"0" and "1".."5", optionally prefixed with "Grade ".
std::optional<Grade> parse_grade(std::string_view text);
/// Accepts "Math", "Mathematics", "Reading", "ELA" (case-insensitive).
std::optional<Subject> parse_subject(std::string_view text);

struct Skill {
  std::string skill_id;
  Grade grade = Grade::K;
  Subject subject = Subject::Math;
  std::string domain_name;
  std::string skill_name;
  std::string skill_statement;

  bool operator==(const Skill&) const = default;
};

struct Item {
  std::string item_id;
  Grade grade = Grade::K;
  Subject subject = Subject::Math;
  std::string prompt_text;
  std::string stem_text;
  std::string explanation_text;
  /// The validated skill this item is tagged with, when the bank carries it.
  std::optional<std::string> aligned_skill_id;
};

enum class RelationTier { Same, SameDomainDiffSkill, SameSubjectDiffDomain, DiffSubject };

std::string_view to_string(RelationTier t);

/// Throws CrossGradeComparison when the skills sit in different grades.
RelationTier relation_between(const Skill& a, const Skill& b);

class SkillCatalog {
 public:
  SkillCatalog() = default;

  /// Validates and indexes; throws DuplicateSkillId, EmptyStatement.
  static SkillCatalog from_skills(std::vector<Skill> skills);

  /// Skills of one (grade, subject), sorted by skill_id ascending.
  std::span<const Skill> candidate_pool(Grade grade, Subject subject) const;

  /// All skills sharing a grade, any subject, sorted by (subject, skill_id).
  std::span<const Skill> grade_pool(Grade grade) const;

  const Skill* find(std::string_view skill_id) const;
  const Skill& at(std::string_view skill_id) const;

  std::span<const Skill> skills() const { return skills_; }
  size_t size() const { return skills_.size(); }
  bool empty() const { return skills_.empty(); }

 private:
  // sorted by (grade, subject, skill_id) so every pool is contiguous
  std::vector<Skill> skills_;
  std::unordered_map<std::string, size_t> by_id_;
};

SkillCatalog load_skills(std::span<const Record> records);
SkillCatalog load_skills_file(const std::filesystem::path& path);

class ItemBank {
 public:
  ItemBank() = default;

  /// Throws DuplicateItemId, EmptyItemText.
  static ItemBank from_items(std::vector<Item> items);

  const Item* find(std::string_view item_id) const;
  const Item& at(std::string_view item_id) const;
  std::span<const Item> items() const { return items_; }
  size_t size() const { return items_.size(); }

 private:
  std::vector<Item> items_;  // file order
  std::unordered_map<std::string, size_t> by_id_;
};

ItemBank load_items(std::span<const Record> records);
ItemBank load_items_file(const std::filesystem::path& path);

}  // namespace alignaudit
