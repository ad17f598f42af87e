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
#include <cctype>
#include <tuple>

#include "alignaudit/error.hpp"

namespace alignaudit {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string field(const Record& rec, std::string_view name) {
  auto it = rec.find(name);
  return it == rec.end() ? std::string{} : std::string(trim(it->second));
}

bool has_column(const Record& rec, std::string_view name) { return rec.find(name) != rec.end(); }

auto sort_key(const Skill& s) { return std::tie(s.grade, s.subject, s.skill_id); }

}  // namespace

std::string_view to_string(Grade g) {
  switch (g) {
    case Grade::K: return "K";
    case Grade::G1: return "1";
    case Grade::G2: return "2";
    case Grade::G3: return "3";
    case Grade::G4: return "4";
    case Grade::G5: return "5";
  }
  return "?";
}

std::string_view to_string(Subject s) { return s == Subject::Math ? "Math" : "Reading"; }

std::string_view to_string(RelationTier t) {
  switch (t) {
    case RelationTier::Same: return "Same";
    case RelationTier::SameDomainDiffSkill: return "SameDomainDiffSkill";
    case RelationTier::SameSubjectDiffDomain: return "SameSubjectDiffDomain";
    case RelationTier::DiffSubject: return "DiffSubject";
  }
  return "?";
}

std::optional<Grade> parse_grade(std::string_view text) {
  auto t = lower(trim(text));
  if (t.rfind("grade", 0) == 0) t = std::string(trim(std::string_view(t).substr(5)));
  if (t == "k" || t == "kg" || t == "0") return Grade::K;
  if (t.size() == 1 && t[0] >= '1' && t[0] <= '5') return static_cast<Grade>(t[0] - '0');
  return std::nullopt;
}

std::optional<Subject> parse_subject(std::string_view text) {
  auto t = lower(trim(text));
  if (t == "math" || t == "mathematics") return Subject::Math;
  if (t == "reading" || t == "ela") return Subject::Reading;
  return std::nullopt;
}

RelationTier relation_between(const Skill& a, const Skill& b) {
  if (a.grade != b.grade) {
    throw Error(ErrorCode::CrossGradeComparison,
                a.skill_id + " (grade " + std::string(to_string(a.grade)) + ") vs " + b.skill_id +
                    " (grade " + std::string(to_string(b.grade)) + ")");
  }
  if (a.skill_id == b.skill_id) return RelationTier::Same;
  if (a.subject != b.subject) return RelationTier::DiffSubject;
  if (trim(a.domain_name) != trim(b.domain_name)) return RelationTier::SameSubjectDiffDomain;
  return RelationTier::SameDomainDiffSkill;
}

SkillCatalog SkillCatalog::from_skills(std::vector<Skill> skills) {
  SkillCatalog cat;
  for (auto& s : skills) {
    s.domain_name = std::string(trim(s.domain_name));
    if (s.skill_id.empty()) throw Error(ErrorCode::InvalidRecord, "skill with empty skill_id");
    if (trim(s.skill_statement).empty() || trim(s.skill_name).empty()) {
      throw Error(ErrorCode::EmptyStatement, "skill " + s.skill_id + " has an empty name or statement");
    }
  }
  std::sort(skills.begin(), skills.end(),
            [](const Skill& a, const Skill& b) { return sort_key(a) < sort_key(b); });
  cat.skills_ = std::move(skills);
  for (size_t i = 0; i < cat.skills_.size(); ++i) {
    if (!cat.by_id_.emplace(cat.skills_[i].skill_id, i).second) {
      throw Error(ErrorCode::DuplicateSkillId, cat.skills_[i].skill_id);
    }
  }
  return cat;
}

std::span<const Skill> SkillCatalog::candidate_pool(Grade grade, Subject subject) const {
  auto lo = std::lower_bound(skills_.begin(), skills_.end(), std::make_pair(grade, subject),
                             [](const Skill& s, const std::pair<Grade, Subject>& k) {
                               return std::tie(s.grade, s.subject) < std::tie(k.first, k.second);
                             });
  auto hi = std::upper_bound(lo, skills_.end(), std::make_pair(grade, subject),
                             [](const std::pair<Grade, Subject>& k, const Skill& s) {
                               return std::tie(k.first, k.second) < std::tie(s.grade, s.subject);
                             });
  return {lo, hi};
}

std::span<const Skill> SkillCatalog::grade_pool(Grade grade) const {
  auto lo = std::partition_point(skills_.begin(), skills_.end(),
                                 [grade](const Skill& s) { return s.grade < grade; });
  auto hi = std::partition_point(lo, skills_.end(), [grade](const Skill& s) { return s.grade == grade; });
  return {lo, hi};
}

const Skill* SkillCatalog::find(std::string_view skill_id) const {
  auto it = by_id_.find(std::string(skill_id));
  return it == by_id_.end() ? nullptr : &skills_[it->second];
}

const Skill& SkillCatalog::at(std::string_view skill_id) const {
  if (const Skill* s = find(skill_id)) return *s;
  throw Error(ErrorCode::UnknownSkill, std::string(skill_id));
}

SkillCatalog load_skills(std::span<const Record> records) {
  std::vector<Skill> skills;
  skills.reserve(records.size());
  size_t row = 1;
  for (const auto& rec : records) {
    ++row;
    for (auto col : {"skill_id", "grade", "subject", "domain", "skill_name", "skill_statement"}) {
      if (!has_column(rec, col)) {
        throw Error(ErrorCode::InvalidRecord, "skills row " + std::to_string(row) + " lacks column " + col);
      }
    }
    Skill s;
    s.skill_id = field(rec, "skill_id");
    auto g = parse_grade(field(rec, "grade"));
    auto subj = parse_subject(field(rec, "subject"));
    if (!g || !subj) {
      throw Error(ErrorCode::InvalidGradeOrSubject,
                  "skill " + s.skill_id + ": grade '" + field(rec, "grade") + "', subject '" +
                      field(rec, "subject") + "'");
    }
    s.grade = *g;
    s.subject = *subj;
    s.domain_name = field(rec, "domain");
    s.skill_name = field(rec, "skill_name");
    s.skill_statement = field(rec, "skill_statement");
    skills.push_back(std::move(s));
  }
  return SkillCatalog::from_skills(std::move(skills));
}

SkillCatalog load_skills_file(const std::filesystem::path& path) {
  auto records = read_records(path);
  return load_skills(records);
}

ItemBank ItemBank::from_items(std::vector<Item> items) {
  ItemBank bank;
  for (const auto& it : items) {
    if (it.item_id.empty()) throw Error(ErrorCode::InvalidRecord, "item with empty item_id");
    if (trim(it.prompt_text).empty() && trim(it.stem_text).empty() && trim(it.explanation_text).empty()) {
      throw Error(ErrorCode::EmptyItemText, "item " + it.item_id + " has no text");
    }
  }
  bank.items_ = std::move(items);
  for (size_t i = 0; i < bank.items_.size(); ++i) {
    if (!bank.by_id_.emplace(bank.items_[i].item_id, i).second) {
      throw Error(ErrorCode::DuplicateItemId, bank.items_[i].item_id);
    }
  }
  return bank;
}

const Item* ItemBank::find(std::string_view item_id) const {
  auto it = by_id_.find(std::string(item_id));
  return it == by_id_.end() ? nullptr : &items_[it->second];
}

const Item& ItemBank::at(std::string_view item_id) const {
  if (const Item* i = find(item_id)) return *i;
  throw Error(ErrorCode::UnknownItem, std::string(item_id));
}

ItemBank load_items(std::span<const Record> records) {
  std::vector<Item> items;
  items.reserve(records.size());
  size_t row = 1;
  for (const auto& rec : records) {
    ++row;
    for (auto col : {"item_id", "grade", "subject", "stem"}) {
      if (!has_column(rec, col)) {
        throw Error(ErrorCode::InvalidRecord, "items row " + std::to_string(row) + " lacks column " + col);
      }
    }
    Item it;
    it.item_id = field(rec, "item_id");
    auto g = parse_grade(field(rec, "grade"));
    auto subj = parse_subject(field(rec, "subject"));
    if (!g || !subj) {
      throw Error(ErrorCode::InvalidGradeOrSubject,
                  "item " + it.item_id + ": grade '" + field(rec, "grade") + "', subject '" +
                      field(rec, "subject") + "'");
    }
    it.grade = *g;
    it.subject = *subj;
    it.prompt_text = field(rec, "prompt");
    it.stem_text = field(rec, "stem");
    it.explanation_text = field(rec, "explanation");
    if (auto sid = field(rec, "skill_id"); !sid.empty()) it.aligned_skill_id = sid;
    items.push_back(std::move(it));
  }
  return ItemBank::from_items(std::move(items));
}

ItemBank load_items_file(const std::filesystem::path& path) {
  auto records = read_records(path);
  return load_items(records);
}

}  // namespace alignaudit
