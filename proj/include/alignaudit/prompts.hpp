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

// Prompt templates for the alignment tasks and parsers for model replies.
//
// Templates are versioned text assets with {{slot}} placeholders. Reports
// carry the name@version of every template a run used, so a change to any
// instruction text shows up as a manifest difference.

#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "alignaudit/corpus.hpp"
#include "alignaudit/taxonomy.hpp"

namespace alignaudit {

struct PromptTemplate {
  std::string_view name;
  std::string_view version;
  std::string_view text;

  std::string id() const { return std::string(name) + "@" + std::string(version); }
};

/// Replaces every {{slot}}; throws MissingSlot for a placeholder without a value.
std::string fill_slots(std::string_view text, const std::map<std::string, std::string, std::less<>>& slots);

enum class BinaryPromptKind { ZeroShot, FewShot, StrictMisalign };

std::string_view to_string(BinaryPromptKind k);
std::optional<BinaryPromptKind> parse_binary_prompt_kind(std::string_view s);

/// A labeled demonstration shown in few-shot prompts.
struct Exemplar {
  Item item;
  Skill skill;
  AlignmentLabel label = AlignmentLabel::Aligned;
  std::optional<MisalignmentTier> tier;
};

/// Exactly four: one aligned and one misaligned per tier. Throws MissingExemplars.
void validate_exemplars(std::span<const Exemplar> exemplars);

/// Reads the bundled exemplar JSON format.
std::vector<Exemplar> load_exemplars(const std::filesystem::path& path);

const PromptTemplate& binary_template(BinaryPromptKind kind);
const PromptTemplate& topk_template(int k);

/// Template ids (name@version) for the prompts a binary or top-k run renders.
std::vector<std::string> binary_template_ids(BinaryPromptKind kind);
std::vector<std::string> topk_template_ids(std::span<const int> ks);

// Text blocks shared by every template; exposed so fixtures can match on them.
std::string render_item_block(const Item& item);
std::string render_skill_block(const Skill& skill);
/// The closing "item + skill" section of a binary prompt.
std::string render_binary_target(const Item& item, const Skill& skill);
/// One candidate line: "skill_id: skill_name - skill_statement".
std::string render_candidate_line(const Skill& skill);

/// Throws MissingExemplars for FewShot without a valid exemplar set, and
/// EmptyItemText / EmptyStatement for blank inputs.
std::string render_binary_prompt(BinaryPromptKind kind, const Item& item, const Skill& skill,
                                 std::span<const Exemplar> exemplars = {});

/// Throws KExceedsCandidates unless 1 <= k <= candidates.size().
std::string render_topk_prompt(const Item& item, std::span<const Skill> candidates, int k);

struct Verdict {
  enum class Kind { Aligned, Misaligned, Unparseable };
  Kind kind = Kind::Unparseable;
  std::string raw;  // completion text, verbatim

  bool parsed() const { return kind != Kind::Unparseable; }
  AlignmentLabel label() const {
    return kind == Kind::Misaligned ? AlignmentLabel::Misaligned : AlignmentLabel::Aligned;
  }
};

std::string_view to_string(Verdict::Kind k);

Verdict parse_binary_verdict(std::string_view raw);

enum class TopKMode { SeparatePrompt, RankedList };

std::string_view to_string(TopKMode m);
std::optional<TopKMode> parse_topk_mode(std::string_view s);

struct TopKSelection {
  std::vector<std::string> ranked_skill_ids;
  int k = 1;
  TopKMode mode = TopKMode::SeparatePrompt;
};

/// Ids in order of appearance, first occurrence kept, truncated to k.
/// Throws NoValidIds when nothing id-like appears and ForeignId (naming the
/// token) when an id-like token is not among the candidates.
TopKSelection parse_topk_selection(std::string_view raw, std::span<const std::string> candidate_ids, int k,
                                   TopKMode mode = TopKMode::SeparatePrompt);

}  // namespace alignaudit
