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

#include "alignaudit/prompts.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "alignaudit/error.hpp"

namespace alignaudit {
namespace {

// Instruction texts are reproduced exactly, including the typographic quotes.
constexpr std::string_view kZeroShotText =
    "As an expert in educational assessment, your task is to determine if an assessment item aligns "
    "with a specific skill statement. Instructions: Think step by step about how the assessment item "
    "aligns with the skill statement. Please categorize the item as “aligned” or "
    "“misaligned”. Your response should be only one word: “aligned” or "
    "“misaligned”. Avoid labeling items as “misaligned” unless there is clear "
    "evidence.\n"
    "\n"
    "{{target}}\n";

constexpr std::string_view kStrictText =
    "As an expert in educational assessment, your task is to determine if an assessment item aligns "
    "with a specific skill statement. Instructions: Think step by step about how the assessment item "
    "aligns with the skill statements. Please categorize the item as “aligned” or "
    "“misaligned”. Your response should be only one word: “aligned” or "
    "“misaligned”. Avoid labeling items as “aligned” unless there is very clear "
    "and direct evidence.\n"
    "\n"
    "{{target}}\n";

constexpr std::string_view kFewShotText =
    "As an expert in educational assessment, determine if an assessment item aligns with a specific "
    "skill statement. Here are some examples to guide you:\n"
    "\n"
    "{{examples}}\n"
    "\n"
    "Using the alignment criteria from the initial examples, determine if the following assessment "
    "item aligns with the given skill statement. Instructions: Think step by step about how the "
    "assessment item aligns with the skill statement. Categorize the item as “aligned” or "
    "“misaligned”. Your response should be only one word: “aligned” or "
    "“misaligned”. Avoid labeling items as “misaligned” unless there is clear "
    "evidence.\n"
    "\n"
    "{{target}}\n";

constexpr std::string_view kTop1Text =
    "You are provided with an educational item and a list of skills. Your task is to determine which "
    "one skill is most likely being measured by the item. Base your decision on clear and strong "
    "evidence. WARNING: You must return ONLY the Skill ID as your response.\n"
    "\n"
    "Example Output: 520.\n"
    "\n"
    "Item:\n"
    "{{item}}\n"
    "\n"
    "Skills:\n"
    "{{skills}}\n";

constexpr std::string_view kTopManyText =
    "You are provided with an educational item and a list of skills. Your task is to determine which "
    "{{count}} skills are most likely being measured by the item. Base your decision on clear and "
    "strong evidence. WARNING: You must return ONLY the Skill IDs as your response: exactly {{k}} "
    "Skill IDs, one per line, most likely first.\n"
    "\n"
    "Example Output:\n"
    "{{example_ids}}\n"
    "\n"
    "Item:\n"
    "{{item}}\n"
    "\n"
    "Skills:\n"
    "{{skills}}\n";

const PromptTemplate kZeroShot{"binary-zero-shot", "1", kZeroShotText};
const PromptTemplate kStrict{"binary-strict", "1", kStrictText};
const PromptTemplate kFewShot{"binary-few-shot", "1", kFewShotText};
const PromptTemplate kTop1{"topk-single", "1", kTop1Text};
const PromptTemplate kTopMany{"topk-multi", "1", kTopManyText};

std::string count_word(int k) {
  static constexpr const char* kWords[] = {"zero", "one", "two",   "three", "four",
                                           "five", "six", "seven", "eight", "nine", "ten"};
  if (k >= 0 && k <= 10) return kWords[k];
  return std::to_string(k);
}

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

void require_text(const Item& item, const Skill& skill) {
  if (trim(item.prompt_text).empty() && trim(item.stem_text).empty() && trim(item.explanation_text).empty()) {
    throw Error(ErrorCode::EmptyItemText, "item " + item.item_id + " has no text");
  }
  if (trim(skill.skill_statement).empty() || trim(skill.skill_name).empty()) {
    throw Error(ErrorCode::EmptyStatement, "skill " + skill.skill_id);
  }
}

bool id_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '_';
}

// Drops "1. ", "2) ", "- ", "* " list markers at the start of a line.
std::string_view strip_list_marker(std::string_view line) {
  auto t = line.substr(std::min(line.size(), line.find_first_not_of(" \t")));
  if (t.size() >= 2 && (t[0] == '-' || t[0] == '*') && (t[1] == ' ' || t[1] == '\t')) return t.substr(2);
  size_t i = 0;
  while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
  if (i > 0 && i + 1 < t.size() && (t[i] == '.' || t[i] == ')') && (t[i + 1] == ' ' || t[i + 1] == '\t')) {
    auto rest = trim(t.substr(i + 2));
    if (!rest.empty()) return rest;
  }
  return t;
}

}  // namespace

std::string fill_slots(std::string_view text, const std::map<std::string, std::string, std::less<>>& slots) {
  std::string out;
  out.reserve(text.size() + 256);
  size_t pos = 0;
  while (pos < text.size()) {
    auto open = text.find("{{", pos);
    if (open == std::string_view::npos) {
      out.append(text.substr(pos));
      break;
    }
    auto close = text.find("}}", open + 2);
    if (close == std::string_view::npos) {
      out.append(text.substr(pos));
      break;
    }
    out.append(text.substr(pos, open - pos));
    auto name = text.substr(open + 2, close - open - 2);
    auto it = slots.find(name);
    if (it == slots.end()) throw Error(ErrorCode::MissingSlot, std::string(name));
    out.append(it->second);
    pos = close + 2;
  }
  return out;
}

std::string_view to_string(BinaryPromptKind k) {
  switch (k) {
    case BinaryPromptKind::ZeroShot: return "zero-shot";
    case BinaryPromptKind::FewShot: return "few-shot";
    case BinaryPromptKind::StrictMisalign: return "strict";
  }
  return "?";
}

std::optional<BinaryPromptKind> parse_binary_prompt_kind(std::string_view s) {
  auto t = lower_ascii(trim(s));
  if (t == "zero-shot" || t == "zeroshot" || t == "zero_shot") return BinaryPromptKind::ZeroShot;
  if (t == "few-shot" || t == "fewshot" || t == "few_shot") return BinaryPromptKind::FewShot;
  if (t == "strict" || t == "strict-misalign" || t == "second") return BinaryPromptKind::StrictMisalign;
  return std::nullopt;
}

std::string_view to_string(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::Aligned: return "aligned";
    case Verdict::Kind::Misaligned: return "misaligned";
    case Verdict::Kind::Unparseable: return "unparseable";
  }
  return "?";
}

std::string_view to_string(TopKMode m) { return m == TopKMode::SeparatePrompt ? "separate" : "ranked"; }

std::optional<TopKMode> parse_topk_mode(std::string_view s) {
  auto t = lower_ascii(trim(s));
  if (t == "separate" || t == "separate-prompt") return TopKMode::SeparatePrompt;
  if (t == "ranked" || t == "ranked-list") return TopKMode::RankedList;
  return std::nullopt;
}

void validate_exemplars(std::span<const Exemplar> exemplars) {
  if (exemplars.size() != 4) {
    throw Error(ErrorCode::MissingExemplars,
                "few-shot prompts need 4 exemplars, got " + std::to_string(exemplars.size()));
  }
  size_t aligned = 0;
  std::set<MisalignmentTier> tiers;
  for (const auto& ex : exemplars) {
    if (ex.label == AlignmentLabel::Aligned) {
      ++aligned;
    } else if (ex.tier) {
      tiers.insert(*ex.tier);
    }
  }
  if (aligned != 1 || tiers.size() != 3) {
    throw Error(ErrorCode::MissingExemplars,
                "few-shot exemplars must be 1 aligned plus one misaligned per tier");
  }
}

std::vector<Exemplar> load_exemplars(const std::filesystem::path& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidRecord, path.string() + ": " + e.what());
  }
  std::vector<Exemplar> out;
  try {
    for (const auto& e : doc.at("exemplars")) {
      Exemplar ex;
      const auto& item = e.at("item");
      ex.item.item_id = item.value("item_id", "exemplar");
      ex.item.prompt_text = item.value("prompt", "");
      ex.item.stem_text = item.value("stem", "");
      ex.item.explanation_text = item.value("explanation", "");
      const auto& skill = e.at("skill");
      ex.skill.skill_id = skill.at("skill_id").get<std::string>();
      ex.skill.skill_name = skill.at("skill_name").get<std::string>();
      ex.skill.skill_statement = skill.at("skill_statement").get<std::string>();
      auto label = parse_label(e.at("label").get<std::string>());
      if (!label) throw Error(ErrorCode::InvalidRecord, "bad exemplar label");
      ex.label = *label;
      if (e.contains("tier") && e["tier"].is_string()) ex.tier = parse_tier(e["tier"].get<std::string>());
      out.push_back(std::move(ex));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidRecord, path.string() + ": " + e.what());
  }
  return out;
}

const PromptTemplate& binary_template(BinaryPromptKind kind) {
  switch (kind) {
    case BinaryPromptKind::ZeroShot: return kZeroShot;
    case BinaryPromptKind::FewShot: return kFewShot;
    case BinaryPromptKind::StrictMisalign: return kStrict;
  }
  return kZeroShot;
}

const PromptTemplate& topk_template(int k) { return k == 1 ? kTop1 : kTopMany; }

std::vector<std::string> binary_template_ids(BinaryPromptKind kind) { return {binary_template(kind).id()}; }

std::vector<std::string> topk_template_ids(std::span<const int> ks) {
  std::set<std::string> ids;
  for (int k : ks) ids.insert(topk_template(k).id());
  return {ids.begin(), ids.end()};
}

std::string render_item_block(const Item& item) {
  std::string out;
  auto add = [&](std::string_view label, const std::string& text) {
    if (trim(text).empty()) return;
    if (!out.empty()) out.push_back('\n');
    out.append(label).append(": ").append(text);
  };
  add("Prompt", item.prompt_text);
  add("Stem", item.stem_text);
  add("Explanation", item.explanation_text);
  return out;
}

std::string render_skill_block(const Skill& skill) {
  return "Skill ID: " + skill.skill_id + "\nSkill Name: " + skill.skill_name +
         "\nSkill Statement: " + skill.skill_statement;
}

std::string render_binary_target(const Item& item, const Skill& skill) {
  return "Assessment Item:\n" + render_item_block(item) + "\n\nSkill:\n" + render_skill_block(skill);
}

std::string render_candidate_line(const Skill& skill) {
  return skill.skill_id + ": " + skill.skill_name + " - " + skill.skill_statement;
}

std::string render_binary_prompt(BinaryPromptKind kind, const Item& item, const Skill& skill,
                                 std::span<const Exemplar> exemplars) {
  require_text(item, skill);
  std::map<std::string, std::string, std::less<>> slots{{"target", render_binary_target(item, skill)}};
  if (kind == BinaryPromptKind::FewShot) {
    validate_exemplars(exemplars);
    std::string examples;
    for (size_t i = 0; i < exemplars.size(); ++i) {
      const auto& ex = exemplars[i];
      require_text(ex.item, ex.skill);
      if (i) examples.append("\n\n");
      examples.append("Example " + std::to_string(i + 1) + ":\n");
      examples.append(render_binary_target(ex.item, ex.skill));
      examples.append("\nAnswer: ").append(to_string(ex.label));
    }
    slots["examples"] = std::move(examples);
  }
  return fill_slots(binary_template(kind).text, slots);
}

std::string render_topk_prompt(const Item& item, std::span<const Skill> candidates, int k) {
  if (k < 1 || static_cast<size_t>(k) > candidates.size()) {
    throw Error(ErrorCode::KExceedsCandidates,
                "k=" + std::to_string(k) + " with " + std::to_string(candidates.size()) + " candidates");
  }
  std::string skills;
  for (const auto& s : candidates) {
    if (!skills.empty()) skills.push_back('\n');
    skills.append(render_candidate_line(s));
  }
  std::map<std::string, std::string, std::less<>> slots{{"item", render_item_block(item)},
                                                        {"skills", std::move(skills)}};
  if (k > 1) {
    std::string example_ids;
    for (int i = 0; i < k; ++i) {
      if (i) example_ids.push_back('\n');
      example_ids.append(std::to_string(520 + i));
    }
    slots["count"] = count_word(k);
    slots["k"] = std::to_string(k);
    slots["example_ids"] = std::move(example_ids);
  }
  return fill_slots(topk_template(k).text, slots);
}

Verdict parse_binary_verdict(std::string_view raw) {
  bool saw_aligned = false;
  bool saw_misaligned = false;
  std::string word;
  auto flush = [&] {
    if (word == "aligned") saw_aligned = true;
    if (word == "misaligned") saw_misaligned = true;
    word.clear();
  };
  for (char c : raw) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      word.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else {
      flush();
    }
  }
  flush();
  Verdict v;
  v.raw = std::string(raw);
  if (saw_aligned != saw_misaligned) {
    v.kind = saw_aligned ? Verdict::Kind::Aligned : Verdict::Kind::Misaligned;
  }
  return v;
}

TopKSelection parse_topk_selection(std::string_view raw, std::span<const std::string> candidate_ids, int k,
                                   TopKMode mode) {
  if (candidate_ids.empty()) throw Error(ErrorCode::InvalidConfig, "empty candidate set");
  if (k < 1) throw Error(ErrorCode::InvalidConfig, "k must be positive");
  std::unordered_set<std::string_view> offered(candidate_ids.begin(), candidate_ids.end());

  std::vector<std::string> ids;
  std::unordered_set<std::string> seen;
  size_t line_start = 0;
  while (line_start <= raw.size()) {
    auto nl = raw.find('\n', line_start);
    auto line = raw.substr(line_start, nl == std::string_view::npos ? std::string_view::npos : nl - line_start);
    line = strip_list_marker(line);
    size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && !id_char(line[i])) ++i;
      size_t j = i;
      while (j < line.size() && id_char(line[j])) ++j;
      auto tok = line.substr(i, j - i);
      i = j;
      while (!tok.empty() && (tok.back() == '.' || tok.back() == '-' || tok.back() == '_')) tok.remove_suffix(1);
      while (!tok.empty() && (tok.front() == '.' || tok.front() == '-' || tok.front() == '_')) tok.remove_prefix(1);
      if (tok.empty()) continue;
      bool id_like = offered.count(tok) > 0 ||
                     std::any_of(tok.begin(), tok.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
      if (!id_like) continue;
      if (seen.insert(std::string(tok)).second) ids.emplace_back(tok);
    }
    if (nl == std::string_view::npos) break;
    line_start = nl + 1;
  }
  if (ids.empty()) throw Error(ErrorCode::NoValidIds, "no skill id in reply '" + std::string(raw) + "'");
  if (ids.size() > static_cast<size_t>(k)) ids.resize(static_cast<size_t>(k));
  for (const auto& id : ids) {
    if (!offered.count(id)) throw Error(ErrorCode::ForeignId, id);
  }
  return TopKSelection{std::move(ids), k, mode};
}

}  // namespace alignaudit
