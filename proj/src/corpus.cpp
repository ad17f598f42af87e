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

#include "alignaudit/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include "alignaudit/error.hpp"
#include "alignaudit/random.hpp"

namespace alignaudit {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

const char* infeasible_reason(MisalignmentTier tier) {
  switch (tier) {
    case MisalignmentTier::Completely: return "no same-grade skill in another subject";
    case MisalignmentTier::Somewhat: return "no same-subject skill in another domain";
    case MisalignmentTier::Slightly: return "no other skill in the same domain";
  }
  return "";
}

const Skill& true_skill_or_throw(const SkillCatalog& catalog, std::string_view id, std::string_view item_id) {
  const Skill* s = catalog.find(id);
  if (!s) {
    throw Error(ErrorCode::TrueSkillNotInCatalog,
                "item " + std::string(item_id) + " links skill " + std::string(id));
  }
  return *s;
}

// Same-grade skills standing in `tier`'s relation to `truth`, in skill_id order.
std::vector<const Skill*> tier_candidates(const Skill& truth, const SkillCatalog& catalog,
                                          MisalignmentTier tier) {
  std::vector<const Skill*> out;
  const auto want = required_relation(tier);
  for (const auto& s : catalog.grade_pool(truth.grade)) {
    if (relation_between(s, truth) == want) out.push_back(&s);
  }
  std::sort(out.begin(), out.end(), [](const Skill* a, const Skill* b) { return a->skill_id < b->skill_id; });
  return out;
}

}  // namespace

std::string_view to_string(AlignmentLabel l) { return l == AlignmentLabel::Aligned ? "aligned" : "misaligned"; }

std::string_view to_string(MisalignmentTier t) {
  switch (t) {
    case MisalignmentTier::Completely: return "completely";
    case MisalignmentTier::Somewhat: return "somewhat";
    case MisalignmentTier::Slightly: return "slightly";
  }
  return "?";
}

std::optional<AlignmentLabel> parse_label(std::string_view s) {
  auto t = lower(trim(s));
  if (t == "aligned") return AlignmentLabel::Aligned;
  if (t == "misaligned") return AlignmentLabel::Misaligned;
  return std::nullopt;
}

std::optional<MisalignmentTier> parse_tier(std::string_view s) {
  auto t = lower(trim(s));
  if (t == "completely") return MisalignmentTier::Completely;
  if (t == "somewhat") return MisalignmentTier::Somewhat;
  if (t == "slightly") return MisalignmentTier::Slightly;
  return std::nullopt;
}

RelationTier required_relation(MisalignmentTier tier) {
  switch (tier) {
    case MisalignmentTier::Completely: return RelationTier::DiffSubject;
    case MisalignmentTier::Somewhat: return RelationTier::SameSubjectDiffDomain;
    case MisalignmentTier::Slightly: return RelationTier::SameDomainDiffSkill;
  }
  return RelationTier::Same;
}

std::vector<AlignedLink> aligned_links(const ItemBank& bank) {
  std::vector<AlignedLink> out;
  for (const auto& it : bank.items()) {
    if (!it.aligned_skill_id) {
      throw Error(ErrorCode::InvalidRecord, "item " + it.item_id + " has no skill_id");
    }
    out.push_back({it.item_id, *it.aligned_skill_id});
  }
  return out;
}

std::map<MisalignmentTier, size_t> feasible_tiers(const Item& item, std::string_view true_skill_id,
                                                  const SkillCatalog& catalog) {
  const Skill& truth = true_skill_or_throw(catalog, true_skill_id, item.item_id);
  if (truth.grade != item.grade) {
    throw Error(ErrorCode::InvalidRecord, "item " + item.item_id + " and skill " + truth.skill_id +
                                              " are in different grades");
  }
  std::map<MisalignmentTier, size_t> counts;
  for (auto tier : kAllTiers) counts[tier] = tier_candidates(truth, catalog, tier).size();
  return counts;
}

PairSet synthesize(std::span<const AlignedLink> links, const SkillCatalog& catalog, std::uint64_t seed) {
  PairSet set;
  set.seed = seed;
  set.pairs.reserve(links.size() * 4);
  for (const auto& link : links) {
    const Skill& truth = true_skill_or_throw(catalog, link.skill_id, link.item_id);
    set.pairs.push_back({link.item_id, truth.skill_id, AlignmentLabel::Aligned, std::nullopt, truth.skill_id,
                         Provenance{false, seed}});
    auto rng = substream(seed, link.item_id);
    for (auto tier : kAllTiers) {
      auto candidates = tier_candidates(truth, catalog, tier);
      if (candidates.empty()) {
        set.skipped.push_back({link.item_id, tier, infeasible_reason(tier)});
        continue;
      }
      const Skill* pick = candidates[uniform_index(rng, candidates.size())];
      set.pairs.push_back({link.item_id, pick->skill_id, AlignmentLabel::Misaligned, tier, truth.skill_id,
                           Provenance{true, seed}});
    }
  }
  return set;
}

PairSet ground_truth_pairs(std::span<const AlignedLink> links) {
  PairSet set;
  for (const auto& link : links) {
    set.pairs.push_back(
        {link.item_id, link.skill_id, AlignmentLabel::Aligned, std::nullopt, link.skill_id, Provenance{}});
  }
  return set;
}

std::string pairs_to_csv(const PairSet& set) {
  std::ostringstream out;
  CsvWriter w(out);
  w.row({"item_id", "skill_id", "label", "tier", "true_skill_id", "provenance", "seed"});
  for (const auto& p : set.pairs) {
    w.row({p.item_id, p.skill_id, std::string(to_string(p.label)),
           p.tier ? std::string(to_string(*p.tier)) : std::string{}, p.true_skill_id,
           p.provenance.synthesized ? "synthesized" : "ground_truth", std::to_string(p.provenance.seed)});
  }
  return out.str();
}

std::string skipped_to_csv(const PairSet& set) {
  std::ostringstream out;
  CsvWriter w(out);
  w.row({"item_id", "tier", "reason"});
  for (const auto& s : set.skipped) w.row({s.item_id, std::string(to_string(s.tier)), s.reason});
  return out.str();
}

namespace {
std::filesystem::path skipped_path_for(const std::filesystem::path& pairs_path) {
  auto p = pairs_path;
  p.replace_filename(pairs_path.stem().string() + ".skipped.csv");
  return p;
}

std::uint64_t parse_u64(const std::string& s, std::string_view what) {
  std::uint64_t v = 0;
  auto t = trim(s);
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size()) {
    throw Error(ErrorCode::InvalidRecord, "bad " + std::string(what) + " '" + s + "'");
  }
  return v;
}
}  // namespace

void write_pairset(const PairSet& set, const std::filesystem::path& pairs_path) {
  write_file(pairs_path, pairs_to_csv(set));
  write_file(skipped_path_for(pairs_path), skipped_to_csv(set));
}

PairSet read_pairset(const std::filesystem::path& pairs_path) {
  PairSet set;
  bool first = true;
  for (const auto& rec : read_records(pairs_path)) {
    ItemSkillPair p;
    auto get = [&](const char* k) {
      auto it = rec.find(k);
      if (it == rec.end()) throw Error(ErrorCode::InvalidRecord, std::string("pairs file lacks column ") + k);
      return std::string(trim(it->second));
    };
    p.item_id = get("item_id");
    p.skill_id = get("skill_id");
    auto label = parse_label(get("label"));
    if (!label) throw Error(ErrorCode::InvalidRecord, "bad label for item " + p.item_id);
    p.label = *label;
    if (auto t = get("tier"); !t.empty()) {
      p.tier = parse_tier(t);
      if (!p.tier) throw Error(ErrorCode::InvalidRecord, "bad tier '" + t + "'");
    }
    p.true_skill_id = get("true_skill_id");
    auto prov = get("provenance");
    if (prov != "synthesized" && prov != "ground_truth") {
      throw Error(ErrorCode::InvalidRecord, "bad provenance '" + prov + "'");
    }
    p.provenance.synthesized = prov == "synthesized";
    p.provenance.seed = parse_u64(get("seed"), "seed");
    if (p.label == AlignmentLabel::Aligned && p.skill_id != p.true_skill_id) {
      throw Error(ErrorCode::InvalidRecord, "aligned pair for " + p.item_id + " names a foreign skill");
    }
    if (p.tier.has_value() != (p.label == AlignmentLabel::Misaligned && p.provenance.synthesized)) {
      throw Error(ErrorCode::InvalidRecord, "tier/label mismatch for item " + p.item_id);
    }
    if (first) set.seed = p.provenance.seed;
    first = false;
    set.pairs.push_back(std::move(p));
  }
  auto skipped = skipped_path_for(pairs_path);
  if (std::filesystem::exists(skipped)) {
    for (const auto& rec : read_records(skipped)) {
      auto tier = parse_tier(rec.count("tier") ? rec.at("tier") : "");
      if (!tier) throw Error(ErrorCode::InvalidRecord, "bad tier in " + skipped.string());
      set.skipped.push_back({rec.count("item_id") ? rec.at("item_id") : "", *tier,
                             rec.count("reason") ? rec.at("reason") : ""});
    }
  }
  return set;
}

}  // namespace alignaudit
