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

// Labeled benchmark construction: every validated item-skill link is kept as
// the aligned pair and joined by one misaligned pair per tier.
//
//   Completely  same grade, other subject
//   Somewhat    same grade and subject, other domain
//   Slightly    same grade, subject and domain, other skill

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "alignaudit/taxonomy.hpp"

namespace alignaudit {

enum class AlignmentLabel { Aligned, Misaligned };
enum class MisalignmentTier { Completely, Somewhat, Slightly };

inline constexpr std::array kAllTiers = {MisalignmentTier::Completely, MisalignmentTier::Somewhat,
                                         MisalignmentTier::Slightly};

std::string_view to_string(AlignmentLabel l);
std::string_view to_string(MisalignmentTier t);
std::optional<AlignmentLabel> parse_label(std::string_view s);
std::optional<MisalignmentTier> parse_tier(std::string_view s);

/// The skill relation a tier's distractor must have with the true skill.
RelationTier required_relation(MisalignmentTier tier);

struct Provenance {
  bool synthesized = false;
  std::uint64_t seed = 0;

  bool operator==(const Provenance&) const = default;
};

struct ItemSkillPair {
  std::string item_id;
  std::string skill_id;
  AlignmentLabel label = AlignmentLabel::Aligned;
  std::optional<MisalignmentTier> tier;
  std::string true_skill_id;
  Provenance provenance;

  bool operator==(const ItemSkillPair&) const = default;
};

struct SkippedTier {
  std::string item_id;
  MisalignmentTier tier;
  std::string reason;

  bool operator==(const SkippedTier&) const = default;
};

struct PairSet {
  std::vector<ItemSkillPair> pairs;
  std::vector<SkippedTier> skipped;
  std::uint64_t seed = 0;

  bool operator==(const PairSet&) const = default;
};

struct AlignedLink {
  std::string item_id;
  std::string skill_id;
};

/// Validated links taken from an item bank's skill_id column.
std::vector<AlignedLink> aligned_links(const ItemBank& bank);

/// Same-grade candidate counts per tier. Throws TrueSkillNotInCatalog.
std::map<MisalignmentTier, size_t> feasible_tiers(const Item& item, std::string_view true_skill_id,
                                                  const SkillCatalog& catalog);

/// Deterministic in (links, catalog, seed); each item draws from its own
/// substream so the result does not depend on input order.
PairSet synthesize(std::span<const AlignedLink> links, const SkillCatalog& catalog, std::uint64_t seed);

/// Columns: item_id, skill_id, label, tier, true_skill_id, provenance, seed.
std::string pairs_to_csv(const PairSet& set);
std::string skipped_to_csv(const PairSet& set);
void write_pairset(const PairSet& set, const std::filesystem::path& pairs_path);
PairSet read_pairset(const std::filesystem::path& pairs_path);

/// Ground-truth-only pair set (every link aligned), for audits of a raw bank.
PairSet ground_truth_pairs(std::span<const AlignedLink> links);

}  // namespace alignaudit
