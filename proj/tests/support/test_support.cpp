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

#include "test_support.hpp"

#include <stdlib.h>

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "alignaudit/cli.hpp"

namespace alignaudit::testing {
namespace fs = std::filesystem;

namespace {

constexpr const char* kWords[] = {
    "apple",   "bridge",  "candle",  "dolphin", "engine",  "forest",  "garden",  "harbor",  "island",  "jungle",
    "kettle",  "ladder",  "marble",  "needle",  "orchard", "pepper",  "quartz",  "rabbit",  "saddle",  "timber",
    "umbrella", "violin", "walnut",  "yarrow",  "zephyr",  "anchor",  "basket",  "cactus",  "desert",  "feather",
    "glacier", "hammock", "iceberg", "jasmine", "kayak",   "lantern", "meadow",  "nectar",  "oyster",  "pebble",
    "quiver",  "ribbon",  "saffron", "tundra",  "velvet",  "willow",  "xylem",   "yogurt",  "zinnia",  "acorn",
    "beacon",  "copper",  "dune",    "ember",   "fjord",   "granite", "heron",   "ivory",   "juniper", "kelp",
    "lagoon",  "mango",   "nutmeg",  "obsidian", "prairie", "quail",  "reef",    "sequoia", "thistle", "urchin",
    "vortex",  "wharf",   "yucca",   "zenith",  "alder",   "bramble", "cobalt",  "driftwood", "estuary", "fennel",
    "gorge",   "hazel",   "indigo",  "jetty",   "kiln",    "lichen",  "mesa",    "nimbus",  "osprey",  "pumice",
    "quarry",  "rapids",  "sierra",  "tidepool", "upland", "valley"};

std::string word(size_t i) { return kWords[i % std::size(kWords)]; }

}  // namespace

fs::path source_path(const std::string& relative) { return fs::path(ALIGNAUDIT_SOURCE_DIR) / relative; }

fs::path cli_path() { return fs::path(ALIGNAUDIT_CLI_PATH); }

Skill make_skill(std::string id, Grade grade, Subject subject, std::string domain, std::string name,
                 std::string statement) {
  Skill s;
  s.skill_id = std::move(id);
  s.grade = grade;
  s.subject = subject;
  s.domain_name = std::move(domain);
  s.skill_name = std::move(name);
  s.skill_statement = std::move(statement);
  return s;
}

Item make_item(std::string id, Grade grade, Subject subject, std::string stem, std::string skill_id) {
  Item it;
  it.item_id = std::move(id);
  it.grade = grade;
  it.subject = subject;
  it.stem_text = std::move(stem);
  if (!skill_id.empty()) it.aligned_skill_id = std::move(skill_id);
  return it;
}

SkillCatalog mini_catalog() {
  std::vector<Skill> skills;
  int id = 100;
  size_t w = 0;
  for (Grade g : {Grade::K, Grade::G1}) {
    for (Subject s : kAllSubjects) {
      for (int d = 0; d < 2; ++d) {
        const std::string domain = std::string(to_string(s)) + " domain " + std::to_string(d);
        for (int k = 0; k < 3; ++k, w += 3) {
          skills.push_back(make_skill(std::to_string(id++), g, s, domain, "Work with " + word(w),
                                      "Use " + word(w) + " and " + word(w + 1) + " to reason about " + word(w + 2) + "."));
        }
      }
    }
  }
  return SkillCatalog::from_skills(std::move(skills));
}

ItemBank mini_bank(const SkillCatalog& catalog) {
  std::vector<Item> items;
  int n = 1;
  for (const auto& s : catalog.skills()) {
    char id[16];
    std::snprintf(id, sizeof id, "T%03d", n++);
    items.push_back(make_item(id, s.grade, s.subject, "Explain the " + s.skill_name.substr(10) + " " +
                                                          s.skill_statement.substr(4),
                              s.skill_id));
  }
  return ItemBank::from_items(std::move(items));
}

RandomTaxonomy random_taxonomy(std::mt19937_64& rng) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  std::vector<Skill> skills;
  std::vector<Item> items;
  int id = 1;
  int item_no = 1;
  const int grades = pick(1, 3);
  for (int g = 0; g < grades; ++g) {
    const Grade grade = kAllGrades[g];
    const bool both = pick(0, 3) > 0;
    for (Subject s : kAllSubjects) {
      if (!both && s == Subject::Reading) continue;
      const int domains = pick(1, 3);
      for (int d = 0; d < domains; ++d) {
        const int per = pick(1, 4);
        for (int k = 0; k < per; ++k) {
          const std::string sid = std::to_string(id++);
          skills.push_back(make_skill(sid, grade, s, "D" + std::to_string(d), "name " + sid, "statement " + sid));
          const int n_items = pick(1, 2);
          for (int i = 0; i < n_items; ++i) {
            items.push_back(make_item("I" + std::to_string(item_no++), grade, s, "stem for " + sid, sid));
          }
        }
      }
    }
  }
  RandomTaxonomy t;
  t.catalog = SkillCatalog::from_skills(std::move(skills));
  t.bank = ItemBank::from_items(std::move(items));
  t.links = aligned_links(t.bank);
  return t;
}

TempDir::TempDir() {
  std::string tmpl = (fs::temp_directory_path() / "alignaudit-test-XXXXXX").string();
  if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

CommandResult run_tool(const std::vector<std::string>& args) {
  std::vector<std::string> argv = {"alignaudit"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::ostringstream out;
  std::ostringstream err;
  CommandResult r;
  r.exit_code = run_cli(argv, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

}  // namespace alignaudit::testing
