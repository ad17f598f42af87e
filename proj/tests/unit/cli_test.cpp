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

#include "alignaudit/cli.hpp"

#include <gtest/gtest.h>

#include "alignaudit/table_io.hpp"
#include "test_support.hpp"

namespace alignaudit {
namespace {

using testing::run_tool;

class CliTest : public ::testing::Test {
 protected:
  std::string skills = testing::source_path("data/skills.csv").string();
  std::string items = testing::source_path("data/items.csv").string();
  testing::TempDir dir;

  std::string at(const std::string& name) const { return (dir / name).string(); }

  void make_pairs_and_oracle() {
    ASSERT_EQ(run_tool({"synthesize", "--items", items, "--skills", skills, "--out", at("pairs.csv")}).exit_code, 0);
    ASSERT_EQ(run_tool({"make-oracle", "--items", items, "--skills", skills, "--pairs", at("pairs.csv"), "--out",
                        at("oracle.json")})
                  .exit_code,
              0);
  }

  testing::CommandResult audit(const std::string& out, std::vector<std::string> extra = {}) {
    std::vector<std::string> args = {"audit",   "--skills",  skills, "--items", items, "--pairs", at("pairs.csv"),
                                     "--backend", "mock:" + at("oracle.json"), "--out", at(out)};
    args.insert(args.end(), extra.begin(), extra.end());
    return run_tool(args);
  }
};

TEST(ExitCodes, MapErrorFamilies) {
  EXPECT_EQ(exit_code_for(ErrorCode::InvalidConfig), kExitUsage);
  EXPECT_EQ(exit_code_for(ErrorCode::InvalidRecord), kExitData);
  EXPECT_EQ(exit_code_for(ErrorCode::DigestMismatch), kExitData);
  EXPECT_EQ(exit_code_for(ErrorCode::RateLimited), kExitBackend);
  EXPECT_EQ(exit_code_for(ErrorCode::ProviderUnavailable), kExitBackend);
}

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(run_tool({}).exit_code, kExitUsage);
  EXPECT_EQ(run_tool({"bogus"}).exit_code, kExitUsage);
  EXPECT_EQ(run_tool({"audit", "--items", items}).exit_code, kExitUsage);
  EXPECT_EQ(run_tool({"classify", "--skills", skills, "--items", items, "--k", "0", "--dry-run", "--out", at("x")})
                .exit_code,
            kExitUsage);
  EXPECT_EQ(run_tool({"--help"}).exit_code, kExitOk);
}

TEST_F(CliTest, BadDataExitsTwo) {
  write_file(dir / "broken.csv", "skill_id,grade\n1,K\n");
  const auto r = run_tool({"synthesize", "--items", items, "--skills", at("broken.csv"), "--out", at("p.csv")});
  EXPECT_EQ(r.exit_code, kExitData);
  EXPECT_NE(r.err.find("InvalidRecord"), std::string::npos) << r.err;
}

TEST_F(CliTest, UnreachableBackendExitsThree) {
  make_pairs_and_oracle();
  const auto r = run_tool({"audit", "--skills", skills, "--items", items, "--pairs", at("pairs.csv"), "--backend",
                           "offline", "--out", at("off")});
  EXPECT_EQ(r.exit_code, kExitBackend);
  EXPECT_TRUE(std::filesystem::exists(dir / "off" / "report.json"));  // partial results still land
}

TEST_F(CliTest, SynthesizeIsDeterministic) {
  for (const char* name : {"a.csv", "b.csv"}) {
    ASSERT_EQ(run_tool({"synthesize", "--items", items, "--skills", skills, "--seed", "11", "--out", at(name)}).exit_code,
              0);
  }
  EXPECT_EQ(read_file(dir / "a.csv"), read_file(dir / "b.csv"));
  EXPECT_EQ(read_records(dir / "a.csv").size(), 240u);
  ASSERT_EQ(run_tool({"synthesize", "--items", items, "--skills", skills, "--seed", "12", "--out", at("c.csv")}).exit_code,
            0);
  EXPECT_NE(read_file(dir / "a.csv"), read_file(dir / "c.csv"));
}

TEST_F(CliTest, OracleAuditIsPerfectAndReplays) {
  make_pairs_and_oracle();
  const auto r = audit("run");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  for (const auto& row : read_records(dir / "run" / "summary.csv")) {
    EXPECT_EQ(row.at("accuracy"), "1");
    EXPECT_EQ(row.at("f1"), "1");
  }
  const auto again = audit("run");
  EXPECT_EQ(again.exit_code, kExitUsage);
  EXPECT_NE(again.err.find("--force"), std::string::npos);
  EXPECT_EQ(audit("run", {"--force"}).exit_code, 0);

  const auto rep = run_tool({"replay", at("run/transcript.jsonl"), "--out", at("replayed")});
  ASSERT_EQ(rep.exit_code, 0) << rep.err;
  EXPECT_EQ(read_file(dir / "run" / "report.json"), read_file(dir / "replayed" / "report.json"));
}

TEST_F(CliTest, ReplayRefusesEditedInputs) {
  make_pairs_and_oracle();
  ASSERT_EQ(audit("run").exit_code, 0);
  auto pairs = read_file(dir / "run" / "pairs.csv");
  write_file(dir / "run" / "pairs.csv", pairs + "\n");
  const auto rep = run_tool({"replay", at("run/transcript.jsonl"), "--out", at("replayed")});
  EXPECT_EQ(rep.exit_code, kExitData);
  EXPECT_NE(rep.err.find("DigestMismatch"), std::string::npos) << rep.err;
}

TEST_F(CliTest, DryRunRendersWithoutCalling) {
  make_pairs_and_oracle();
  const auto r = run_tool({"audit", "--skills", skills, "--items", items, "--pairs", at("pairs.csv"), "--dry-run",
                           "--out", at("dry")});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto prompts = read_records(dir / "dry" / "prompts.jsonl");
  EXPECT_EQ(prompts.size(), 240u);
  EXPECT_FALSE(std::filesystem::exists(dir / "dry" / "transcript.jsonl"));
}

TEST_F(CliTest, ReportRecomputesTables) {
  make_pairs_and_oracle();
  ASSERT_EQ(audit("run").exit_code, 0);
  const auto r = run_tool({"report", at("run"), "--out", at("tables")});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(read_file(dir / "run" / "summary.csv"), read_file(dir / "tables" / "summary.csv"));
  EXPECT_EQ(read_file(dir / "run" / "tiers.csv"), read_file(dir / "tables" / "tiers.csv"));
}

TEST_F(CliTest, ClassifyAndEnsembleWithOracle) {
  make_pairs_and_oracle();
  const auto cls = run_tool({"classify", "--skills", skills, "--items", items, "--backend", "mock:" + at("oracle.json"),
                             "--k", "1,3", "--out", at("cls")});
  ASSERT_EQ(cls.exit_code, 0) << cls.err;
  for (const auto& row : read_records(dir / "cls" / "summary.csv")) EXPECT_EQ(row.at("accuracy"), "1");

  const auto ens = run_tool({"ensemble", "--skills", skills, "--items", items, "--pairs", at("pairs.csv"), "--backend",
                             "mock:" + at("oracle.json"), "--repeats", "3", "--out", at("ens")});
  ASSERT_EQ(ens.exit_code, 0) << ens.err;
  EXPECT_EQ(read_records(dir / "ens" / "agreement.csv").size(), 240u);
}

}  // namespace
}  // namespace alignaudit
