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

#include "alignaudit/table_io.hpp"

#include <sstream>

#include <gtest/gtest.h>

#include "alignaudit/error.hpp"
#include "test_support.hpp"

namespace alignaudit {
namespace {

TEST(ParseDelimited, QuotedFieldsAndCrlf) {
  auto rows = parse_delimited("id,text\r\n1,\"a, \"\"b\"\"\nc\"\r\n2,plain\r\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].at("text"), "a, \"b\"\nc");
  EXPECT_EQ(rows[1].at("id"), "2");
  EXPECT_EQ(rows[1].at("text"), "plain");
}

TEST(ParseDelimited, ByteOrderMarkAndBlankLines) {
  auto rows = parse_delimited("\xEF\xBB\xBFid,x\n\n1,2\n\n");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].at("id"), "1");
}

TEST(ParseDelimited, ShortRowsPadAndLongRowsFail) {
  auto rows = parse_delimited("a,b,c\n1\n");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].at("c"), "");
  try {
    parse_delimited("a,b\n1,2,3\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidRecord);
  }
}

TEST(ParseDelimited, UnterminatedQuoteFails) {
  EXPECT_THROW(parse_delimited("a\n\"open\n"), Error);
}

TEST(ParseDelimited, TabSeparated) {
  auto rows = parse_delimited("a\tb\nx,y\tz\n", '\t');
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].at("a"), "x,y");
}

TEST(CsvWriter, RoundTripsThroughParser) {
  const std::vector<std::string> tricky = {"plain", "with,comma", "with \"quotes\"", "multi\nline", ""};
  std::ostringstream out;
  CsvWriter w(out);
  w.row({"a", "b", "c", "d", "e"});
  w.row(tricky);
  auto rows = parse_delimited(out.str());
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].at("a"), tricky[0]);
  EXPECT_EQ(rows[0].at("b"), tricky[1]);
  EXPECT_EQ(rows[0].at("c"), tricky[2]);
  EXPECT_EQ(rows[0].at("d"), tricky[3]);
  EXPECT_EQ(rows[0].at("e"), tricky[4]);
}

TEST(ParseJsonLines, StringifiesScalars) {
  auto rows = parse_json_lines("{\"id\":\"x\",\"n\":3,\"z\":null}\n\n{\"id\":\"y\"}\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].at("n"), "3");
  EXPECT_EQ(rows[0].at("z"), "");
  EXPECT_EQ(rows[1].at("id"), "y");
  EXPECT_THROW(parse_json_lines("[1,2]\n"), Error);
  EXPECT_THROW(parse_json_lines("{broken\n"), Error);
}

TEST(ReadRecords, DispatchesOnExtension) {
  testing::TempDir dir;
  write_file(dir / "t.tsv", "a\tb\n1\t2\n");
  write_file(dir / "t.jsonl", "{\"a\":\"1\"}\n");
  write_file(dir / "t.csv", "a,b\n1,2\n");
  EXPECT_EQ(read_records(dir / "t.tsv")[0].at("b"), "2");
  EXPECT_EQ(read_records(dir / "t.jsonl")[0].at("a"), "1");
  EXPECT_EQ(read_records(dir / "t.csv")[0].at("b"), "2");
  try {
    read_records(dir / "missing.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Io);
  }
}

TEST(Sha256, KnownVectors) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Trim, StripsWhitespace) {
  EXPECT_EQ(trim("  a b \t\n"), "a b");
  EXPECT_EQ(trim(" \n "), "");
}

TEST(ErrorCodes, NamesRoundTrip) {
  for (int c = 0; c <= static_cast<int>(ErrorCode::Io); ++c) {
    const auto code = static_cast<ErrorCode>(c);
    EXPECT_EQ(parse_error_code(to_string(code)), code);
  }
  EXPECT_FALSE(parse_error_code("NoSuchCode"));
  EXPECT_TRUE(is_transient(ErrorCode::RateLimited));
  EXPECT_TRUE(is_transient(ErrorCode::Transport));
  EXPECT_FALSE(is_transient(ErrorCode::Auth));
  EXPECT_TRUE(is_backend_error(ErrorCode::Auth));
  EXPECT_FALSE(is_backend_error(ErrorCode::InvalidRecord));
  Error e(ErrorCode::Auth, "bad key");
  EXPECT_EQ(e.detail(), "bad key");
  EXPECT_EQ(std::string(e.what()), "Auth: bad key");
}

}  // namespace
}  // namespace alignaudit
