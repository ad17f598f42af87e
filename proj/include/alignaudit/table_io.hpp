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

// Flat-file records: RFC 4180 CSV, TSV and JSON-lines, all UTF-8.

#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace alignaudit {

/// One row keyed by column name.
using Record = std::map<std::string, std::string, std::less<>>;

/// Parses delimiter-separated text with a header row. Quoted fields may
/// contain the delimiter, doubled quotes and newlines.
std::vector<Record> parse_delimited(std::string_view text, char delimiter = ',');

/// Parses one JSON object per line; scalar values are stringified.
std::vector<Record> parse_json_lines(std::string_view text);

/// Reads a record file, picking the format from the extension
/// (.tsv, .jsonl/.ndjson, anything else is CSV).
std::vector<Record> read_records(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

/// Quotes a field only when it needs it.
std::string csv_escape(std::string_view field);

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void row(const std::vector<std::string>& fields);

 private:
  std::ostream& out_;
};

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view bytes);
std::string file_sha256(const std::filesystem::path& path);

std::string_view trim(std::string_view s);

}  // namespace alignaudit
