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

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace alignaudit {

enum class ErrorCode {
  // input validation
  InvalidRecord,
  DuplicateSkillId,
  DuplicateItemId,
  InvalidGradeOrSubject,
  EmptyStatement,
  EmptyItemText,
  UnknownSkill,
  UnknownItem,
  CrossGradeComparison,
  TrueSkillNotInCatalog,
  InvalidConfig,
  DigestMismatch,
  // prompts and parsing
  MissingExemplars,
  KExceedsCandidates,
  MissingSlot,
  NoValidIds,
  ForeignId,
  // backends
  Transport,
  RateLimited,
  Auth,
  MalformedResponse,
  ProviderUnavailable,
  // numerics
  DimensionMismatch,
  ZeroVector,
  EmptyText,
  EmptyMatrix,
  // files
  Io,
};

std::string_view to_string(ErrorCode code);
std::optional<ErrorCode> parse_error_code(std::string_view name);

/// True for failures raised by a chat or embedding backend.
bool is_backend_error(ErrorCode code);

/// True for failures a retry may fix (network trouble, throttling).
bool is_transient(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace alignaudit
