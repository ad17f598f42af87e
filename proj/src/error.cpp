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

#include "alignaudit/error.hpp"

namespace alignaudit {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidRecord: return "InvalidRecord";
    case ErrorCode::DuplicateSkillId: return "DuplicateSkillId";
    case ErrorCode::DuplicateItemId: return "DuplicateItemId";
    case ErrorCode::InvalidGradeOrSubject: return "InvalidGradeOrSubject";
    case ErrorCode::EmptyStatement: return "EmptyStatement";
    case ErrorCode::EmptyItemText: return "EmptyItemText";
    case ErrorCode::UnknownSkill: return "UnknownSkill";
    case ErrorCode::UnknownItem: return "UnknownItem";
    case ErrorCode::CrossGradeComparison: return "CrossGradeComparison";
    case ErrorCode::TrueSkillNotInCatalog: return "TrueSkillNotInCatalog";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::DigestMismatch: return "DigestMismatch";
    case ErrorCode::MissingExemplars: return "MissingExemplars";
    case ErrorCode::KExceedsCandidates: return "KExceedsCandidates";
    case ErrorCode::MissingSlot: return "MissingSlot";
    case ErrorCode::NoValidIds: return "NoValidIds";
    case ErrorCode::ForeignId: return "ForeignId";
    case ErrorCode::Transport: return "Transport";
    case ErrorCode::RateLimited: return "RateLimited";
    case ErrorCode::Auth: return "Auth";
    case ErrorCode::MalformedResponse: return "MalformedResponse";
    case ErrorCode::ProviderUnavailable: return "ProviderUnavailable";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::EmptyText: return "EmptyText";
    case ErrorCode::EmptyMatrix: return "EmptyMatrix";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

std::optional<ErrorCode> parse_error_code(std::string_view name) {
  for (int c = 0; c <= static_cast<int>(ErrorCode::Io); ++c) {
    if (to_string(static_cast<ErrorCode>(c)) == name) return static_cast<ErrorCode>(c);
  }
  return std::nullopt;
}

bool is_backend_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::Transport:
    case ErrorCode::RateLimited:
    case ErrorCode::Auth:
    case ErrorCode::MalformedResponse:
    case ErrorCode::ProviderUnavailable:
      return true;
    default:
      return false;
  }
}

bool is_transient(ErrorCode code) {
  return code == ErrorCode::Transport || code == ErrorCode::RateLimited;
}

}  // namespace alignaudit
