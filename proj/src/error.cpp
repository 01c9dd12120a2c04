// Copyright 2026 The VKG Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vkg/error.hpp"

namespace vkg {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::UnknownRelation: return "UnknownRelation";
    case ErrorCode::UnknownClass: return "UnknownClass";
    case ErrorCode::UnknownEntity: return "UnknownEntity";
    case ErrorCode::SchemaCycle: return "SchemaCycle";
    case ErrorCode::InvalidTerm: return "InvalidTerm";
    case ErrorCode::MalformedInput: return "MalformedInput";
    case ErrorCode::Io: return "Io";
    case ErrorCode::EmptyVocabulary: return "EmptyVocabulary";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DuplicateToken: return "DuplicateToken";
    case ErrorCode::OutOfVocabulary: return "OutOfVocabulary";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Unlinked: return "Unlinked";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownRule: return "UnknownRule";
    case ErrorCode::UndefinedVariable: return "UndefinedVariable";
    case ErrorCode::DuplicateVariable: return "DuplicateVariable";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::UnboundParam: return "UnboundParam";
    case ErrorCode::RuleSyntaxError: return "RuleSyntaxError";
    case ErrorCode::DuplicateRuleName: return "DuplicateRuleName";
    case ErrorCode::DuplicateDocument: return "DuplicateDocument";
    case ErrorCode::EmptyRelevantSet: return "EmptyRelevantSet";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MissingArtifact: return "MissingArtifact";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

SyntaxError::SyntaxError(ErrorCode code, const std::string& message,
                         std::size_t line, std::size_t column)
    : Error(code, message + " at " + std::to_string(line) + ":" +
                      std::to_string(column)),
      line_(line),
      column_(column) {}

StatementError::StatementError(const Error& cause, std::size_t statement)
    : Error(cause.code(), "statement " + std::to_string(statement) + ": " +
                              cause.what()),
      statement_(statement) {}

}  // namespace vkg
