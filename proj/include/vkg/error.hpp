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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vkg {

// Every failure the library reports to callers carries one of these codes.
// Codes are grouped by the module that raises them.
enum class ErrorCode {
  // kg
  UnknownRelation,
  UnknownClass,
  UnknownEntity,
  SchemaCycle,
  InvalidTerm,
  // file parsing shared by every loader
  MalformedInput,
  Io,
  // vec
  EmptyVocabulary,
  MalformedHeader,
  DimensionMismatch,
  DuplicateToken,
  OutOfVocabulary,
  ZeroVector,
  InvalidConfig,
  // link
  Unlinked,
  // query
  SyntaxError,
  UnknownRule,
  UndefinedVariable,
  DuplicateVariable,
  ArityMismatch,
  // rules
  UnboundParam,
  RuleSyntaxError,
  DuplicateRuleName,
  // ingest
  DuplicateDocument,
  // eval
  EmptyRelevantSet,
  InvalidArgument,
  // cli
  MissingArtifact,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the query and rule parsers; positions are 1-based.
class SyntaxError : public Error {
 public:
  SyntaxError(ErrorCode code, const std::string& message, std::size_t line,
              std::size_t column);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// A subquery failure, annotated with the index of the statement that failed.
class StatementError : public Error {
 public:
  StatementError(const Error& cause, std::size_t statement);

  std::size_t statement() const noexcept { return statement_; }

 private:
  std::size_t statement_;
};

}  // namespace vkg
