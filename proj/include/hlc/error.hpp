/*
 * Copyright 2026 The Highlight Curator Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hlc {

// Machine-readable error classes shared by every module. The names are the
// wire values used in service error bodies and CLI messages.
enum class ErrorCode {
  MalformedRecord,
  UnknownKind,
  InvariantViolation,
  MixedChannels,
  DuplicateExpression,
  WeightOutOfRange,
  EmptyLexicon,
  EmptyFrame,
  LayoutMismatch,
  NoPlayerMatch,
  NoHoleFound,
  TooFewPoints,
  DimensionMismatch,
  NonNegativeRelRequired,
  EmptyReference,
  SpecOutOfBounds,
  ConfigInvalid,
  UnknownId,
  IllegalTransition,
  IoError,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string field, const std::string& message)
      : std::runtime_error(message), code_(code), field_(std::move(field)) {}

  ErrorCode code() const { return code_; }
  // Offending field or input element; empty when the error is not tied to one.
  const std::string& field() const { return field_; }

  // "<Code> (<field>): <message>"
  std::string describe() const;

 private:
  ErrorCode code_;
  std::string field_;
};

}  // namespace hlc
