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

#include "hlc/error.hpp"

namespace hlc {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::UnknownKind: return "UnknownKind";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::MixedChannels: return "MixedChannels";
    case ErrorCode::DuplicateExpression: return "DuplicateExpression";
    case ErrorCode::WeightOutOfRange: return "WeightOutOfRange";
    case ErrorCode::EmptyLexicon: return "EmptyLexicon";
    case ErrorCode::EmptyFrame: return "EmptyFrame";
    case ErrorCode::LayoutMismatch: return "LayoutMismatch";
    case ErrorCode::NoPlayerMatch: return "NoPlayerMatch";
    case ErrorCode::NoHoleFound: return "NoHoleFound";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonNegativeRelRequired: return "NonNegativeRelRequired";
    case ErrorCode::EmptyReference: return "EmptyReference";
    case ErrorCode::SpecOutOfBounds: return "SpecOutOfBounds";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::UnknownId: return "UnknownId";
    case ErrorCode::IllegalTransition: return "IllegalTransition";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

std::string Error::describe() const {
  std::string out(error_code_name(code_));
  if (!field_.empty()) out += " (" + field_ + ")";
  out += ": ";
  out += what();
  return out;
}

}  // namespace hlc
