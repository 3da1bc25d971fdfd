//
// Copyright 2026 The EDDA Toolkit Authors
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
//

#include "edda/error.h"

namespace edda {

std::string_view ErrorName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kMalformedRow: return "MalformedRow";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kTabInText: return "TabInText";
    case ErrorCode::kLineBreakInText: return "LineBreakInText";
    case ErrorCode::kHeaderMismatch: return "HeaderMismatch";
    case ErrorCode::kNonFiniteValue: return "NonFiniteValue";
    case ErrorCode::kDuplicateWord: return "DuplicateWord";
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kOutOfVocabulary: return "OutOfVocabulary";
    case ErrorCode::kEmptyEmbedding: return "EmptyEmbedding";
    case ErrorCode::kMissingLabel: return "MissingLabel";
    case ErrorCode::kNoMatchingToken: return "NoMatchingToken";
    case ErrorCode::kNoCandidate: return "NoCandidate";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kSingleClass: return "SingleClass";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kOverlappingSplits: return "OverlappingSplits";
    case ErrorCode::kUnrepresentableId: return "UnrepresentableId";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
  }
  return "UnknownError";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorName(code)) + ": " + message),
      code_(code) {}

}  // namespace edda
