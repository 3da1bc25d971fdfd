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

#ifndef EDDA_ERROR_H_
#define EDDA_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace edda {

enum class ErrorCode {
  kIoError,
  kMalformedRow,
  kDuplicateId,
  kTabInText,
  kLineBreakInText,
  kHeaderMismatch,
  kNonFiniteValue,
  kDuplicateWord,
  kZeroVector,
  kOutOfVocabulary,
  kEmptyEmbedding,
  kMissingLabel,
  kNoMatchingToken,
  kNoCandidate,
  kEmptyDataset,
  kSingleClass,
  kDimensionMismatch,
  kLengthMismatch,
  kOverlappingSplits,
  kUnrepresentableId,
  kInvalidConfig,
};

// Stable name of an error code, e.g. "OutOfVocabulary".
std::string_view ErrorName(ErrorCode code);

// All library failures are reported as Error. what() is prefixed with the
// error name so that messages stay greppable across language boundaries.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

  // True for errors caused by bad caller-supplied configuration rather than
  // bad data.
  bool is_usage_error() const { return code_ == ErrorCode::kInvalidConfig; }

 private:
  ErrorCode code_;
};

}  // namespace edda

#endif  // EDDA_ERROR_H_
