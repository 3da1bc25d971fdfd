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

#include "edda/deviation.h"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "edda/error.h"

namespace edda {
namespace {

std::optional<SentenceEmbedding> TryEmbed(const EmbeddingStore& store,
                                          const Sentence& sentence) {
  try {
    return EmbedSentence(store, sentence);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kEmptyEmbedding) throw;
    return std::nullopt;
  }
}

}  // namespace

std::string_view VerdictName(Verdict verdict) {
  return verdict == Verdict::kSimilar ? "similar" : "dissimilar";
}

DeviationVerdict Deviction(const SentenceEmbedding& original,
                           const SentenceEmbedding& augmented, double delta) {
  if (original.vector.size() != augmented.vector.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "embeddings of size " + std::to_string(original.vector.size()) +
                    " and " + std::to_string(augmented.vector.size()));
  }
  DeviationVerdict out;
  // Identical vectors are exactly similar; a rounded self dot product can land
  // a hair below 1.
  if (original.vector == augmented.vector) {
    out.similarity = 1.0;
  } else {
    out.similarity =
        std::clamp(Dot(original.vector, augmented.vector), -1.0, 1.0);
  }
  out.verdict =
      out.similarity >= delta ? Verdict::kSimilar : Verdict::kDissimilar;
  return out;
}

void PrecomputedEmbeddings::Add(std::string id, std::vector<double> vector) {
  if (vector.empty()) {
    throw Error(ErrorCode::kDimensionMismatch, "empty vector for '" + id + "'");
  }
  if (dim_ == 0) dim_ = vector.size();
  if (vector.size() != dim_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "'" + id + "' has " + std::to_string(vector.size()) +
                    " values, expected " + std::to_string(dim_));
  }
  double norm = 0.0;
  for (double v : vector) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kNonFiniteValue, "vector of '" + id + "'");
    }
    norm += v * v;
  }
  norm = std::sqrt(norm);
  if (norm == 0.0 || !std::isfinite(norm)) {
    throw Error(ErrorCode::kZeroVector, "vector of '" + id + "'");
  }
  for (double& v : vector) v /= norm;
  SentenceEmbedding embedding{std::move(vector), 0};
  if (!vectors_.emplace(id, std::move(embedding)).second) {
    throw Error(ErrorCode::kDuplicateId, "'" + id + "'");
  }
}

const SentenceEmbedding* PrecomputedEmbeddings::Find(std::string_view id) const {
  auto it = vectors_.find(std::string(id));
  return it == vectors_.end() ? nullptr : &it->second;
}

PrecomputedEmbeddings LoadPrecomputed(const std::filesystem::path& path) {
  const std::string contents = ReadFile(path);
  PrecomputedEmbeddings out;
  size_t line_number = 0;
  for (std::string_view line : SplitLines(contents)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.starts_with(kMetaPrefix)) continue;
    const std::string where = path.string() + ":" + std::to_string(line_number);
    const size_t tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0) {
      throw Error(ErrorCode::kMalformedRow, where + ": expected id<TAB>vector");
    }
    std::vector<double> values;
    std::string_view rest = line.substr(tab + 1);
    while (!rest.empty()) {
      const size_t space = rest.find(' ');
      const std::string_view field = rest.substr(0, space);
      if (!field.empty()) {
        double value = 0.0;
        auto [ptr, ec] =
            std::from_chars(field.data(), field.data() + field.size(), value);
        if (ec != std::errc() || ptr != field.data() + field.size()) {
          throw Error(ErrorCode::kMalformedRow,
                      where + ": not a number '" + std::string(field) + "'");
        }
        values.push_back(value);
      }
      if (space == std::string_view::npos) break;
      rest.remove_prefix(space + 1);
    }
    out.Add(std::string(line.substr(0, tab)), std::move(values));
  }
  return out;
}

DeviationReport ComputeDeviationReport(
    const std::vector<DeviationPair>& pairs, const EmbeddingStore& store,
    double delta, const PrecomputedEmbeddings* precomputed) {
  DeviationReport report;
  report.delta = delta;
  report.total_pairs = pairs.size();
  for (const DeviationPair& pair : pairs) {
    std::optional<DeviationVerdict> verdict;
    const SentenceEmbedding* a =
        precomputed ? precomputed->Find(pair.original_id) : nullptr;
    const SentenceEmbedding* b =
        precomputed ? precomputed->Find(pair.augmented_id) : nullptr;
    if (a != nullptr && b != nullptr) {
      verdict = Deviction(*a, *b, delta);
    } else {
      auto original = TryEmbed(store, pair.original);
      auto augmented = TryEmbed(store, pair.augmented);
      if (original && augmented) {
        verdict = Deviction(*original, *augmented, delta);
      }
    }
    if (!verdict) {
      ++report.unembeddable;
      ++report.below_threshold;
    } else if (verdict->verdict == Verdict::kDissimilar) {
      ++report.below_threshold;
    }
  }
  report.fraction_below =
      report.total_pairs == 0 ? 0.0
                              : static_cast<double>(report.below_threshold) /
                                    static_cast<double>(report.total_pairs);
  return report;
}

DeviationReport ComputeDeviationReport(
    const std::vector<std::pair<Sentence, Sentence>>& pairs,
    const EmbeddingStore& store, double delta) {
  std::vector<DeviationPair> with_ids;
  with_ids.reserve(pairs.size());
  for (const auto& [original, augmented] : pairs) {
    with_ids.push_back({"", original, "", augmented});
  }
  return ComputeDeviationReport(with_ids, store, delta);
}

}  // namespace edda
