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

#ifndef EDDA_DEVIATION_H_
#define EDDA_DEVIATION_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "edda/corpus.h"
#include "edda/embedding.h"

namespace edda {

inline constexpr double kDefaultDelta = 0.9;

enum class Verdict { kSimilar, kDissimilar };

std::string_view VerdictName(Verdict verdict);

struct DeviationVerdict {
  double similarity = 0.0;
  Verdict verdict = Verdict::kDissimilar;
};

// Cosine of two unit embeddings; "similar" iff similarity >= delta.
DeviationVerdict Deviction(const SentenceEmbedding& original,
                           const SentenceEmbedding& augmented, double delta);

struct DeviationReport {
  size_t total_pairs = 0;
  size_t below_threshold = 0;
  // Pairs where either side had no usable embedding. Included in
  // below_threshold.
  size_t unembeddable = 0;
  double fraction_below = 0.0;
  double delta = kDefaultDelta;
};

// Sentence vectors supplied by an external encoder, keyed by sentence id.
// File format: "id<TAB>f1 f2 ... fD" per line. Vectors are normalized on load.
class PrecomputedEmbeddings {
 public:
  PrecomputedEmbeddings() = default;
  // Throws DimensionMismatch, ZeroVector, NonFiniteValue, DuplicateId.
  void Add(std::string id, std::vector<double> vector);

  const SentenceEmbedding* Find(std::string_view id) const;
  size_t dim() const { return dim_; }
  size_t size() const { return vectors_.size(); }

 private:
  size_t dim_ = 0;
  std::unordered_map<std::string, SentenceEmbedding> vectors_;
};

PrecomputedEmbeddings LoadPrecomputed(const std::filesystem::path& path);

struct DeviationPair {
  std::string original_id;
  Sentence original;
  std::string augmented_id;
  Sentence augmented;
};

// Embeds both sides and counts pairs below delta. When `precomputed` holds
// vectors for both ids of a pair they replace the pooled word embeddings.
DeviationReport ComputeDeviationReport(
    const std::vector<DeviationPair>& pairs, const EmbeddingStore& store,
    double delta = kDefaultDelta,
    const PrecomputedEmbeddings* precomputed = nullptr);

// Convenience overload without ids.
DeviationReport ComputeDeviationReport(
    const std::vector<std::pair<Sentence, Sentence>>& pairs,
    const EmbeddingStore& store, double delta = kDefaultDelta);

}  // namespace edda

#endif  // EDDA_DEVIATION_H_
