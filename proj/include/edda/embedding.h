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

#ifndef EDDA_EMBEDDING_H_
#define EDDA_EMBEDDING_H_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "edda/corpus.h"

namespace edda {

struct NeighborResult {
  std::string word;
  double score = 0.0;

  friend bool operator==(const NeighborResult&, const NeighborResult&) = default;
};

struct SentenceEmbedding {
  std::vector<double> vector;
  size_t covered_tokens = 0;
};

// Immutable word -> unit vector table. Rows are normalized on construction so
// cosine similarity is a plain dot product. All const members are safe to call
// concurrently.
class EmbeddingStore {
 public:
  // Validates and normalizes. rows.size() must equal words.size() and every
  // row must have `dim` finite, not-all-zero entries.
  static EmbeddingStore FromRows(std::vector<std::string> words,
                                 const std::vector<std::vector<double>>& rows);

  size_t dim() const { return dim_; }
  size_t size() const { return words_.size(); }

  // Words in file order; the row index of words()[i] is i.
  const std::vector<std::string>& words() const { return words_; }

  std::optional<size_t> Find(std::string_view word) const;
  // Exact surface first, then the case-folded form.
  std::optional<size_t> Resolve(const Token& token) const;
  bool Contains(std::string_view word) const { return Find(word).has_value(); }

  std::span<const double> Row(size_t index) const {
    return {matrix_.data() + index * dim_, dim_};
  }
  // Throws OutOfVocabulary.
  std::span<const double> Row(std::string_view word) const;

  const std::string& FoldedWord(size_t index) const { return folded_[index]; }

 private:
  EmbeddingStore() = default;

  size_t dim_ = 0;
  std::vector<std::string> words_;
  std::vector<std::string> folded_;
  std::unordered_map<std::string, size_t> index_;
  std::vector<double> matrix_;
};

// Reads the word2vec text format: a "<count> <dim>" header followed by one
// "<word> <f1> ... <f_dim>" line per word.
EmbeddingStore LoadEmbeddings(const std::filesystem::path& path);

double Dot(std::span<const double> a, std::span<const double> b);

// Throws OutOfVocabulary naming the missing word.
double Cosine(const EmbeddingStore& store, std::string_view w1,
              std::string_view w2);

// Exact brute-force top-k by cosine. The query word, every word that case-folds
// to the same form as the query, and every word in `exclude` are skipped.
// Results are ordered by descending score, ties by ascending word.
std::vector<NeighborResult> NearestNeighbors(
    const EmbeddingStore& store, std::string_view word, size_t k,
    const std::unordered_set<std::string>& exclude = {});

// Mean of the unit rows of all in-vocabulary tokens, re-normalized. The sum is
// taken over distinct rows in row order, so the result does not depend on
// token order. Throws EmptyEmbedding when no token is covered.
SentenceEmbedding EmbedSentence(const EmbeddingStore& store,
                                const Sentence& sentence);

}  // namespace edda

#endif  // EDDA_EMBEDDING_H_
