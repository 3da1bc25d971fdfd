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

#include "edda/embedding.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>

#include "edda/error.h"

namespace edda {
namespace {

std::vector<std::string_view> SplitSpaces(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t start = 0;
  while (start <= line.size()) {
    size_t end = line.find(' ', start);
    if (end == std::string_view::npos) end = line.size();
    fields.push_back(line.substr(start, end - start));
    start = end + 1;
  }
  return fields;
}

bool ParseCount(std::string_view field, size_t& out) {
  if (field.empty()) return false;
  for (char c : field) {
    if (c < '0' || c > '9') return false;
  }
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
  return ec == std::errc() && ptr == field.data() + field.size();
}

double ParseValue(std::string_view field, const std::string& where) {
  double value = 0.0;
  auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec == std::errc::result_out_of_range) {
    // from_chars reports both overflow and underflow here.
    value = std::strtod(std::string(field).c_str(), nullptr);
  } else if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(ErrorCode::kMalformedRow,
                where + ": not a number '" + std::string(field) + "'");
  }
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::kNonFiniteValue,
                where + ": non-finite value '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

EmbeddingStore EmbeddingStore::FromRows(
    std::vector<std::string> words,
    const std::vector<std::vector<double>>& rows) {
  if (words.size() != rows.size()) {
    throw Error(ErrorCode::kHeaderMismatch,
                std::to_string(words.size()) + " words but " +
                    std::to_string(rows.size()) + " rows");
  }
  EmbeddingStore store;
  store.dim_ = rows.empty() ? 0 : rows.front().size();
  if (!rows.empty() && store.dim_ == 0) {
    throw Error(ErrorCode::kHeaderMismatch, "zero-dimensional rows");
  }
  store.matrix_.reserve(rows.size() * store.dim_);
  store.index_.reserve(words.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    const std::vector<double>& row = rows[i];
    if (row.size() != store.dim_) {
      throw Error(ErrorCode::kHeaderMismatch,
                  "row for '" + words[i] + "' has " +
                      std::to_string(row.size()) + " values, expected " +
                      std::to_string(store.dim_));
    }
    double norm = 0.0;
    for (double v : row) {
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kNonFiniteValue, "row for '" + words[i] + "'");
      }
      norm += v * v;
    }
    norm = std::sqrt(norm);
    if (norm == 0.0 || !std::isfinite(norm)) {
      throw Error(ErrorCode::kZeroVector,
                  "cannot normalize the row for '" + words[i] + "'");
    }
    for (double v : row) store.matrix_.push_back(v / norm);
    if (!store.index_.emplace(words[i], i).second) {
      throw Error(ErrorCode::kDuplicateWord, "'" + words[i] + "'");
    }
    store.folded_.push_back(FoldCase(words[i]));
  }
  store.words_ = std::move(words);
  return store;
}

std::optional<size_t> EmbeddingStore::Find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<size_t> EmbeddingStore::Resolve(const Token& token) const {
  if (auto row = Find(token.surface)) return row;
  return Find(token.lookup_form);
}

std::span<const double> EmbeddingStore::Row(std::string_view word) const {
  auto row = Find(word);
  if (!row) {
    throw Error(ErrorCode::kOutOfVocabulary, "'" + std::string(word) + "'");
  }
  return Row(*row);
}

namespace {

// word2vec's own writer leaves a trailing space on every row.
std::string_view TrimRowEnd(std::string_view line) {
  while (!line.empty() && (line.back() == ' ' || line.back() == '\r')) {
    line.remove_suffix(1);
  }
  return line;
}

}  // namespace

EmbeddingStore LoadEmbeddings(const std::filesystem::path& path) {
  const std::string contents = ReadFile(path);
  const std::vector<std::string_view> lines = SplitLines(contents);
  if (lines.empty()) {
    throw Error(ErrorCode::kHeaderMismatch, path.string() + ": empty file");
  }
  const std::vector<std::string_view> header = SplitSpaces(TrimRowEnd(lines[0]));
  size_t declared_count = 0;
  size_t declared_dim = 0;
  if (header.size() != 2 || !ParseCount(header[0], declared_count) ||
      !ParseCount(header[1], declared_dim) || declared_dim == 0) {
    throw Error(ErrorCode::kHeaderMismatch,
                path.string() + ":1: expected '<vocab_count> <dim>'");
  }

  std::vector<std::string> words;
  std::vector<std::vector<double>> rows;
  words.reserve(declared_count);
  rows.reserve(declared_count);
  for (size_t n = 1; n < lines.size(); ++n) {
    const std::string_view line = TrimRowEnd(lines[n]);
    if (line.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(n + 1);
    const std::vector<std::string_view> fields = SplitSpaces(line);
    if (fields.size() != declared_dim + 1) {
      throw Error(ErrorCode::kHeaderMismatch,
                  where + ": " + std::to_string(fields.size() - 1) +
                      " values, header declares dim " +
                      std::to_string(declared_dim));
    }
    if (fields[0].empty()) {
      throw Error(ErrorCode::kMalformedRow, where + ": empty word");
    }
    std::vector<double> row(declared_dim);
    for (size_t d = 0; d < declared_dim; ++d) {
      row[d] = ParseValue(fields[d + 1], where);
    }
    words.emplace_back(fields[0]);
    rows.push_back(std::move(row));
  }
  if (words.size() != declared_count) {
    throw Error(ErrorCode::kHeaderMismatch,
                path.string() + ": header declares " +
                    std::to_string(declared_count) + " words, found " +
                    std::to_string(words.size()));
  }
  if (words.empty()) {
    throw Error(ErrorCode::kHeaderMismatch, path.string() + ": no vectors");
  }
  return EmbeddingStore::FromRows(std::move(words), rows);
}

double Dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double Cosine(const EmbeddingStore& store, std::string_view w1,
              std::string_view w2) {
  return Dot(store.Row(w1), store.Row(w2));
}

std::vector<NeighborResult> NearestNeighbors(
    const EmbeddingStore& store, std::string_view word, size_t k,
    const std::unordered_set<std::string>& exclude) {
  const auto query = store.Find(word);
  if (!query) {
    throw Error(ErrorCode::kOutOfVocabulary, "'" + std::string(word) + "'");
  }
  if (k == 0) throw Error(ErrorCode::kInvalidConfig, "k must be at least 1");
  const std::span<const double> q = store.Row(*query);
  const std::string& query_folded = store.FoldedWord(*query);

  struct Scored {
    size_t row;
    double score;
  };
  std::vector<Scored> scored;
  scored.reserve(store.size());
  for (size_t i = 0; i < store.size(); ++i) {
    if (store.FoldedWord(i) == query_folded) continue;
    if (!exclude.empty() && exclude.contains(store.words()[i])) continue;
    scored.push_back({i, Dot(q, store.Row(i))});
  }
  const auto& words = store.words();
  auto better = [&](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    return words[a.row] < words[b.row];
  };
  const size_t n = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + n, scored.end(), better);

  std::vector<NeighborResult> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    out.push_back({words[scored[i].row], scored[i].score});
  }
  return out;
}

SentenceEmbedding EmbedSentence(const EmbeddingStore& store,
                                const Sentence& sentence) {
  std::map<size_t, size_t> counts;
  size_t covered = 0;
  for (const Token& token : sentence.tokens) {
    if (auto row = store.Resolve(token)) {
      ++counts[*row];
      ++covered;
    }
  }
  if (covered == 0) {
    throw Error(ErrorCode::kEmptyEmbedding,
                "no in-vocabulary token in '" + sentence.raw + "'");
  }

  SentenceEmbedding embedding;
  embedding.covered_tokens = covered;
  if (counts.size() == 1) {
    const auto row = store.Row(counts.begin()->first);
    embedding.vector.assign(row.begin(), row.end());
    return embedding;
  }
  std::vector<double> sum(store.dim(), 0.0);
  for (const auto& [row_index, count] : counts) {
    const auto row = store.Row(row_index);
    const double weight = static_cast<double>(count);
    for (size_t d = 0; d < sum.size(); ++d) sum[d] += weight * row[d];
  }
  const double norm = std::sqrt(Dot(sum, sum));
  if (norm == 0.0 || !std::isfinite(norm)) {
    throw Error(ErrorCode::kEmptyEmbedding,
                "pooled vector of '" + sentence.raw + "' has zero norm");
  }
  for (double& v : sum) v /= norm;
  embedding.vector = std::move(sum);
  return embedding;
}

}  // namespace edda
