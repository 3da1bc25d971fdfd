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

#ifndef EDDA_CORPUS_H_
#define EDDA_CORPUS_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace edda {

// Tag assigned to tokens the lexicon does not know.
inline constexpr std::string_view kUnknownTag = "UNK";

// Prefix of metadata lines written by the toolkit. Dataset readers skip them.
inline constexpr std::string_view kMetaPrefix = "#meta ";

// Unicode simple case folding, code point by code point. Invalid UTF-8 bytes
// are copied through unchanged.
std::string FoldCase(std::string_view text);

// True when every code point is a Unicode letter (general category L*).
// The empty string is not alphabetic.
bool IsAlphabetic(std::string_view text);

// True when the text is non-empty and every code point is punctuation
// (general category P*).
bool IsPunctuation(std::string_view text);

class StopwordSet {
 public:
  StopwordSet() = default;
  explicit StopwordSet(const std::vector<std::string>& words);

  // Case-insensitive.
  bool contains(std::string_view word) const;
  size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }

 private:
  std::unordered_set<std::string> words_;
};

struct Token {
  std::string surface;
  std::string lookup_form;
  bool is_stopword = false;
  std::optional<std::string> pos_tag;
  bool is_alphabetic = false;

  bool is_punctuation() const { return IsPunctuation(surface); }

  friend bool operator==(const Token&, const Token&) = default;
};

// Builds a token from a non-empty surface string.
Token MakeToken(std::string surface, const StopwordSet* stopwords = nullptr);

struct Sentence {
  std::vector<Token> tokens;
  std::string raw;

  size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  std::vector<std::string> surfaces() const;

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

// Splits on Unicode whitespace, then splits every leading and trailing
// punctuation code point into a token of its own. Inner punctuation ("e-post",
// "don't") stays inside the word.
Sentence Tokenize(std::string_view text, const StopwordSet* stopwords = nullptr);

// Joins tokens with single spaces; punctuation-only tokens attach to the
// preceding token.
std::string Detokenize(const Sentence& sentence);
std::string Detokenize(const std::vector<Token>& tokens);

struct LabeledRecord {
  std::string id;
  std::string text;
  std::string label;

  friend bool operator==(const LabeledRecord&, const LabeledRecord&) = default;
};

enum class DatasetFormat { kTsv, kJsonl };

// Picks the format from the file extension: ".tsv"/".txt" are TSV,
// ".jsonl"/".json" are JSONL.
std::optional<DatasetFormat> FormatFromPath(const std::filesystem::path& path);

std::vector<LabeledRecord> LoadDataset(const std::filesystem::path& path,
                                       DatasetFormat format);

// TSV has no id column, so ids only survive a TSV round trip when they equal
// the zero-based line index. kStrict refuses to drop other ids; kDrop writes
// them anyway.
enum class TsvIdPolicy { kStrict, kDrop };

struct WriteOptions {
  TsvIdPolicy tsv_ids = TsvIdPolicy::kStrict;
  // Written verbatim as the first line when set; must start with kMetaPrefix.
  std::optional<std::string> meta_line;
};

void WriteDataset(const std::vector<LabeledRecord>& records,
                  const std::filesystem::path& path, DatasetFormat format,
                  const WriteOptions& options = {});

StopwordSet LoadStopwords(const std::filesystem::path& path);

// Reads a whole file; throws IoError.
std::string ReadFile(const std::filesystem::path& path);

// Splits file contents into lines on LF. A final newline does not produce an
// empty trailing line.
std::vector<std::string_view> SplitLines(std::string_view contents);

}  // namespace edda

#endif  // EDDA_CORPUS_H_
