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

#include "edda/corpus.h"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "edda/error.h"
#include "json.hpp"
#include "utf8.h"

namespace edda {
namespace {

using internal::CodePoint;
using internal::Decode;

bool IsPunctCodePoint(UChar32 c) { return c >= 0 && u_ispunct(c); }
bool IsSpaceCodePoint(UChar32 c) { return c >= 0 && u_isUWhiteSpace(c); }

[[noreturn]] void ThrowRow(const std::filesystem::path& path, size_t line,
                           const std::string& what) {
  throw Error(ErrorCode::kMalformedRow,
              path.string() + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

std::string FoldCase(std::string_view text) {
  return internal::MapCodePoints(
      text, [](UChar32 c) { return u_foldCase(c, U_FOLD_CASE_DEFAULT); });
}

bool IsAlphabetic(std::string_view text) {
  if (text.empty()) return false;
  for (const CodePoint& cp : Decode(text)) {
    if (cp.value < 0 || !u_isalpha(cp.value)) return false;
  }
  return true;
}

bool IsPunctuation(std::string_view text) {
  if (text.empty()) return false;
  for (const CodePoint& cp : Decode(text)) {
    if (!IsPunctCodePoint(cp.value)) return false;
  }
  return true;
}

StopwordSet::StopwordSet(const std::vector<std::string>& words) {
  for (const std::string& word : words) words_.insert(FoldCase(word));
}

bool StopwordSet::contains(std::string_view word) const {
  return words_.contains(FoldCase(word));
}

Token MakeToken(std::string surface, const StopwordSet* stopwords) {
  Token token;
  token.lookup_form = FoldCase(surface);
  token.is_alphabetic = IsAlphabetic(surface);
  token.is_stopword = stopwords != nullptr && stopwords->contains(surface);
  token.surface = std::move(surface);
  return token;
}

std::vector<std::string> Sentence::surfaces() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const Token& token : tokens) out.push_back(token.surface);
  return out;
}

Sentence Tokenize(std::string_view text, const StopwordSet* stopwords) {
  Sentence sentence;
  sentence.raw = std::string(text);
  const std::vector<CodePoint> cps = Decode(text);

  auto emit = [&](size_t begin, size_t end) {
    sentence.tokens.push_back(
        MakeToken(std::string(text.substr(begin, end - begin)), stopwords));
  };

  size_t i = 0;
  while (i < cps.size()) {
    if (IsSpaceCodePoint(cps[i].value)) {
      ++i;
      continue;
    }
    size_t run_end = i;
    while (run_end < cps.size() && !IsSpaceCodePoint(cps[run_end].value)) {
      ++run_end;
    }
    size_t lead = i;
    while (lead < run_end && IsPunctCodePoint(cps[lead].value)) ++lead;
    size_t trail = run_end;
    while (trail > lead && IsPunctCodePoint(cps[trail - 1].value)) --trail;

    for (size_t k = i; k < lead; ++k) emit(cps[k].begin, cps[k].end);
    if (lead < trail) emit(cps[lead].begin, cps[trail - 1].end);
    for (size_t k = trail; k < run_end; ++k) emit(cps[k].begin, cps[k].end);
    i = run_end;
  }
  return sentence;
}

std::string Detokenize(const std::vector<Token>& tokens) {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0 && !tokens[i].is_punctuation()) out.push_back(' ');
    out += tokens[i].surface;
  }
  return out;
}

std::string Detokenize(const Sentence& sentence) {
  return Detokenize(sentence.tokens);
}

std::optional<DatasetFormat> FormatFromPath(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".tsv" || ext == ".txt") return DatasetFormat::kTsv;
  if (ext == ".jsonl" || ext == ".json") return DatasetFormat::kJsonl;
  return std::nullopt;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  return std::move(buffer).str();
}

std::vector<std::string_view> SplitLines(std::string_view contents) {
  std::vector<std::string_view> lines;
  size_t start = 0;
  while (start < contents.size()) {
    size_t end = contents.find('\n', start);
    if (end == std::string_view::npos) end = contents.size();
    lines.push_back(contents.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

std::vector<LabeledRecord> LoadDataset(const std::filesystem::path& path,
                                       DatasetFormat format) {
  const std::string contents = ReadFile(path);
  std::vector<LabeledRecord> records;
  std::unordered_set<std::string> seen;
  size_t line_number = 0;
  for (std::string_view line : SplitLines(contents)) {
    ++line_number;
    if (line.starts_with(kMetaPrefix)) continue;
    LabeledRecord record;
    if (format == DatasetFormat::kTsv) {
      const size_t tab = line.find('\t');
      if (tab == std::string_view::npos) {
        ThrowRow(path, line_number, "expected text<TAB>label");
      }
      if (line.find('\t', tab + 1) != std::string_view::npos) {
        ThrowRow(path, line_number, "more than two tab-separated fields");
      }
      record.id = std::to_string(records.size());
      record.text = std::string(line.substr(0, tab));
      record.label = std::string(line.substr(tab + 1));
    } else {
      nlohmann::json object;
      try {
        object = nlohmann::json::parse(line);
      } catch (const nlohmann::json::parse_error& e) {
        ThrowRow(path, line_number, e.what());
      }
      if (!object.is_object()) ThrowRow(path, line_number, "not a JSON object");
      auto string_field = [&](const char* key, bool required) {
        auto it = object.find(key);
        if (it == object.end()) {
          if (required) {
            ThrowRow(path, line_number, std::string("missing field ") + key);
          }
          return std::optional<std::string>();
        }
        if (!it->is_string()) {
          ThrowRow(path, line_number,
                   std::string("field ") + key + " is not a string");
        }
        return std::optional<std::string>(it->get<std::string>());
      };
      record.id = string_field("id", false).value_or(
          std::to_string(records.size()));
      record.text = *string_field("text", true);
      record.label = *string_field("label", true);
    }
    if (record.label.empty()) ThrowRow(path, line_number, "empty label");
    if (!seen.insert(record.id).second) {
      throw Error(ErrorCode::kDuplicateId,
                  path.string() + ":" + std::to_string(line_number) +
                      ": duplicate id '" + record.id + "'");
    }
    records.push_back(std::move(record));
  }
  return records;
}

void WriteDataset(const std::vector<LabeledRecord>& records,
                  const std::filesystem::path& path, DatasetFormat format,
                  const WriteOptions& options) {
  std::unordered_set<std::string_view> seen;
  std::string out;
  if (options.meta_line) {
    if (!options.meta_line->starts_with(kMetaPrefix) ||
        options.meta_line->find('\n') != std::string::npos) {
      throw Error(ErrorCode::kInvalidConfig, "malformed meta line");
    }
    out += *options.meta_line;
    out += '\n';
  }
  for (size_t i = 0; i < records.size(); ++i) {
    const LabeledRecord& record = records[i];
    const std::string where = "record '" + record.id + "'";
    if (record.label.empty()) {
      throw Error(ErrorCode::kMalformedRow, where + " has an empty label");
    }
    if (!seen.insert(record.id).second) {
      throw Error(ErrorCode::kDuplicateId, where + " appears twice");
    }
    if (format == DatasetFormat::kTsv) {
      if (record.text.find('\t') != std::string::npos ||
          record.label.find('\t') != std::string::npos) {
        throw Error(ErrorCode::kTabInText, where + " contains a tab");
      }
      if (record.text.find('\n') != std::string::npos ||
          record.label.find('\n') != std::string::npos) {
        throw Error(ErrorCode::kLineBreakInText, where + " contains a newline");
      }
      if (record.text.starts_with(kMetaPrefix)) {
        throw Error(ErrorCode::kMalformedRow,
                    where + " text would be read back as a metadata line");
      }
      if (options.tsv_ids == TsvIdPolicy::kStrict &&
          record.id != std::to_string(i)) {
        throw Error(ErrorCode::kUnrepresentableId,
                    where + " cannot be stored in TSV at line index " +
                        std::to_string(i));
      }
      out += record.text;
      out += '\t';
      out += record.label;
    } else {
      nlohmann::ordered_json object;
      object["id"] = record.id;
      object["text"] = record.text;
      object["label"] = record.label;
      try {
        out += object.dump();
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::kMalformedRow, where + ": " + e.what());
      }
    }
    out += '\n';
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  file << out;
  file.close();
  if (!file) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
}

StopwordSet LoadStopwords(const std::filesystem::path& path) {
  const std::string contents = ReadFile(path);
  std::vector<std::string> words;
  for (std::string_view line : SplitLines(contents)) {
    const size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;
    const size_t last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    if (line.starts_with('#')) continue;
    words.emplace_back(line);
  }
  return StopwordSet(words);
}

}  // namespace edda
