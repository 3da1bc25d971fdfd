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

#include "edda/tagger.h"

#include <unordered_set>

#include "edda/error.h"
#include "utf8.h"

namespace edda {
namespace {

std::string UpperCase(std::string_view text) {
  return internal::MapCodePoints(text, [](UChar32 c) { return u_toupper(c); });
}

std::string_view Trim(std::string_view s) {
  const size_t first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const size_t last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Parses "# key = value"; returns false for other comment lines.
bool ParseComment(std::string_view line, std::string_view key,
                  std::string& value) {
  std::string_view body = Trim(line.substr(1));
  if (!body.starts_with(key)) return false;
  body = Trim(body.substr(key.size()));
  if (!body.starts_with('=')) return false;
  value = std::string(Trim(body.substr(1)));
  return true;
}

}  // namespace

PosLexicon::PosLexicon(
    const std::vector<std::pair<std::string, std::string>>& entries) {
  for (const auto& [word, tag] : entries) {
    std::string upper = UpperCase(tag);
    tagset_.insert(upper);
    entries_.try_emplace(FoldCase(word), std::move(upper));
  }
}

std::optional<std::string> PosLexicon::Lookup(std::string_view word) const {
  auto it = entries_.find(FoldCase(word));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

PosLexicon LoadLexicon(const std::filesystem::path& path) {
  const std::string contents = ReadFile(path);
  std::vector<std::pair<std::string, std::string>> entries;
  size_t line_number = 0;
  for (std::string_view line : SplitLines(contents)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (Trim(line).empty()) continue;
    const size_t tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0 || tab + 1 == line.size() ||
        line.find('\t', tab + 1) != std::string_view::npos) {
      throw Error(ErrorCode::kMalformedRow,
                  path.string() + ":" + std::to_string(line_number) +
                      ": expected word<TAB>tag");
    }
    entries.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  return PosLexicon(entries);
}

Sentence TagSentence(const Sentence& sentence, const PosLexicon& lexicon) {
  Sentence tagged = sentence;
  for (Token& token : tagged.tokens) {
    token.pos_tag = lexicon.Lookup(token.lookup_form)
                        .value_or(std::string(kUnknownTag));
  }
  return tagged;
}

std::vector<TaggedRecord> ParsePretagged(const std::filesystem::path& path,
                                         const StopwordSet* stopwords) {
  const std::string contents = ReadFile(path);
  std::vector<TaggedRecord> records;
  std::unordered_set<std::string> seen_ids;

  std::optional<std::string> label;
  std::optional<std::string> id;
  std::vector<Token> tokens;
  size_t block_start = 0;
  size_t line_number = 0;

  auto location = [&](size_t line) {
    return path.string() + ":" + std::to_string(line);
  };
  auto flush = [&] {
    if (tokens.empty()) {
      if (label || id) {
        throw Error(ErrorCode::kMalformedRow,
                    location(block_start) + ": sentence block has no tokens");
      }
      return;
    }
    if (!label) {
      throw Error(ErrorCode::kMissingLabel,
                  location(block_start) + ": no '# label = X' line");
    }
    TaggedRecord record;
    record.id = id.value_or(std::to_string(records.size()));
    if (!seen_ids.insert(record.id).second) {
      throw Error(ErrorCode::kDuplicateId, location(block_start) + ": '" +
                                               record.id + "'");
    }
    record.sentence.tokens = std::move(tokens);
    record.sentence.raw = Detokenize(record.sentence.tokens);
    record.label = std::move(*label);
    records.push_back(std::move(record));
    tokens.clear();
    label.reset();
    id.reset();
  };

  for (std::string_view line : SplitLines(contents)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (Trim(line).empty()) {
      flush();
      continue;
    }
    if (!label && !id && tokens.empty()) block_start = line_number;
    if (line.starts_with('#')) {
      std::string value;
      if (ParseComment(line, "label", value)) {
        if (value.empty()) {
          throw Error(ErrorCode::kMissingLabel,
                      location(line_number) + ": empty label");
        }
        label = value;
      } else if (ParseComment(line, "id", value)) {
        id = value;
      }
      continue;
    }
    const size_t tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0 || tab + 1 == line.size() ||
        line.find('\t', tab + 1) != std::string_view::npos) {
      throw Error(ErrorCode::kMalformedRow,
                  location(line_number) + ": expected form<TAB>tag");
    }
    const std::string_view form = line.substr(0, tab);
    if (form.find(' ') != std::string_view::npos) {
      throw Error(ErrorCode::kMalformedRow,
                  location(line_number) + ": form contains a space");
    }
    Token token = MakeToken(std::string(form), stopwords);
    token.pos_tag = std::string(line.substr(tab + 1));
    tokens.push_back(std::move(token));
  }
  flush();
  return records;
}

}  // namespace edda
