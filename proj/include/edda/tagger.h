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

#ifndef EDDA_TAGGER_H_
#define EDDA_TAGGER_H_

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "edda/corpus.h"

namespace edda {

// Case-insensitive word -> POS tag table.
class PosLexicon {
 public:
  PosLexicon() = default;
  // First occurrence of a word wins. Tags are uppercased.
  explicit PosLexicon(
      const std::vector<std::pair<std::string, std::string>>& entries);

  std::optional<std::string> Lookup(std::string_view word) const;
  const std::set<std::string>& tagset() const { return tagset_; }
  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::unordered_map<std::string, std::string> entries_;
  std::set<std::string> tagset_;
};

// TSV, one "word<TAB>tag" per line. Blank lines are skipped.
PosLexicon LoadLexicon(const std::filesystem::path& path);

// Sets every token's tag from the lexicon, UNK when absent.
Sentence TagSentence(const Sentence& sentence, const PosLexicon& lexicon);

struct TaggedRecord {
  std::string id;
  Sentence sentence;
  std::string label;
};

// CoNLL-style input: "form<TAB>tag" lines, blank-line separated blocks, each
// block preceded by "# label = X" and optionally "# id = Y". Ids default to
// the zero-based block index. Tags are kept verbatim.
std::vector<TaggedRecord> ParsePretagged(const std::filesystem::path& path,
                                         const StopwordSet* stopwords = nullptr);

}  // namespace edda

#endif  // EDDA_TAGGER_H_
