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

#include "edda/augment.h"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "edda/error.h"
#include "utf8.h"

namespace edda {
namespace {

std::vector<UChar32> CodePoints(std::string_view text) {
  std::vector<UChar32> out;
  for (const internal::CodePoint& cp : internal::Decode(text)) {
    out.push_back(cp.value);
  }
  return out;
}

// "Larsson" -> initial capital, "EU" -> all caps, else lowercase/mixed.
std::string MatchCasing(const std::string& replacement,
                        const std::string& original) {
  const std::vector<UChar32> orig = CodePoints(original);
  if (orig.empty() || orig.front() < 0 || !(u_isupper(orig.front()) ||
                                            u_istitle(orig.front()))) {
    return replacement;
  }
  size_t letters = 0;
  bool all_upper = true;
  for (UChar32 c : orig) {
    if (c >= 0 && u_isalpha(c)) {
      ++letters;
      if (!u_isupper(c)) all_upper = false;
    }
  }
  std::vector<UChar32> cps = CodePoints(replacement);
  if (cps.empty()) return replacement;
  if (all_upper && letters > 1) {
    for (UChar32& c : cps) {
      if (c >= 0) c = u_toupper(c);
    }
  } else if (cps.front() >= 0) {
    cps.front() = u_totitle(cps.front());
  }
  std::string out;
  for (UChar32 c : cps) {
    if (c < 0) return replacement;
    internal::AppendCodePoint(out, c);
  }
  return out;
}

// A replacement has to survive tokenization as exactly itself, otherwise the
// written variant would re-tokenize differently.
bool IsSingleToken(const std::string& word) {
  const Sentence s = Tokenize(word);
  return s.tokens.size() == 1 && s.tokens.front().surface == word;
}

enum class CandidateFailure { kOutOfVocabulary, kNoCandidate };

struct CandidateOutcome {
  std::optional<std::string> word;
  CandidateFailure failure = CandidateFailure::kNoCandidate;
};

CandidateOutcome TryFindCandidate(const EmbeddingStore& store,
                                  const Token& token,
                                  const AugmentationConfig& config, Rng& rng) {
  const auto row = store.Resolve(token);
  if (!row) return {std::nullopt, CandidateFailure::kOutOfVocabulary};
  const std::vector<NeighborResult> neighbors =
      NearestNeighbors(store, store.words()[*row], config.top_k);
  std::vector<const std::string*> pool;
  pool.reserve(neighbors.size());
  for (const NeighborResult& n : neighbors) {
    if (n.score >= config.min_similarity && IsSingleToken(n.word)) {
      pool.push_back(&n.word);
    }
  }
  if (pool.empty()) return {std::nullopt, CandidateFailure::kNoCandidate};
  return {*pool[rng.UniformIndex(pool.size())], CandidateFailure::kNoCandidate};
}

bool IsReplaceable(const Token& token, const EmbeddingStore& store,
                   const StopwordSet& stopwords) {
  return token.is_alphabetic && !token.is_stopword &&
         !stopwords.contains(token.lookup_form) &&
         store.Resolve(token).has_value();
}

std::vector<size_t> ReplaceablePositions(const Sentence& sentence,
                                         const EmbeddingStore& store,
                                         const StopwordSet& stopwords) {
  std::vector<size_t> out;
  for (size_t i = 0; i < sentence.tokens.size(); ++i) {
    if (IsReplaceable(sentence.tokens[i], store, stopwords)) out.push_back(i);
  }
  return out;
}

std::vector<size_t> WordPositions(const Sentence& sentence) {
  std::vector<size_t> out;
  for (size_t i = 0; i < sentence.tokens.size(); ++i) {
    if (!sentence.tokens[i].is_punctuation()) out.push_back(i);
  }
  return out;
}

Token ReplacementToken(const std::string& surface, const Token& replaced,
                       const StopwordSet* stopwords) {
  Token token = MakeToken(surface, stopwords);
  token.pos_tag = replaced.pos_tag;
  return token;
}

void Refresh(Sentence& sentence) { sentence.raw = Detokenize(sentence); }

std::optional<size_t> TryFindRandomToken(const Sentence& sentence,
                                         const std::optional<std::string>& tag,
                                         Rng& rng) {
  std::vector<size_t> matches;
  for (size_t i = 0; i < sentence.tokens.size(); ++i) {
    const Token& token = sentence.tokens[i];
    if (token.is_punctuation()) continue;
    const std::string_view token_tag =
        token.pos_tag ? std::string_view(*token.pos_tag) : kUnknownTag;
    if (tag ? token_tag == *tag : token_tag != kUnknownTag) {
      matches.push_back(i);
    }
  }
  if (matches.empty()) return std::nullopt;
  return matches[rng.UniformIndex(matches.size())];
}

AugmentedRecord MakeVariant(const std::string& source_id,
                            const std::string& source_text,
                            const std::string& label, size_t index,
                            VariantOp op, OpResult result) {
  AugmentedRecord variant;
  variant.source_id = source_id;
  variant.variant_index = index;
  variant.op = op;
  variant.label = label;
  variant.noop = result.edits.empty();
  variant.text = variant.noop ? source_text : Detokenize(result.sentence);
  variant.edits = std::move(result.edits);
  return variant;
}

OpResult ApplyOp(Op op, const Sentence& sentence, const AugmentDeps& deps,
                 const AugmentationConfig& config, Rng& rng) {
  switch (op) {
    case Op::kRsr: return Rsr(sentence, deps.store, deps.stopwords, config, rng);
    case Op::kRi: return Ri(sentence, deps.store, deps.stopwords, config, rng);
    case Op::kRs: return Rs(sentence, config, rng);
    case Op::kRd: return Rd(sentence, config, rng);
  }
  return {sentence, {}};
}

}  // namespace

std::string_view OpName(Op op) { return OpName(ToVariantOp(op)); }

std::string_view OpName(VariantOp op) {
  switch (op) {
    case VariantOp::kRsr: return "RSR";
    case VariantOp::kRi: return "RI";
    case VariantOp::kRs: return "RS";
    case VariantOp::kRd: return "RD";
    case VariantOp::kEdda: return "EDDA";
    case VariantOp::kTssr: return "TSSR";
  }
  return "?";
}

VariantOp ToVariantOp(Op op) {
  switch (op) {
    case Op::kRsr: return VariantOp::kRsr;
    case Op::kRi: return VariantOp::kRi;
    case Op::kRs: return VariantOp::kRs;
    case Op::kRd: return VariantOp::kRd;
  }
  return VariantOp::kRsr;
}

std::optional<Op> ParseOp(std::string_view name) {
  std::string upper(name);
  for (char& c : upper) c = static_cast<char>(std::toupper(c));
  for (Op op : kAllOps) {
    if (OpName(op) == upper) return op;
  }
  return std::nullopt;
}

void AugmentationConfig::Validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "alpha must be in (0, 1]");
  }
  if (n_aug < 1) throw Error(ErrorCode::kInvalidConfig, "n_aug must be >= 1");
  if (top_k < 1) throw Error(ErrorCode::kInvalidConfig, "top_k must be >= 1");
  if (!std::isfinite(min_similarity)) {
    throw Error(ErrorCode::kInvalidConfig, "min_similarity must be finite");
  }
}

size_t EditBudget(double alpha, size_t eligible) {
  const auto n = static_cast<long long>(
      std::llround(alpha * static_cast<double>(eligible)));
  return static_cast<size_t>(std::max(1LL, n));
}

OpResult Rsr(const Sentence& sentence, const EmbeddingStore& store,
             const StopwordSet& stopwords, const AugmentationConfig& config,
             Rng& rng) {
  OpResult result{sentence, {}};
  const std::vector<size_t> eligible =
      ReplaceablePositions(sentence, store, stopwords);
  if (eligible.empty()) return result;

  std::vector<size_t> chosen = rng.SampleWithoutReplacement(
      eligible.size(), EditBudget(config.alpha, eligible.size()));
  for (size_t& c : chosen) c = eligible[c];
  std::sort(chosen.begin(), chosen.end());

  for (size_t pos : chosen) {
    const Token& old = sentence.tokens[pos];
    CandidateOutcome candidate = TryFindCandidate(store, old, config, rng);
    if (!candidate.word) continue;
    Token replacement = ReplacementToken(
        MatchCasing(*candidate.word, old.surface), old, &stopwords);
    result.edits.push_back(
        {EditKind::kReplace, pos, 0, old.surface, replacement.surface});
    result.sentence.tokens[pos] = std::move(replacement);
  }
  Refresh(result.sentence);
  return result;
}

OpResult Ri(const Sentence& sentence, const EmbeddingStore& store,
            const StopwordSet& stopwords, const AugmentationConfig& config,
            Rng& rng) {
  OpResult result{sentence, {}};
  const std::vector<size_t> eligible =
      ReplaceablePositions(sentence, store, stopwords);
  if (eligible.empty()) return result;

  const size_t budget = EditBudget(config.alpha, eligible.size());
  for (size_t n = 0; n < budget; ++n) {
    const Token& source =
        sentence.tokens[eligible[rng.UniformIndex(eligible.size())]];
    CandidateOutcome candidate = TryFindCandidate(store, source, config, rng);
    if (!candidate.word) continue;
    const size_t slot = rng.UniformIndex(result.sentence.tokens.size() + 1);
    Token inserted = ReplacementToken(*candidate.word, source, &stopwords);
    result.edits.push_back({EditKind::kInsert, slot, 0, "", inserted.surface});
    result.sentence.tokens.insert(result.sentence.tokens.begin() + slot,
                                  std::move(inserted));
  }
  Refresh(result.sentence);
  return result;
}

OpResult Rs(const Sentence& sentence, const AugmentationConfig& config,
            Rng& rng) {
  OpResult result{sentence, {}};
  const std::vector<size_t> words = WordPositions(sentence);
  if (words.size() < 2) return result;

  const size_t budget = EditBudget(config.alpha, words.size());
  auto& tokens = result.sentence.tokens;
  for (size_t n = 0; n < budget; ++n) {
    const size_t a = rng.UniformIndex(words.size());
    size_t b = rng.UniformIndex(words.size() - 1);
    if (b >= a) ++b;
    const size_t i = words[a];
    const size_t j = words[b];
    result.edits.push_back(
        {EditKind::kSwap, i, j, tokens[i].surface, tokens[j].surface});
    std::swap(tokens[i], tokens[j]);
  }
  Refresh(result.sentence);
  return result;
}

OpResult Rd(const Sentence& sentence, const AugmentationConfig& config,
            Rng& rng) {
  OpResult result{sentence, {}};
  const std::vector<size_t> words = WordPositions(sentence);
  if (words.size() < 2) return result;

  const size_t deletions =
      std::min(EditBudget(config.alpha, words.size()), words.size() - 1);
  std::vector<size_t> chosen =
      rng.SampleWithoutReplacement(words.size(), deletions);
  for (size_t& c : chosen) c = words[c];
  std::sort(chosen.begin(), chosen.end());

  std::vector<Token> kept;
  kept.reserve(sentence.tokens.size() - chosen.size());
  size_t next = 0;
  for (size_t i = 0; i < sentence.tokens.size(); ++i) {
    if (next < chosen.size() && chosen[next] == i) {
      result.edits.push_back(
          {EditKind::kDelete, i, 0, sentence.tokens[i].surface, ""});
      ++next;
      continue;
    }
    kept.push_back(sentence.tokens[i]);
  }
  result.sentence.tokens = std::move(kept);
  Refresh(result.sentence);
  return result;
}

std::string AugmentedRecord::id() const {
  return source_id + "#" + std::string(OpName(op)) + "#" +
         std::to_string(variant_index);
}

std::optional<VariantId> ParseVariantId(std::string_view id) {
  const size_t last = id.rfind('#');
  if (last == std::string_view::npos || last == 0) return std::nullopt;
  const size_t middle = id.rfind('#', last - 1);
  if (middle == std::string_view::npos || middle == 0) return std::nullopt;
  const std::string_view index = id.substr(last + 1);
  if (index.empty() ||
      !std::all_of(index.begin(), index.end(),
                   [](char c) { return c >= '0' && c <= '9'; })) {
    return std::nullopt;
  }
  VariantId out;
  out.source_id = std::string(id.substr(0, middle));
  out.op = std::string(id.substr(middle + 1, last - middle - 1));
  if (out.op.empty()) return std::nullopt;
  out.index = std::stoull(std::string(index));
  return out;
}

uint64_t VariantSeed(uint64_t seed, std::string_view record_id, size_t round,
                     std::string_view op) {
  return SeedDeriver(seed).Add(record_id).Add(uint64_t{round}).Add(op).seed();
}

std::vector<AugmentedRecord> Edda(const LabeledRecord& record,
                                  const AugmentDeps& deps,
                                  const AugmentationConfig& config) {
  config.Validate();
  if (config.enabled_ops.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "EDDA needs at least one op");
  }
  if (!config.ShouldAugment(record.label)) return {};

  const Sentence sentence = Tokenize(record.text, &deps.stopwords);
  std::vector<AugmentedRecord> out;
  for (size_t round = 0; round < config.n_aug; ++round) {
    if (config.mode == EddaMode::kPerOp) {
      for (Op op : config.enabled_ops) {
        Rng rng(VariantSeed(config.seed, record.id, round, OpName(op)));
        out.push_back(MakeVariant(record.id, record.text, record.label, round,
                                  ToVariantOp(op),
                                  ApplyOp(op, sentence, deps, config, rng)));
      }
    } else {
      Rng rng(VariantSeed(config.seed, record.id, round,
                          OpName(VariantOp::kEdda)));
      OpResult combined{sentence, {}};
      for (Op op : config.enabled_ops) {
        OpResult step = ApplyOp(op, combined.sentence, deps, config, rng);
        combined.sentence = std::move(step.sentence);
        combined.edits.insert(combined.edits.end(), step.edits.begin(),
                              step.edits.end());
      }
      out.push_back(MakeVariant(record.id, record.text, record.label, round,
                                VariantOp::kEdda, std::move(combined)));
    }
  }
  return out;
}

size_t FindRandomToken(const Sentence& sentence,
                       const std::optional<std::string>& tag, Rng& rng) {
  if (auto pos = TryFindRandomToken(sentence, tag, rng)) return *pos;
  throw Error(ErrorCode::kNoMatchingToken,
              tag ? "no token tagged " + *tag : "no token with a known tag");
}

std::string FindCandidate(const EmbeddingStore& store, const Token& token,
                          const AugmentationConfig& config, Rng& rng) {
  CandidateOutcome outcome = TryFindCandidate(store, token, config, rng);
  if (outcome.word) return *std::move(outcome.word);
  if (outcome.failure == CandidateFailure::kOutOfVocabulary) {
    throw Error(ErrorCode::kOutOfVocabulary, "'" + token.surface + "'");
  }
  throw Error(ErrorCode::kNoCandidate,
              "no neighbor of '" + token.surface + "' passes the floor");
}

std::vector<AugmentedRecord> Tssr(const TaggedRecord& record,
                                  const std::optional<std::string>& tag,
                                  size_t n, const AugmentDeps& deps,
                                  const AugmentationConfig& config) {
  config.Validate();
  std::vector<AugmentedRecord> out;
  out.reserve(n);
  const std::string source_text = record.sentence.raw;
  for (size_t i = 0; i < n; ++i) {
    Rng rng(VariantSeed(config.seed, record.id, i, OpName(VariantOp::kTssr)));
    OpResult result{record.sentence, {}};
    if (auto pos = TryFindRandomToken(record.sentence, tag, rng)) {
      const Token& chosen = record.sentence.tokens[*pos];
      CandidateOutcome candidate =
          TryFindCandidate(deps.store, chosen, config, rng);
      if (candidate.word) {
        Token replacement =
            ReplacementToken(MatchCasing(*candidate.word, chosen.surface),
                             chosen, &deps.stopwords);
        result.edits.push_back(
            {EditKind::kReplace, *pos, 0, chosen.surface, replacement.surface});
        result.sentence.tokens[*pos] = std::move(replacement);
        Refresh(result.sentence);
      }
    }
    out.push_back(MakeVariant(record.id, source_text, record.label, i,
                              VariantOp::kTssr, std::move(result)));
  }
  return out;
}

std::vector<AugmentedRecord> Tssr(const LabeledRecord& record,
                                  const std::optional<std::string>& tag,
                                  size_t n, const AugmentDeps& deps,
                                  const AugmentationConfig& config) {
  static const PosLexicon kEmptyLexicon;
  TaggedRecord tagged{
      record.id,
      TagSentence(Tokenize(record.text, &deps.stopwords),
                  deps.lexicon ? *deps.lexicon : kEmptyLexicon),
      record.label};
  return Tssr(tagged, tag, n, deps, config);
}

}  // namespace edda
