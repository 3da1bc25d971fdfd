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

#ifndef EDDA_AUGMENT_H_
#define EDDA_AUGMENT_H_

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "edda/corpus.h"
#include "edda/embedding.h"
#include "edda/random.h"
#include "edda/tagger.h"

namespace edda {

// The four perturbations, declared in the order composed mode applies them.
enum class Op { kRsr, kRi, kRs, kRd };

inline constexpr Op kAllOps[] = {Op::kRsr, Op::kRi, Op::kRs, Op::kRd};

// Provenance label of a generated variant.
enum class VariantOp { kRsr, kRi, kRs, kRd, kEdda, kTssr };

std::string_view OpName(Op op);
std::string_view OpName(VariantOp op);
VariantOp ToVariantOp(Op op);
// Accepts "RSR", "ri", ... Returns nullopt for anything else.
std::optional<Op> ParseOp(std::string_view name);

enum class EddaMode {
  kPerOp,     // one variant per enabled op and round
  kComposed,  // one variant per round with all enabled ops applied in turn
};

struct AugmentationConfig {
  double alpha = 0.2;
  size_t n_aug = 1;
  size_t top_k = 10;
  uint64_t seed = 0;
  std::set<Op> enabled_ops = {Op::kRsr, Op::kRi, Op::kRs, Op::kRd};
  EddaMode mode = EddaMode::kPerOp;
  // When set, only records with one of these labels are augmented.
  std::optional<std::set<std::string>> augment_labels;
  double min_similarity = 0.0;

  // Throws InvalidConfig.
  void Validate() const;
  bool ShouldAugment(const std::string& label) const {
    return !augment_labels || augment_labels->contains(label);
  }
};

// n_edits = max(1, round(alpha * eligible)).
size_t EditBudget(double alpha, size_t eligible);

enum class EditKind { kReplace, kInsert, kSwap, kDelete };

struct Edit {
  EditKind kind = EditKind::kReplace;
  // Index in the sentence at the time of the edit. For inserts this is the
  // slot the new token went into.
  size_t position = 0;
  // Second index of a swap.
  size_t other_position = 0;
  // Surface that was at `position`; empty for inserts.
  std::string before;
  // New surface at `position`; empty for deletes.
  std::string after;

  friend bool operator==(const Edit&, const Edit&) = default;
};

struct OpResult {
  Sentence sentence;
  std::vector<Edit> edits;
};

// Shared, read-only resources of an augmentation run.
struct AugmentDeps {
  const EmbeddingStore& store;
  const StopwordSet& stopwords;
  const PosLexicon* lexicon = nullptr;
};

// Random synonym replacement. Eligible tokens are alphabetic, not stopwords
// and in the vocabulary; n_edits distinct ones are replaced by a uniformly
// drawn neighbor. Replacements copy the casing of the word they replace.
OpResult Rsr(const Sentence& sentence, const EmbeddingStore& store,
             const StopwordSet& stopwords, const AugmentationConfig& config,
             Rng& rng);

// Random insertion of a neighbor of a random eligible token at a random slot.
OpResult Ri(const Sentence& sentence, const EmbeddingStore& store,
            const StopwordSet& stopwords, const AugmentationConfig& config,
            Rng& rng);

// Random swap of two distinct non-punctuation positions, n_edits times.
OpResult Rs(const Sentence& sentence, const AugmentationConfig& config,
            Rng& rng);

// Random deletion of n_edits distinct non-punctuation tokens. At least one
// non-punctuation token always survives.
OpResult Rd(const Sentence& sentence, const AugmentationConfig& config,
            Rng& rng);

struct AugmentedRecord {
  std::string source_id;
  size_t variant_index = 0;
  VariantOp op = VariantOp::kRsr;
  std::string text;
  std::string label;
  std::vector<Edit> edits;
  bool noop = true;

  // "<source_id>#<op>#<variant_index>"
  std::string id() const;
  LabeledRecord ToRecord() const { return {id(), text, label}; }
};

// Splits "<source_id>#<op>#<k>" back into its parts. Source ids may contain '#'.
struct VariantId {
  std::string source_id;
  std::string op;
  size_t index = 0;
};
std::optional<VariantId> ParseVariantId(std::string_view id);

// Seed of the generator behind one variant. Depends only on the arguments, so
// output never depends on batch order or worker count.
uint64_t VariantSeed(uint64_t seed, std::string_view record_id, size_t round,
                     std::string_view op);

// EDDA over one record. Returns nothing when the label is not selected by
// config.augment_labels.
std::vector<AugmentedRecord> Edda(const LabeledRecord& record,
                                  const AugmentDeps& deps,
                                  const AugmentationConfig& config);

// Uniform choice among non-punctuation positions tagged `tag`; without a tag,
// among positions whose tag is known. Untagged tokens count as UNK.
// Throws NoMatchingToken.
size_t FindRandomToken(const Sentence& sentence,
                       const std::optional<std::string>& tag, Rng& rng);

// Uniform draw from the token's top_k neighbors scoring at least
// min_similarity. Returns the vocabulary form. Throws OutOfVocabulary and
// NoCandidate.
std::string FindCandidate(const EmbeddingStore& store, const Token& token,
                          const AugmentationConfig& config, Rng& rng);

// Type-specific similar word replacement: n variants, each replacing one
// occurrence of a token carrying `tag`. Failed iterations produce noop
// variants, so the result always has n entries. The sentence must be tagged.
std::vector<AugmentedRecord> Tssr(const TaggedRecord& record,
                                  const std::optional<std::string>& tag,
                                  size_t n, const AugmentDeps& deps,
                                  const AugmentationConfig& config);

// Tokenizes the text and tags it with deps.lexicon (all UNK without one).
std::vector<AugmentedRecord> Tssr(const LabeledRecord& record,
                                  const std::optional<std::string>& tag,
                                  size_t n, const AugmentDeps& deps,
                                  const AugmentationConfig& config);

}  // namespace edda

#endif  // EDDA_AUGMENT_H_
