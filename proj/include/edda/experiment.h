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

#ifndef EDDA_EXPERIMENT_H_
#define EDDA_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "edda/augment.h"
#include "edda/corpus.h"
#include "edda/deviation.h"
#include "edda/embedding.h"

namespace edda {

struct PartitionSpec {
  // Strictly increasing, each in (0, 1].
  std::vector<double> fractions = Deciles();
  uint64_t seed = 0;

  void Validate() const;
  static std::vector<double> Deciles();
};

struct Partition {
  double fraction = 0.0;
  // In dataset order.
  std::vector<std::string> record_ids;
};

// Nested, stratified subsets. Each class is shuffled once under the seed and
// every fraction takes the first max(1, round(fraction * class_size)) records
// of that shuffle, so smaller partitions are always subsets of larger ones.
// Throws EmptyDataset.
std::vector<Partition> StratifiedPartitions(
    const std::vector<LabeledRecord>& records, const PartitionSpec& spec);

enum class Technique { kBaseline, kEdda, kTssr, kRsr };

inline constexpr Technique kAllTechniques[] = {
    Technique::kBaseline, Technique::kEdda, Technique::kTssr, Technique::kRsr};

std::string_view TechniqueName(Technique technique);
std::optional<Technique> ParseTechnique(std::string_view name);

struct TssrOptions {
  // Nouns by default; nullopt picks any tagged token.
  std::optional<std::string> tag = std::string("NOUN");
  size_t n = 1;
};

struct AugmentedPartition {
  // Originals followed by every non-noop variant.
  std::vector<LabeledRecord> records;
  // Every generated variant, noops included.
  std::vector<AugmentedRecord> variants;
  size_t added = 0;
  size_t noops = 0;
};

// baseline: records unchanged. EDDA: all four ops. RSR: replacement only.
// TSSR: config.augment_labels is honored here as it is inside Edda.
AugmentedPartition AugmentPartition(const std::vector<LabeledRecord>& records,
                                    Technique technique,
                                    const AugmentDeps& deps,
                                    const AugmentationConfig& config,
                                    const TssrOptions& tssr = {});

struct TrainOptions {
  size_t epochs = 20;
  double lambda = 1e-4;
  uint64_t seed = 0;
};

// One-vs-rest linear SVM. Each class has dim + 1 weights, the last being the
// bias.
class LinearModel {
 public:
  const std::vector<std::string>& classes() const { return classes_; }
  size_t dim() const { return dim_; }
  const TrainOptions& options() const { return options_; }
  std::span<const double> weights(size_t class_index) const {
    return {weights_.data() + class_index * (dim_ + 1), dim_ + 1};
  }

  // Per-class scores in classes() order. Throws DimensionMismatch.
  std::vector<double> Scores(std::span<const double> features) const;
  // Highest score; ties go to the lexicographically smallest label.
  const std::string& Predict(std::span<const double> features) const;

 private:
  friend LinearModel TrainLinear(const std::vector<std::vector<double>>&,
                                 const std::vector<std::string>&,
                                 const TrainOptions&);
  std::vector<std::string> classes_;
  size_t dim_ = 0;
  std::vector<double> weights_;
  TrainOptions options_;
};

// Pegasos-style stochastic subgradient descent on the hinge loss with step
// size 1/(lambda * t), one binary problem per class. Deterministic under
// options.seed. Throws SingleClass, DimensionMismatch, LengthMismatch.
LinearModel TrainLinear(const std::vector<std::vector<double>>& features,
                        const std::vector<std::string>& labels,
                        const TrainOptions& options);

std::vector<std::string> Predict(const LinearModel& model,
                                 const std::vector<std::vector<double>>& features);

struct ClassScores {
  std::string label;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  size_t support = 0;
};

struct EvalResult {
  // Union of gold and predicted labels, sorted.
  std::vector<std::string> classes;
  std::vector<ClassScores> per_class;
  // Mean over classes with gold support.
  double macro_f1 = 0.0;
  double weighted_f1 = 0.0;
  // confusion[gold][predicted], indexed like `classes`.
  std::vector<std::vector<size_t>> confusion;
};

// Throws LengthMismatch for unequal or empty inputs.
EvalResult F1Scores(const std::vector<std::string>& predictions,
                    const std::vector<std::string>& golds);

struct ExperimentConfig {
  PartitionSpec partitions;
  std::vector<Technique> techniques = {std::begin(kAllTechniques),
                                       std::end(kAllTechniques)};
  AugmentationConfig augmentation;
  TssrOptions tssr;
  TrainOptions train;
  double delta = kDefaultDelta;
  size_t workers = 1;
};

struct ExperimentCell {
  double fraction = 0.0;
  Technique technique = Technique::kBaseline;
  double macro_f1 = 0.0;
  double weighted_f1 = 0.0;
  size_t n_train = 0;
  size_t n_aug_added = 0;
  size_t noop_count = 0;
  size_t n_test = 0;
  // Originals against their non-noop variants.
  DeviationReport deviation;
};

struct ExperimentResult {
  // Fraction-major, techniques in configured order.
  std::vector<ExperimentCell> cells;
};

// Partitions `train`, augments every partition with every technique, trains
// on pooled sentence embeddings and scores on `test`. Throws
// OverlappingSplits when an id occurs in both sets.
ExperimentResult RunExperiment(const std::vector<LabeledRecord>& train,
                               const std::vector<LabeledRecord>& test,
                               const AugmentDeps& deps,
                               const ExperimentConfig& config);

// "fraction,technique,macro_f1,weighted_f1,n_train,n_aug_added,noop_count"
// followed by one row per cell.
std::string ResultsCsv(const ExperimentResult& result);

// "fraction,technique,total_pairs,below_threshold,unembeddable,fraction_below"
std::string DeviationCsv(const ExperimentResult& result);

}  // namespace edda

#endif  // EDDA_EXPERIMENT_H_
