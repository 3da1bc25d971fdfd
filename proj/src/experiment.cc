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

#include "edda/experiment.h"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "edda/error.h"
#include "edda/parallel.h"
#include "edda/random.h"

namespace edda {
namespace {

std::string FractionKey(double fraction) {
  return fmt::format("{:.2f}", fraction);
}

std::vector<double> Featurize(const EmbeddingStore& store,
                              const std::string& text) {
  try {
    return EmbedSentence(store, Tokenize(text)).vector;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kEmptyEmbedding) throw;
    return std::vector<double>(store.dim(), 0.0);
  }
}

}  // namespace

std::vector<double> PartitionSpec::Deciles() {
  return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
}

void PartitionSpec::Validate() const {
  if (fractions.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "no partition fractions");
  }
  for (size_t i = 0; i < fractions.size(); ++i) {
    if (!(fractions[i] > 0.0 && fractions[i] <= 1.0)) {
      throw Error(ErrorCode::kInvalidConfig,
                  "partition fractions must lie in (0, 1]");
    }
    if (i > 0 && !(fractions[i] > fractions[i - 1])) {
      throw Error(ErrorCode::kInvalidConfig,
                  "partition fractions must be strictly increasing");
    }
  }
}

std::vector<Partition> StratifiedPartitions(
    const std::vector<LabeledRecord>& records, const PartitionSpec& spec) {
  spec.Validate();
  if (records.empty()) throw Error(ErrorCode::kEmptyDataset, "no records");

  // Record indices per label, labels in sorted order.
  std::map<std::string, std::vector<size_t>> by_label;
  for (size_t i = 0; i < records.size(); ++i) {
    by_label[records[i].label].push_back(i);
  }
  for (auto& [label, members] : by_label) {
    Rng rng(SeedDeriver(spec.seed).Add("partition").Add(label).seed());
    rng.Shuffle(std::span<size_t>(members));
  }

  std::vector<Partition> out;
  out.reserve(spec.fractions.size());
  for (double fraction : spec.fractions) {
    std::vector<size_t> chosen;
    for (const auto& [label, members] : by_label) {
      const auto take = std::clamp<size_t>(
          static_cast<size_t>(
              std::llround(fraction * static_cast<double>(members.size()))),
          1, members.size());
      chosen.insert(chosen.end(), members.begin(), members.begin() + take);
    }
    std::sort(chosen.begin(), chosen.end());
    Partition partition;
    partition.fraction = fraction;
    partition.record_ids.reserve(chosen.size());
    for (size_t i : chosen) partition.record_ids.push_back(records[i].id);
    out.push_back(std::move(partition));
  }
  return out;
}

std::string_view TechniqueName(Technique technique) {
  switch (technique) {
    case Technique::kBaseline: return "baseline";
    case Technique::kEdda: return "EDDA";
    case Technique::kTssr: return "TSSR";
    case Technique::kRsr: return "RSR";
  }
  return "?";
}

std::optional<Technique> ParseTechnique(std::string_view name) {
  std::string lower(name);
  for (char& c : lower) c = static_cast<char>(std::tolower(c));
  for (Technique t : kAllTechniques) {
    std::string candidate(TechniqueName(t));
    for (char& c : candidate) c = static_cast<char>(std::tolower(c));
    if (candidate == lower) return t;
  }
  return std::nullopt;
}

AugmentedPartition AugmentPartition(const std::vector<LabeledRecord>& records,
                                    Technique technique,
                                    const AugmentDeps& deps,
                                    const AugmentationConfig& config,
                                    const TssrOptions& tssr) {
  AugmentedPartition out;
  out.records = records;
  if (technique == Technique::kBaseline) return out;

  AugmentationConfig effective = config;
  if (technique == Technique::kEdda) {
    effective.enabled_ops = {std::begin(kAllOps), std::end(kAllOps)};
  } else if (technique == Technique::kRsr) {
    effective.enabled_ops = {Op::kRsr};
  }
  for (const LabeledRecord& record : records) {
    std::vector<AugmentedRecord> variants;
    if (technique == Technique::kTssr) {
      if (effective.ShouldAugment(record.label)) {
        variants = Tssr(record, tssr.tag, tssr.n, deps, effective);
      }
    } else {
      variants = Edda(record, deps, effective);
    }
    for (AugmentedRecord& variant : variants) {
      if (variant.noop) {
        ++out.noops;
      } else {
        ++out.added;
        out.records.push_back(variant.ToRecord());
      }
      out.variants.push_back(std::move(variant));
    }
  }
  return out;
}

std::vector<double> LinearModel::Scores(std::span<const double> features) const {
  if (features.size() != dim_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "feature of size " + std::to_string(features.size()) +
                    ", model expects " + std::to_string(dim_));
  }
  std::vector<double> scores(classes_.size());
  for (size_t c = 0; c < classes_.size(); ++c) {
    const std::span<const double> w = weights(c);
    double s = w[dim_];
    for (size_t d = 0; d < dim_; ++d) s += w[d] * features[d];
    scores[c] = s;
  }
  return scores;
}

const std::string& LinearModel::Predict(std::span<const double> features) const {
  const std::vector<double> scores = Scores(features);
  size_t best = 0;
  for (size_t c = 1; c < scores.size(); ++c) {
    if (scores[c] > scores[best]) best = c;
  }
  return classes_[best];
}

LinearModel TrainLinear(const std::vector<std::vector<double>>& features,
                        const std::vector<std::string>& labels,
                        const TrainOptions& options) {
  if (features.size() != labels.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                std::to_string(features.size()) + " feature rows, " +
                    std::to_string(labels.size()) + " labels");
  }
  if (!(options.lambda > 0.0) || options.epochs == 0) {
    throw Error(ErrorCode::kInvalidConfig,
                "training needs lambda > 0 and at least one epoch");
  }
  LinearModel model;
  model.options_ = options;
  model.classes_ = labels;
  std::sort(model.classes_.begin(), model.classes_.end());
  model.classes_.erase(
      std::unique(model.classes_.begin(), model.classes_.end()),
      model.classes_.end());
  if (model.classes_.size() < 2) {
    throw Error(ErrorCode::kSingleClass,
                "training needs at least two classes, got " +
                    std::to_string(model.classes_.size()));
  }
  const size_t dim = features.front().size();
  for (const auto& row : features) {
    if (row.size() != dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "feature rows of size " + std::to_string(dim) + " and " +
                      std::to_string(row.size()));
    }
  }
  model.dim_ = dim;
  model.weights_.assign(model.classes_.size() * (dim + 1), 0.0);

  std::vector<size_t> class_of(labels.size());
  for (size_t i = 0; i < labels.size(); ++i) {
    class_of[i] = static_cast<size_t>(
        std::lower_bound(model.classes_.begin(), model.classes_.end(),
                         labels[i]) -
        model.classes_.begin());
  }

  // Visiting order per epoch, shared by all binary problems.
  std::vector<std::vector<size_t>> orders(options.epochs);
  for (size_t epoch = 0; epoch < options.epochs; ++epoch) {
    orders[epoch].resize(features.size());
    std::iota(orders[epoch].begin(), orders[epoch].end(), size_t{0});
    Rng rng(SeedDeriver(options.seed).Add("epoch").Add(uint64_t{epoch}).seed());
    rng.Shuffle(std::span<size_t>(orders[epoch]));
  }

  const double radius = 1.0 / std::sqrt(options.lambda);
  for (size_t c = 0; c < model.classes_.size(); ++c) {
    double* w = model.weights_.data() + c * (dim + 1);
    size_t t = 0;
    for (const auto& order : orders) {
      for (size_t i : order) {
        ++t;
        const std::vector<double>& x = features[i];
        const double y = class_of[i] == c ? 1.0 : -1.0;
        double margin = w[dim];
        for (size_t d = 0; d < dim; ++d) margin += w[d] * x[d];
        margin *= y;

        const double eta = 1.0 / (options.lambda * static_cast<double>(t));
        const double shrink = 1.0 - eta * options.lambda;
        for (size_t d = 0; d <= dim; ++d) w[d] *= shrink;
        if (margin < 1.0) {
          for (size_t d = 0; d < dim; ++d) w[d] += eta * y * x[d];
          w[dim] += eta * y;
        }
        // Projection onto the ball of radius 1/sqrt(lambda).
        double norm = 0.0;
        for (size_t d = 0; d <= dim; ++d) norm += w[d] * w[d];
        norm = std::sqrt(norm);
        if (norm > radius) {
          const double scale = radius / norm;
          for (size_t d = 0; d <= dim; ++d) w[d] *= scale;
        }
      }
    }
  }
  return model;
}

std::vector<std::string> Predict(
    const LinearModel& model, const std::vector<std::vector<double>>& features) {
  std::vector<std::string> out;
  out.reserve(features.size());
  for (const auto& row : features) out.push_back(model.Predict(row));
  return out;
}

EvalResult F1Scores(const std::vector<std::string>& predictions,
                    const std::vector<std::string>& golds) {
  if (predictions.size() != golds.size() || golds.empty()) {
    throw Error(ErrorCode::kLengthMismatch,
                std::to_string(predictions.size()) + " predictions, " +
                    std::to_string(golds.size()) + " gold labels");
  }
  EvalResult result;
  result.classes = golds;
  result.classes.insert(result.classes.end(), predictions.begin(),
                        predictions.end());
  std::sort(result.classes.begin(), result.classes.end());
  result.classes.erase(
      std::unique(result.classes.begin(), result.classes.end()),
      result.classes.end());
  const size_t k = result.classes.size();
  auto index_of = [&](const std::string& label) {
    return static_cast<size_t>(
        std::lower_bound(result.classes.begin(), result.classes.end(), label) -
        result.classes.begin());
  };

  result.confusion.assign(k, std::vector<size_t>(k, 0));
  for (size_t i = 0; i < golds.size(); ++i) {
    ++result.confusion[index_of(golds[i])][index_of(predictions[i])];
  }

  double macro_sum = 0.0;
  double weighted_sum = 0.0;
  size_t gold_classes = 0;
  for (size_t c = 0; c < k; ++c) {
    size_t tp = result.confusion[c][c];
    size_t support = 0;
    size_t predicted = 0;
    for (size_t j = 0; j < k; ++j) {
      support += result.confusion[c][j];
      predicted += result.confusion[j][c];
    }
    ClassScores scores;
    scores.label = result.classes[c];
    scores.support = support;
    scores.precision = predicted == 0 ? 0.0
                                      : static_cast<double>(tp) /
                                            static_cast<double>(predicted);
    scores.recall = support == 0 ? 0.0
                                 : static_cast<double>(tp) /
                                       static_cast<double>(support);
    const double pr = scores.precision + scores.recall;
    scores.f1 = pr == 0.0 ? 0.0 : 2.0 * scores.precision * scores.recall / pr;
    if (support > 0) {
      macro_sum += scores.f1;
      weighted_sum += scores.f1 * static_cast<double>(support);
      ++gold_classes;
    }
    result.per_class.push_back(std::move(scores));
  }
  result.macro_f1 = macro_sum / static_cast<double>(gold_classes);
  result.weighted_f1 = weighted_sum / static_cast<double>(golds.size());
  return result;
}

ExperimentResult RunExperiment(const std::vector<LabeledRecord>& train,
                               const std::vector<LabeledRecord>& test,
                               const AugmentDeps& deps,
                               const ExperimentConfig& config) {
  config.augmentation.Validate();
  if (test.empty()) throw Error(ErrorCode::kEmptyDataset, "empty test set");
  std::unordered_set<std::string> test_ids;
  for (const LabeledRecord& record : test) test_ids.insert(record.id);
  for (const LabeledRecord& record : train) {
    if (test_ids.contains(record.id)) {
      throw Error(ErrorCode::kOverlappingSplits,
                  "id '" + record.id + "' is in both train and test");
    }
  }

  const std::vector<Partition> partitions =
      StratifiedPartitions(train, config.partitions);
  std::unordered_map<std::string, const LabeledRecord*> by_id;
  for (const LabeledRecord& record : train) by_id[record.id] = &record;

  std::vector<std::vector<double>> test_features(test.size());
  std::vector<std::string> test_labels(test.size());
  ParallelFor(test.size(), config.workers, [&](size_t i) {
    test_features[i] = Featurize(deps.store, test[i].text);
    test_labels[i] = test[i].label;
  });

  const size_t n_techniques = config.techniques.size();
  ExperimentResult result;
  result.cells.resize(partitions.size() * n_techniques);

  ParallelFor(result.cells.size(), config.workers, [&](size_t cell_index) {
    const Partition& partition = partitions[cell_index / n_techniques];
    const Technique technique = config.techniques[cell_index % n_techniques];

    std::vector<LabeledRecord> records;
    records.reserve(partition.record_ids.size());
    for (const std::string& id : partition.record_ids) {
      records.push_back(*by_id.at(id));
    }
    AugmentedPartition augmented = AugmentPartition(
        records, technique, deps, config.augmentation, config.tssr);

    std::vector<std::vector<double>> features;
    std::vector<std::string> labels;
    features.reserve(augmented.records.size());
    labels.reserve(augmented.records.size());
    for (const LabeledRecord& record : augmented.records) {
      if (test_ids.contains(record.id)) {
        throw Error(ErrorCode::kOverlappingSplits,
                    "test id '" + record.id + "' reached training data");
      }
      features.push_back(Featurize(deps.store, record.text));
      labels.push_back(record.label);
    }

    TrainOptions train_options = config.train;
    train_options.seed = SeedDeriver(config.train.seed)
                             .Add(FractionKey(partition.fraction))
                             .Add(TechniqueName(technique))
                             .seed();
    const LinearModel model = TrainLinear(features, labels, train_options);
    const EvalResult eval = F1Scores(Predict(model, test_features), test_labels);

    std::unordered_map<std::string, const LabeledRecord*> originals;
    for (const LabeledRecord& record : records) originals[record.id] = &record;
    std::vector<DeviationPair> pairs;
    for (const AugmentedRecord& variant : augmented.variants) {
      if (variant.noop) continue;
      const LabeledRecord& source = *originals.at(variant.source_id);
      pairs.push_back({source.id, Tokenize(source.text), variant.id(),
                       Tokenize(variant.text)});
    }

    ExperimentCell& cell = result.cells[cell_index];
    cell.fraction = partition.fraction;
    cell.technique = technique;
    cell.macro_f1 = eval.macro_f1;
    cell.weighted_f1 = eval.weighted_f1;
    cell.n_train = augmented.records.size();
    cell.n_aug_added = augmented.added;
    cell.noop_count = augmented.noops;
    cell.n_test = test.size();
    cell.deviation = ComputeDeviationReport(pairs, deps.store, config.delta);
  });
  return result;
}

std::string ResultsCsv(const ExperimentResult& result) {
  std::string out =
      "fraction,technique,macro_f1,weighted_f1,n_train,n_aug_added,noop_count\n";
  for (const ExperimentCell& cell : result.cells) {
    out += fmt::format("{},{},{:.6f},{:.6f},{},{},{}\n",
                       FractionKey(cell.fraction), TechniqueName(cell.technique),
                       cell.macro_f1, cell.weighted_f1, cell.n_train,
                       cell.n_aug_added, cell.noop_count);
  }
  return out;
}

std::string DeviationCsv(const ExperimentResult& result) {
  std::string out =
      "fraction,technique,total_pairs,below_threshold,unembeddable,"
      "fraction_below\n";
  for (const ExperimentCell& cell : result.cells) {
    out += fmt::format("{},{},{},{},{},{:.6f}\n", FractionKey(cell.fraction),
                       TechniqueName(cell.technique), cell.deviation.total_pairs,
                       cell.deviation.below_threshold,
                       cell.deviation.unembeddable,
                       cell.deviation.fraction_below);
  }
  return out;
}

}  // namespace edda
