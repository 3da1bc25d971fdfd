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

#include "edda/cli.h"

#include <fmt/format.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "CLI11.hpp"
#include "edda/augment.h"
#include "edda/corpus.h"
#include "edda/deviation.h"
#include "edda/embedding.h"
#include "edda/error.h"
#include "edda/experiment.h"
#include "edda/parallel.h"
#include "edda/random.h"
#include "edda/tagger.h"

namespace edda::cli {
namespace {

namespace fs = std::filesystem;

// "*" as --tag means any token with a known tag.
constexpr std::string_view kAnyTag = "*";

struct Options {
  // Shared, settable from --config.
  std::string embeddings;
  std::string stopwords;
  std::string lexicon;
  uint64_t seed = 0;
  double alpha = 0.2;
  size_t n_aug = 1;
  size_t top_k = 10;
  std::string ops = "RSR,RI,RS,RD";
  std::string mode = "per-op";
  std::string augment_labels;
  double min_similarity = 0.0;
  size_t workers = 1;
  double delta = kDefaultDelta;
  std::string tag = "NOUN";
  size_t n = 1;
  std::string fractions;
  std::string techniques = "baseline,EDDA,TSSR,RSR";
  size_t epochs = 20;
  double lambda = 1e-4;
  double test_fraction = 0.2;

  // Subcommand-specific.
  std::string input;
  std::string output;
  std::string input_format;
  std::string output_format;
  std::string technique = "edda";
  bool variants_only = false;
  bool drop_noops = false;
  std::string pretagged;
  std::string word;
  size_t k = 10;
  std::string augmented;
  std::string original;
  std::string precomputed;
  std::string train;
  std::string test;
  std::string deviation_output;
};

[[noreturn]] void Usage(const std::string& message) {
  throw Error(ErrorCode::kInvalidConfig, message);
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    std::string item = text.substr(start, end - start);
    item.erase(0, item.find_first_not_of(' '));
    item.erase(item.find_last_not_of(' ') + 1);
    if (!item.empty()) out.push_back(std::move(item));
    start = end + 1;
  }
  return out;
}

DatasetFormat ResolveFormat(const std::string& flag, const std::string& path) {
  if (flag == "tsv") return DatasetFormat::kTsv;
  if (flag == "jsonl") return DatasetFormat::kJsonl;
  if (!flag.empty()) Usage("unknown format '" + flag + "'");
  if (auto format = FormatFromPath(path)) return *format;
  Usage("cannot infer the format of '" + path + "'; pass a format flag");
}

AugmentationConfig MakeAugmentationConfig(const Options& o) {
  AugmentationConfig config;
  config.alpha = o.alpha;
  config.n_aug = o.n_aug;
  config.top_k = o.top_k;
  config.seed = o.seed;
  config.min_similarity = o.min_similarity;
  config.enabled_ops.clear();
  for (const std::string& name : SplitList(o.ops)) {
    auto op = ParseOp(name);
    if (!op) Usage("unknown op '" + name + "'");
    config.enabled_ops.insert(*op);
  }
  if (o.mode == "per-op") {
    config.mode = EddaMode::kPerOp;
  } else if (o.mode == "composed") {
    config.mode = EddaMode::kComposed;
  } else {
    Usage("mode must be per-op or composed");
  }
  const std::vector<std::string> labels = SplitList(o.augment_labels);
  if (!labels.empty()) {
    config.augment_labels = std::set<std::string>(labels.begin(), labels.end());
  }
  config.Validate();
  return config;
}

std::optional<std::string> TagFilter(const Options& o) {
  if (o.tag == kAnyTag) return std::nullopt;
  return o.tag;
}

std::string MetaLine(std::string_view command, const Options& o) {
  std::string line = fmt::format(
      "{}tool=edda version={} command={} seed={} alpha={} n_aug={} top_k={} "
      "ops={} mode={} min_similarity={} augment_labels={} tag={} n={} "
      "delta={}",
      kMetaPrefix, kToolVersion, command, o.seed, o.alpha, o.n_aug, o.top_k,
      o.ops, o.mode, o.min_similarity,
      o.augment_labels.empty() ? "*" : o.augment_labels, o.tag, o.n, o.delta);
  if (!o.embeddings.empty()) {
    line += " embeddings=" + fs::path(o.embeddings).filename().string();
  }
  std::replace(line.begin(), line.end(), '\n', ' ');
  std::replace(line.begin(), line.end(), '\t', ' ');
  return line;
}

void WriteText(const std::string& path, const std::string& text,
               std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::kIoError, "cannot open " + path);
  file << text;
  file.close();
  if (!file) throw Error(ErrorCode::kIoError, "cannot write " + path);
}

struct Resources {
  std::optional<EmbeddingStore> store;
  StopwordSet stopwords;
  std::optional<PosLexicon> lexicon;

  AugmentDeps deps() const {
    return {*store, stopwords, lexicon ? &*lexicon : nullptr};
  }
};

Resources LoadResources(const Options& o, bool need_embeddings) {
  Resources r;
  if (need_embeddings) {
    if (o.embeddings.empty()) Usage("--embeddings is required");
    r.store = LoadEmbeddings(o.embeddings);
  }
  if (!o.stopwords.empty()) r.stopwords = LoadStopwords(o.stopwords);
  if (!o.lexicon.empty()) r.lexicon = LoadLexicon(o.lexicon);
  return r;
}

void WriteAugmentedDataset(
    const Options& o, std::string_view command,
    const std::vector<LabeledRecord>& originals,
    const std::vector<std::vector<AugmentedRecord>>& variants,
    std::ostream& err) {
  std::vector<LabeledRecord> rows;
  if (!o.variants_only) rows = originals;
  size_t total = 0;
  size_t noops = 0;
  for (const auto& group : variants) {
    for (const AugmentedRecord& variant : group) {
      ++total;
      if (variant.noop) ++noops;
      if (variant.noop && o.drop_noops) continue;
      rows.push_back(variant.ToRecord());
    }
  }
  const DatasetFormat format = ResolveFormat(o.output_format, o.output);
  WriteOptions options;
  options.meta_line = MetaLine(command, o);
  if (format == DatasetFormat::kTsv) {
    options.tsv_ids = TsvIdPolicy::kDrop;
    err << "note: TSV output has no id column; variant provenance ids are "
           "dropped\n";
  }
  WriteDataset(rows, o.output, format, options);
  err << fmt::format("{}: {} records, {} variants, {} noops ({:.1f}%)\n",
                     command, originals.size(), total, noops,
                     total == 0 ? 0.0 : 100.0 * noops / total);
}

void RunAugment(const Options& o, std::ostream& err) {
  AugmentationConfig config = MakeAugmentationConfig(o);
  if (o.technique == "rsr") {
    config.enabled_ops = {Op::kRsr};
  } else if (o.technique != "edda") {
    Usage("technique must be edda or rsr");
  }
  if (config.enabled_ops.empty()) Usage("--ops selects no operation");
  const Resources resources = LoadResources(o, true);
  const auto records =
      LoadDataset(o.input, ResolveFormat(o.input_format, o.input));
  const AugmentDeps deps = resources.deps();
  std::vector<std::vector<AugmentedRecord>> variants(records.size());
  ParallelFor(records.size(), o.workers, [&](size_t i) {
    variants[i] = Edda(records[i], deps, config);
  });
  WriteAugmentedDataset(o, "augment", records, variants, err);
}

void RunTssr(const Options& o, std::ostream& err) {
  const AugmentationConfig config = MakeAugmentationConfig(o);
  if (o.n < 1) Usage("--n must be at least 1");
  if (o.input.empty() == o.pretagged.empty()) {
    Usage("tssr needs exactly one of --input and --pretagged");
  }
  const Resources resources = LoadResources(o, true);
  const AugmentDeps deps = resources.deps();

  std::vector<TaggedRecord> tagged;
  std::vector<LabeledRecord> originals;
  if (!o.pretagged.empty()) {
    tagged = ParsePretagged(o.pretagged, &resources.stopwords);
    for (const TaggedRecord& t : tagged) {
      originals.push_back({t.id, t.sentence.raw, t.label});
    }
  } else {
    if (!resources.lexicon) {
      err << "note: no --lexicon given; every token tags as UNK\n";
    }
    originals = LoadDataset(o.input, ResolveFormat(o.input_format, o.input));
    static const PosLexicon kEmpty;
    for (const LabeledRecord& r : originals) {
      tagged.push_back(
          {r.id,
           TagSentence(Tokenize(r.text, &resources.stopwords),
                       resources.lexicon ? *resources.lexicon : kEmpty),
           r.label});
    }
  }
  const std::optional<std::string> tag = TagFilter(o);
  std::vector<std::vector<AugmentedRecord>> variants(tagged.size());
  ParallelFor(tagged.size(), o.workers, [&](size_t i) {
    if (config.ShouldAugment(tagged[i].label)) {
      variants[i] = Tssr(tagged[i], tag, o.n, deps, config);
    }
  });
  WriteAugmentedDataset(o, "tssr", originals, variants, err);
}

void RunNeighbors(const Options& o, std::ostream& out) {
  if (o.word.empty()) Usage("--word is required");
  if (o.k < 1) Usage("--k must be at least 1");
  const Resources resources = LoadResources(o, true);
  std::string text = MetaLine("neighbors", o) + "\n";
  for (const NeighborResult& n : NearestNeighbors(*resources.store, o.word, o.k)) {
    text += fmt::format("{}\t{:.6f}\n", n.word, n.score);
  }
  WriteText(o.output, text, out);
}

void RunDeviation(const Options& o, std::ostream& out) {
  if (o.augmented.empty()) Usage("--augmented is required");
  const Resources resources = LoadResources(o, true);
  const auto augmented =
      LoadDataset(o.augmented, ResolveFormat(o.input_format, o.augmented));

  std::unordered_map<std::string, LabeledRecord> originals;
  if (!o.original.empty()) {
    for (LabeledRecord& r :
         LoadDataset(o.original, ResolveFormat(o.input_format, o.original))) {
      std::string id = r.id;
      originals.emplace(std::move(id), std::move(r));
    }
  } else {
    for (const LabeledRecord& r : augmented) {
      if (!ParseVariantId(r.id)) originals.emplace(r.id, r);
    }
  }
  std::optional<PrecomputedEmbeddings> precomputed;
  if (!o.precomputed.empty()) precomputed = LoadPrecomputed(o.precomputed);

  std::map<std::string, std::vector<DeviationPair>> by_op;
  for (const LabeledRecord& r : augmented) {
    const auto variant = ParseVariantId(r.id);
    if (!variant) continue;
    auto source = originals.find(variant->source_id);
    if (source == originals.end()) {
      throw Error(ErrorCode::kMalformedRow,
                  "variant '" + r.id + "' has no source record");
    }
    by_op[variant->op].push_back({source->second.id,
                                  Tokenize(source->second.text), r.id,
                                  Tokenize(r.text)});
  }

  std::string text = MetaLine("deviation", o) + "\n";
  text += "technique\ttotal_pairs\tbelow_threshold\tunembeddable\tfraction_below\n";
  std::vector<DeviationPair> all;
  auto row = [&](const std::string& name, const std::vector<DeviationPair>& pairs) {
    const DeviationReport report = ComputeDeviationReport(
        pairs, *resources.store, o.delta, precomputed ? &*precomputed : nullptr);
    text += fmt::format("{}\t{}\t{}\t{}\t{:.6f}\n", name, report.total_pairs,
                        report.below_threshold, report.unembeddable,
                        report.fraction_below);
  };
  for (const auto& [op, pairs] : by_op) {
    row(op, pairs);
    all.insert(all.end(), pairs.begin(), pairs.end());
  }
  row("ALL", all);
  WriteText(o.output, text, out);
}

PartitionSpec MakePartitionSpec(const Options& o) {
  PartitionSpec spec;
  spec.seed = o.seed;
  if (!o.fractions.empty()) {
    spec.fractions.clear();
    for (const std::string& item : SplitList(o.fractions)) {
      try {
        size_t used = 0;
        spec.fractions.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::logic_error&) {
        Usage("bad fraction '" + item + "'");
      }
    }
  }
  spec.Validate();
  return spec;
}

void RunPartition(const Options& o, std::ostream& out) {
  const PartitionSpec spec = MakePartitionSpec(o);
  const auto records = LoadDataset(o.input, ResolveFormat(o.input_format, o.input));
  std::string text = MetaLine("partition", o) + "\n" + "fraction\tid\n";
  for (const Partition& p : StratifiedPartitions(records, spec)) {
    for (const std::string& id : p.record_ids) {
      text += fmt::format("{:.2f}\t{}\n", p.fraction, id);
    }
  }
  WriteText(o.output, text, out);
}

void RunExperimentCommand(const Options& o, std::ostream& out,
                          std::ostream& err) {
  ExperimentConfig config;
  config.partitions = MakePartitionSpec(o);
  config.augmentation = MakeAugmentationConfig(o);
  config.techniques.clear();
  for (const std::string& name : SplitList(o.techniques)) {
    auto technique = ParseTechnique(name);
    if (!technique) Usage("unknown technique '" + name + "'");
    config.techniques.push_back(*technique);
  }
  if (config.techniques.empty()) Usage("--techniques selects nothing");
  config.tssr.tag = TagFilter(o);
  config.tssr.n = o.n;
  config.train.epochs = o.epochs;
  config.train.lambda = o.lambda;
  config.train.seed = o.seed;
  config.delta = o.delta;
  config.workers = o.workers;

  const Resources resources = LoadResources(o, true);
  std::vector<LabeledRecord> train =
      LoadDataset(o.train, ResolveFormat(o.input_format, o.train));
  std::vector<LabeledRecord> test;
  if (!o.test.empty()) {
    // Separate files number their TSV rows independently.
    test = LoadDataset(o.test, ResolveFormat(o.input_format, o.test));
    for (LabeledRecord& r : test) r.id = "test:" + r.id;
  } else {
    if (!(o.test_fraction > 0.0 && o.test_fraction < 1.0)) {
      Usage("--test-fraction must lie in (0, 1)");
    }
    PartitionSpec holdout;
    holdout.fractions = {o.test_fraction};
    holdout.seed = SeedDeriver(o.seed).Add("holdout").seed();
    const auto ids = StratifiedPartitions(train, holdout).front().record_ids;
    const std::unordered_set<std::string> test_ids(ids.begin(), ids.end());
    std::vector<LabeledRecord> rest;
    for (LabeledRecord& r : train) {
      (test_ids.contains(r.id) ? test : rest).push_back(std::move(r));
    }
    train = std::move(rest);
  }
  err << fmt::format("experiment: {} train, {} test records\n", train.size(),
                     test.size());

  const ExperimentResult result =
      RunExperiment(train, test, resources.deps(), config);
  WriteText(o.output, MetaLine("experiment", o) + "\n" + ResultsCsv(result),
            out);
  if (!o.deviation_output.empty()) {
    WriteText(o.deviation_output,
              MetaLine("experiment", o) + "\n" + DeviationCsv(result), out);
  }
}

// Config files hand "a,b" over as two values; glue them back together.
CLI::Option* ListOption(CLI::Option* option) {
  return option->delimiter(',')->multi_option_policy(
      CLI::MultiOptionPolicy::Join);
}

}  // namespace

int Dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  Options o;
  CLI::App app{"Distributional text augmentation toolkit", "edda"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.set_config("--config", "", "Flat key=value file; flags win");
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--embeddings", o.embeddings, "word2vec text-format model")
      ->check(CLI::ExistingFile);
  app.add_option("--stopwords", o.stopwords, "Stopword list")
      ->check(CLI::ExistingFile);
  app.add_option("--lexicon", o.lexicon, "POS lexicon (word<TAB>tag)")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", o.seed, "Random seed")->capture_default_str();
  app.add_option("--alpha", o.alpha, "Perturbation rate")->capture_default_str();
  app.add_option("--n-aug", o.n_aug, "Rounds per record")->capture_default_str();
  app.add_option("--top-k", o.top_k, "Neighbor pool size")->capture_default_str();
  ListOption(app.add_option("--ops", o.ops, "Comma list of RSR,RI,RS,RD"))
      ->capture_default_str();
  app.add_option("--mode", o.mode, "per-op or composed")->capture_default_str();
  ListOption(app.add_option("--augment-labels", o.augment_labels,
                            "Comma list of labels to augment (default: all)"));
  app.add_option("--min-similarity", o.min_similarity, "Candidate cosine floor")
      ->capture_default_str();
  app.add_option("--workers", o.workers, "Worker threads")->capture_default_str();
  app.add_option("--delta", o.delta, "Deviation threshold")->capture_default_str();
  app.add_option("--tag", o.tag, "TSSR tag; '*' for any known tag")
      ->capture_default_str();
  app.add_option("--n", o.n, "TSSR variants per record")->capture_default_str();
  ListOption(app.add_option("--fractions", o.fractions,
                            "Comma list of partition fractions (default: deciles)"));
  ListOption(app.add_option("--techniques", o.techniques, "Experiment techniques"))
      ->capture_default_str();
  app.add_option("--epochs", o.epochs, "SVM epochs")->capture_default_str();
  app.add_option("--lambda", o.lambda, "SVM regularization")
      ->capture_default_str();
  app.add_option("--test-fraction", o.test_fraction,
                 "Held-out share when --test is absent")
      ->capture_default_str();

  auto add_io = [&](CLI::App* sub, bool output_required) {
    sub->add_option("--input-format", o.input_format, "tsv or jsonl");
    auto* output = sub->add_option("--output", o.output, "Output path");
    if (output_required) output->required();
  };

  CLI::App* augment = app.add_subcommand("augment", "EDDA or RSR over a dataset");
  augment->add_option("--input", o.input, "Dataset")
      ->required()
      ->check(CLI::ExistingFile);
  add_io(augment, true);
  augment->add_option("--output-format", o.output_format, "tsv or jsonl");
  augment->add_option("--technique", o.technique, "edda or rsr")
      ->capture_default_str();
  augment->add_flag("--variants-only", o.variants_only, "Omit originals");
  augment->add_flag("--drop-noops", o.drop_noops, "Omit noop variants");

  CLI::App* tssr = app.add_subcommand("tssr", "Tag-constrained replacement");
  tssr->add_option("--input", o.input, "Dataset")->check(CLI::ExistingFile);
  tssr->add_option("--pretagged", o.pretagged, "CoNLL-style tagged input")
      ->check(CLI::ExistingFile);
  add_io(tssr, true);
  tssr->add_option("--output-format", o.output_format, "tsv or jsonl");
  tssr->add_flag("--variants-only", o.variants_only, "Omit originals");
  tssr->add_flag("--drop-noops", o.drop_noops, "Omit noop variants");

  CLI::App* neighbors = app.add_subcommand("neighbors", "Nearest neighbors");
  neighbors->add_option("--word", o.word, "Query word")->required();
  neighbors->add_option("--k", o.k, "Result count")->capture_default_str();
  neighbors->add_option("--output", o.output, "Output path (default stdout)");

  CLI::App* deviation = app.add_subcommand("deviation", "Semantic deviation report");
  deviation->add_option("--augmented", o.augmented, "Augmented dataset")
      ->required()
      ->check(CLI::ExistingFile);
  deviation->add_option("--original", o.original, "Source dataset")
      ->check(CLI::ExistingFile);
  deviation->add_option("--precomputed", o.precomputed,
                        "Sentence vectors (id<TAB>f1 ... fD)")
      ->check(CLI::ExistingFile);
  add_io(deviation, false);

  CLI::App* partition = app.add_subcommand("partition", "Nested stratified id lists");
  partition->add_option("--input", o.input, "Dataset")
      ->required()
      ->check(CLI::ExistingFile);
  add_io(partition, false);

  CLI::App* experiment = app.add_subcommand("experiment", "Partition/augment/train/score run");
  experiment->add_option("--train", o.train, "Training dataset")
      ->required()
      ->check(CLI::ExistingFile);
  experiment->add_option("--test", o.test, "Test dataset")
      ->check(CLI::ExistingFile);
  experiment->add_option("--deviation-output", o.deviation_output,
                         "Per-cell deviation CSV");
  add_io(experiment, false);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (augment->parsed()) {
      RunAugment(o, err);
    } else if (tssr->parsed()) {
      RunTssr(o, err);
    } else if (neighbors->parsed()) {
      RunNeighbors(o, out);
    } else if (deviation->parsed()) {
      RunDeviation(o, out);
    } else if (partition->parsed()) {
      RunPartition(o, out);
    } else if (experiment->parsed()) {
      RunExperimentCommand(o, out, err);
    }
  } catch (const Error& e) {
    err << "edda: " << e.what() << "\n";
    if (e.is_usage_error()) {
      err << app.help();
      return kExitUsage;
    }
    return kExitData;
  } catch (const std::exception& e) {
    err << "edda: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace edda::cli
