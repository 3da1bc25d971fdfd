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

// Acceptance suite. Prints one "ACCEPTANCE <name>: PASS|FAIL ..." line per
// criterion and exits non-zero if any criterion fails.

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "edda/augment.h"
#include "edda/cli.h"
#include "edda/corpus.h"
#include "edda/deviation.h"
#include "edda/embedding.h"
#include "edda/experiment.h"
#include "edda/tagger.h"
#include "oracles.h"
#include "synthetic.h"

namespace edda {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool pass = true;
  std::string detail;

  // Records the first failure only; later ones rarely add information.
  void Check(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Budget rule restated: max(1, round half up of alpha * eligible).
size_t ExpectedBudget(double alpha, size_t eligible) {
  const double scaled = std::floor(alpha * double(eligible) + 0.5);
  return scaled < 1.0 ? 1 : size_t(scaled);
}

bool AsciiWord(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalpha(c) != 0;
  });
}

std::vector<std::string> Sorted(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  return v;
}

Outcome EditCountSuite() {
  Outcome o;
  const auto start = Clock::now();
  testing::SyntheticWorld world(101);
  std::mt19937_64 gen(1);
  std::vector<Sentence> sentences;
  for (size_t i = 0; i < 1000; ++i) {
    std::string text = world.Sentence(i % 2, 1 + i % 40);
    // Unknown words and inner punctuation exercise the eligibility rules.
    if (i % 7 == 3) text += " qqqx , zzzy";
    sentences.push_back(Tokenize(text, &world.stopwords()));
  }
  size_t checked = 0;
  for (double alpha : {0.1, 0.2, 0.5}) {
    AugmentationConfig config;
    config.alpha = alpha;
    for (size_t i = 0; i < sentences.size(); ++i) {
      const Sentence& s = sentences[i];
      size_t words = 0;
      size_t eligible = 0;
      for (const Token& t : s.tokens) {
        words += !IsPunctuation(t.surface);
        eligible += AsciiWord(t.surface) &&
                    !world.stopwords().contains(t.surface) &&
                    world.store().Resolve(t).has_value();
      }
      const std::string where = fmt::format("alpha={} sentence={}", alpha, i);

      Rng r1(gen());
      const OpResult rs = Rs(s, config, r1);
      o.Check(Sorted(rs.sentence.surfaces()) == Sorted(s.surfaces()),
              "RS multiset changed at " + where);
      o.Check(rs.edits.size() == (words >= 2 ? ExpectedBudget(alpha, words) : 0),
              "RS swap count at " + where);

      Rng r2(gen());
      const OpResult rd = Rd(s, config, r2);
      const size_t deletions =
          words >= 2 ? std::min(ExpectedBudget(alpha, words), words - 1) : 0;
      o.Check(rd.edits.size() == deletions, "RD edit count at " + where);
      o.Check(rd.sentence.tokens.size() == s.tokens.size() - deletions,
              "RD length at " + where);

      Rng r3(gen());
      const OpResult ri = Ri(s, world.store(), world.stopwords(), config, r3);
      const size_t inserts = eligible > 0 ? ExpectedBudget(alpha, eligible) : 0;
      o.Check(ri.edits.size() == inserts, "RI edit count at " + where);
      o.Check(ri.sentence.tokens.size() == s.tokens.size() + inserts,
              "RI length at " + where);

      Rng r4(gen());
      const OpResult rsr = Rsr(s, world.store(), world.stopwords(), config, r4);
      size_t replaced = 0;
      for (size_t p = 0; p < s.tokens.size(); ++p) {
        replaced += rsr.sentence.tokens[p].surface != s.tokens[p].surface;
      }
      const size_t replacements = eligible > 0 ? ExpectedBudget(alpha, eligible) : 0;
      o.Check(rsr.sentence.tokens.size() == s.tokens.size() && replaced == replacements,
              "RSR replacement count at " + where);
      ++checked;
    }
  }
  const double elapsed = Seconds(start);
  o.Check(elapsed < 10.0, fmt::format("took {:.2f}s", elapsed));
  if (o.pass) o.detail = fmt::format("{} sentence/alpha cases x 4 ops, {:.2f}s", checked, elapsed);
  return o;
}

Outcome KnnOracle() {
  Outcome o;
  const auto start = Clock::now();
  std::mt19937_64 gen(2);
  size_t queries = 0;
  for (uint64_t store_index = 0; store_index < 50; ++store_index) {
    const size_t vocab = 2 + gen() % 199;
    const size_t dim = 1 + gen() % 16;
    const auto raw = testing::RandomRawStore(gen(), vocab, dim);
    const EmbeddingStore store = testing::ToStore(raw);
    for (const std::string& query : raw.words) {
      for (size_t k : {1u, 5u, 50u}) {
        const auto expected = oracle::BruteForceNeighbors(raw, query, k);
        const auto actual = NearestNeighbors(store, query, k);
        bool same = actual.size() == expected.size();
        for (size_t i = 0; same && i < actual.size(); ++i) {
          same = actual[i].word == expected[i].first &&
                 std::abs(actual[i].score - expected[i].second) <= 1e-9;
        }
        o.Check(same, fmt::format("store {} query {} k {}", store_index, query, k));
        ++queries;
      }
    }
  }
  const double elapsed = Seconds(start);
  o.Check(elapsed < 10.0, fmt::format("took {:.2f}s", elapsed));
  if (o.pass) o.detail = fmt::format("50 stores, {} queries, {:.2f}s", queries, elapsed);
  return o;
}

Outcome TssrContract() {
  Outcome o;
  testing::SyntheticWorld world(103);
  const AugmentDeps deps{world.store(), world.stopwords(), &world.lexicon()};
  AugmentationConfig config;
  config.seed = 5;
  const std::vector<std::optional<std::string>> tags = {
      std::string("NOUN"), std::string("VERB"), std::string("ADJ"), std::nullopt};
  size_t variants = 0;
  size_t noops = 0;
  for (size_t i = 0; i < 500; ++i) {
    const TaggedRecord record{
        "s" + std::to_string(i),
        TagSentence(Tokenize(world.Sentence(i % 2, 1 + i % 12), &world.stopwords()),
                    world.lexicon()),
        world.labels()[i % 2]};
    const auto& tag = tags[i % tags.size()];
    const size_t n = 1 + i % 5;
    const auto out = Tssr(record, tag, n, deps, config);
    o.Check(out.size() == n, "variant count for " + record.id);
    for (const AugmentedRecord& v : out) {
      ++variants;
      if (v.noop) {
        ++noops;
        o.Check(v.text == record.sentence.raw, "noop text changed in " + v.id());
        continue;
      }
      const Sentence after = Tokenize(v.text);
      const auto& before = record.sentence.tokens;
      if (after.tokens.size() != before.size()) {
        o.Check(false, "token count changed in " + v.id());
        continue;
      }
      std::vector<size_t> diff;
      for (size_t p = 0; p < before.size(); ++p) {
        if (after.tokens[p].surface != before[p].surface) diff.push_back(p);
      }
      o.Check(diff.size() == 1, "not exactly one token changed in " + v.id());
      if (diff.size() == 1) {
        const std::string& carried = *before[diff[0]].pos_tag;
        o.Check(tag ? carried == *tag : carried != kUnknownTag,
                "replaced token tagged " + carried + " in " + v.id());
      }
    }
  }
  if (o.pass) o.detail = fmt::format("500 sentences, {} variants, {} noops", variants, noops);
  return o;
}

struct ResourceFiles {
  std::string vec;
  std::string stop;
  std::string lexicon;
  std::string data;
};

ResourceFiles WriteResources(testing::SyntheticWorld& world, const fs::path& dir,
                             size_t records) {
  ResourceFiles f{(dir / "w.vec").string(), (dir / "stop.txt").string(),
                  (dir / "lex.tsv").string(), (dir / "data.jsonl").string()};
  auto write = [](const std::string& path, const std::string& text) {
    std::ofstream(path, std::ios::binary) << text;
  };
  write(f.vec, world.VecFile());
  write(f.stop, world.StopwordFile());
  write(f.lexicon, world.LexiconFile());
  WriteDataset(world.Dataset(records), f.data, DatasetFormat::kJsonl);
  return f;
}

Outcome Determinism(const fs::path& dir) {
  Outcome o;
  testing::SyntheticWorld world(104);
  const ResourceFiles f = WriteResources(world, dir, 300);
  auto run = [&](const std::string& tag, const std::string& workers) {
    const std::string results = (dir / ("r" + tag + ".csv")).string();
    const std::string deviation = (dir / ("d" + tag + ".csv")).string();
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::Dispatch(
        {"--embeddings", f.vec, "--stopwords", f.stop, "--lexicon", f.lexicon,
         "--seed", "42", "--workers", workers, "experiment", "--train", f.data,
         "--output", results, "--deviation-output", deviation},
        out, err);
    o.Check(code == 0, "experiment exited " + std::to_string(code) + ": " + err.str());
    // Each file: provenance line, header, 40 cells.
    return ReadFile(results) + "\n--\n" + ReadFile(deviation);
  };
  const std::string first = run("1", "1");
  const std::string second = run("2", "1");
  const std::string parallel = run("3", "4");
  o.Check(first == second, "two runs with one worker differ");
  o.Check(first == parallel, "one worker and four workers differ");
  o.Check(std::count(first.begin(), first.end(), '\n') == 2 * 42 + 2,
          "unexpected table size");
  if (o.pass) o.detail = "300 records, 40 cells, runs with 1, 1 and 4 workers byte-identical";
  return o;
}

std::vector<DeviationPair> VariantPairs(const std::vector<LabeledRecord>& records,
                                        const std::vector<AugmentedRecord>& variants) {
  std::map<std::string, const LabeledRecord*> by_id;
  for (const auto& r : records) by_id[r.id] = &r;
  std::vector<DeviationPair> pairs;
  for (const AugmentedRecord& v : variants) {
    if (v.noop) continue;
    const LabeledRecord& source = *by_id.at(v.source_id);
    pairs.push_back({source.id, Tokenize(source.text), v.id(), Tokenize(v.text)});
  }
  return pairs;
}

Outcome DevictionBehavior() {
  Outcome o;
  testing::SyntheticWorld world(105);
  for (size_t i = 0; i < 50; ++i) {
    const auto e = EmbedSentence(world.store(), Tokenize(world.Sentence(i % 2, 1 + i)));
    o.Check(Deviction(e, e, 0.9).verdict == Verdict::kSimilar,
            "identical sentence not similar");
  }
  const SentenceEmbedding a{{1.0, 0.0}, 1};
  const SentenceEmbedding b{{0.9, std::sqrt(1.0 - 0.81)}, 1};
  const DeviationVerdict edge = Deviction(a, b, 0.9);
  o.Check(edge.similarity == 0.9 && edge.verdict == Verdict::kSimilar,
          fmt::format("boundary similarity {:.17g} not similar", edge.similarity));
  o.Check(Deviction(a, b, std::nextafter(0.9, 1.0)).verdict == Verdict::kDissimilar,
          "just above the boundary still similar");

  const AugmentDeps deps{world.store(), world.stopwords(), nullptr};
  const auto records = world.Dataset(50, 3, 12);
  const AugmentedPartition augmented =
      AugmentPartition(records, Technique::kEdda, deps, AugmentationConfig{});
  std::vector<DeviationPair> pairs;
  for (const AugmentedRecord& v : augmented.variants) {
    const LabeledRecord& source = records[std::stoul(v.source_id.substr(1))];
    pairs.push_back({source.id, Tokenize(source.text), v.id(), Tokenize(v.text)});
  }
  o.Check(pairs.size() == 200, fmt::format("{} pairs instead of 200", pairs.size()));
  double previous = -1.0;
  for (int step = 0; step <= 100; ++step) {
    const double delta = -1.0 + 0.02 * step;
    const double f = ComputeDeviationReport(pairs, world.store(), delta).fraction_below;
    o.Check(f >= previous, fmt::format("fraction_below fell at delta {}", delta));
    previous = f;
  }
  if (o.pass) o.detail = "identity, closed boundary, monotone over 101 thresholds on 200 pairs";
  return o;
}

Outcome DirectionalContrast() {
  Outcome o;
  const auto start = Clock::now();
  testing::SyntheticWorld world(106);
  o.Check(world.store().size() >= 50, "vocabulary below 50");
  const AugmentDeps deps{world.store(), world.stopwords(), &world.lexicon()};
  const auto records = world.Dataset(200);
  AugmentationConfig config;
  config.seed = 9;
  const auto edda = AugmentPartition(records, Technique::kEdda, deps, config);
  const auto tssr = AugmentPartition(records, Technique::kTssr, deps, config);
  const DeviationReport e =
      ComputeDeviationReport(VariantPairs(records, edda.variants), world.store(), 0.9);
  const DeviationReport t =
      ComputeDeviationReport(VariantPairs(records, tssr.variants), world.store(), 0.9);
  const double elapsed = Seconds(start);
  o.Check(t.fraction_below <= e.fraction_below,
          fmt::format("TSSR {:.4f} above EDDA {:.4f}", t.fraction_below, e.fraction_below));
  o.Check(elapsed < 30.0, fmt::format("took {:.2f}s", elapsed));
  if (o.pass) {
    o.detail = fmt::format("TSSR {:.4f} ({} pairs) vs EDDA {:.4f} ({} pairs), {}, {:.2f}s",
                           t.fraction_below, t.total_pairs, e.fraction_below,
                           e.total_pairs,
                           t.fraction_below < e.fraction_below ? "strict" : "tie",
                           elapsed);
  }
  return o;
}

Outcome F1Oracle() {
  Outcome o;
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 100; ++trial) {
    const size_t n = 1 + gen() % 1000;
    const size_t k = 1 + gen() % 5;
    std::vector<std::string> pred(n);
    std::vector<std::string> gold(n);
    for (size_t i = 0; i < n; ++i) {
      gold[i] = "class" + std::to_string(gen() % k);
      pred[i] = gen() % 2 == 0 ? gold[i] : "class" + std::to_string(gen() % k);
    }
    const auto expected = oracle::ConfusionOracle(pred, gold);
    const EvalResult actual = F1Scores(pred, gold);
    bool same = actual.classes == expected.classes &&
                actual.macro_f1 == expected.macro_f1 &&
                actual.weighted_f1 == expected.weighted_f1;
    for (size_t i = 0; same && i < actual.classes.size(); ++i) {
      same = actual.per_class[i].f1 == expected.f1.at(actual.classes[i]);
      for (size_t j = 0; same && j < actual.classes.size(); ++j) {
        same = actual.confusion[i][j] ==
               expected.counts.at({actual.classes[i], actual.classes[j]});
      }
    }
    o.Check(same, fmt::format("trial {} (n={}, k={})", trial, n, k));
  }
  if (o.pass) o.detail = "100 random vectors, exact";
  return o;
}

Outcome HarnessSanity() {
  Outcome o;
  testing::SyntheticWorld world(107);
  const AugmentDeps deps{world.store(), world.stopwords(), &world.lexicon()};
  const auto all = world.Dataset(600);
  const std::vector<LabeledRecord> train(all.begin(), all.begin() + 400);
  const std::vector<LabeledRecord> test(all.begin() + 400, all.end());
  ExperimentConfig config;
  config.partitions.fractions = {0.1, 1.0};
  config.partitions.seed = 3;
  config.augmentation.seed = 3;
  config.train.seed = 3;
  config.workers = 4;
  const ExperimentResult result = RunExperiment(train, test, deps, config);
  auto cell = [&](double fraction, Technique technique) {
    for (const ExperimentCell& c : result.cells) {
      if (c.fraction == fraction && c.technique == technique) return c;
    }
    throw std::logic_error("missing cell");
  };
  const double full = cell(1.0, Technique::kBaseline).macro_f1;
  const double low = cell(0.1, Technique::kBaseline).macro_f1;
  o.Check(full >= 0.95, fmt::format("baseline at 1.0 scored {:.4f}", full));
  std::string arms;
  for (Technique t : {Technique::kEdda, Technique::kTssr, Technique::kRsr}) {
    const double f = cell(0.1, t).macro_f1;
    o.Check(f >= low - 0.05, fmt::format("{} at 0.1 scored {:.4f} vs baseline {:.4f}",
                                         TechniqueName(t), f, low));
    arms += fmt::format(", {}@0.1 {:.4f}", TechniqueName(t), f);
  }
  if (o.pass) {
    o.detail = fmt::format("baseline@1.0 {:.4f}, baseline@0.1 {:.4f}{}", full, low, arms);
  }
  return o;
}

int Main() {
  const fs::path dir = fs::temp_directory_path() / "edda_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"edit_count_suite", EditCountSuite},
      {"knn_oracle", KnnOracle},
      {"tssr_contract", TssrContract},
      {"determinism", [&] { return Determinism(dir); }},
      {"deviction_behavior", DevictionBehavior},
      {"directional_deviation_contrast", DirectionalContrast},
      {"f1_oracle", F1Oracle},
      {"harness_sanity", HarnessSanity},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome outcome;
    try {
      outcome = run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    failures += !outcome.pass;
    fmt::print("ACCEPTANCE {}: {} ({})\n", name, outcome.pass ? "PASS" : "FAIL",
               outcome.detail);
  }
  fs::remove_all(dir);
  fmt::print("ACCEPTANCE summary: {}/{} passed\n", criteria.size() - failures,
             criteria.size());
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace edda

int main() { return edda::Main(); }
