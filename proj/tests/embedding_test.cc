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

#include "edda/embedding.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.h"
#include "synthetic.h"
#include "test_util.h"

namespace edda {
namespace {

using testing::MiniStore;
using testing::TempDir;

TEST(LoadEmbeddings, ReadsFixture) {
  const EmbeddingStore& store = MiniStore();
  EXPECT_EQ(store.size(), 5u);
  EXPECT_EQ(store.dim(), 3u);
  EXPECT_EQ(store.words(),
            (std::vector<std::string>{"katt", "hund", "fisk", "bil", "båt"}));
  for (size_t i = 0; i < store.size(); ++i) {
    EXPECT_NEAR(Dot(store.Row(i), store.Row(i)), 1.0, 1e-12);
  }
}

TEST(LoadEmbeddings, ToleratesCarriageReturnsAndBlankLines) {
  TempDir dir;
  const auto path = dir.Write("e.vec", "2 2\r\nab 1 0 \r\n\nbc 0 2\r\n");
  const EmbeddingStore store = LoadEmbeddings(path);
  EXPECT_EQ(store.size(), 2u);
  EXPECT_DOUBLE_EQ(store.Row("bc")[1], 1.0);
}

TEST(LoadEmbeddings, RejectsBadInput) {
  TempDir dir;
  EXPECT_EDDA_ERROR(LoadEmbeddings(dir / "missing.vec"), ErrorCode::kIoError);
  EXPECT_EDDA_ERROR(
      LoadEmbeddings(dir.Write("a", "5 3\nx 1 0 0\ny 0 1 0\nz 0 0 1\nw 1 1 1\n")),
      ErrorCode::kHeaderMismatch);
  EXPECT_EDDA_ERROR(LoadEmbeddings(dir.Write("b", "1 3\nx 1 0\n")),
                    ErrorCode::kHeaderMismatch);
  EXPECT_EDDA_ERROR(LoadEmbeddings(dir.Write("c", "three 3\n")),
                    ErrorCode::kHeaderMismatch);
  EXPECT_EDDA_ERROR(LoadEmbeddings(dir.Write("d", "1 2\nx 0 0\n")),
                    ErrorCode::kZeroVector);
  EXPECT_EDDA_ERROR(LoadEmbeddings(dir.Write("e", "1 2\nx nan 1\n")),
                    ErrorCode::kNonFiniteValue);
  EXPECT_EDDA_ERROR(LoadEmbeddings(dir.Write("f", "1 2\nx inf 1\n")),
                    ErrorCode::kNonFiniteValue);
  EXPECT_EDDA_ERROR(LoadEmbeddings(dir.Write("g", "2 2\nx 1 0\nx 0 1\n")),
                    ErrorCode::kDuplicateWord);
}

TEST(Cosine, MatchesHandComputedValues) {
  EXPECT_NEAR(Cosine(MiniStore(), "katt", "hund"), 0.9986178293325098, 1e-12);
  EXPECT_NEAR(Cosine(MiniStore(), "bil", "båt"), 0.9949371890224981, 1e-12);
  EXPECT_DOUBLE_EQ(Cosine(MiniStore(), "katt", "fisk"), 0.0);
  EXPECT_EDDA_ERROR(Cosine(MiniStore(), "katt", "zebra"),
                    ErrorCode::kOutOfVocabulary);
}

TEST(NearestNeighbors, FixtureOrdering) {
  const auto katt = NearestNeighbors(MiniStore(), "katt", 2);
  ASSERT_EQ(katt.size(), 2u);
  EXPECT_EQ(katt[0].word, "hund");
  EXPECT_NEAR(katt[0].score, 0.9986178293325098, 1e-12);
  // Zero-score tie broken by byte order.
  EXPECT_EQ(katt[1].word, "bil");

  const auto hund = NearestNeighbors(MiniStore(), "hund", 10);
  ASSERT_EQ(hund.size(), 4u);
  EXPECT_EQ(hund[0].word, "katt");
  EXPECT_EQ(hund[1].word, "fisk");
  EXPECT_NEAR(hund[1].score, 0.052558833122763673, 1e-12);
  EXPECT_EQ(hund[2].word, "båt");
  EXPECT_NEAR(hund[2].score, 0.005282094715703541, 1e-12);
  EXPECT_EQ(hund[3].word, "bil");

  const auto bil = NearestNeighbors(MiniStore(), "bil", 1);
  ASSERT_EQ(bil.size(), 1u);
  EXPECT_EQ(bil[0].word, "båt");
}

TEST(NearestNeighbors, ExclusionsAndCaseVariants) {
  const EmbeddingStore store = EmbeddingStore::FromRows(
      {"Katt", "katt", "KATT", "hund", "mus"},
      {{1, 0}, {1, 0.01}, {1, 0.02}, {1, 0.5}, {0, 1}});
  const auto result = NearestNeighbors(store, "katt", 5);
  ASSERT_EQ(result.size(), 2u);
  EXPECT_EQ(result[0].word, "hund");
  EXPECT_EQ(result[1].word, "mus");
  const auto excluded = NearestNeighbors(store, "katt", 5, {"hund"});
  ASSERT_EQ(excluded.size(), 1u);
  EXPECT_EQ(excluded[0].word, "mus");
  EXPECT_EDDA_ERROR(NearestNeighbors(store, "katt", 0), ErrorCode::kInvalidConfig);
  EXPECT_EDDA_ERROR(NearestNeighbors(store, "zebra", 3),
                    ErrorCode::kOutOfVocabulary);
}

TEST(NearestNeighbors, MatchesBruteForceOnRandomStores) {
  for (uint64_t seed = 0; seed < 12; ++seed) {
    const auto raw = testing::RandomRawStore(seed, 40 + seed * 7, 2 + seed % 6);
    const EmbeddingStore store = testing::ToStore(raw);
    for (const std::string& query : {raw.words[0], raw.words[5], raw.words[17]}) {
      for (size_t k : {1u, 5u, 50u}) {
        const auto expected = oracle::BruteForceNeighbors(raw, query, k);
        const auto actual = NearestNeighbors(store, query, k);
        ASSERT_EQ(actual.size(), expected.size()) << query << " k=" << k;
        for (size_t i = 0; i < actual.size(); ++i) {
          EXPECT_EQ(actual[i].word, expected[i].first);
          EXPECT_NEAR(actual[i].score, expected[i].second, 1e-9);
        }
      }
    }
  }
}

TEST(NearestNeighbors, ScoresAreSortedAndBounded) {
  const auto raw = testing::RandomRawStore(99, 150, 9);
  const EmbeddingStore store = testing::ToStore(raw);
  for (const auto& word : store.words()) {
    const auto result = NearestNeighbors(store, word, 20);
    for (size_t i = 0; i < result.size(); ++i) {
      EXPECT_LE(result[i].score, 1.0 + 1e-12);
      EXPECT_GE(result[i].score, -1.0 - 1e-12);
      EXPECT_NE(FoldCase(result[i].word), FoldCase(word));
      if (i > 0) {
        EXPECT_TRUE(result[i - 1].score > result[i].score ||
                    (result[i - 1].score == result[i].score &&
                     result[i - 1].word < result[i].word));
      }
    }
  }
}

TEST(EmbedSentence, NormalizedMeanOfCoveredRows) {
  const Sentence s = Tokenize("katt hund zebra !");
  const SentenceEmbedding e = EmbedSentence(MiniStore(), s);
  EXPECT_EQ(e.covered_tokens, 2u);
  ASSERT_EQ(e.vector.size(), 3u);
  EXPECT_NEAR(e.vector[0], 0.9996543976126223, 1e-12);
  EXPECT_NEAR(e.vector[1], 0.026288501930409568, 1e-12);
  EXPECT_NEAR(e.vector[2], 0.0, 1e-12);
}

TEST(EmbedSentence, FallsBackToFoldedForm) {
  const SentenceEmbedding e = EmbedSentence(MiniStore(), Tokenize("KATT"));
  EXPECT_EQ(e.covered_tokens, 1u);
  EXPECT_EQ(e.vector, std::vector<double>(MiniStore().Row("katt").begin(),
                                          MiniStore().Row("katt").end()));
}

TEST(EmbedSentence, EmptyCoverageThrows) {
  EXPECT_EDDA_ERROR(EmbedSentence(MiniStore(), Tokenize("zebra giraff")),
                    ErrorCode::kEmptyEmbedding);
  EXPECT_EDDA_ERROR(EmbedSentence(MiniStore(), Tokenize("")),
                    ErrorCode::kEmptyEmbedding);
}

// Token order never changes the pooled vector, and the result matches an
// independently computed normalized mean.
TEST(EmbedSentence, OrderInvariantAndMatchesOracle) {
  testing::SyntheticWorld world(7);
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::string text = world.Sentence(trial % 2, 1 + trial % 25);
    Sentence s = Tokenize(text);
    const SentenceEmbedding base = EmbedSentence(world.store(), s);

    std::vector<std::vector<double>> rows;
    for (const Token& t : s.tokens) {
      const auto idx = world.store().Resolve(t);
      if (!idx) continue;
      rows.push_back(world.raw().rows[*idx]);
    }
    const auto expected = oracle::MeanOfRows(rows);
    for (size_t d = 0; d < expected.size(); ++d) {
      EXPECT_NEAR(base.vector[d], expected[d], 1e-9);
    }

    std::shuffle(s.tokens.begin(), s.tokens.end(), gen);
    EXPECT_EQ(EmbedSentence(world.store(), s).vector, base.vector);
  }
}

}  // namespace
}  // namespace edda
