// Copyright 2026 The EE-Join Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "eejoin/oracle.h"

#include <gtest/gtest.h>

#include "eejoin/error.h"
#include "support/synthetic.h"

namespace eejoin {
namespace {

struct Row {
  std::uint32_t start, end;
  Ratio e1, e2;  // extra-words containment of E1 and E2
};

// Doc tokens: the(0) iphone(1) 4(2) is(3) great(4). E1 has 2 tokens, E2 has 8.
const Row kTable[] = {
    {0, 1, Ratio(0), Ratio(0)},       {0, 2, Ratio(1, 2), Ratio(1, 8)},
    {0, 3, Ratio(1, 2), Ratio(1, 4)}, {0, 4, Ratio(1, 2), Ratio(1, 4)},
    {0, 5, Ratio(1, 2), Ratio(1, 4)}, {1, 2, Ratio(1, 2), Ratio(1, 8)},
    {1, 3, Ratio(1, 2), Ratio(1, 4)}, {1, 4, Ratio(1, 2), Ratio(1, 4)},
    {1, 5, Ratio(1, 2), Ratio(1, 4)}, {2, 3, Ratio(0), Ratio(1, 8)},
    {2, 4, Ratio(0), Ratio(1, 8)},    {2, 5, Ratio(0), Ratio(1, 8)},
    {3, 4, Ratio(0), Ratio(0)},       {3, 5, Ratio(0), Ratio(0)},
    {4, 5, Ratio(0), Ratio(0)},
};

class WorkedTableTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::vector<Entity> entities(2);
    entities[0].id = 1;
    entities[0].surface = Tokenize("iPhone Charger", tokens_);
    entities[1].id = 2;
    entities[1].surface = Tokenize("Apple iPhone 4 Black or White 32G AT&T", tokens_);
    dict_ = Dictionary::Build(entities);
    docs_.resize(1);
    docs_[0].id = 3;
    docs_[0].body = Tokenize("the iPhone 4 is great", tokens_);
  }
  TokenDictionary tokens_;
  Dictionary dict_;
  std::vector<Document> docs_;
};

TEST_F(WorkedTableTest, ExtraWordsScoresMatchHandTable) {
  for (Ratio g : {Ratio(1), Ratio(1, 2), Ratio(1, 4), Ratio(1, 8)}) {
    std::vector<Mention> expected;
    for (const Row &row : kTable) {
      Span span{3, row.start, row.end};
      if (row.e1 >= g) expected.push_back({1, span, row.e1});
      if (row.e2 >= g) expected.push_back({2, span, row.e2});
    }
    CanonicalizeMentions(expected);
    auto result = BruteForceExtract(dict_, docs_, OracleOptions(SimilarityThreshold(g)));
    EXPECT_EQ(result.mentions, expected) << "gamma " << g;
    EXPECT_EQ(result.pair_comparisons, 30);
  }
  // At full containment neither entity lies inside any span.
  EXPECT_TRUE(
      BruteForceExtract(dict_, docs_, OracleOptions(SimilarityThreshold(Ratio(1)))).mentions.empty());
}

TEST_F(WorkedTableTest, MissingWordsAtFullThreshold) {
  auto result = BruteForceExtract(
      dict_, docs_, OracleOptions(SimilarityThreshold(Ratio(1)), Predicate::kMissing));
  std::vector<Mention> expected = {{1, {3, 1, 2}, Ratio(1)},
                                   {2, {3, 1, 2}, Ratio(1)},
                                   {2, {3, 1, 3}, Ratio(1)},
                                   {2, {3, 2, 3}, Ratio(1)}};
  CanonicalizeMentions(expected);
  EXPECT_EQ(result.mentions, expected);
}

TEST_F(WorkedTableTest, TinyThresholdMatchesAnySharedToken) {
  auto result = BruteForceExtract(dict_, docs_, OracleOptions(SimilarityThreshold(Ratio(1, 100))));
  std::size_t expected = 0;
  for (const Row &row : kTable) expected += (row.e1 > 0) + (row.e2 > 0);
  EXPECT_EQ(result.mentions.size(), expected);
}

TEST(OracleTest, EmptyDictionaryAndPairCap) {
  auto corpus = testing::MakeSyntheticCorpus({.seed = 3, .entities = 30, .docs = 5});
  OracleOptions options(SimilarityThreshold(Ratio(3, 4)));
  EXPECT_TRUE(BruteForceExtract(Dictionary(), corpus.docs, options).mentions.empty());
  options.pair_cap = 10;
  try {
    BruteForceExtract(corpus.dict, corpus.docs, options);
    FAIL();
  } catch (const Error &e) {
    EXPECT_NE(std::string(e.what()).find("smaller"), std::string::npos) << e.what();
  }
}

TEST(OracleTest, ParallelEqualsSerial) {
  for (int seed = 1; seed <= 4; ++seed) {
    auto corpus = testing::MakeSyntheticCorpus(
        {.seed = static_cast<std::uint64_t>(seed), .entities = 100, .docs = 40});
    for (Predicate p : {Predicate::kExtra, Predicate::kMissing}) {
      OracleOptions options(SimilarityThreshold(Ratio(2, 3)), p);
      auto serial = BruteForceExtractSerial(corpus.dict, corpus.docs, options);
      options.workers = 4;
      auto parallel = BruteForceExtractParallel(corpus.dict, corpus.docs, options);
      EXPECT_EQ(parallel.mentions, serial.mentions);
      EXPECT_EQ(parallel.pair_comparisons, serial.pair_comparisons);
      EXPECT_FALSE(serial.mentions.empty());
      for (std::size_t i = 1; i < serial.mentions.size(); ++i) {
        EXPECT_TRUE(MentionLess(serial.mentions[i - 1], serial.mentions[i]));
      }
    }
  }
}

}  // namespace
}  // namespace eejoin
