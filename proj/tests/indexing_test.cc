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


#include "eejoin/indexing.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "eejoin/error.h"
#include "support/synthetic.h"

namespace eejoin {
namespace {

constexpr IndexScheme kSchemes[] = {IndexScheme::kPerWord, IndexScheme::kPrefix,
                                    IndexScheme::kJaccardVariant};

Entity MakeEntity(EntityId id, WeightedTokenSeq surface) {
  Entity e;
  e.id = id;
  e.surface = std::move(surface);
  e.set = TokenSet(e.surface);
  return e;
}

TEST(EntityIndexTest, PerWordPostingsPerDistinctToken) {
  MatchOptions match(SimilarityThreshold(Ratio(1, 2)));
  EntityIndex index(IndexScheme::kPerWord, match);
  index.Add(MakeEntity(1, WeightedTokenSeq({4, 2, 4})));
  index.Add(MakeEntity(2, WeightedTokenSeq({2, 9})));
  EXPECT_EQ(index.key_count(), 3u);
  EXPECT_EQ(index.posting_count(), 4u);
  ASSERT_NE(index.Postings({2}), nullptr);
  EXPECT_EQ(*index.Postings({2}), (std::vector<EntityId>{1, 2}));
  EXPECT_EQ(index.Postings({3}), nullptr);
  EXPECT_EQ(index.size_bytes(), 3 * kBytesPerKey + 4 * kBytesPerPosting);
}

TEST(EntityIndexTest, VariantPostingsAreDefinitionTwoKeys) {
  MatchOptions match(SimilarityThreshold(Ratio(3, 4)));
  EntityIndex index(IndexScheme::kJaccardVariant, match);
  auto e = MakeEntity(7, WeightedTokenSeq({0, 1, 2, 3}, {1, 8, 2, 1}));
  index.Add(e);
  auto variants = GenerateJaccardVariants(e.set, match.gamma);
  std::set<TokenSetKey> keys;
  for (const auto &p : index.SortedPostings()) {
    keys.insert(p.key);
    EXPECT_EQ(p.entity_ids, std::vector<EntityId>{7});
  }
  EXPECT_EQ(keys, std::set<TokenSetKey>(variants.begin(), variants.end()));
}

TEST(EntityIndexTest, WorkedExampleLookup) {
  TokenDictionary tokens;
  auto e2 = MakeEntity(2, Tokenize("Apple iPhone 4 Black or White 32G AT&T", tokens));
  SimilarityThreshold gamma(Ratio(1, 4));
  MatchOptions match(gamma, Predicate::kMissing);
  for (IndexScheme scheme : kSchemes) {
    EntityIndex index(scheme, match);
    index.Add(e2);
    auto hits = index.Lookup(TokenSet(Tokenize("iPhone 4", tokens)), gamma);
    ASSERT_EQ(hits.size(), 1u) << IndexSchemeName(scheme);
    EXPECT_EQ(hits[0], (IndexHit{2, Ratio(1)}));
    EXPECT_TRUE(index.Lookup(TokenSet(Tokenize("galaxy tab", tokens)), gamma).empty());
    EXPECT_THROW(index.Lookup(TokenSet(Tokenize("iPhone", tokens)),
                              SimilarityThreshold(Ratio(1, 2))),
                 Error);
    EXPECT_THROW(index.Lookup(TokenSet(), gamma), Error);
  }
}

TEST(EntityIndexTest, SchemesAgreeWithPairwiseOracle) {
  std::mt19937_64 rng(31);
  for (Predicate predicate : {Predicate::kExtra, Predicate::kMissing}) {
    for (Ratio g : {Ratio(1, 2), Ratio(3, 4), Ratio(1)}) {
      SimilarityThreshold gamma(g);
      std::vector<Entity> entities;
      std::set<TokenSetKey> seen;
      std::unordered_map<TokenId, std::int64_t> freq;
      while (entities.size() < 50) {
        WeightedTokenSeq seq;
        int n = std::uniform_int_distribution<int>(1, 5)(rng);
        for (int i = 0; i < n; ++i) {
          TokenId t = std::uniform_int_distribution<TokenId>(0, 24)(rng);
          seq.Append(t, 1 + t % 4);
        }
        auto e = MakeEntity(100 + static_cast<EntityId>(entities.size()), seq);
        if (!seen.insert(e.set.Key()).second) continue;
        for (TokenId t : e.set.ids()) ++freq[t];
        entities.push_back(e);
      }
      MatchOptions match(gamma, predicate);
      match.order = std::make_shared<TokenOrder>(freq);
      std::vector<EntityIndex> indexes;
      for (IndexScheme scheme : kSchemes) {
        indexes.emplace_back(scheme, match);
        for (const auto &e : entities) indexes.back().Add(e);
      }
      for (int probe_no = 0; probe_no < 200; ++probe_no) {
        WeightedTokenSeq seq;
        int n = std::uniform_int_distribution<int>(1, 6)(rng);
        for (int i = 0; i < n; ++i) {
          TokenId t = std::uniform_int_distribution<TokenId>(0, 29)(rng);
          seq.Append(t, 1 + t % 4);
        }
        TokenSet probe(seq);
        std::vector<IndexHit> expected;
        for (const auto &e : entities) {
          if (Matches(predicate, e.set, probe, gamma)) {
            expected.push_back({e.id, ContainmentScore(predicate, e.set, probe)});
          }
        }
        for (const auto &index : indexes) {
          EXPECT_EQ(index.Lookup(probe, gamma), expected)
              << IndexSchemeName(index.scheme()) << " " << PredicateName(predicate);
        }
      }
    }
  }
}

testing::SyntheticCorpus Synthetic(int entities) {
  testing::SyntheticOptions o;
  o.seed = 41;
  o.vocabulary = 2000;
  o.entities = entities;
  o.docs = 1;
  return testing::MakeSyntheticCorpus(o);
}

TEST(BuildIndexTest, LargeBudgetIsOnePartition) {
  auto corpus = Synthetic(4);
  MatchOptions match(SimilarityThreshold(Ratio(3, 4)));
  auto parts = BuildIndex(corpus.dict, corpus.dict.all(), IndexScheme::kPerWord, match,
                          std::int64_t{1} << 30);
  ASSERT_EQ(parts.size(), 1u);
  EXPECT_EQ(parts[0].range, corpus.dict.all());
  EXPECT_EQ(parts[0].index.entity_count(), 4u);
}

TEST(BuildIndexTest, HalfBudgetSplitsIntoCoveringPartitions) {
  auto corpus = Synthetic(1000);
  MatchOptions match(SimilarityThreshold(Ratio(3, 4)));
  for (IndexScheme scheme : kSchemes) {
    const std::int64_t total = EstimateFootprint(corpus.dict, corpus.dict.all(), scheme, match);
    std::int64_t largest = 0;
    for (const auto &e : corpus.dict.entities()) {
      largest = std::max(largest, EntityFootprint(e, scheme, match));
    }
    auto parts = BuildIndex(corpus.dict, corpus.dict.all(), scheme, match,
                            (total + 1) / 2 + largest);
    EXPECT_EQ(parts.size(), 2u);
    parts = BuildIndex(corpus.dict, corpus.dict.all(), scheme, match, (total + 1) / 2);
    EXPECT_GE(parts.size(), 2u);
    EXPECT_LE(parts.size(), 3u);
    std::size_t next = 0;
    std::size_t entities = 0;
    for (const auto &p : parts) {
      EXPECT_EQ(p.range.begin, next);
      EXPECT_FALSE(p.range.empty());
      EXPECT_LE(p.index.size_bytes(), (total + 1) / 2);
      EXPECT_EQ(p.index.entity_count(), p.range.size());
      next = p.range.end;
      entities += p.index.entity_count();
    }
    EXPECT_EQ(next, corpus.dict.size());
    EXPECT_EQ(entities, corpus.dict.size());
  }
}

TEST(BuildIndexTest, OversizedEntityIsAnError) {
  auto corpus = Synthetic(10);
  MatchOptions match(SimilarityThreshold(Ratio(3, 4)));
  try {
    BuildIndex(corpus.dict, corpus.dict.all(), IndexScheme::kPerWord, match, 10);
    FAIL();
  } catch (const Error &e) {
    EXPECT_NE(std::string(e.what()).find("exceeds memory budget"), std::string::npos);
  }
}

TEST(FootprintTest, EstimateBoundsBuiltSize) {
  auto corpus = Synthetic(100);
  MatchOptions match(SimilarityThreshold(Ratio(3, 4)));
  EXPECT_EQ(EstimateFootprint(corpus.dict, {0, 0}, IndexScheme::kPerWord, match), 0);
  const Entity &first = corpus.dict.ordered(0);
  EXPECT_EQ(EstimateFootprint(corpus.dict, {0, 1}, IndexScheme::kPerWord, match),
            static_cast<std::int64_t>(first.set.size()) * (kBytesPerKey + kBytesPerPosting));
  for (IndexScheme scheme : kSchemes) {
    auto parts = BuildIndex(corpus.dict, corpus.dict.all(), scheme, match, std::int64_t{1} << 40);
    ASSERT_EQ(parts.size(), 1u);
    EXPECT_GE(10 * EstimateFootprint(corpus.dict, corpus.dict.all(), scheme, match),
              9 * parts[0].index.size_bytes());
  }
}

TEST(IndexFileTest, SaveLoadRoundTrips) {
  auto corpus = Synthetic(200);
  MatchOptions match(SimilarityThreshold(Ratio(3, 4)));
  for (IndexScheme scheme : kSchemes) {
    EntityIndex index(scheme, match);
    for (const auto &e : corpus.dict.entities()) index.Add(e);
    std::stringstream buffer;
    index.Save(buffer);
    EXPECT_EQ(buffer.str().rfind("ee-index v1", 0), 0u);
    auto loaded = EntityIndex::Load(buffer, match);
    EXPECT_TRUE(loaded.SamePostings(index));
    loaded.AttachEntities(corpus.dict);
    const TokenSet &probe = corpus.dict.entities()[5].set;
    EXPECT_EQ(loaded.Lookup(probe, match.gamma), index.Lookup(probe, match.gamma));
    std::stringstream again;
    loaded.Save(again);
    EXPECT_EQ(again.str(), buffer.str());
  }
  std::istringstream bad("ee-index v9\n");
  EXPECT_THROW(EntityIndex::Load(bad, match), Error);
}

TEST(IndexSchemeTest, Names) {
  for (IndexScheme s : kSchemes) EXPECT_EQ(ParseIndexScheme(IndexSchemeName(s)), s);
  EXPECT_EQ(IndexSchemeFor(SignatureKind::kPrefix), IndexScheme::kPrefix);
  EXPECT_THROW(IndexSchemeFor(SignatureKind::kLsh), Error);
}

}  // namespace
}  // namespace eejoin
