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


#include "eejoin/signatures.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "eejoin/error.h"

namespace eejoin {
namespace {

std::set<std::string> Sigs(const TokenSet &item, const SignatureScheme &scheme, Side side,
                           const MatchOptions &match) {
  auto v = SignaturesOf(item, scheme, side, match);
  return {v.begin(), v.end()};
}

SignatureScheme Kind(SignatureKind k) {
  SignatureScheme s;
  s.kind = k;
  return s;
}

TEST(SignaturesTest, SingleWordOnePerDistinctToken) {
  TokenDictionary tokens;
  TokenSet s(Tokenize("iPhone 4 iPhone", tokens));
  MatchOptions match(SimilarityThreshold(Ratio(3, 4)));
  EXPECT_EQ(Sigs(s, Kind(SignatureKind::kSingleWord), Side::kProbe, match).size(), 2u);
  EXPECT_EQ(Sigs(s, Kind(SignatureKind::kSingleWord), Side::kEntity, match).size(), 2u);
}

TEST(SignaturesTest, VariantSignaturesAreDefinitionTwoKeys) {
  TokenSet e(WeightedTokenSeq({0, 1, 2, 3}, {1, 8, 2, 1}));
  MatchOptions match(SimilarityThreshold(Ratio(3, 4)));
  auto keys = EntityKeys(SignatureKind::kJaccardVariant, e, match);
  auto expected = GenerateJaccardVariants(e, match.gamma);
  EXPECT_EQ(std::set<TokenSetKey>(keys.begin(), keys.end()),
            std::set<TokenSetKey>(expected.begin(), expected.end()));
  EXPECT_EQ(keys.size(), 7u);
  EXPECT_EQ(Sigs(e, Kind(SignatureKind::kJaccardVariant), Side::kEntity, match).size(), 7u);
  // A probe may carry extra words, so without a token table every non-empty
  // subset of it is a potential entity intersection.
  EXPECT_EQ(Sigs(e, Kind(SignatureKind::kJaccardVariant), Side::kProbe, match).size(), 15u);
}

TEST(PrefixTest, ShortestPrefixExceedingSlack) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 500; ++trial) {
    WeightedTokenSeq seq;
    std::unordered_map<TokenId, std::int64_t> freq;
    int n = std::uniform_int_distribution<int>(1, 10)(rng);
    for (int i = 0; i < n; ++i) {
      TokenId t = std::uniform_int_distribution<TokenId>(0, 30)(rng);
      seq.Append(t, std::uniform_int_distribution<Weight>(1, 9)(rng));
      freq[t] = std::uniform_int_distribution<int>(1, 5)(rng);
    }
    TokenSet s(seq);
    TokenOrder order(freq);
    std::int64_t den = std::uniform_int_distribution<std::int64_t>(1, 10)(rng);
    SimilarityThreshold gamma(Ratio(std::uniform_int_distribution<std::int64_t>(1, den)(rng), den));
    // Rare-first order, ties by token id.
    std::vector<std::pair<std::int64_t, TokenId>> sorted;
    for (TokenId t : s.ids()) sorted.push_back({freq[t], t});
    std::sort(sorted.begin(), sorted.end());
    std::vector<TokenId> expected;
    Weight acc = 0;
    for (const auto &[f, t] : sorted) {
      expected.push_back(t);
      acc += s.WeightOf(t);
      // acc > (1 - gamma) * total
      if (Ratio(acc, s.total_weight()) > Ratio(1) - gamma.value()) break;
    }
    EXPECT_EQ(PrefixTokens(s, order, gamma), expected);
  }
}

TEST(TokenOrderTest, DirectionAndFingerprint) {
  TokenOrder rare({{1, 5}, {2, 1}, {3, 5}});
  EXPECT_TRUE(rare.Less(2, 1));
  EXPECT_TRUE(rare.Less(1, 3));
  TokenOrder frequent({{1, 5}, {2, 1}, {3, 5}}, TokenOrderDirection::kFrequentFirst);
  EXPECT_TRUE(frequent.Less(1, 2));
  EXPECT_NE(rare.Fingerprint(), frequent.Fingerprint());
  EXPECT_EQ(rare.Fingerprint(), TokenOrder({{3, 5}, {2, 1}, {1, 5}}).Fingerprint());
}

// Weights are a function of the token, as after AssignWeights.
TokenSet RandomSet(std::mt19937_64 &rng, int max_len, int vocab) {
  WeightedTokenSeq seq;
  int n = std::uniform_int_distribution<int>(1, max_len)(rng);
  for (int i = 0; i < n; ++i) {
    TokenId t = std::uniform_int_distribution<TokenId>(0, vocab - 1)(rng);
    seq.Append(t, 1 + (t * 31) % 7);
  }
  return TokenSet(seq);
}

TEST(SignatureCompletenessTest, MatchingPairsShareASignature) {
  std::mt19937_64 rng(19);
  int matching = 0;
  for (Predicate p : {Predicate::kExtra, Predicate::kMissing}) {
    for (int trial = 0; trial < 3000; ++trial) {
      TokenSet e = RandomSet(rng, 6, 10);
      TokenSet s = RandomSet(rng, 6, 10);
      std::int64_t den = std::uniform_int_distribution<std::int64_t>(2, 10)(rng);
      SimilarityThreshold gamma(
          Ratio(std::uniform_int_distribution<std::int64_t>(den / 2, den)(rng), den));
      MatchOptions match(gamma, p);
      std::unordered_map<TokenId, std::int64_t> freq;
      for (TokenId t = 0; t < 10; ++t) freq[t] = (t * 13) % 5;
      match.order = std::make_shared<TokenOrder>(freq);
      if (!Matches(p, e, s, gamma)) continue;
      ++matching;
      for (auto kind : {SignatureKind::kSingleWord, SignatureKind::kPrefix,
                        SignatureKind::kJaccardVariant}) {
        auto a = Sigs(e, Kind(kind), Side::kEntity, match);
        auto b = Sigs(s, Kind(kind), Side::kProbe, match);
        std::vector<std::string> shared;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                              std::back_inserter(shared));
        EXPECT_FALSE(shared.empty()) << SignatureKindName(kind) << " " << PredicateName(p);
      }
    }
  }
  EXPECT_GT(matching, 500);
}

TEST(LshTest, CollisionRateMatchesClosedForm) {
  // 18 shared tokens and one private token per side: similarity 18/20.
  SignatureScheme scheme = Kind(SignatureKind::kLsh);
  scheme.lsh_bands = 8;
  scheme.lsh_rows = 4;
  MatchOptions match(SimilarityThreshold(Ratio(9, 10)));
  const int trials = 1000;
  int collisions = 0;
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<TokenId> a, b;
    const TokenId base = trial * 100;
    for (TokenId i = 0; i < 18; ++i) {
      a.push_back(base + i);
      b.push_back(base + i);
    }
    a.push_back(base + 50);
    b.push_back(base + 51);
    TokenSet x{WeightedTokenSeq(a)}, y{WeightedTokenSeq(b)};
    ASSERT_EQ(JaccardSimilarity(x, y), Ratio(9, 10));
    auto sx = Sigs(x, scheme, Side::kEntity, match);
    auto sy = Sigs(y, scheme, Side::kProbe, match);
    EXPECT_EQ(sx.size(), 8u);
    std::vector<std::string> shared;
    std::set_intersection(sx.begin(), sx.end(), sy.begin(), sy.end(),
                          std::back_inserter(shared));
    collisions += !shared.empty();
  }
  const double expected = 1 - std::pow(1 - std::pow(0.9, 4), 8);
  EXPECT_NEAR(expected, 0.9998, 1e-4);
  EXPECT_NEAR(static_cast<double>(collisions) / trials, expected, 0.02);
}

TEST(LshTest, DeterministicPerSeed) {
  TokenSet x{WeightedTokenSeq({1, 2, 3, 4, 5})};
  SignatureScheme scheme = Kind(SignatureKind::kLsh);
  EXPECT_EQ(LshBands(x, scheme), LshBands(x, scheme));
  EXPECT_EQ(LshBands(x, scheme).size(), 16u);
  SignatureScheme other = scheme;
  other.seed = 7;
  EXPECT_NE(LshBands(x, scheme), LshBands(x, other));
}

TEST(SchemeTest, ValidationAndNames) {
  SignatureScheme bad = Kind(SignatureKind::kLsh);
  bad.lsh_rows = 0;
  EXPECT_THROW(ValidateScheme(bad), Error);
  for (auto k : {SignatureKind::kSingleWord, SignatureKind::kPrefix, SignatureKind::kLsh,
                 SignatureKind::kJaccardVariant}) {
    EXPECT_EQ(ParseSignatureKind(SignatureKindName(k)), k);
  }
  EXPECT_THROW(ParseSignatureKind("minhash"), Error);
}

TEST(SignatureCountTest, AgreesWithSignatures) {
  std::mt19937_64 rng(23);
  MatchOptions match(SimilarityThreshold(Ratio(2, 3)));
  for (int trial = 0; trial < 200; ++trial) {
    TokenSet e = RandomSet(rng, 8, 40);
    for (auto kind : {SignatureKind::kSingleWord, SignatureKind::kPrefix, SignatureKind::kLsh,
                      SignatureKind::kJaccardVariant}) {
      EXPECT_EQ(EntitySignatureCount(e, Kind(kind), match),
                SignaturesOf(e, Kind(kind), Side::kEntity, match).size());
    }
  }
}

}  // namespace
}  // namespace eejoin
