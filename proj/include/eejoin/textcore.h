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

#ifndef EEJOIN_TEXTCORE_H_
#define EEJOIN_TEXTCORE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "eejoin/rational.h"

namespace eejoin {

using TokenId = std::uint32_t;
using Weight = std::int64_t;

struct Token {
  std::string text;
  TokenId id = 0;
};

// Interns normalized token text into dense ids. Ids are assigned in first-seen
// order, so loading the same files in the same order yields the same ids.
class TokenDictionary {
 public:
  TokenId Intern(std::string_view text);

  // Returns false if the text was never interned.
  bool Find(std::string_view text, TokenId *id) const;

  const std::string &Text(TokenId id) const { return texts_.at(id); }
  std::size_t size() const { return texts_.size(); }

 private:
  std::unordered_map<std::string, TokenId> ids_;
  std::vector<std::string> texts_;
};

// An ordered token sequence with one non-negative integer weight per position.
// total_weight() is the exact sum over positions (repeats included); set-level
// weights live in TokenSet.
class WeightedTokenSeq {
 public:
  WeightedTokenSeq() = default;

  // Unit weights.
  explicit WeightedTokenSeq(std::vector<TokenId> tokens);
  WeightedTokenSeq(std::vector<TokenId> tokens, std::vector<Weight> weights);

  std::span<const TokenId> tokens() const { return tokens_; }
  std::span<const Weight> weights() const { return weights_; }
  Weight total_weight() const { return total_; }
  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }

  void Append(TokenId token, Weight weight);

  bool operator==(const WeightedTokenSeq &other) const = default;

 private:
  std::vector<TokenId> tokens_;
  std::vector<Weight> weights_;
  Weight total_ = 0;
};

// Canonical token set: ascending ids, no duplicates.
using TokenSetKey = std::vector<TokenId>;

struct TokenSetKeyHash {
  std::size_t operator()(const TokenSetKey &key) const noexcept;
};

// Distinct tokens of a sequence sorted by id, each carrying the weight of its
// first occurrence. All similarity functions operate on this view.
class TokenSet {
 public:
  TokenSet() = default;
  explicit TokenSet(const WeightedTokenSeq &seq);
  TokenSet(std::span<const TokenId> tokens, std::span<const Weight> weights);

  std::span<const TokenId> ids() const { return ids_; }
  std::span<const Weight> weights() const { return weights_; }
  Weight total_weight() const { return total_; }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }

  // Weight of a token in this set, or 0 when absent.
  Weight WeightOf(TokenId id) const;

  TokenSetKey Key() const { return ids_; }

  bool operator==(const TokenSet &other) const = default;

 private:
  std::vector<TokenId> ids_;
  std::vector<Weight> weights_;
  Weight total_ = 0;
};

// w(a ∩ b), weighted by a's weights.
Weight IntersectionWeight(const TokenSet &a, const TokenSet &b);

// Weight of a key's tokens within s; tokens of the key missing from s count 0.
Weight KeyWeight(const TokenSetKey &key, const TokenSet &s);

// Threshold gamma with 0 < gamma <= 1.
class SimilarityThreshold {
 public:
  explicit SimilarityThreshold(Ratio gamma);
  static SimilarityThreshold Parse(std::string_view text);

  const Ratio &value() const { return gamma_; }

  // part >= gamma * whole, exactly.
  bool Reached(Weight part, Weight whole) const {
    return ReachesFraction(part, whole, gamma_);
  }
  bool Reached(const Ratio &score) const { return score >= gamma_; }

  bool operator==(const SimilarityThreshold &other) const = default;

 private:
  Ratio gamma_;
};

// Which side of a pair the containment denominator is taken from.
enum class Predicate {
  kExtra,    // w(e ∩ s) / w(e): extra words in the mention are tolerated
  kMissing,  // w(e ∩ s) / w(s): missing words in the mention are tolerated
};

const char *PredicateName(Predicate p);
Predicate ParsePredicate(std::string_view name);

// w(a ∩ b) / w(a ∪ b). Throws DataError if both are empty.
Ratio JaccardSimilarity(const TokenSet &a, const TokenSet &b);
Ratio JaccardSimilarity(const WeightedTokenSeq &a, const WeightedTokenSeq &b);

// w(e ∩ s) / w(s). Throws DataError if s is empty.
Ratio JaccardContainmentMissing(const TokenSet &e, const TokenSet &s);
Ratio JaccardContainmentMissing(const WeightedTokenSeq &e,
                                const WeightedTokenSeq &s);

// w(e ∩ s) / w(e). Throws DataError if e is empty.
Ratio JaccardContainmentExtra(const TokenSet &e, const TokenSet &s);
Ratio JaccardContainmentExtra(const WeightedTokenSeq &e,
                              const WeightedTokenSeq &s);

// Score of entity e against mention s under a predicate.
Ratio ContainmentScore(Predicate predicate, const TokenSet &e,
                       const TokenSet &s);

// Unreduced numerator and denominator of the predicate's score.
struct ContainmentTerms {
  Weight overlap = 0;
  Weight whole = 0;
};
ContainmentTerms Containment(Predicate predicate, const TokenSet &e, const TokenSet &s);

// True iff the predicate's score reaches gamma, without forming the ratio.
bool Matches(Predicate predicate, const TokenSet &e, const TokenSet &s,
             const SimilarityThreshold &gamma);

inline constexpr std::size_t kDefaultVariantCap = 4096;

// Every token subset k of s with w(k) >= gamma * w(s), as canonical keys in
// ascending lexicographic order. The full set is always included. Throws
// VariantExplosion when more than `cap` variants exist.
std::vector<TokenSetKey> GenerateJaccardVariants(
    const TokenSet &s, const SimilarityThreshold &gamma,
    std::size_t cap = kDefaultVariantCap);
std::vector<TokenSetKey> GenerateJaccardVariants(
    const WeightedTokenSeq &s, const SimilarityThreshold &gamma,
    std::size_t cap = kDefaultVariantCap);

// Splits on Unicode whitespace and on punctuation that is not embedded between
// two alphanumeric characters, then lowercases with simple case folding.
std::vector<std::string> SplitTokens(std::string_view text);

// SplitTokens + interning, with unit weights.
WeightedTokenSeq Tokenize(std::string_view text, TokenDictionary &dict);

enum class WeightingScheme { kUnit, kIdf };

const char *WeightingSchemeName(WeightingScheme s);
WeightingScheme ParseWeightingScheme(std::string_view name);

// How many dictionary entities contain each token.
struct EntityFrequencyTable {
  std::int64_t entity_count = 0;
  std::unordered_map<TokenId, std::int64_t> frequency;
};

struct WeightingOptions {
  WeightingScheme scheme = WeightingScheme::kUnit;
  // IDF weights are round(idf_scale * ln(N / n_t)), floored at 1.
  std::int64_t idf_scale = 10;
  // Weight for tokens that occur in no entity.
  Weight default_weight = 1;
};

// Token -> weight table. A token's weight depends only on the token, so every
// occurrence in entities and documents agrees.
class TokenWeights {
 public:
  TokenWeights() = default;
  TokenWeights(const WeightingOptions &options,
               const EntityFrequencyTable &stats);

  Weight Of(TokenId id) const;
  const WeightingOptions &options() const { return options_; }

 private:
  WeightingOptions options_;
  std::unordered_map<TokenId, Weight> weights_;
};

WeightedTokenSeq AssignWeights(const WeightedTokenSeq &seq,
                               const TokenWeights &weights);
WeightedTokenSeq AssignWeights(const WeightedTokenSeq &seq,
                               WeightingScheme scheme,
                               const EntityFrequencyTable &stats,
                               const WeightingOptions &options = {});

}  // namespace eejoin

#endif  // EEJOIN_TEXTCORE_H_
