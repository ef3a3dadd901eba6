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

#ifndef EEJOIN_SIGNATURES_H_
#define EEJOIN_SIGNATURES_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "eejoin/candgen.h"
#include "eejoin/textcore.h"

namespace eejoin {

enum class SignatureKind { kSingleWord, kPrefix, kLsh, kJaccardVariant };

const char *SignatureKindName(SignatureKind kind);
SignatureKind ParseSignatureKind(std::string_view name);

struct SignatureScheme {
  SignatureKind kind = SignatureKind::kSingleWord;
  int lsh_bands = 16;
  int lsh_rows = 4;
  std::uint64_t seed = 42;

  bool operator==(const SignatureScheme &) const = default;
};

// Throws UsageError when LSH parameters are not positive.
void ValidateScheme(const SignatureScheme &scheme);

enum class TokenOrderDirection { kRareFirst, kFrequentFirst };

// Global token order used by prefix filtering: ascending occurrence frequency
// (rarest first) by default, ties broken by token id. Tokens absent from the
// frequency table count as frequency zero.
class TokenOrder {
 public:
  TokenOrder() = default;
  TokenOrder(std::unordered_map<TokenId, std::int64_t> frequency,
             TokenOrderDirection direction = TokenOrderDirection::kRareFirst);

  bool Less(TokenId a, TokenId b) const;

  // Positions of s's tokens sorted by this order.
  std::vector<std::size_t> Sort(const TokenSet &s) const;

  TokenOrderDirection direction() const { return direction_; }

  // Stable fingerprint of (direction, frequency table).
  std::uint64_t Fingerprint() const;

 private:
  std::int64_t Frequency(TokenId id) const;

  std::unordered_map<TokenId, std::int64_t> frequency_;
  TokenOrderDirection direction_ = TokenOrderDirection::kRareFirst;
};

// The shortest order-prefix of s whose weight exceeds (1 - gamma) * w(s).
// Any t with w(s ∩ t) >= gamma * w(s) shares at least one prefix token.
std::vector<TokenId> PrefixTokens(const TokenSet &s, const TokenOrder &order,
                                  const SimilarityThreshold &gamma);

// Matching configuration shared by indexes, signatures and plans.
struct MatchOptions {
  explicit MatchOptions(SimilarityThreshold g,
                        Predicate p = Predicate::kExtra)
      : gamma(g), predicate(p) {}

  SimilarityThreshold gamma;
  Predicate predicate = Predicate::kExtra;
  std::size_t variant_cap = kDefaultVariantCap;
  std::shared_ptr<const TokenOrder> order = std::make_shared<TokenOrder>();
};

enum class Side { kEntity, kProbe };

// Token-set keys for the deterministic schemes (single-word, prefix,
// Jaccard-variant). With the extra-words predicate the entity carries the
// threshold; with the missing-words predicate the probe does:
//
//   single word      entity: every token           probe: every token
//   prefix (extra)   entity: its prefix            probe: every token
//   prefix (missing) entity: every token           probe: its prefix
//   variant (extra)  entity: Jaccard variants      probe: subsets
//   variant (missing) entity: all subsets          probe: Jaccard variants
//
// A shared key implies a match for the variant scheme, and every match shares
// at least one key for all three schemes.
std::vector<TokenSetKey> EntityKeys(SignatureKind kind, const TokenSet &entity,
                                    const MatchOptions &match);

// Probe keys consider only tokens present in `table` when it is given. For
// variant keys under the extra-words predicate, the table also prunes subsets
// too light to be a variant of any entity containing all of their tokens.
std::vector<TokenSetKey> ProbeKeys(SignatureKind kind, const TokenSet &probe,
                                   const MatchOptions &match,
                                   const TokenTable *table);

// b band hashes of r min-hashes each over the token set, in band order.
std::vector<std::uint64_t> LshBands(const TokenSet &s, const SignatureScheme &scheme);

// Routing signatures as byte strings, sorted and duplicate-free.
std::vector<std::string> SignaturesOf(const TokenSet &item,
                                      const SignatureScheme &scheme, Side side,
                                      const MatchOptions &match,
                                      const TokenTable *table = nullptr);

// Number of entity-side signatures, as used by the cost model.
std::size_t EntitySignatureCount(const TokenSet &entity,
                                 const SignatureScheme &scheme,
                                 const MatchOptions &match);

std::uint64_t SplitMix64(std::uint64_t x);

}  // namespace eejoin

#endif  // EEJOIN_SIGNATURES_H_
