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

#ifndef EEJOIN_CANDGEN_H_
#define EEJOIN_CANDGEN_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "eejoin/corpus.h"
#include "eejoin/textcore.h"

namespace eejoin {

// Token offsets [start, end) within one document.
struct Span {
  DocId doc_id = 0;
  std::uint32_t start = 0;
  std::uint32_t end = 0;

  std::uint32_t length() const { return end - start; }
  auto operator<=>(const Span &) const = default;
};

struct CandidateSubstring {
  Span span;
  std::span<const TokenId> tokens;  // view into the document body
  std::span<const Weight> weights;
};

// Per-token summary of a dictionary slice: which tokens occur in some entity,
// and the lightest/heaviest entity containing each token.
class TokenTable {
 public:
  TokenTable() = default;
  TokenTable(const Dictionary &dict, EntityRange range);

  void Add(const TokenSet &entity);

  bool Contains(TokenId id) const {
    return id < min_weight_.size() && min_weight_[id] > 0;
  }
  // 0 when the token occurs in no entity of the slice.
  Weight MinEntityWeight(TokenId id) const {
    return id < min_weight_.size() ? min_weight_[id] : 0;
  }
  Weight MaxEntityWeight(TokenId id) const {
    return id < max_weight_.size() ? max_weight_[id] : 0;
  }
  // Distinct tokens of the slice, ascending.
  std::vector<TokenId> Tokens() const;
  std::size_t token_count() const { return token_count_; }

 private:
  // Entity weights are at least one, so 0 can stand for "absent".
  std::vector<Weight> min_weight_;
  std::vector<Weight> max_weight_;
  std::size_t token_count_ = 0;
};

// Cheap in-memory pruning of substrings that cannot match any entity of a
// dictionary slice. Contract: never rejects a substring that some entity
// matches at the filter's threshold under its predicate.
//
// Extra-words: a match with entity e needs w(e ∩ c) >= gamma * w(e), and
// e ∩ c only holds dictionary tokens of c, each of which lies in some entity
// no lighter than its lightest container. So c passes iff the weight of its
// dictionary tokens reaches gamma times the smallest such container weight.
//
// Missing-words: a match needs w(e ∩ c) >= gamma * w(c), so the dictionary
// tokens of c must carry at least gamma of c's weight.
class MentionFilter {
 public:
  MentionFilter(const Dictionary &dict, EntityRange range,
                const SimilarityThreshold &gamma, Predicate predicate);

  const TokenTable &table() const { return table_; }
  const SimilarityThreshold &gamma() const { return gamma_; }
  Predicate predicate() const { return predicate_; }

  bool ContainsToken(TokenId id) const { return table_.Contains(id); }

  // gamma * max w(e) over slice entities containing the token; 0 if absent.
  Ratio PerTokenMaxEntityThreshold(TokenId id) const;
  // gamma * min w(e) over slice entities containing the token; 0 if absent.
  Ratio PerTokenMinEntityThreshold(TokenId id) const;

 private:
  TokenTable table_;
  SimilarityThreshold gamma_;
  Predicate predicate_;
};

MentionFilter BuildFilter(const Dictionary &dict,
                          const SimilarityThreshold &gamma,
                          Predicate predicate = Predicate::kExtra);

// Applies the filter's test at threshold `gamma` (which may differ from the
// build threshold; pass sets shrink as gamma grows).
bool ApplyFilter(const MentionFilter &filter, const CandidateSubstring &c,
                 const SimilarityThreshold &gamma);

// All spans of length 1..max_length in (start, length) order.
std::vector<CandidateSubstring> EnumerateSubstrings(const Document &doc,
                                                    std::size_t max_length);

// Number of spans EnumerateSubstrings yields.
std::size_t SubstringCount(std::size_t doc_length, std::size_t max_length);

// Calls fn(span, token set) for every span of length <= max_length that the
// filter passes (every span when filter is null), in (start, length) order.
// Spans with no dictionary token are skipped without being materialized.
void ForEachCandidate(const Document &doc, std::size_t max_length,
                      const MentionFilter *filter,
                      const std::function<void(const Span &, const TokenSet &)> &fn);

}  // namespace eejoin

#endif  // EEJOIN_CANDGEN_H_
