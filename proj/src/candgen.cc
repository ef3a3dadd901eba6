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

#include "eejoin/candgen.h"

#include <algorithm>
#include <limits>

namespace eejoin {

TokenTable::TokenTable(const Dictionary &dict, EntityRange range) {
  for (std::size_t p = range.begin; p < range.end; ++p) Add(dict.ordered(p).set);
}

void TokenTable::Add(const TokenSet &entity) {
  if (entity.empty()) return;
  TokenId max_id = entity.ids().back();
  if (max_id >= min_weight_.size()) {
    min_weight_.resize(max_id + 1, 0);
    max_weight_.resize(max_id + 1, 0);
  }
  Weight w = std::max<Weight>(entity.total_weight(), 1);
  for (TokenId id : entity.ids()) {
    if (min_weight_[id] == 0) {
      ++token_count_;
      min_weight_[id] = w;
      max_weight_[id] = w;
    } else {
      min_weight_[id] = std::min(min_weight_[id], w);
      max_weight_[id] = std::max(max_weight_[id], w);
    }
  }
}

std::vector<TokenId> TokenTable::Tokens() const {
  std::vector<TokenId> out;
  out.reserve(token_count_);
  for (TokenId id = 0; id < min_weight_.size(); ++id) {
    if (min_weight_[id] > 0) out.push_back(id);
  }
  return out;
}

MentionFilter::MentionFilter(const Dictionary &dict, EntityRange range,
                             const SimilarityThreshold &gamma,
                             Predicate predicate)
    : table_(dict, range), gamma_(gamma), predicate_(predicate) {}

Ratio MentionFilter::PerTokenMaxEntityThreshold(TokenId id) const {
  return gamma_.value() * table_.MaxEntityWeight(id);
}

Ratio MentionFilter::PerTokenMinEntityThreshold(TokenId id) const {
  return gamma_.value() * table_.MinEntityWeight(id);
}

MentionFilter BuildFilter(const Dictionary &dict,
                          const SimilarityThreshold &gamma,
                          Predicate predicate) {
  return MentionFilter(dict, dict.all(), gamma, predicate);
}

namespace {

// Running totals over the distinct tokens of a growing span.
struct SpanAccumulator {
  std::vector<TokenId> seen;
  Weight total = 0;
  Weight dictionary = 0;
  Weight min_container = std::numeric_limits<Weight>::max();

  void Reset() {
    seen.clear();
    total = dictionary = 0;
    min_container = std::numeric_limits<Weight>::max();
  }

  void Add(const TokenTable &table, TokenId id, Weight w) {
    if (std::find(seen.begin(), seen.end(), id) != seen.end()) return;
    seen.push_back(id);
    total += w;
    Weight container = table.MinEntityWeight(id);
    if (container > 0) {
      dictionary += w;
      min_container = std::min(min_container, container);
    }
  }

  bool Passes(Predicate predicate, const SimilarityThreshold &gamma) const {
    if (min_container == std::numeric_limits<Weight>::max()) return false;
    if (predicate == Predicate::kExtra) {
      return gamma.Reached(dictionary, min_container);
    }
    return total > 0 && gamma.Reached(dictionary, total);
  }
};

}  // namespace

bool ApplyFilter(const MentionFilter &filter, const CandidateSubstring &c,
                 const SimilarityThreshold &gamma) {
  SpanAccumulator acc;
  for (std::size_t i = 0; i < c.tokens.size(); ++i) {
    acc.Add(filter.table(), c.tokens[i], c.weights[i]);
  }
  return acc.Passes(filter.predicate(), gamma);
}

std::size_t SubstringCount(std::size_t n, std::size_t max_length) {
  std::size_t count = 0;
  for (std::size_t len = 1; len <= max_length && len <= n; ++len) {
    count += n - len + 1;
  }
  return count;
}

std::vector<CandidateSubstring> EnumerateSubstrings(const Document &doc,
                                                    std::size_t max_length) {
  std::vector<CandidateSubstring> out;
  auto tokens = doc.body.tokens();
  auto weights = doc.body.weights();
  out.reserve(SubstringCount(tokens.size(), max_length));
  for (std::size_t start = 0; start < tokens.size(); ++start) {
    for (std::size_t len = 1; len <= max_length && start + len <= tokens.size();
         ++len) {
      CandidateSubstring c;
      c.span = {doc.id, static_cast<std::uint32_t>(start),
                static_cast<std::uint32_t>(start + len)};
      c.tokens = tokens.subspan(start, len);
      c.weights = weights.subspan(start, len);
      out.push_back(c);
    }
  }
  return out;
}

void ForEachCandidate(const Document &doc, std::size_t max_length,
                      const MentionFilter *filter,
                      const std::function<void(const Span &, const TokenSet &)> &fn) {
  auto tokens = doc.body.tokens();
  auto weights = doc.body.weights();
  const std::size_t n = tokens.size();
  if (filter == nullptr) {
    for (std::size_t start = 0; start < n; ++start) {
      for (std::size_t len = 1; len <= max_length && start + len <= n; ++len) {
        Span span{doc.id, static_cast<std::uint32_t>(start),
                  static_cast<std::uint32_t>(start + len)};
        fn(span, TokenSet(tokens.subspan(start, len), weights.subspan(start, len)));
      }
    }
    return;
  }
  // next_dict[i]: first position >= i holding a dictionary token.
  std::vector<std::size_t> next_dict(n + 1, n);
  for (std::size_t i = n; i-- > 0;) {
    next_dict[i] = filter->ContainsToken(tokens[i]) ? i : next_dict[i + 1];
  }
  const TokenTable &table = filter->table();
  SpanAccumulator acc;
  for (std::size_t start = 0; start < n; ++start) {
    std::size_t first = next_dict[start];
    // Every span shorter than this has no dictionary token at all.
    if (first >= n || first - start + 1 > max_length) continue;
    acc.Reset();
    for (std::size_t j = start; j < first; ++j) acc.Add(table, tokens[j], weights[j]);
    for (std::size_t end = first + 1; end <= n && end - start <= max_length; ++end) {
      acc.Add(table, tokens[end - 1], weights[end - 1]);
      if (!acc.Passes(filter->predicate(), filter->gamma())) continue;
      Span span{doc.id, static_cast<std::uint32_t>(start),
                static_cast<std::uint32_t>(end)};
      fn(span, TokenSet(tokens.subspan(start, end - start),
                        weights.subspan(start, end - start)));
    }
  }
}

}  // namespace eejoin
