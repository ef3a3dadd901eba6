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

#include <omp.h>

#include <algorithm>

#include "eejoin/candgen.h"
#include "eejoin/error.h"

namespace eejoin {
namespace {

std::int64_t CheckPairBudget(const Dictionary &dict, std::span<const Document> docs,
                             const OracleOptions &options) {
  std::int64_t pairs = 0;
  const auto n = static_cast<std::int64_t>(dict.size());
  for (const auto &doc : docs) {
    pairs += static_cast<std::int64_t>(SubstringCount(doc.body.size(), dict.max_length())) * n;
    if (pairs > options.pair_cap) {
      throw DataError("brute-force scan needs more than " + std::to_string(options.pair_cap) +
                      " pair comparisons; use a smaller fixture");
    }
  }
  return pairs;
}

std::int64_t ScanDocument(const Dictionary &dict, const Document &doc,
                          const OracleOptions &options, std::vector<Mention> &out) {
  std::int64_t pairs = 0;
  const auto &entities = dict.entities();
  const auto tokens = doc.body.tokens();
  const auto weights = doc.body.weights();
  const std::size_t max_length = dict.max_length();
  for (std::size_t start = 0; start < tokens.size(); ++start) {
    const std::size_t stop = std::min(tokens.size(), start + max_length);
    for (std::size_t end = start + 1; end <= stop; ++end) {
      TokenSet s(tokens.subspan(start, end - start), weights.subspan(start, end - start));
      for (const Entity &e : entities) {
        ++pairs;
        if (!Matches(options.predicate, e.set, s, options.gamma)) continue;
        Span span{doc.id, static_cast<std::uint32_t>(start), static_cast<std::uint32_t>(end)};
        out.push_back({e.id, span, ContainmentScore(options.predicate, e.set, s)});
      }
    }
  }
  return pairs;
}

}  // namespace

OracleResult BruteForceExtractSerial(const Dictionary &dict,
                                     std::span<const Document> docs,
                                     const OracleOptions &options) {
  OracleResult result;
  if (dict.empty()) return result;
  CheckPairBudget(dict, docs, options);
  for (const auto &doc : docs) {
    result.pair_comparisons += ScanDocument(dict, doc, options, result.mentions);
  }
  CanonicalizeMentions(result.mentions);
  return result;
}

OracleResult BruteForceExtractParallel(const Dictionary &dict,
                                       std::span<const Document> docs,
                                       const OracleOptions &options) {
  OracleResult result;
  if (dict.empty()) return result;
  CheckPairBudget(dict, docs, options);
  const auto n = static_cast<std::int64_t>(docs.size());
  std::vector<std::vector<Mention>> per_doc(docs.size());
  std::int64_t pairs = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : pairs) \
    num_threads(std::max(1, options.workers))
  for (std::int64_t i = 0; i < n; ++i) {
    pairs += ScanDocument(dict, docs[i], options, per_doc[i]);
  }
  for (auto &mentions : per_doc) {
    result.mentions.insert(result.mentions.end(), mentions.begin(), mentions.end());
  }
  result.pair_comparisons = pairs;
  CanonicalizeMentions(result.mentions);
  return result;
}

OracleResult BruteForceExtract(const Dictionary &dict, std::span<const Document> docs,
                               const OracleOptions &options) {
  return options.workers <= 1 ? BruteForceExtractSerial(dict, docs, options)
                              : BruteForceExtractParallel(dict, docs, options);
}

}  // namespace eejoin
