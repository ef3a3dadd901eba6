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

#ifndef EEJOIN_PROFILE_H_
#define EEJOIN_PROFILE_H_

#include <cstdint>
#include <span>
#include <string>

#include "eejoin/corpus.h"
#include "eejoin/signatures.h"

namespace eejoin {

struct ProfileOptions {
  explicit ProfileOptions(SimilarityThreshold g) : gamma(g) {}

  SimilarityThreshold gamma;
  Predicate predicate = Predicate::kExtra;
  Ratio sample_rate{1};
  TokenOrderDirection order_direction = TokenOrderDirection::kRareFirst;
  std::size_t variant_cap = kDefaultVariantCap;
  int workers = 1;
};

// Scans every k-th document (k = round(1 / sample_rate), by ascending docId)
// and estimates the statistics the cost model needs:
//   - |C|, the candidate substrings the dictionary-wide filter passes;
//   - probe-side signature volumes over those candidates;
//   - per-entity mention frequency, counted as per-word index hits: the
//     number of passing spans that share at least one token with the entity
//     (an upper bound on its true mentions).
// Sampled counts are scaled by exactly 1/sample_rate and rounded. Results do
// not depend on the worker count.
CorpusStats ProfileCorpus(const Dictionary &dict,
                          std::span<const Document> docs,
                          const ProfileOptions &options);

// round(raw / rate), exact.
std::int64_t ScaleBySampleRate(std::int64_t raw, const Ratio &rate);

// Token order derived from profiled document frequencies.
TokenOrder OrderFromStats(const CorpusStats &stats,
                          TokenOrderDirection direction =
                              TokenOrderDirection::kRareFirst);

// "ee-stats v1" plus two adjacent TSVs: `<path>.entities.tsv`
// (entityId, frequency) and `<path>.tokens.tsv` (token, doc freq, entity freq).
void WriteStats(const std::string &path, const CorpusStats &stats,
                const TokenDictionary &tokens);
CorpusStats ReadStats(const std::string &path, TokenDictionary &tokens);

}  // namespace eejoin

#endif  // EEJOIN_PROFILE_H_
