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

#ifndef EEJOIN_ORACLE_H_
#define EEJOIN_ORACLE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "eejoin/corpus.h"
#include "eejoin/plans.h"

namespace eejoin {

struct OracleOptions {
  explicit OracleOptions(SimilarityThreshold g, Predicate p = Predicate::kExtra)
      : gamma(g), predicate(p) {}

  SimilarityThreshold gamma;
  Predicate predicate;
  std::int64_t pair_cap = 1'000'000'000;
  int workers = 1;
};

struct OracleResult {
  std::vector<Mention> mentions;  // canonical order
  std::int64_t pair_comparisons = 0;
};

// Scores every (entity, span) pair with span length up to the longest entity.
// Throws DataError before scanning when the pair count would exceed the cap.
// Dispatches on options.workers.
OracleResult BruteForceExtract(const Dictionary &dict,
                               std::span<const Document> docs,
                               const OracleOptions &options);

// Single-threaded reference.
OracleResult BruteForceExtractSerial(const Dictionary &dict,
                                     std::span<const Document> docs,
                                     const OracleOptions &options);

// One document per OpenMP task; identical output to the serial path.
OracleResult BruteForceExtractParallel(const Dictionary &dict,
                                       std::span<const Document> docs,
                                       const OracleOptions &options);

}  // namespace eejoin

#endif  // EEJOIN_ORACLE_H_
