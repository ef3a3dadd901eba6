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

#ifndef EEJOIN_PLANS_H_
#define EEJOIN_PLANS_H_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eejoin/candgen.h"
#include "eejoin/corpus.h"
#include "eejoin/indexing.h"
#include "eejoin/mrengine.h"
#include "eejoin/signatures.h"

namespace eejoin {

struct Mention {
  EntityId entity_id = 0;
  Span span;
  Ratio score;

  bool operator==(const Mention &) const = default;
};

// Output order: (docId, start, entityId, end).
bool MentionLess(const Mention &a, const Mention &b);

// Sorts into output order and drops repeated (entity, span) pairs.
void CanonicalizeMentions(std::vector<Mention> &mentions);

enum class Method { kIndex, kFilterSsjoin };

const char *MethodName(Method method);
Method ParseMethod(std::string_view name);

struct MethodAssignment {
  Method method = Method::kFilterSsjoin;
  SignatureScheme scheme;

  bool operator==(const MethodAssignment &) const = default;
};

// Throws UsageError for (index, LSH) and bad LSH parameters.
void ValidateAssignment(const MethodAssignment &assignment);

struct PlanOptions {
  explicit PlanOptions(MatchOptions m) : match(std::move(m)) {}

  MatchOptions match;
  int mappers = 1;
  int reducers = 1;
  int workers = 1;
  std::int64_t memory_budget = std::int64_t{1} << 40;  // Me, bytes
  std::size_t reducer_entity_cap = 1'000'000;
};

struct PlanResult {
  std::vector<Mention> mentions;  // canonical order
  JobMetrics metrics;
};

// Index-based extraction over a slice of the dictionary ordering: one
// map-only pass per index partition, each scanning every document.
PlanResult RunIndexPlan(const Dictionary &dict, EntityRange range,
                        std::span<const Document> docs, IndexScheme scheme,
                        const PlanOptions &options);

// One map+reduce job that routes entities and candidate substrings by shared
// signature and verifies at the reducers. With filtered=false every substring
// up to the longest entity is shipped (the unfiltered baseline).
PlanResult RunSsjoinPlan(const Dictionary &dict, EntityRange range,
                         std::span<const Document> docs,
                         const SignatureScheme &scheme,
                         const PlanOptions &options, bool filtered = true);

// Runs one assignment on a slice; an empty slice costs nothing.
PlanResult RunAssignment(const Dictionary &dict, EntityRange range,
                         std::span<const Document> docs,
                         const MethodAssignment &assignment,
                         const PlanOptions &options);

// head on ordering [0, k), tail on [k, N).
PlanResult RunHybridPlan(const Dictionary &dict, std::size_t k,
                         const MethodAssignment &head,
                         const MethodAssignment &tail,
                         std::span<const Document> docs,
                         const PlanOptions &options);

inline constexpr std::string_view kMentionHeader =
    "# entityId\tdocId\tstartToken\tendToken\tscore";

void WriteMentions(std::ostream &out, const std::vector<Mention> &mentions);
std::vector<Mention> ReadMentions(std::istream &in,
                                  const std::string &source = "<mentions>");

}  // namespace eejoin

#endif  // EEJOIN_PLANS_H_
