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

#ifndef EEJOIN_OPTIMIZER_H_
#define EEJOIN_OPTIMIZER_H_

#include <cstddef>
#include <functional>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "eejoin/costmodel.h"
#include "eejoin/plans.h"

namespace eejoin {

struct Probe {
  std::size_t k = 0;
  Cost cost;
  bool operator==(const Probe &) const = default;
};

struct SearchTrace {
  std::vector<Probe> evaluations;
  int scheme_pairs_tried = 0;
  bool operator==(const SearchTrace &) const = default;
};

struct SplitResult {
  std::size_t k = 0;
  Cost cost{0};
  SearchTrace trace;
};

using SideCost = std::function<Cost(std::size_t k)>;

// Minimizes head(k) + tail(k) over k in [0, n], where head is non-decreasing
// and tail non-increasing in k, returning the smallest minimizing k.
//
// Branch and bound over gaps between probed splits: inside a gap (lo, hi)
// every split costs at least head(lo) + tail(hi), so gaps whose bound cannot
// beat the incumbent are dropped, and the most promising gap is bisected
// next. Exact for any monotone pair; each probe evaluates head and tail once.
SplitResult SearchSplit(std::size_t n, const SideCost &head, const SideCost &tail);

// Same, over the cost model: head assignment on [0, k), tail on [k, N).
SplitResult SearchSplit(const CostEnv &env, const MethodAssignment &head,
                        const MethodAssignment &tail, Objective objective);

struct ExecutionPlan {
  std::size_t entity_count = 0;
  std::size_t split = 0;
  MethodAssignment head;
  MethodAssignment tail;
  Objective objective = Objective::kJobCompletion;
  CostEstimate head_cost;
  CostEstimate tail_cost;
  SearchTrace trace;

  CostEstimate Predicted() const;
  bool operator==(const ExecutionPlan &) const = default;
};

struct OptimizerConfig {
  // Schemes usable by each method; LSH is ignored for the index method.
  std::vector<SignatureKind> index_schemes = {SignatureKind::kSingleWord,
                                              SignatureKind::kPrefix,
                                              SignatureKind::kJaccardVariant};
  std::vector<SignatureKind> ssjoin_schemes = {
      SignatureKind::kSingleWord, SignatureKind::kPrefix, SignatureKind::kLsh,
      SignatureKind::kJaccardVariant};
  SignatureScheme lsh;  // bands, rows and seed for LSH assignments
};

// Every (index scheme, ssjoin scheme) pair in both orientations, skipping
// variant schemes whose keys would exceed the variant cap. Ties go to the
// lower split, then to the earlier pair in enumeration order.
ExecutionPlan Optimize(const CostEnv &env, const OptimizerConfig &config,
                       Objective objective);

std::string ExplainPlan(const ExecutionPlan &plan);

// "ee-plan v1" key-value text; ReadPlan(WritePlan(p)) == p.
void WritePlan(std::ostream &out, const ExecutionPlan &plan);
ExecutionPlan ReadPlan(std::istream &in, const std::string &source = "<plan>");

// 4 * ceil(log2(n + 1)) + 4.
std::size_t ProbeBudget(std::size_t n);

}  // namespace eejoin

#endif  // EEJOIN_OPTIMIZER_H_
