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

#ifndef EEJOIN_COSTMODEL_H_
#define EEJOIN_COSTMODEL_H_

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "eejoin/corpus.h"
#include "eejoin/mrengine.h"
#include "eejoin/plans.h"
#include "eejoin/rational.h"
#include "eejoin/signatures.h"

namespace eejoin {

// Abstract cost units per record.
struct CostConstants {
  Cost lookup{1};
  Cost sig{Cost(1) / 5};
  Cost shuffle{2};
  Cost verify{Cost(1) / 2};

  bool operator==(const CostConstants &) const = default;
};

// Throws UsageError on a negative constant.
void ValidateConstants(const CostConstants &c);

// "ee-costs v1": lines `lookup`, `sig`, `shuffle`, `verify`, each
// `<name><TAB><rational>`.
void WriteCosts(std::ostream &out, const CostConstants &c);
CostConstants ReadCosts(std::istream &in, const std::string &source = "<costs>");

enum class Objective { kWorkDone, kJobCompletion };

const char *ObjectiveName(Objective objective);
Objective ParseObjective(std::string_view name);

// Additive terms: lookup, sig_gen, shuffle, verify.
struct CostEstimate {
  Cost total{0};
  std::map<std::string, Cost> breakdown;
  std::int64_t passes = 0;                // index side
  std::int64_t entity_signatures = 0;     // ssjoin side
  std::int64_t candidate_signatures = 0;  // ssjoin side

  void Add(const std::string &term, const Cost &value);
  // Sums totals and terms; counters add.
  void Merge(const CostEstimate &other);
  bool operator==(const CostEstimate &) const = default;
};

// Everything a cost query reads besides the slice. The dictionary ordering
// is the one the plan will partition.
struct CostEnv {
  CostEnv(const Dictionary &d, const CorpusStats &s, MatchOptions m)
      : dict(&d), stats(&s), match(std::move(m)) {}

  const Dictionary *dict;
  const CorpusStats *stats;
  MatchOptions match;
  CostConstants constants;
  int mappers = 1;
  std::int64_t memory_budget = std::int64_t{1} << 26;  // Me, bytes
};

struct CostQuery {
  EntityRange slice;
  SignatureScheme scheme;
  Objective objective = Objective::kJobCompletion;
};

// (|C| / |M|) * cLookup * ceil(|E| / Me); WORK_DONE drops the 1/|M|.
CostEstimate IndexCost(const CostEnv &env, const CostQuery &q);

// |C| / |M| * cSig + |Sig| * (cShuffle + cVerify), where |Sig| is the
// entity-side volume sum(sigcount(e) * (1 + freq(e))) plus the candidate-side
// signature count from the stats. WORK_DONE drops the 1/|M|.
CostEstimate SsjoinCost(const CostEnv &env, const CostQuery &q);

CostEstimate AssignmentCost(const CostEnv &env, EntityRange slice,
                            const MethodAssignment &assignment,
                            Objective objective);

// head on [0, k), tail on [k, N); an unused side contributes zero.
CostEstimate PlanCost(const CostEnv &env, std::size_t k,
                      const MethodAssignment &head,
                      const MethodAssignment &tail, Objective objective);

// Candidate-side signature count for a scheme.
std::int64_t CandidateSignatureCount(const CorpusStats &stats,
                                     const SignatureScheme &scheme,
                                     Predicate predicate);

// Whether a scheme's keys stay under the variant cap for every entity and
// candidate (only the variant scheme can fail: 2^L - 1 subsets).
bool SchemeFeasible(const CostEnv &env, SignatureKind kind);

// Cost of one assignment over any prefix [0, k) or suffix [k, N) of the
// ordering in O(1), from per-entity prefix sums. Agrees exactly with
// AssignmentCost.
class CostCurve {
 public:
  CostCurve(const CostEnv &env, const MethodAssignment &assignment,
            Objective objective);

  std::size_t size() const { return prefix_.size() - 1; }
  CostEstimate Slice(EntityRange slice) const;
  Cost Prefix(std::size_t k) const { return Slice({0, k}).total; }
  Cost Suffix(std::size_t k) const { return Slice({k, size()}).total; }

 private:
  CostEnv env_;
  MethodAssignment assignment_;
  Objective objective_;
  std::vector<std::int64_t> prefix_;  // footprint or signature volume
  std::int64_t candidate_signatures_ = 0;
};

// Calibration fits each constant by least squares (with an intercept) of an
// observed counter against the model count driving it:
//   lookup   index map work         vs  |C| * passes
//   sig      ssjoin map work        vs  |C|
//   shuffle  shuffled records       vs  |Sig|
//   verify   ssjoin reduce work     vs  |Sig|
enum class CostPhase { kLookup, kSig, kShuffle, kVerify };

const char *CostPhaseName(CostPhase phase);
CostPhase ParseCostPhase(std::string_view name);

struct CalibrationPoint {
  CostPhase phase = CostPhase::kLookup;
  std::int64_t x = 0;  // model count
  std::int64_t y = 0;  // observed units
  bool operator==(const CalibrationPoint &) const = default;
};

// Points from one plan run: index runs feed lookup, ssjoin runs the rest.
std::vector<CalibrationPoint> CalibrationPointsFor(Method method,
                                                   std::int64_t candidates,
                                                   std::int64_t passes,
                                                   std::int64_t signatures,
                                                   const JobMetrics &metrics);

// Slopes are clamped at zero and rounded to six decimals. Throws DataError
// when a phase has no points, all-zero observations, or no spread in x.
CostConstants Calibrate(const std::vector<CalibrationPoint> &points);

// "ee-samples v1": `<phase><TAB><x><TAB><y>` lines.
void WriteCalibrationPoints(std::ostream &out,
                            const std::vector<CalibrationPoint> &points);
std::vector<CalibrationPoint> ReadCalibrationPoints(
    std::istream &in, const std::string &source = "<samples>");

}  // namespace eejoin

#endif  // EEJOIN_COSTMODEL_H_
