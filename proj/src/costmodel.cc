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

#include "eejoin/costmodel.h"

#include <charconv>
#include <cmath>

#include "eejoin/error.h"
#include "eejoin/indexing.h"

namespace eejoin {

void ValidateConstants(const CostConstants &c) {
  if (c.lookup < 0 || c.sig < 0 || c.shuffle < 0 || c.verify < 0) {
    throw UsageError("cost constants must be non-negative");
  }
}

void WriteCosts(std::ostream &out, const CostConstants &c) {
  out << "ee-costs v1\n"
      << "lookup\t" << FormatCost(c.lookup) << "\n"
      << "sig\t" << FormatCost(c.sig) << "\n"
      << "shuffle\t" << FormatCost(c.shuffle) << "\n"
      << "verify\t" << FormatCost(c.verify) << "\n";
}

CostConstants ReadCosts(std::istream &in, const std::string &source) {
  std::string line;
  if (!std::getline(in, line) || line != "ee-costs v1") {
    throw DataError(source + ": not an ee-costs v1 file");
  }
  CostConstants c;
  for (int line_no = 2; std::getline(in, line); ++line_no) {
    if (line.empty() || line[0] == '#') continue;
    const std::string where = source + ":" + std::to_string(line_no);
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw DataError(where + ": expected key<TAB>value");
    const std::string key = line.substr(0, tab);
    Cost value;
    try {
      value = ParseCost(std::string_view(line).substr(tab + 1));
    } catch (const Error &e) {
      throw DataError(where + ": " + e.what());
    }
    if (key == "lookup") c.lookup = value;
    else if (key == "sig") c.sig = value;
    else if (key == "shuffle") c.shuffle = value;
    else if (key == "verify") c.verify = value;
    else throw DataError(where + ": unknown key '" + key + "'");
  }
  try {
    ValidateConstants(c);
  } catch (const Error &e) {
    throw DataError(source + ": " + e.what());
  }
  return c;
}

const char *ObjectiveName(Objective objective) {
  return objective == Objective::kWorkDone ? "WORK_DONE" : "JOB_COMPLETION";
}

Objective ParseObjective(std::string_view name) {
  if (name == "WORK_DONE" || name == "work_done") return Objective::kWorkDone;
  if (name == "JOB_COMPLETION" || name == "job_completion") return Objective::kJobCompletion;
  throw UsageError("unknown objective '" + std::string(name) + "'");
}

void CostEstimate::Add(const std::string &term, const Cost &value) {
  breakdown[term] += value;
  total += value;
}

void CostEstimate::Merge(const CostEstimate &other) {
  for (const auto &[term, value] : other.breakdown) Add(term, value);
  passes += other.passes;
  entity_signatures += other.entity_signatures;
  candidate_signatures += other.candidate_signatures;
}

namespace {

void CheckSlice(const CostEnv &env, EntityRange slice) {
  if (slice.begin > slice.end || slice.end > env.dict->size()) {
    throw UsageError("slice [" + std::to_string(slice.begin) + ", " +
                     std::to_string(slice.end) + ") out of range");
  }
  if (env.mappers < 1) throw UsageError("mapper count must be at least 1");
}

// |C| scaled for the objective: per mapper for job completion.
Cost MapShare(const CostEnv &env, Objective objective) {
  Cost c(env.stats->est_candidates);
  return objective == Objective::kJobCompletion ? c / env.mappers : c;
}

CostEstimate IndexTerms(const CostEnv &env, Objective objective, std::int64_t footprint) {
  if (env.memory_budget <= 0) throw UsageError("memory budget must be positive");
  CostEstimate est;
  est.passes = std::max<std::int64_t>(1, (footprint + env.memory_budget - 1) / env.memory_budget);
  est.Add("lookup", MapShare(env, objective) * env.constants.lookup * est.passes);
  return est;
}

CostEstimate SsjoinTerms(const CostEnv &env, Objective objective, std::int64_t entity_sigs,
                         std::int64_t candidate_sigs) {
  CostEstimate est;
  est.entity_signatures = entity_sigs;
  est.candidate_signatures = candidate_sigs;
  const Cost sigs(entity_sigs + candidate_sigs);
  est.Add("sig_gen", MapShare(env, objective) * env.constants.sig);
  est.Add("shuffle", sigs * env.constants.shuffle);
  est.Add("verify", sigs * env.constants.verify);
  return est;
}

std::int64_t MentionFrequency(const CostEnv &env, const Entity &e) {
  auto it = env.stats->entity_mention_freq.find(e.id);
  if (it == env.stats->entity_mention_freq.end()) {
    throw DataError("stats have no frequency for entity " + std::to_string(e.id));
  }
  return it->second;
}

std::int64_t EntitySignatureVolume(const CostEnv &env, const Entity &e,
                                   const SignatureScheme &scheme) {
  auto count = static_cast<std::int64_t>(EntitySignatureCount(e.set, scheme, env.match));
  return count * (1 + MentionFrequency(env, e));
}

}  // namespace

std::int64_t CandidateSignatureCount(const CorpusStats &stats, const SignatureScheme &scheme,
                                     Predicate predicate) {
  switch (scheme.kind) {
    case SignatureKind::kSingleWord:
      return stats.est_candidate_tokens;
    case SignatureKind::kPrefix:
      return predicate == Predicate::kExtra ? stats.est_candidate_tokens
                                            : stats.est_candidate_prefix_tokens;
    case SignatureKind::kJaccardVariant:
      return stats.est_candidate_variant_keys;
    case SignatureKind::kLsh:
      return scheme.lsh_bands * stats.est_candidates;
  }
  return 0;
}

bool SchemeFeasible(const CostEnv &env, SignatureKind kind) {
  if (kind != SignatureKind::kJaccardVariant) return true;
  const std::size_t l = env.dict->max_length();
  if (l >= 63) return false;
  return (std::uint64_t{1} << l) - 1 <= env.match.variant_cap;
}

CostEstimate IndexCost(const CostEnv &env, const CostQuery &q) {
  CheckSlice(env, q.slice);
  const IndexScheme scheme = IndexSchemeFor(q.scheme.kind);
  if (env.memory_budget <= 0) throw UsageError("memory budget must be positive");
  if (q.slice.empty()) return {};
  return IndexTerms(env, q.objective, EstimateFootprint(*env.dict, q.slice, scheme, env.match));
}

CostEstimate SsjoinCost(const CostEnv &env, const CostQuery &q) {
  CheckSlice(env, q.slice);
  ValidateScheme(q.scheme);
  if (q.slice.empty()) return {};
  std::int64_t entity_sigs = 0;
  for (std::size_t p = q.slice.begin; p < q.slice.end; ++p) {
    entity_sigs += EntitySignatureVolume(env, env.dict->ordered(p), q.scheme);
  }
  return SsjoinTerms(env, q.objective, entity_sigs,
                     CandidateSignatureCount(*env.stats, q.scheme, env.match.predicate));
}

CostEstimate AssignmentCost(const CostEnv &env, EntityRange slice,
                            const MethodAssignment &assignment, Objective objective) {
  CostQuery q{slice, assignment.scheme, objective};
  return assignment.method == Method::kIndex ? IndexCost(env, q) : SsjoinCost(env, q);
}

CostEstimate PlanCost(const CostEnv &env, std::size_t k, const MethodAssignment &head,
                      const MethodAssignment &tail, Objective objective) {
  ValidateAssignment(head);
  ValidateAssignment(tail);
  const std::size_t n = env.dict->size();
  if (k > n) throw UsageError("split " + std::to_string(k) + " out of range");
  CostEstimate est = AssignmentCost(env, {0, k}, head, objective);
  est.Merge(AssignmentCost(env, {k, n}, tail, objective));
  return est;
}

CostCurve::CostCurve(const CostEnv &env, const MethodAssignment &assignment,
                     Objective objective)
    : env_(env), assignment_(assignment), objective_(objective) {
  ValidateAssignment(assignment);
  const Dictionary &dict = *env.dict;
  prefix_.assign(dict.size() + 1, 0);
  const bool index = assignment.method == Method::kIndex;
  const IndexScheme index_scheme =
      index ? IndexSchemeFor(assignment.scheme.kind) : IndexScheme::kPerWord;
  for (std::size_t p = 0; p < dict.size(); ++p) {
    const Entity &e = dict.ordered(p);
    prefix_[p + 1] = prefix_[p] + (index ? EntityFootprint(e, index_scheme, env.match)
                                         : EntitySignatureVolume(env, e, assignment.scheme));
  }
  if (!index) {
    candidate_signatures_ =
        CandidateSignatureCount(*env.stats, assignment.scheme, env.match.predicate);
  }
}

CostEstimate CostCurve::Slice(EntityRange slice) const {
  CheckSlice(env_, slice);
  if (slice.empty()) return {};
  const std::int64_t volume = prefix_[slice.end] - prefix_[slice.begin];
  if (assignment_.method == Method::kIndex) return IndexTerms(env_, objective_, volume);
  return SsjoinTerms(env_, objective_, volume, candidate_signatures_);
}

const char *CostPhaseName(CostPhase phase) {
  switch (phase) {
    case CostPhase::kLookup: return "lookup";
    case CostPhase::kSig: return "sig";
    case CostPhase::kShuffle: return "shuffle";
    case CostPhase::kVerify: return "verify";
  }
  return "?";
}

CostPhase ParseCostPhase(std::string_view name) {
  for (CostPhase p : {CostPhase::kLookup, CostPhase::kSig, CostPhase::kShuffle,
                      CostPhase::kVerify}) {
    if (name == CostPhaseName(p)) return p;
  }
  throw DataError("unknown cost phase '" + std::string(name) + "'");
}

std::vector<CalibrationPoint> CalibrationPointsFor(Method method, std::int64_t candidates,
                                                   std::int64_t passes,
                                                   std::int64_t signatures,
                                                   const JobMetrics &metrics) {
  if (method == Method::kIndex) {
    return {{CostPhase::kLookup, candidates * passes, metrics.TotalMapperBusy()}};
  }
  return {{CostPhase::kSig, candidates, metrics.TotalMapperBusy()},
          {CostPhase::kShuffle, signatures, metrics.shuffle_records},
          {CostPhase::kVerify, signatures, metrics.TotalReducerBusy()}};
}

namespace {

Cost FitSlope(const std::vector<CalibrationPoint> &points, CostPhase phase) {
  long double n = 0, sx = 0, sy = 0;
  bool any_y = false;
  for (const auto &p : points) {
    if (p.phase != phase) continue;
    n += 1;
    sx += p.x;
    sy += p.y;
    any_y = any_y || p.y != 0;
  }
  const std::string name = CostPhaseName(phase);
  if (n == 0) throw DataError("no calibration samples for phase " + name);
  if (!any_y) throw DataError("degenerate calibration sample for phase " + name + ": zero records");
  const long double mx = sx / n, my = sy / n;
  long double sxx = 0, sxy = 0;
  for (const auto &p : points) {
    if (p.phase != phase) continue;
    sxx += (p.x - mx) * (p.x - mx);
    sxy += (p.x - mx) * (p.y - my);
  }
  if (sxx == 0) {
    throw DataError("degenerate calibration sample for phase " + name + ": no spread in x");
  }
  const long double slope = std::max<long double>(0, sxy / sxx);
  return Cost(std::llround(slope * 1'000'000)) / 1'000'000;
}

}  // namespace

CostConstants Calibrate(const std::vector<CalibrationPoint> &points) {
  CostConstants c;
  c.lookup = FitSlope(points, CostPhase::kLookup);
  c.sig = FitSlope(points, CostPhase::kSig);
  c.shuffle = FitSlope(points, CostPhase::kShuffle);
  c.verify = FitSlope(points, CostPhase::kVerify);
  return c;
}

void WriteCalibrationPoints(std::ostream &out, const std::vector<CalibrationPoint> &points) {
  out << "ee-samples v1\n";
  for (const auto &p : points) {
    out << CostPhaseName(p.phase) << "\t" << p.x << "\t" << p.y << "\n";
  }
}

std::vector<CalibrationPoint> ReadCalibrationPoints(std::istream &in,
                                                    const std::string &source) {
  std::string line;
  if (!std::getline(in, line) || line != "ee-samples v1") {
    throw DataError(source + ": not an ee-samples v1 file");
  }
  std::vector<CalibrationPoint> points;
  for (int line_no = 2; std::getline(in, line); ++line_no) {
    if (line.empty() || line[0] == '#') continue;
    const std::string where = source + ":" + std::to_string(line_no);
    std::string_view rest = line;
    auto t1 = rest.find('\t');
    auto t2 = t1 == std::string_view::npos ? t1 : rest.find('\t', t1 + 1);
    if (t2 == std::string_view::npos) throw DataError(where + ": expected 3 fields");
    CalibrationPoint p;
    p.phase = ParseCostPhase(rest.substr(0, t1));
    auto parse = [&](std::string_view text) {
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw DataError(where + ": malformed number '" + std::string(text) + "'");
      }
      return v;
    };
    p.x = parse(rest.substr(t1 + 1, t2 - t1 - 1));
    p.y = parse(rest.substr(t2 + 1));
    points.push_back(p);
  }
  return points;
}

}  // namespace eejoin
