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

#include "eejoin/optimizer.h"

#include <algorithm>
#include <charconv>
#include <map>
#include <queue>
#include <sstream>
#include <tuple>

#include "eejoin/error.h"

namespace eejoin {

std::size_t ProbeBudget(std::size_t n) {
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < n + 1) ++bits;
  return 4 * bits + 4;
}

SplitResult SearchSplit(std::size_t n, const SideCost &head, const SideCost &tail) {
  SplitResult result;
  std::map<std::size_t, std::pair<Cost, Cost>> seen;
  bool have_best = false;
  auto probe = [&](std::size_t k) {
    Cost h = head(k);
    Cost t = tail(k);
    Cost total = h + t;
    seen.emplace(k, std::make_pair(h, t));
    result.trace.evaluations.push_back({k, total});
    if (!have_best || total < result.cost || (total == result.cost && k < result.k)) {
      result.k = k;
      result.cost = total;
      have_best = true;
    }
  };

  // A gap is an open interval (lo, hi) of unprobed splits.
  struct Gap {
    Cost bound;
    std::size_t lo;
    std::size_t hi;
  };
  auto after = [](const Gap &a, const Gap &b) {
    return std::tie(a.bound, a.lo) > std::tie(b.bound, b.lo);
  };
  std::priority_queue<Gap, std::vector<Gap>, decltype(after)> gaps(after);
  auto push = [&](std::size_t lo, std::size_t hi) {
    if (hi - lo < 2) return;
    gaps.push({seen.at(lo).first + seen.at(hi).second, lo, hi});
  };

  probe(0);
  if (n == 0) return result;
  probe(n);
  push(0, n);
  while (!gaps.empty()) {
    Gap gap = gaps.top();
    gaps.pop();
    // Every split in the gap costs at least gap.bound and lies above gap.lo.
    if (std::tie(gap.bound, gap.lo) >= std::tie(result.cost, result.k)) break;
    std::size_t mid = gap.lo + (gap.hi - gap.lo) / 2;
    probe(mid);
    push(gap.lo, mid);
    push(mid, gap.hi);
  }
  return result;
}

SplitResult SearchSplit(const CostEnv &env, const MethodAssignment &head,
                        const MethodAssignment &tail, Objective objective) {
  const CostCurve head_curve(env, head, objective);
  const CostCurve tail_curve(env, tail, objective);
  return SearchSplit(
      env.dict->size(), [&](std::size_t k) { return head_curve.Prefix(k); },
      [&](std::size_t k) { return tail_curve.Suffix(k); });
}

CostEstimate ExecutionPlan::Predicted() const {
  CostEstimate est = head_cost;
  est.Merge(tail_cost);
  return est;
}

namespace {

std::vector<SignatureKind> Distinct(const std::vector<SignatureKind> &kinds) {
  std::vector<SignatureKind> out;
  for (SignatureKind k : kinds) {
    if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
  }
  return out;
}

}  // namespace

ExecutionPlan Optimize(const CostEnv &env, const OptimizerConfig &config, Objective objective) {
  ValidateScheme(config.lsh);
  auto scheme_of = [&](SignatureKind kind) {
    SignatureScheme s = config.lsh;
    s.kind = kind;
    return s;
  };
  std::vector<std::pair<MethodAssignment, MethodAssignment>> pairs;
  for (SignatureKind i : Distinct(config.index_schemes)) {
    if (i == SignatureKind::kLsh || !SchemeFeasible(env, i)) continue;
    for (SignatureKind s : Distinct(config.ssjoin_schemes)) {
      if (!SchemeFeasible(env, s)) continue;
      MethodAssignment index{Method::kIndex, scheme_of(i)};
      MethodAssignment ssjoin{Method::kFilterSsjoin, scheme_of(s)};
      pairs.emplace_back(index, ssjoin);
      pairs.emplace_back(ssjoin, index);
    }
  }
  if (pairs.empty()) throw UsageError("no valid scheme pair to optimize");

  ExecutionPlan plan;
  SplitResult best;
  bool have_best = false;
  for (const auto &[head, tail] : pairs) {
    SplitResult r = SearchSplit(env, head, tail, objective);
    if (!have_best || r.cost < best.cost || (r.cost == best.cost && r.k < best.k)) {
      best = std::move(r);
      plan.head = head;
      plan.tail = tail;
      have_best = true;
    }
  }
  const std::size_t n = env.dict->size();
  plan.entity_count = n;
  plan.split = best.k;
  plan.objective = objective;
  plan.head_cost = AssignmentCost(env, {0, best.k}, plan.head, objective);
  plan.tail_cost = AssignmentCost(env, {best.k, n}, plan.tail, objective);
  plan.trace = std::move(best.trace);
  plan.trace.scheme_pairs_tried = static_cast<int>(pairs.size());
  return plan;
}

namespace {

std::string DescribeAssignment(const MethodAssignment &a) {
  std::string out = std::string(MethodName(a.method)) + " / " + SignatureKindName(a.scheme.kind);
  if (a.scheme.kind == SignatureKind::kLsh) {
    out += " (b=" + std::to_string(a.scheme.lsh_bands) + " r=" +
           std::to_string(a.scheme.lsh_rows) + " seed=" + std::to_string(a.scheme.seed) + ")";
  }
  return out;
}

std::string Approx(const Cost &c) {
  std::ostringstream out;
  out.precision(6);
  out << c.convert_to<double>();
  return out.str();
}

void ExplainSide(std::ostream &out, const char *name, std::size_t begin, std::size_t end,
                 const MethodAssignment &a, const CostEstimate &cost) {
  out << name << " [" << begin << ", " << end << "): ";
  if (begin == end) {
    out << "unused, cost 0\n";
    return;
  }
  out << DescribeAssignment(a) << ", cost " << FormatCost(cost.total) << " (~"
      << Approx(cost.total) << ")\n";
  for (const auto &[term, value] : cost.breakdown) {
    out << "  " << term << " " << FormatCost(value) << "\n";
  }
  if (a.method == Method::kIndex) {
    out << "  passes " << cost.passes << "\n";
  } else {
    out << "  signatures " << cost.entity_signatures << " entity-side + "
        << cost.candidate_signatures << " candidate-side\n";
  }
}

}  // namespace

std::string ExplainPlan(const ExecutionPlan &plan) {
  std::ostringstream out;
  const CostEstimate total = plan.Predicted();
  out << "plan for " << plan.entity_count << " entities, objective "
      << ObjectiveName(plan.objective) << "\n"
      << "split k=" << plan.split << "\n";
  ExplainSide(out, "head", 0, plan.split, plan.head, plan.head_cost);
  ExplainSide(out, "tail", plan.split, plan.entity_count, plan.tail, plan.tail_cost);
  out << "total " << FormatCost(total.total) << " (~" << Approx(total.total) << ")\n";
  out << "search: " << plan.trace.evaluations.size() << " probes for the chosen pair, "
      << plan.trace.scheme_pairs_tried << " scheme pairs tried\n";
  for (const auto &p : plan.trace.evaluations) {
    out << "  k=" << p.k << " cost " << FormatCost(p.cost) << "\n";
  }
  return out.str();
}

namespace {

void WriteSide(std::ostream &out, const std::string &side, const MethodAssignment &a,
               const CostEstimate &cost) {
  out << side << "_method\t" << MethodName(a.method) << "\n"
      << side << "_scheme\t" << SignatureKindName(a.scheme.kind) << "\n"
      << side << "_lsh_bands\t" << a.scheme.lsh_bands << "\n"
      << side << "_lsh_rows\t" << a.scheme.lsh_rows << "\n"
      << side << "_lsh_seed\t" << a.scheme.seed << "\n"
      << side << "_passes\t" << cost.passes << "\n"
      << side << "_entity_signatures\t" << cost.entity_signatures << "\n"
      << side << "_candidate_signatures\t" << cost.candidate_signatures << "\n";
  for (const auto &[term, value] : cost.breakdown) {
    out << side << "_cost." << term << "\t" << FormatCost(value) << "\n";
  }
}

template <typename T>
T ParseNumber(std::string_view text, const std::string &where) {
  T v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw DataError(where + ": malformed number '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

void WritePlan(std::ostream &out, const ExecutionPlan &plan) {
  out << "ee-plan v1\n"
      << "entity_count\t" << plan.entity_count << "\n"
      << "split\t" << plan.split << "\n"
      << "objective\t" << ObjectiveName(plan.objective) << "\n";
  WriteSide(out, "head", plan.head, plan.head_cost);
  WriteSide(out, "tail", plan.tail, plan.tail_cost);
  out << "cost_total\t" << FormatCost(plan.Predicted().total) << "\n"
      << "scheme_pairs_tried\t" << plan.trace.scheme_pairs_tried << "\n"
      << "probes\t";
  for (std::size_t i = 0; i < plan.trace.evaluations.size(); ++i) {
    if (i) out << ' ';
    out << plan.trace.evaluations[i].k << ':' << FormatCost(plan.trace.evaluations[i].cost);
  }
  out << "\n";
}

ExecutionPlan ReadPlan(std::istream &in, const std::string &source) {
  std::string line;
  if (!std::getline(in, line) || line != "ee-plan v1") {
    throw DataError(source + ": not an ee-plan v1 file");
  }
  ExecutionPlan plan;
  std::map<std::string, std::string> fields;
  for (int line_no = 2; std::getline(in, line); ++line_no) {
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw DataError(source + ":" + std::to_string(line_no) + ": expected key<TAB>value");
    }
    if (!fields.emplace(line.substr(0, tab), line.substr(tab + 1)).second) {
      throw DataError(source + ":" + std::to_string(line_no) + ": repeated key");
    }
  }
  auto take = [&](const std::string &key) {
    auto it = fields.find(key);
    if (it == fields.end()) throw DataError(source + ": missing key '" + key + "'");
    std::string v = it->second;
    fields.erase(it);
    return v;
  };
  const std::string where = source;
  try {
    plan.entity_count = ParseNumber<std::size_t>(take("entity_count"), where);
    plan.split = ParseNumber<std::size_t>(take("split"), where);
    plan.objective = ParseObjective(take("objective"));
    for (auto [side, assignment, cost] :
         {std::tuple{"head", &plan.head, &plan.head_cost},
          std::tuple{"tail", &plan.tail, &plan.tail_cost}}) {
      const std::string s = side;
      assignment->method = ParseMethod(take(s + "_method"));
      assignment->scheme.kind = ParseSignatureKind(take(s + "_scheme"));
      assignment->scheme.lsh_bands = ParseNumber<int>(take(s + "_lsh_bands"), where);
      assignment->scheme.lsh_rows = ParseNumber<int>(take(s + "_lsh_rows"), where);
      assignment->scheme.seed = ParseNumber<std::uint64_t>(take(s + "_lsh_seed"), where);
      ValidateAssignment(*assignment);
      cost->passes = ParseNumber<std::int64_t>(take(s + "_passes"), where);
      cost->entity_signatures = ParseNumber<std::int64_t>(take(s + "_entity_signatures"), where);
      cost->candidate_signatures =
          ParseNumber<std::int64_t>(take(s + "_candidate_signatures"), where);
      const std::string prefix = s + "_cost.";
      for (auto it = fields.begin(); it != fields.end();) {
        if (it->first.rfind(prefix, 0) == 0) {
          cost->Add(it->first.substr(prefix.size()), ParseCost(it->second));
          it = fields.erase(it);
        } else {
          ++it;
        }
      }
    }
    const Cost total = ParseCost(take("cost_total"));
    plan.trace.scheme_pairs_tried = ParseNumber<int>(take("scheme_pairs_tried"), where);
    std::istringstream probes(take("probes"));
    std::string item;
    while (probes >> item) {
      auto colon = item.find(':');
      if (colon == std::string::npos) throw DataError(where + ": malformed probe '" + item + "'");
      plan.trace.evaluations.push_back(
          {ParseNumber<std::size_t>(std::string_view(item).substr(0, colon), where),
           ParseCost(std::string_view(item).substr(colon + 1))});
    }
    if (!fields.empty()) throw DataError(where + ": unknown key '" + fields.begin()->first + "'");
    if (plan.split > plan.entity_count) throw DataError(where + ": split exceeds entity count");
    if (total != plan.Predicted().total) {
      throw DataError(where + ": cost_total does not match the breakdown");
    }
  } catch (const Error &e) {
    if (e.kind() == ErrorKind::kData) throw;
    throw DataError(where + ": " + e.what());
  }
  return plan;
}

}  // namespace eejoin
