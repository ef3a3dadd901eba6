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

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "eejoin/error.h"

namespace eejoin {
namespace {

SignatureScheme Scheme(SignatureKind kind) {
  SignatureScheme s;
  s.kind = kind;
  return s;
}

MethodAssignment Assign(Method method, SignatureKind kind) {
  return {method, Scheme(kind)};
}

// Entities with one distinct token each, ids 1..n.
struct World {
  explicit World(int n, std::int64_t freq = 0) {
    std::vector<Entity> entities(n);
    for (int i = 0; i < n; ++i) {
      entities[i].id = i + 1;
      entities[i].surface = WeightedTokenSeq({static_cast<TokenId>(i)});
      stats.entity_mention_freq[i + 1] = freq;
    }
    dict = Dictionary::Build(entities);
  }
  CostEnv Env() const { return CostEnv(dict, stats, MatchOptions(SimilarityThreshold(Ratio(3, 4)))); }

  Dictionary dict;
  CorpusStats stats;
};

TEST(IndexCostTest, SinglePassExample) {
  World w(1);
  w.stats.est_candidates = 10000;
  CostEnv env = w.Env();
  env.mappers = 10;
  CostQuery q{w.dict.all(), Scheme(SignatureKind::kSingleWord), Objective::kJobCompletion};
  auto est = IndexCost(env, q);
  EXPECT_EQ(est.total, Cost(1000));
  EXPECT_EQ(est.passes, 1);
  EXPECT_EQ(est.breakdown.at("lookup"), Cost(1000));
  q.objective = Objective::kWorkDone;
  EXPECT_EQ(IndexCost(env, q).total, Cost(10000));
  q.slice = {0, 0};
  EXPECT_EQ(IndexCost(env, q).total, Cost(0));
  env.memory_budget = 0;
  EXPECT_THROW(IndexCost(env, {w.dict.all(), Scheme(SignatureKind::kSingleWord)}), Error);
  EXPECT_THROW(IndexCost(env, {w.dict.all(), Scheme(SignatureKind::kLsh)}), Error);
}

TEST(IndexCostTest, FractionalPassesRoundUp) {
  World w(5);
  w.stats.est_candidates = 700;
  CostEnv env = w.Env();
  CostQuery q{w.dict.all(), Scheme(SignatureKind::kSingleWord), Objective::kJobCompletion};
  const Cost single = IndexCost(env, q).total;
  const std::int64_t footprint =
      EstimateFootprint(w.dict, w.dict.all(), IndexScheme::kPerWord, env.match);
  ASSERT_EQ(footprint % 5, 0);
  env.memory_budget = footprint * 2 / 5;  // footprint = 2.5 Me
  auto est = IndexCost(env, q);
  EXPECT_EQ(est.passes, 3);
  EXPECT_EQ(est.total, 3 * single);
}

TEST(SsjoinCostTest, PlugInExample) {
  World w(1, 99);  // one signature per entity, times (1 + 99)
  w.stats.est_candidates = 10000;
  w.stats.est_candidate_tokens = 400;
  CostEnv env = w.Env();
  env.mappers = 10;
  env.constants = {Cost(1), Cost(1), Cost(2), Cost(1)};
  CostQuery q{w.dict.all(), Scheme(SignatureKind::kSingleWord), Objective::kJobCompletion};
  auto est = SsjoinCost(env, q);
  EXPECT_EQ(est.entity_signatures + est.candidate_signatures, 500);
  EXPECT_EQ(est.breakdown.at("sig_gen"), Cost(1000));
  EXPECT_EQ(est.breakdown.at("shuffle") + est.breakdown.at("verify"), Cost(1500));
  EXPECT_EQ(est.total, Cost(2500));
  q.slice = {0, 0};
  EXPECT_EQ(SsjoinCost(env, q).total, Cost(0));
}

TEST(SsjoinCostTest, FrequencyTermIsLinear) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    World base(20);
    base.stats.est_candidates = 5000;
    base.stats.est_candidate_tokens = 3000;
    World once = base, twice = base;
    for (auto &[id, f] : once.stats.entity_mention_freq) {
      f = std::uniform_int_distribution<int>(0, 1000)(rng);
      twice.stats.entity_mention_freq[id] = 2 * f;
    }
    CostQuery q{base.dict.all(), Scheme(SignatureKind::kSingleWord), Objective::kJobCompletion};
    auto c0 = SsjoinCost(base.Env(), q), c1 = SsjoinCost(once.Env(), q),
         c2 = SsjoinCost(twice.Env(), q);
    EXPECT_EQ(c1.breakdown.at("sig_gen"), c2.breakdown.at("sig_gen"));
    for (const char *term : {"shuffle", "verify"}) {
      EXPECT_EQ(c2.breakdown.at(term) - c0.breakdown.at(term),
                2 * (c1.breakdown.at(term) - c0.breakdown.at(term)));
    }
  }
}

TEST(ObjectiveTest, WorkDoneScalesMapTermsByMappers) {
  World w(10, 3);
  w.stats.est_candidates = 999;
  w.stats.est_candidate_tokens = 50;
  for (int mappers : {1, 4, 7}) {
    CostEnv env = w.Env();
    env.mappers = mappers;
    for (auto kind : {SignatureKind::kSingleWord, SignatureKind::kPrefix}) {
      CostQuery job{w.dict.all(), Scheme(kind), Objective::kJobCompletion};
      CostQuery work = job;
      work.objective = Objective::kWorkDone;
      EXPECT_EQ(IndexCost(env, work).total, IndexCost(env, job).total * mappers);
      auto sj = SsjoinCost(env, job), sw = SsjoinCost(env, work);
      EXPECT_EQ(sw.breakdown.at("sig_gen"), sj.breakdown.at("sig_gen") * mappers);
      EXPECT_EQ(sw.breakdown.at("shuffle"), sj.breakdown.at("shuffle"));
      if (mappers == 1) {
        EXPECT_EQ(sw.total, sj.total);
      }
      EXPECT_GE(sw.total, sj.total);
    }
  }
}

TEST(PlanCostTest, ZeroContributionAndAdditivity) {
  World w(30);
  std::mt19937_64 rng(6);
  for (auto &[id, f] : w.stats.entity_mention_freq) f = std::uniform_int_distribution<int>(0, 50)(rng);
  w.stats.est_candidates = 4000;
  w.stats.est_candidate_tokens = 900;
  CostEnv env = w.Env();
  env.memory_budget = 200;
  auto head = Assign(Method::kIndex, SignatureKind::kSingleWord);
  auto tail = Assign(Method::kFilterSsjoin, SignatureKind::kSingleWord);
  const std::size_t n = w.dict.size();
  for (auto obj : {Objective::kJobCompletion, Objective::kWorkDone}) {
    EXPECT_EQ(PlanCost(env, 0, head, tail, obj).total,
              SsjoinCost(env, {w.dict.all(), tail.scheme, obj}).total);
    EXPECT_EQ(PlanCost(env, n, head, tail, obj).total,
              IndexCost(env, {w.dict.all(), head.scheme, obj}).total);
    CostCurve head_curve(env, head, obj), tail_curve(env, tail, obj);
    for (std::size_t k = 0; k <= n; ++k) {
      Cost sum = IndexCost(env, {{0, k}, head.scheme, obj}).total +
                 SsjoinCost(env, {{k, n}, tail.scheme, obj}).total;
      auto plan = PlanCost(env, k, head, tail, obj);
      EXPECT_EQ(plan.total, sum);
      Cost terms(0);
      for (const auto &[name, value] : plan.breakdown) terms += value;
      EXPECT_EQ(terms, plan.total);
      EXPECT_EQ(head_curve.Prefix(k), IndexCost(env, {{0, k}, head.scheme, obj}).total);
      EXPECT_EQ(tail_curve.Suffix(k), SsjoinCost(env, {{k, n}, tail.scheme, obj}).total);
    }
  }
  EXPECT_THROW(PlanCost(env, n + 1, head, tail, Objective::kWorkDone), Error);
}

TEST(PlanCostTest, MonotoneSidesOverFrequencySortedEntities) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    World w(40);
    for (auto &[id, f] : w.stats.entity_mention_freq) {
      f = std::uniform_int_distribution<int>(0, 100)(rng);
    }
    w.stats.est_candidates = 1000;
    w.dict = SortByFrequency(w.dict, w.stats);
    CostEnv env = w.Env();
    env.memory_budget = 48 * std::uniform_int_distribution<int>(1, 10)(rng);
    for (auto kind : {SignatureKind::kSingleWord, SignatureKind::kPrefix,
                      SignatureKind::kJaccardVariant}) {
      CostCurve index(env, Assign(Method::kIndex, kind), Objective::kJobCompletion);
      CostCurve ssjoin(env, Assign(Method::kFilterSsjoin, kind), Objective::kJobCompletion);
      for (std::size_t k = 1; k <= w.dict.size(); ++k) {
        EXPECT_LE(index.Suffix(k), index.Suffix(k - 1));
        EXPECT_GE(ssjoin.Prefix(k), ssjoin.Prefix(k - 1));
      }
    }
  }
}

TEST(CostsFileTest, RoundTripsAndValidates) {
  CostConstants c{Cost(3) / 7, Cost(0), Cost(11, 4), Cost(1) / 3};
  std::stringstream buffer;
  WriteCosts(buffer, c);
  EXPECT_EQ(buffer.str().rfind("ee-costs v1", 0), 0u);
  EXPECT_EQ(ReadCosts(buffer), c);
  std::istringstream bad("ee-costs v1\nlookup\t-1\n");
  EXPECT_THROW(ReadCosts(bad), Error);
  std::istringstream wrong("ee-plan v1\n");
  EXPECT_THROW(ReadCosts(wrong), Error);
  c.shuffle = -1;
  EXPECT_THROW(ValidateConstants(c), Error);
}

TEST(CalibrationTest, RecoversKnownConstants) {
  std::mt19937_64 rng(10);
  const CostConstants truth{Cost(7) / 4, Cost(3) / 10, Cost(5, 2), Cost(2) / 3};
  auto value = [](const Cost &c) { return static_cast<double>(c); };
  std::vector<CalibrationPoint> points;
  for (CostPhase phase : {CostPhase::kLookup, CostPhase::kSig, CostPhase::kShuffle,
                          CostPhase::kVerify}) {
    const double slope = phase == CostPhase::kLookup ? value(truth.lookup)
                         : phase == CostPhase::kSig  ? value(truth.sig)
                         : phase == CostPhase::kShuffle ? value(truth.shuffle)
                                                        : value(truth.verify);
    for (int i = 0; i < 12; ++i) {
      std::int64_t x = std::uniform_int_distribution<std::int64_t>(1000, 1000000)(rng);
      double noise = std::uniform_real_distribution<double>(-0.003, 0.003)(rng);
      points.push_back({phase, x, std::llround(slope * x * (1 + noise) + 50)});
    }
  }
  std::stringstream buffer;
  WriteCalibrationPoints(buffer, points);
  auto fitted = Calibrate(ReadCalibrationPoints(buffer));
  EXPECT_NEAR(value(fitted.lookup), value(truth.lookup), 0.01 * value(truth.lookup));
  EXPECT_NEAR(value(fitted.sig), value(truth.sig), 0.01 * value(truth.sig));
  EXPECT_NEAR(value(fitted.shuffle), value(truth.shuffle), 0.01 * value(truth.shuffle));
  EXPECT_NEAR(value(fitted.verify), value(truth.verify), 0.01 * value(truth.verify));
}

std::vector<CalibrationPoint> Line(std::int64_t slope) {
  std::vector<CalibrationPoint> points;
  for (CostPhase phase : {CostPhase::kLookup, CostPhase::kSig, CostPhase::kShuffle,
                          CostPhase::kVerify}) {
    for (std::int64_t x : {10, 20, 30}) points.push_back({phase, x, 1000 + slope * x});
  }
  return points;
}

TEST(CalibrationTest, DegenerateAndNegativeFits) {
  auto zero = Line(1);
  for (auto &p : zero) {
    if (p.phase == CostPhase::kShuffle) p.y = 0;
  }
  EXPECT_THROW(Calibrate(zero), Error);
  auto negative = Calibrate(Line(-5));
  EXPECT_EQ(negative.lookup, Cost(0));
  EXPECT_EQ(negative.verify, Cost(0));
  EXPECT_EQ(Calibrate(Line(3)).shuffle, Cost(3));
  std::istringstream bad("ee-samples v1\nshuffle\t1\n");
  EXPECT_THROW(ReadCalibrationPoints(bad), Error);
}

TEST(CalibrationTest, PointsFromMetrics) {
  JobMetrics m;
  m.mapper_busy = {5, 7};
  m.reducer_busy = {3};
  m.shuffle_records = 11;
  auto index = CalibrationPointsFor(Method::kIndex, 100, 2, 0, m);
  EXPECT_EQ(index, (std::vector<CalibrationPoint>{{CostPhase::kLookup, 200, 12}}));
  auto ssjoin = CalibrationPointsFor(Method::kFilterSsjoin, 100, 1, 40, m);
  ASSERT_EQ(ssjoin.size(), 3u);
  EXPECT_EQ(ssjoin[1], (CalibrationPoint{CostPhase::kShuffle, 40, 11}));
}

TEST(CostNamesTest, RoundTrip) {
  EXPECT_EQ(ParseObjective(ObjectiveName(Objective::kWorkDone)), Objective::kWorkDone);
  EXPECT_EQ(ParseCostPhase(CostPhaseName(CostPhase::kVerify)), CostPhase::kVerify);
  EXPECT_THROW(ParseObjective("fastest"), Error);
}

}  // namespace
}  // namespace eejoin
