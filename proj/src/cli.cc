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

#include "eejoin/cli.h"

#include <omp.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eejoin/config.h"
#include "eejoin/corpus.h"
#include "eejoin/costmodel.h"
#include "eejoin/error.h"
#include "eejoin/optimizer.h"
#include "eejoin/oracle.h"
#include "eejoin/plans.h"
#include "eejoin/profile.h"

namespace eejoin {
namespace {

// Flags shared by every command that reads a run configuration. Explicit
// flags override the config file.
struct ConfigFlags {
  std::string path;
  std::vector<std::string> sets;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option *> options;
  int workers = 0;
  CLI::Option *workers_option = nullptr;

  void Attach(CLI::App *cmd) {
    cmd->add_option("--config", path, "run configuration (key=value lines)");
    cmd->add_option("--set", sets, "override a configuration key, key=value");
    static const std::pair<const char *, const char *> kFlags[] = {
        {"--gamma", "gamma"},
        {"--predicate", "predicate"},
        {"--weighting", "weighting"},
        {"--mappers", "mappers"},
        {"--reducers", "reducers"},
        {"--memory-budget", "memory_budget"},
        {"--sample-rate", "sample_rate"},
        {"--seed", "seed"},
        {"--costs", "costs"},
        {"--objective", "objective"},
    };
    for (const auto &[flag, key] : kFlags) {
      options[key] = cmd->add_option(flag, values[key], std::string("config key ") + key);
    }
    workers_option = cmd->add_option("--workers", workers,
                                     "worker threads (default: $EE_WORKERS, then all cores)");
  }

  RunConfig Load() const {
    RunConfig config = path.empty() ? RunConfig{} : LoadConfig(path);
    for (const auto &set : sets) {
      auto eq = set.find('=');
      if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + set + "'");
      SetConfigValue(config, set.substr(0, eq), set.substr(eq + 1));
    }
    for (const auto &[key, option] : options) {
      if (option->count() > 0) SetConfigValue(config, key, values.at(key));
    }
    ValidateConfig(config);
    return config;
  }

  int Workers() const {
    if (workers_option->count() > 0) {
      if (workers < 1) throw UsageError("--workers must be at least 1");
      return workers;
    }
    if (const char *env = std::getenv("EE_WORKERS"); env != nullptr && *env != '\0') {
      char *end = nullptr;
      long v = std::strtol(env, &end, 10);
      if (*end != '\0' || v < 1) throw UsageError("EE_WORKERS must be a positive integer");
      return static_cast<int>(v);
    }
    return std::max(1, omp_get_max_threads());
  }
};

struct Corpus {
  TokenDictionary tokens;
  Dictionary dict;
  std::vector<Document> docs;
};

void LoadInputs(Corpus &corpus, const RunConfig &config, const std::string &dict_path,
                const std::string *docs_path) {
  DictionaryLoadOptions options;
  options.weighting = config.weighting;
  corpus.dict = LoadDictionary(dict_path, corpus.tokens, options);
  if (docs_path != nullptr) {
    corpus.docs = LoadDocuments(*docs_path, corpus.tokens,
                                DictionaryWeights(corpus.dict, config.weighting));
  }
}

ProfileOptions ProfileOptionsFor(const RunConfig &config, int workers) {
  ProfileOptions options{SimilarityThreshold(config.gamma)};
  options.predicate = config.predicate;
  options.sample_rate = config.sample_rate;
  options.variant_cap = config.variant_cap;
  options.workers = workers;
  return options;
}

MatchOptions OrderedMatch(const RunConfig &config, const CorpusStats &stats) {
  MatchOptions match = MatchOptionsFor(config);
  match.order = std::make_shared<TokenOrder>(OrderFromStats(stats));
  return match;
}

std::ofstream OpenOutput(const std::string &path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  return out;
}

std::ifstream OpenInput(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return in;
}

// profile ------------------------------------------------------------------

struct ProfileArgs {
  std::string dict, docs, out;
  ConfigFlags flags;
};

void RunProfile(const ProfileArgs &args, std::ostream &out) {
  RunConfig config = args.flags.Load();
  Corpus corpus;
  LoadInputs(corpus, config, args.dict, &args.docs);
  CorpusStats stats =
      ProfileCorpus(corpus.dict, corpus.docs, ProfileOptionsFor(config, args.flags.Workers()));
  WriteStats(args.out, stats, corpus.tokens);
  out << "entities " << corpus.dict.size() << "\n"
      << "max_length " << corpus.dict.max_length() << "\n"
      << "documents " << stats.total_docs << " (" << stats.sampled_docs << " sampled)\n"
      << "est_candidates " << stats.est_candidates << "\n";
}

// optimize -----------------------------------------------------------------

struct OptimizeArgs {
  std::string dict, stats, out;
  ConfigFlags flags;
};

ExecutionPlan PlanFor(const RunConfig &config, const Dictionary &dict, const CorpusStats &stats) {
  CostEnv env(dict, stats, OrderedMatch(config, stats));
  env.constants = LoadCostConstants(config);
  env.mappers = config.mappers;
  env.memory_budget = config.memory_budget;
  OptimizerConfig opt;
  opt.index_schemes = config.index_schemes;
  opt.ssjoin_schemes = config.ssjoin_schemes;
  opt.lsh = LshSchemeFor(config);
  return Optimize(env, opt, config.objective);
}

void RunOptimize(const OptimizeArgs &args, std::ostream &out) {
  RunConfig config = args.flags.Load();
  Corpus corpus;
  LoadInputs(corpus, config, args.dict, nullptr);
  CorpusStats stats = ReadStats(args.stats, corpus.tokens);
  Dictionary ordered = SortByFrequency(corpus.dict, stats);
  ExecutionPlan plan = PlanFor(config, ordered, stats);
  auto file = OpenOutput(args.out);
  WritePlan(file, plan);
  out << ExplainPlan(plan);
}

// extract ------------------------------------------------------------------

struct ExtractArgs {
  std::string dict, docs, plan, method, scheme = "single_word", stats, out;
  std::string metrics_out, samples_out;
  bool verify = false;
  ConfigFlags flags;
};

void PrintMetrics(std::ostream &out, const JobMetrics &m, std::size_t mentions) {
  out << "mentions " << mentions << "\n"
      << "jobs " << m.jobs << "\n"
      << "shuffle_records " << m.shuffle_records << "\n"
      << "shuffle_bytes " << m.shuffle_bytes << "\n"
      << "max_mapper_busy " << m.MaxMapperBusy() << "\n"
      << "max_reducer_busy " << m.MaxReducerBusy() << "\n"
      << "wall_clock_units " << m.wall_clock_units << "\n";
}

int RunExtract(const ExtractArgs &args, std::ostream &out, std::ostream &err) {
  if (args.plan.empty() == args.method.empty()) {
    throw UsageError("extract needs exactly one of --plan or --method");
  }
  RunConfig config = args.flags.Load();
  const int workers = args.flags.Workers();
  Corpus corpus;
  LoadInputs(corpus, config, args.dict, &args.docs);
  const OracleOptions oracle_options = [&] {
    OracleOptions o(SimilarityThreshold(config.gamma), config.predicate);
    o.workers = workers;
    return o;
  }();

  std::vector<Mention> mentions;
  JobMetrics metrics;
  std::optional<std::vector<CalibrationPoint>> samples;
  if (args.plan == "brute-force") {
    mentions = BruteForceExtract(corpus.dict, corpus.docs, oracle_options).mentions;
  } else {
    CorpusStats stats = args.stats.empty()
                            ? ProfileCorpus(corpus.dict, corpus.docs,
                                            ProfileOptionsFor(config, workers))
                            : ReadStats(args.stats, corpus.tokens);
    Dictionary dict = SortByFrequency(corpus.dict, stats);
    PlanOptions options(OrderedMatch(config, stats));
    options.mappers = config.mappers;
    options.reducers = config.reducers;
    options.workers = workers;
    options.memory_budget = config.memory_budget;
    PlanResult result;
    if (!args.plan.empty()) {
      auto in = OpenInput(args.plan);
      ExecutionPlan plan = ReadPlan(in, args.plan);
      if (plan.entity_count != dict.size()) {
        throw DataError("plan was optimized for " + std::to_string(plan.entity_count) +
                        " entities but the dictionary has " + std::to_string(dict.size()));
      }
      result = RunHybridPlan(dict, plan.split, plan.head, plan.tail, corpus.docs, options);
    } else {
      SignatureScheme scheme = LshSchemeFor(config);
      scheme.kind = ParseSignatureKind(args.scheme);
      const bool baseline = args.method == "baseline";
      MethodAssignment assignment{baseline ? Method::kFilterSsjoin : ParseMethod(args.method),
                                  scheme};
      result = baseline ? RunSsjoinPlan(dict, dict.all(), corpus.docs, scheme, options, false)
                        : RunAssignment(dict, dict.all(), corpus.docs, assignment, options);
      if (!args.samples_out.empty()) {
        CostEnv env(dict, stats, options.match);
        env.mappers = config.mappers;
        env.memory_budget = config.memory_budget;
        CostEstimate est = AssignmentCost(env, dict.all(), assignment, config.objective);
        samples = CalibrationPointsFor(assignment.method, stats.est_candidates, est.passes,
                                       est.entity_signatures + est.candidate_signatures,
                                       result.metrics);
      }
    }
    mentions = std::move(result.mentions);
    metrics = std::move(result.metrics);
  }

  if (!args.samples_out.empty()) {
    if (!samples) throw UsageError("--samples-out needs a --method run");
    auto file = OpenOutput(args.samples_out);
    WriteCalibrationPoints(file, *samples);
  }
  if (!args.metrics_out.empty()) {
    auto file = OpenOutput(args.metrics_out);
    WriteMetrics(file, metrics);
  }
  std::ostream &report = args.out.empty() ? err : out;
  if (args.out.empty()) {
    WriteMentions(out, mentions);
  } else {
    auto file = OpenOutput(args.out);
    WriteMentions(file, mentions);
  }
  PrintMetrics(report, metrics, mentions.size());

  if (args.verify) {
    auto truth = BruteForceExtract(corpus.dict, corpus.docs, oracle_options).mentions;
    if (truth != mentions) {
      std::size_t missing = 0, extra = 0;
      for (const auto &m : truth) {
        if (!std::binary_search(mentions.begin(), mentions.end(), m, MentionLess)) ++missing;
      }
      for (const auto &m : mentions) {
        if (!std::binary_search(truth.begin(), truth.end(), m, MentionLess)) ++extra;
      }
      err << "verification failed: " << missing << " missing, " << extra
          << " unexpected mentions (oracle has " << truth.size() << ")\n";
      return kExitMismatch;
    }
    report << "verified against oracle: " << truth.size() << " mentions\n";
  }
  return kExitOk;
}

// calibrate ----------------------------------------------------------------

struct CalibrateArgs {
  std::vector<std::string> samples;
  std::string out;
};

void RunCalibrate(const CalibrateArgs &args, std::ostream &out) {
  std::vector<CalibrationPoint> points;
  for (const auto &path : args.samples) {
    auto in = OpenInput(path);
    auto more = ReadCalibrationPoints(in, path);
    points.insert(points.end(), more.begin(), more.end());
  }
  CostConstants constants = Calibrate(points);
  auto file = OpenOutput(args.out);
  WriteCosts(file, constants);
  WriteCosts(out, constants);
}

}  // namespace

int RunCli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"Cost-optimized approximate dictionary entity extraction"};
  app.require_subcommand(1);

  ProfileArgs profile;
  auto *profile_cmd = app.add_subcommand("profile", "gather corpus statistics");
  profile_cmd->add_option("--dict", profile.dict, "entity dictionary TSV")->required();
  profile_cmd->add_option("--docs", profile.docs, "document TSV")->required();
  profile_cmd->add_option("--out", profile.out, "stats file to write")->required();
  profile.flags.Attach(profile_cmd);

  OptimizeArgs optimize;
  auto *optimize_cmd = app.add_subcommand("optimize", "choose the cheapest plan");
  optimize_cmd->add_option("--dict", optimize.dict, "entity dictionary TSV")->required();
  optimize_cmd->add_option("--stats", optimize.stats, "stats file from profile")->required();
  optimize_cmd->add_option("--out", optimize.out, "plan file to write")->required();
  optimize.flags.Attach(optimize_cmd);

  ExtractArgs extract;
  auto *extract_cmd = app.add_subcommand("extract", "extract mentions");
  extract_cmd->add_option("--dict", extract.dict, "entity dictionary TSV")->required();
  extract_cmd->add_option("--docs", extract.docs, "document TSV")->required();
  extract_cmd->add_option("--plan", extract.plan, "plan file, or brute-force");
  extract_cmd->add_option("--method", extract.method, "index, filter_ssjoin or baseline");
  extract_cmd->add_option("--scheme", extract.scheme, "signature scheme for --method");
  extract_cmd->add_option("--stats", extract.stats, "stats file (default: profile now)");
  extract_cmd->add_option("--out", extract.out, "mention TSV (default: standard output)");
  extract_cmd->add_option("--metrics-out", extract.metrics_out, "ee-metrics v1 dump");
  extract_cmd->add_option("--samples-out", extract.samples_out, "calibration samples");
  extract_cmd->add_flag("--verify-against-oracle", extract.verify,
                        "compare with the brute-force extractor");
  extract.flags.Attach(extract_cmd);

  CalibrateArgs calibrate;
  auto *calibrate_cmd = app.add_subcommand("calibrate", "fit cost constants");
  calibrate_cmd->add_option("--samples", calibrate.samples, "ee-samples v1 files")
      ->required();
  calibrate_cmd->add_option("--out", calibrate.out, "ee-costs v1 file to write")->required();

  std::string explain_plan;
  auto *explain_cmd = app.add_subcommand("explain", "describe a plan file");
  explain_cmd->add_option("--plan", explain_plan, "plan file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (profile_cmd->parsed()) {
      RunProfile(profile, out);
    } else if (optimize_cmd->parsed()) {
      RunOptimize(optimize, out);
    } else if (extract_cmd->parsed()) {
      return RunExtract(extract, out, err);
    } else if (calibrate_cmd->parsed()) {
      RunCalibrate(calibrate, out);
    } else if (explain_cmd->parsed()) {
      auto in = OpenInput(explain_plan);
      out << ExplainPlan(ReadPlan(in, explain_plan));
    }
  } catch (const Error &e) {
    err << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::kUsage: return kExitUsage;
      case ErrorKind::kData: return kExitData;
      case ErrorKind::kVerification: return kExitMismatch;
    }
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace eejoin
