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

#include <gtest/gtest.h>
#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "eejoin/optimizer.h"
#include "support/synthetic.h"

namespace eejoin {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("eejoin_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
    Write("pair.tsv", "1\tiPhone Charger\n2\tApple iPhone 4 Black or White 32G AT&T\n");
    Write("pair_docs.tsv", "10\tthe iPhone 4 is great\n11\tno match here\n");
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string &name) const { return (dir_ / name).string(); }

  void Write(const std::string &name, const std::string &text) {
    std::ofstream(Path(name)) << text;
  }

  std::string Read(const std::string &name) const {
    std::ifstream in(Path(name), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  int Run(std::vector<std::string> args) {
    std::vector<const char *> argv = {"eejoin"};
    for (const auto &a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int rc = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
    out_ = out.str();
    err_ = err.str();
    return rc;
  }

  void WriteSynthetic(std::uint64_t seed) {
    testing::SyntheticOptions o;
    o.seed = seed;
    o.entities = 150;
    o.docs = 40;
    o.doc_length = 60;
    auto text = testing::MakeSyntheticText(o);
    Write("dict.tsv", text.dictionary);
    Write("docs.tsv", text.documents);
  }

  fs::path dir_;
  std::string out_, err_;
};

TEST_F(CliTest, ProfileReportsLongestEntity) {
  ASSERT_EQ(Run({"profile", "--dict", Path("pair.tsv"), "--docs", Path("pair_docs.tsv"), "--out",
                 Path("s.txt")}),
            kExitOk)
      << err_;
  EXPECT_NE(out_.find("max_length 8"), std::string::npos) << out_;
  EXPECT_EQ(Read("s.txt").rfind("ee-stats v1", 0), 0u);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(Run({}), kExitUsage);
  EXPECT_EQ(Run({"profile", "--dict", Path("pair.tsv")}), kExitUsage);
  EXPECT_EQ(Run({"extract", "--dict", Path("pair.tsv"), "--docs", Path("pair_docs.tsv"),
                 "--plan", "brute-force", "--gamma", "7"}),
            kExitUsage);
  EXPECT_EQ(Run({"profile", "--dict", Path("absent.tsv"), "--docs", Path("pair_docs.tsv"),
                 "--out", Path("s.txt")}),
            kExitData);
  EXPECT_FALSE(err_.empty());
  Write("broken.tsv", "1\tok\nbroken line\n");
  EXPECT_EQ(Run({"profile", "--dict", Path("broken.tsv"), "--docs", Path("pair_docs.tsv"),
                 "--out", Path("s.txt")}),
            kExitData);
  EXPECT_NE(err_.find(":2"), std::string::npos) << err_;
}

TEST_F(CliTest, PlanAgreesWithOracleOnWorkedExample) {
  const std::vector<std::string> common = {"--dict", Path("pair.tsv"), "--predicate", "missing",
                                           "--gamma", "1"};
  auto with = [&](std::vector<std::string> args) {
    args.insert(args.begin() + 1, common.begin(), common.end());
    return args;
  };
  ASSERT_EQ(Run(with({"profile", "--docs", Path("pair_docs.tsv"), "--out", Path("s.txt")})),
            kExitOk);
  ASSERT_EQ(Run(with({"optimize", "--stats", Path("s.txt"), "--out", Path("p.txt")})), kExitOk);
  EXPECT_NE(out_.find("split k="), std::string::npos);
  ASSERT_EQ(Run(with({"extract", "--docs", Path("pair_docs.tsv"), "--plan", Path("p.txt"),
                      "--stats", Path("s.txt"), "--out", Path("m.tsv"),
                      "--verify-against-oracle"})),
            kExitOk)
      << err_;
  ASSERT_EQ(Run(with({"extract", "--docs", Path("pair_docs.tsv"), "--plan", "brute-force",
                      "--out", Path("truth.tsv")})),
            kExitOk);
  EXPECT_EQ(Read("m.tsv"), Read("truth.tsv"));
  EXPECT_EQ(Read("m.tsv"),
            "# entityId\tdocId\tstartToken\tendToken\tscore\n"
            "1\t10\t1\t2\t1/1\n"
            "2\t10\t1\t2\t1/1\n"
            "2\t10\t1\t3\t1/1\n"
            "2\t10\t2\t3\t1/1\n");
}

TEST_F(CliTest, NoMentionsGivesHeaderOnly) {
  Write("none.tsv", "1\tzebra\n2\tquagga\n");
  for (const char *method : {"index", "filter_ssjoin", "baseline"}) {
    ASSERT_EQ(Run({"extract", "--dict", Path("none.tsv"), "--docs", Path("pair_docs.tsv"),
                   "--method", method, "--scheme", "single_word", "--out", Path("m.tsv")}),
              kExitOk)
        << method << ": " << err_;
    EXPECT_EQ(Read("m.tsv"), "# entityId\tdocId\tstartToken\tendToken\tscore\n");
  }
}

TEST_F(CliTest, MapperCountDoesNotChangeOutput) {
  WriteSynthetic(5);
  std::string reference;
  for (const char *mappers : {"1", "8"}) {
    ASSERT_EQ(Run({"extract", "--dict", Path("dict.tsv"), "--docs", Path("docs.tsv"), "--method",
                   "filter_ssjoin", "--scheme", "prefix", "--gamma", "0.75", "--mappers", mappers,
                   "--out", Path("m.tsv")}),
              kExitOk)
        << err_;
    if (reference.empty()) reference = Read("m.tsv");
    EXPECT_EQ(Read("m.tsv"), reference);
  }
  EXPECT_GT(std::count(reference.begin(), reference.end(), '\n'), 10);
}

TEST_F(CliTest, ObjectivesBothProduceReadablePlans) {
  WriteSynthetic(6);
  ASSERT_EQ(Run({"profile", "--dict", Path("dict.tsv"), "--docs", Path("docs.tsv"), "--out",
                 Path("s.txt")}),
            kExitOk);
  for (const char *objective : {"work_done", "job_completion"}) {
    const std::string plan = Path(std::string(objective) + ".plan");
    ASSERT_EQ(Run({"optimize", "--dict", Path("dict.tsv"), "--stats", Path("s.txt"), "--out",
                   plan, "--objective", objective, "--mappers", "8"}),
              kExitOk)
        << err_;
    std::ifstream in(plan);
    auto parsed = ReadPlan(in, plan);
    EXPECT_EQ(parsed.objective,
              std::string(objective) == "work_done" ? Objective::kWorkDone
                                                    : Objective::kJobCompletion);
    ASSERT_EQ(Run({"explain", "--plan", plan}), kExitOk);
    EXPECT_EQ(out_, ExplainPlan(parsed));
  }
}

TEST_F(CliTest, SingleSchemeConfigIsHonoured) {
  WriteSynthetic(7);
  Write("run.cfg", "index_schemes=prefix\nssjoin_schemes=prefix\n");
  ASSERT_EQ(Run({"profile", "--dict", Path("dict.tsv"), "--docs", Path("docs.tsv"), "--out",
                 Path("s.txt"), "--config", Path("run.cfg")}),
            kExitOk);
  ASSERT_EQ(Run({"optimize", "--dict", Path("dict.tsv"), "--stats", Path("s.txt"), "--out",
                 Path("p.txt"), "--config", Path("run.cfg")}),
            kExitOk);
  std::ifstream in(Path("p.txt"));
  auto plan = ReadPlan(in);
  EXPECT_EQ(plan.head.scheme.kind, SignatureKind::kPrefix);
  EXPECT_EQ(plan.tail.scheme.kind, SignatureKind::kPrefix);
  EXPECT_EQ(plan.trace.scheme_pairs_tried, 2);
}

TEST_F(CliTest, LshMissesAreReportedAsMismatch) {
  WriteSynthetic(8);
  int rc = Run({"extract", "--dict", Path("dict.tsv"), "--docs", Path("docs.tsv"), "--method",
                "filter_ssjoin", "--scheme", "lsh", "--set", "lsh_bands=1", "--set",
                "lsh_rows=16", "--gamma", "0.6", "--verify-against-oracle", "--out",
                Path("m.tsv")});
  EXPECT_EQ(rc, kExitMismatch) << out_ << err_;
}

TEST_F(CliTest, PlanDictionaryDriftIsAnError) {
  ASSERT_EQ(Run({"profile", "--dict", Path("pair.tsv"), "--docs", Path("pair_docs.tsv"), "--out",
                 Path("s.txt")}),
            kExitOk);
  ASSERT_EQ(Run({"optimize", "--dict", Path("pair.tsv"), "--stats", Path("s.txt"), "--out",
                 Path("p.txt")}),
            kExitOk);
  Write("three.tsv", "1\tiPhone Charger\n2\tApple iPhone 4\n3\tgalaxy\n");
  EXPECT_EQ(Run({"extract", "--dict", Path("three.tsv"), "--docs", Path("pair_docs.tsv"),
                 "--plan", Path("p.txt")}),
            kExitData);
}

TEST_F(CliTest, CalibrateFromExtractSamples) {
  WriteSynthetic(9);
  std::vector<std::string> samples;
  for (const char *method : {"index", "filter_ssjoin"}) {
    for (const char *gamma : {"0.6", "0.75", "0.9"}) {
      const std::string path = Path(std::string(method) + gamma + ".samples");
      ASSERT_EQ(Run({"extract", "--dict", Path("dict.tsv"), "--docs", Path("docs.tsv"),
                     "--method", method, "--scheme", "single_word", "--gamma", gamma,
                     "--samples-out", path, "--out", Path("m.tsv")}),
                kExitOk)
          << err_;
      samples.push_back(path);
    }
  }
  std::vector<std::string> args = {"calibrate", "--out", Path("costs.txt"), "--samples"};
  args.insert(args.end(), samples.begin(), samples.end());
  ASSERT_EQ(Run(args), kExitOk) << err_;
  EXPECT_EQ(Read("costs.txt").rfind("ee-costs v1", 0), 0u);
  Write("zero.samples", "ee-samples v1\nlookup\t5\t0\nlookup\t9\t0\n");
  EXPECT_EQ(Run({"calibrate", "--out", Path("c2.txt"), "--samples", Path("zero.samples")}),
            kExitData);
}

}  // namespace
}  // namespace eejoin
