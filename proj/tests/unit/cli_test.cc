// Copyright 2026 The driftood Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli/commands.h"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "support/test_util.h"

namespace driftood::cli {
namespace {

using ::driftood::testing::ReadFileBytes;
using ::driftood::testing::ScopedTempDir;

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun Invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "driftood");
  std::ostringstream out;
  std::ostringstream err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> TinyGenFlags() {
  return {"--classes", "3", "--dim", "8", "--timesteps", "3", "--n-per-class", "12",
          "--n-ood", "20"};
}

std::vector<std::string> With(std::vector<std::string> base,
                              const std::vector<std::string>& extra) {
  base.insert(base.end(), extra.begin(), extra.end());
  return base;
}

std::size_t CountLines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n' ? 1 : 0;
  return n;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto r = Invoke(With({"gen", "--out", data().string()}, TinyGenFlags()));
    ASSERT_EQ(r.code, kExitOk) << r.err;
  }
  std::filesystem::path data() const { return dir_.path() / "data"; }
  std::filesystem::path path(const std::string& name) const { return dir_.path() / name; }

 private:
  ScopedTempDir dir_{"cli"};
};

TEST(CliUsageTest, ExitCodes) {
  EXPECT_EQ(Invoke({}).code, kExitUsage);
  EXPECT_EQ(Invoke({"bogus"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"fit", "--no-such-flag"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"gen"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"--help"}).code, kExitOk);
}

TEST(CliUsageTest, HelpShowsDefaults) {
  const auto fit = Invoke({"fit", "--help"});
  EXPECT_EQ(fit.code, kExitOk);
  EXPECT_NE(fit.out.find("[1556]"), std::string::npos);
  EXPECT_NE(fit.out.find("[0.003]"), std::string::npos);
  EXPECT_NE(fit.out.find("[64]"), std::string::npos);
  const auto gen = Invoke({"gen", "--help"});
  EXPECT_NE(gen.out.find("[0.05]"), std::string::npos);
  EXPECT_NE(gen.out.find("[500]"), std::string::npos);
}

TEST(CliUsageTest, InvalidValuesAreUsageErrors) {
  ScopedTempDir dir("cli_invalid");
  const auto out = (dir.path() / "d").string();
  EXPECT_EQ(Invoke({"gen", "--out", out, "--timesteps", "0"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"gen", "--out", out, "--classes", "1"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"gen", "--out", out, "--id-concentration", "-1"}).code, kExitUsage);
}

TEST(CliUsageTest, MissingDatasetIsRuntimeFailure) {
  ScopedTempDir dir("cli_missing");
  const auto r = Invoke({"fit", "--dataset", (dir.path() / "nope").string(), "--out-dir",
                      (dir.path() / "o").string(), "--trials", "1"});
  EXPECT_EQ(r.code, kExitFailure);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, GenIsDeterministic) {
  ASSERT_EQ(Invoke(With({"gen", "--out", path("again").string()}, TinyGenFlags())).code, kExitOk);
  for (const char* f : {"manifest.json", "records.bin", "prompts.bin"}) {
    EXPECT_EQ(ReadFileBytes(data() / f), ReadFileBytes(path("again") / f)) << f;
  }
}

TEST_F(CliTest, FitIsDeterministicAcrossThreadCounts) {
  const auto a = Invoke({"fit", "--dataset", data().string(), "--out-dir", path("fa").string(),
                      "--trials", "2", "--threads", "1"});
  const auto b = Invoke({"fit", "--dataset", data().string(), "--out-dir", path("fb").string(),
                      "--trials", "2", "--threads", "4"});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  ASSERT_EQ(b.code, kExitOk) << b.err;
  EXPECT_EQ(ReadFileBytes(path("fa") / "state.json"), ReadFileBytes(path("fb") / "state.json"));
  EXPECT_EQ(ReadFileBytes(path("fa") / "train_log.jsonl"),
            ReadFileBytes(path("fb") / "train_log.jsonl"));
  // 2 trials x 3 timesteps x 5 epochs.
  EXPECT_EQ(CountLines(ReadFileBytes(path("fa") / "train_log.jsonl")), 30u);
}

TEST_F(CliTest, EvalWithoutStateNamesFit) {
  const auto r = Invoke({"eval", "--dataset", data().string(), "--out-dir", path("e").string()});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("driftood fit"), std::string::npos);
}

TEST_F(CliTest, EvalSingleTimestep) {
  ASSERT_EQ(Invoke({"fit", "--dataset", data().string(), "--out-dir", path("f").string(),
                 "--trials", "1"})
                .code,
            kExitOk);
  const auto r = Invoke({"eval", "--dataset", data().string(), "--state",
                      (path("f") / "state.json").string(), "--out-dir", path("e").string(),
                      "--timestep", "2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto csv = ReadFileBytes(path("e") / "eval.csv");
  EXPECT_EQ(CountLines(csv), 2u);
  EXPECT_EQ(csv.rfind("timestep,method,ood_set,fpr95,auroc,acc_clean,acc_shift\n", 0), 0u);
  EXPECT_NE(csv.find("\n2,tqpm,synthetic,"), std::string::npos);
}

TEST_F(CliTest, ZeroShotEvalNeedsNoState) {
  const auto r = Invoke({"eval", "--dataset", data().string(), "--zero-shot", "--out-dir",
                      path("z").string(), "--method", "dpm"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(CountLines(ReadFileBytes(path("z") / "eval.csv")), 4u);
}

TEST_F(CliTest, SweepErrors) {
  const std::vector<std::string> base = {"sweep", "--dataset", data().string(), "--out-dir",
                                         path("s").string(), "--trials", "1"};
  EXPECT_EQ(Invoke(With(base, {"--param", "alpha", "--values", "0.5"})).code, kExitUsage);
  EXPECT_EQ(Invoke(With(base, {"--param", "beta"})).code, kExitUsage);
  const auto ok = Invoke(With(base, {"--param", "beta", "--values", "0", "1"}));
  ASSERT_EQ(ok.code, kExitOk) << ok.err;
  const auto csv = ReadFileBytes(path("s") / "sweep.csv");
  EXPECT_EQ(CountLines(csv), 3u);
  EXPECT_EQ(csv.rfind("param,value,auroc,fpr95\n", 0), 0u);
}

TEST(CliTheoryTest, PassesAndFailsLoudly) {
  const auto ok = Invoke({"theory-check", "--trials", "10", "--grid", "50"});
  EXPECT_EQ(ok.code, kExitOk) << ok.err;
  EXPECT_NE(ok.out.find("pinsker_uniform"), std::string::npos);
  const auto bad = Invoke({"theory-check", "--trials", "10", "--grid", "50", "--inject-violation"});
  EXPECT_EQ(bad.code, kExitFailure);
  EXPECT_NE(bad.err.find("violation in pinsker_uniform: injected F=["), std::string::npos);
}

TEST_F(CliTest, ConfigFileAndCommandLinePrecedence) {
  {
    std::ofstream cfg(path("fit.toml"));
    cfg << "[fit]\nseed = 7\nepochs = 2\n";
  }
  const std::string cfg = path("fit.toml").string();
  ASSERT_EQ(Invoke({"fit", "--config", cfg, "--dataset", data().string(), "--out-dir",
                 path("c1").string(), "--trials", "1"})
                .code,
            kExitOk);
  ASSERT_EQ(Invoke({"fit", "--dataset", data().string(), "--out-dir", path("c2").string(),
                 "--trials", "1", "--seed", "7", "--epochs", "2"})
                .code,
            kExitOk);
  EXPECT_EQ(ReadFileBytes(path("c1") / "state.json"), ReadFileBytes(path("c2") / "state.json"));
  ASSERT_EQ(Invoke({"fit", "--config", cfg, "--dataset", data().string(), "--out-dir",
                 path("c3").string(), "--trials", "1", "--epochs", "3"})
                .code,
            kExitOk);
  EXPECT_EQ(CountLines(ReadFileBytes(path("c3") / "train_log.jsonl")), 9u);
  {
    std::ofstream bad(path("bad.toml"));
    bad << "seed = 7\n";
  }
  EXPECT_EQ(Invoke({"fit", "--config", path("bad.toml").string(), "--dataset", data().string(),
                 "--out-dir", path("c4").string()})
                .code,
            kExitUsage);
}

}  // namespace
}  // namespace driftood::cli
