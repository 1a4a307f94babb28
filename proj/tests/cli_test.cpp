/* Copyright 2026 The QNNW Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include "qnnw/cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

namespace qnnw::cli {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome Invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "qnnw");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = Main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("qnnw_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }
  static std::string DataDir() { return QNNW_MNIST_DIR; }

  fs::path dir_;
};

TEST_F(CliTest, GradcheckPassesAndListsErrors) {
  const Outcome r = Invoke({"gradcheck", "--seed", "3"});
  EXPECT_EQ(r.code, kExitOk) << r.out;
  EXPECT_NE(r.out.find("max_error="), std::string::npos);
  EXPECT_NE(r.out.find("PASS gate-kernels-vs-dense"), std::string::npos);
  EXPECT_NE(r.out.find("all checks passed"), std::string::npos);
}

TEST_F(CliTest, GradcheckFailsOnPerturbedRy) {
  const gradcheck::GateApplier perturbed = [](sim::Statevector& s, const sim::Gate& g,
                                              double angle) {
    sim::ApplyGateUnchecked(s, g, g.kind == sim::GateKind::kRY ? angle * (1.0 + 1e-6) : angle);
  };
  std::ostringstream out, err;
  EXPECT_EQ(RunGradcheck(0, {out, err}, perturbed), kExitNegative);
  EXPECT_NE(out.str().find("FAIL gate-kernels-vs-dense"), std::string::npos) << out.str();
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(Invoke({}).code, kExitError);
  EXPECT_EQ(Invoke({"no-such-command"}).code, kExitError);
  EXPECT_EQ(Invoke({"gradcheck", "--bogus"}).code, kExitError);
  EXPECT_EQ(Invoke({"--help"}).code, kExitOk);
}

TEST_F(CliTest, ReproduceNeedsSeeds) {
  EXPECT_EQ(Invoke({"reproduce", "--table", "1", "--data-dir", DataDir()}).code, kExitError);
  std::ostringstream out, err;
  EXPECT_THROW(RunReproduce(1, {}, experiment::ExperimentConfig{}, DataPaths{DataDir(), "", ""},
                            "", "", {out, err}),
               Error);
  EXPECT_EQ(Invoke({"reproduce", "--table", "3", "--seeds", "0"}).code, kExitError);
}

TEST_F(CliTest, InfeasibleScheduleNamesConstraint) {
  const Outcome r = Invoke({"train-watermarked", "--data-dir", DataDir(), "--n-t", "3",
                            "--checkpoint", Path("x.qnnw")});
  EXPECT_EQ(r.code, kExitError);
  EXPECT_NE(r.err.find("n_T mod 2"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(Path("x.qnnw")));
}

TEST_F(CliTest, MissingDataIsAnError) {
  const Outcome r = Invoke({"export-schedule", "--data-dir", Path("nowhere")});
  EXPECT_EQ(r.code, kExitError);
  EXPECT_NE(r.err.find("io"), std::string::npos) << r.err;
}

TEST_F(CliTest, ConfigFileWithFlagOverride) {
  {
    std::ofstream f(Path("run.ini"));
    f << "data-dir = \"" << DataDir() << "\"\n"
      << "digit-a = 4\n"
      << "digit-b = 5\n"
      << "n-trigger = 20\n";
  }
  const Outcome r = Invoke({"export-schedule", "--config", Path("run.ini"), "--n-trigger", "10"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "# qnnw-schedule v1 c=2 n_D=18 n_T=2 q=10 t=1");
  EXPECT_NE(r.err.find("digit-a=4"), std::string::npos) << r.err;  // resolved config is logged
  EXPECT_NE(r.err.find("n-trigger=10"), std::string::npos);

  const Outcome from_file = Invoke({"export-schedule", "--config", Path("run.ini")});
  EXPECT_EQ(from_file.out.substr(0, from_file.out.find('\n')),
            "# qnnw-schedule v1 c=2 n_D=8 n_T=2 q=20 t=1");

  {
    std::ofstream f(Path("bad.ini"));
    f << "not-an-option = 1\n";
  }
  EXPECT_EQ(Invoke({"export-schedule", "--config", Path("bad.ini")}).code, kExitError);
}

TEST_F(CliTest, ExportScheduleIsValid) {
  const Outcome r = Invoke({"export-schedule", "--data-dir", DataDir(), "--out", Path("s.txt")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::ifstream f(Path("s.txt"));
  std::string line;
  int lines = 0;
  while (std::getline(f, line)) ++lines;
  EXPECT_EQ(lines, 201);
}

TEST_F(CliTest, UntrainedBaselineNearChance) {
  const Outcome r = Invoke({"train-baseline", "--data-dir", DataDir(), "--epochs", "0",
                            "--no-timing", "--checkpoint", Path("b0.qnnw"), "--metrics",
                            Path("b0.csv")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const HybridModel model = LoadCheckpoint(Path("b0.qnnw"));
  EXPECT_EQ(model.metadata().epochs, 0u);
  std::istringstream csv(r.out);
  std::string header, row;
  std::getline(csv, header);
  std::getline(csv, row);
  EXPECT_EQ(header, experiment::kMetricsCsvHeader);
  // digit_a,digit_b,n_trigger,seed,clean_acc,...
  std::vector<std::string> cols;
  std::stringstream ss(row);
  for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
  ASSERT_EQ(cols.size(), 8u);
  EXPECT_EQ(cols[2], "0");
  EXPECT_NEAR(std::stod(cols[4]), 0.5, 0.2);
  EXPECT_EQ(cols[7], "0.000");
}

// Shrunk model so the end-to-end flow stays fast; accuracy is irrelevant here.
std::vector<std::string> Small(std::vector<std::string> args) {
  for (const char* a : {"--n-qubits", "3", "--reps", "1", "--epochs", "1", "--no-timing"}) {
    args.push_back(a);
  }
  return args;
}

TEST_F(CliTest, TrainingIsDeterministic) {
  const auto a = Invoke(Small({"train-watermarked", "--data-dir", DataDir(), "--checkpoint",
                               Path("a.qnnw"), "--metrics", Path("a.csv")}));
  const auto b = Invoke(Small({"train-watermarked", "--data-dir", DataDir(), "--checkpoint",
                               Path("b.qnnw"), "--metrics", Path("b.csv")}));
  ASSERT_EQ(a.code, kExitOk) << a.err;
  ASSERT_EQ(b.code, kExitOk) << b.err;
  EXPECT_EQ(ReadFileBytes(Path("a.qnnw")), ReadFileBytes(Path("b.qnnw")));
  EXPECT_EQ(ReadFileBytes(Path("a.csv")), ReadFileBytes(Path("b.csv")));
}

TEST_F(CliTest, QueryTranscriptVerifyRoundTrip) {
  ASSERT_EQ(Invoke(Small({"train-watermarked", "--data-dir", DataDir(), "--checkpoint",
                          Path("m.qnnw")}))
                .code,
            kExitOk);
  ASSERT_EQ(Invoke({"query", "--data-dir", DataDir(), "--checkpoint", Path("m.qnnw"), "--out",
                    Path("m.csv")})
                .code,
            kExitOk);
  const Outcome by_ckpt = Invoke({"verify", "--data-dir", DataDir(), "--target", Path("m.qnnw")});
  const Outcome by_transcript =
      Invoke({"verify", "--data-dir", DataDir(), "--target", Path("m.csv"), "--report",
              Path("r.txt"), "--report-csv", Path("r.csv")});
  ASSERT_NE(by_ckpt.code, kExitError) << by_ckpt.err;
  ASSERT_NE(by_transcript.code, kExitError) << by_transcript.err;
  auto field = [](const std::string& text, const std::string& key) {
    const auto p = text.find(key + ": ");
    return text.substr(p, text.find('\n', p) - p);
  };
  EXPECT_EQ(field(by_ckpt.out, "trigger_accuracy"), field(by_transcript.out, "trigger_accuracy"));
  EXPECT_EQ(field(by_ckpt.out, "decision"), field(by_transcript.out, "decision"));
  EXPECT_EQ(by_ckpt.code, field(by_ckpt.out, "decision") == "decision: owned" ? 0 : 1);
  EXPECT_TRUE(fs::exists(Path("r.txt")));
  EXPECT_TRUE(fs::exists(Path("r.csv")));

  // Truncated transcript no longer matches |R|.
  std::ifstream in(Path("m.csv"));
  std::ofstream cut(Path("cut.csv"));
  std::string line;
  for (int i = 0; i < 50 && std::getline(in, line); ++i) cut << line << "\n";
  cut.close();
  const Outcome mismatch = Invoke({"verify", "--data-dir", DataDir(), "--target", Path("cut.csv")});
  EXPECT_EQ(mismatch.code, kExitError);
  EXPECT_NE(mismatch.err.find("validation"), std::string::npos) << mismatch.err;
}

// Full-size defaults on digits 0/1: marked model verifies as owned, the
// unmarked one does not.
TEST_F(CliTest, MarkedOwnedBaselineNotOwned) {
  const std::string d = DataDir();
  ASSERT_EQ(Invoke({"train-watermarked", "--data-dir", d, "--checkpoint", Path("m.qnnw")}).code,
            kExitOk);
  ASSERT_EQ(Invoke({"train-baseline", "--data-dir", d, "--checkpoint", Path("b.qnnw")}).code,
            kExitOk);
  const Outcome marked = Invoke({"verify", "--data-dir", d, "--target", Path("m.qnnw")});
  const Outcome baseline = Invoke({"verify", "--data-dir", d, "--target", Path("b.qnnw")});
  const Outcome paired = Invoke({"verify", "--data-dir", d, "--target", Path("m.qnnw"),
                                 "--baseline", Path("b.qnnw")});
  EXPECT_EQ(marked.code, kExitOk) << marked.out;
  EXPECT_EQ(baseline.code, kExitNegative) << baseline.out;
  EXPECT_EQ(paired.code, kExitOk) << paired.out;
  EXPECT_NE(paired.out.find("mode: paired"), std::string::npos);
  EXPECT_NE(paired.out.find("utility_within_eps0"), std::string::npos);
}

}  // namespace
}  // namespace qnnw::cli
