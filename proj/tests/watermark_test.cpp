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
#include "qnnw/watermark.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <gtest/gtest.h>

namespace qnnw::watermark {
namespace {

using data::ImageSample;

// Balanced clean set; pixel 0 carries the label so oracles stay opaque.
std::vector<ImageSample> CleanSet(int n) {
  std::vector<ImageSample> out;
  for (int i = 0; i < n; ++i) {
    ImageSample s;
    s.label = i % 2;
    s.pixels[0] = static_cast<std::uint8_t>(s.label);
    s.source_index = static_cast<std::size_t>(i);
    out.push_back(s);
  }
  return out;
}

std::vector<ImageSample> TriggerSet(int n, int t = 1) {
  std::vector<ImageSample> out;
  for (int i = 0; i < n; ++i) {
    ImageSample s;
    s.label = t;
    s.pixels[0] = static_cast<std::uint8_t>(t);
    s.pixels[1] = 255;
    s.provenance = data::Provenance::kTrigger;
    s.source_index = static_cast<std::size_t>(5000 + i);
    out.push_back(s);
  }
  return out;
}

const Predictor kTruth = [](const ImageSample& s) { return static_cast<int>(s.pixels[0]); };
const Predictor kComplement = [](const ImageSample& s) { return 1 - static_cast<int>(s.pixels[0]); };
Predictor Constant(int v) {
  return [v](const ImageSample&) { return v; };
}

// Predicts t on the first `hits` trigger sources and 1 - t elsewhere.
Predictor HitsFirst(int hits, int t = 1) {
  return [hits, t](const ImageSample& s) {
    return static_cast<int>(s.source_index) - 5000 < hits ? t : 1 - t;
  };
}

TEST(EvaluateCleanTest, Oracles) {
  const auto set = CleanSet(200);
  EXPECT_EQ(EvaluateClean(kTruth, set), 1.0);
  EXPECT_EQ(EvaluateClean(Constant(0), set), 0.5);
  EXPECT_EQ(EvaluateClean(kComplement, set), 0.0);
  EXPECT_THROW(EvaluateClean(kTruth, std::vector<ImageSample>{}), Error);
}

TEST(UtilityDeltaTest, IdenticalAndComplementary) {
  const auto set = CleanSet(50);
  EXPECT_EQ(UtilityDelta(kTruth, kTruth, set), 0.0);
  EXPECT_EQ(UtilityDelta(kTruth, kComplement, set), 1.0);
  EXPECT_EQ(UtilityDelta(kTruth, Constant(1), set), 0.5);
  EXPECT_THROW(UtilityDelta(kTruth, kTruth, std::vector<ImageSample>{}), Error);
}

TEST(VerifyTest, GroundTruthOracleOwned) {
  const auto r = Verify(kTruth, TriggerSet(100), VerificationConfig{});
  EXPECT_EQ(r.mode, VerificationMode::kStandalone);
  EXPECT_EQ(r.trigger_accuracy, 1.0);
  EXPECT_EQ(r.trigger_hits, 100u);
  EXPECT_LT(r.p_value, 1e-20);
  EXPECT_EQ(r.decision, Decision::kOwned);
  EXPECT_FALSE(r.degenerate);
}

TEST(VerifyTest, ComplementOracleNotOwned) {
  const auto r = Verify(kComplement, TriggerSet(100), VerificationConfig{});
  EXPECT_EQ(r.trigger_accuracy, 0.0);
  EXPECT_EQ(r.p_value, 1.0);
  EXPECT_EQ(r.decision, Decision::kNotOwned);
}

TEST(VerifyTest, ConstantTargetFlaggedDegenerate) {
  const Predictor constant = Constant(1);
  const double clean = EvaluateClean(constant, CleanSet(200));
  const auto r = Verify(constant, TriggerSet(100), VerificationConfig{}, nullptr, clean);
  EXPECT_EQ(r.trigger_accuracy, 1.0);
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.decision, Decision::kOwned);  // degeneracy is advisory
  const auto healthy = Verify(constant, TriggerSet(100), VerificationConfig{}, nullptr, 0.9);
  EXPECT_FALSE(healthy.degenerate);
}

TEST(VerifyTest, PairedTableOneGap) {
  const Predictor marked = HitsFirst(97);
  const Predictor baseline = HitsFirst(23);
  const auto r = Verify(marked, TriggerSet(100), VerificationConfig{}, &baseline);
  EXPECT_EQ(r.mode, VerificationMode::kPaired);
  EXPECT_DOUBLE_EQ(r.trigger_accuracy, 0.97);
  EXPECT_DOUBLE_EQ(*r.baseline_trigger_accuracy, 0.23);
  EXPECT_NEAR(*r.accuracy_difference, 0.74, 1e-12);
  EXPECT_NEAR(*r.trigger_agreement, 0.26, 1e-12);
  EXPECT_EQ(r.decision, Decision::kOwned);
}

TEST(VerifyTest, PairedDifferenceSymmetricUnderSwap) {
  for (int a : {0, 23, 40, 80, 97, 100}) {
    for (int b : {0, 37, 60, 100}) {
      const Predictor pa = HitsFirst(a);
      const Predictor pb = HitsFirst(b);
      const auto ab = Verify(pa, TriggerSet(100), VerificationConfig{}, &pb);
      const auto ba = Verify(pb, TriggerSet(100), VerificationConfig{}, &pa);
      EXPECT_EQ(*ab.accuracy_difference, *ba.accuracy_difference);
      EXPECT_EQ(ab.decision, ba.decision);
    }
  }
}

TEST(VerifyTest, PairedThresholdIsStrict) {
  const Predictor a = HitsFirst(60);
  const Predictor b = HitsFirst(20);
  VerificationConfig cfg;
  cfg.delta = 0.5;
  EXPECT_EQ(Verify(a, TriggerSet(100), cfg, &b).decision, Decision::kNotOwned);
  cfg.delta = 0.39;
  EXPECT_EQ(Verify(a, TriggerSet(100), cfg, &b).decision, Decision::kOwned);
}

TEST(VerifyTest, StandaloneUnmarkedNotOwned) {
  const auto r = Verify(HitsFirst(40), TriggerSet(100), VerificationConfig{});
  EXPECT_DOUBLE_EQ(r.trigger_accuracy, 0.40);
  EXPECT_EQ(r.decision, Decision::kNotOwned);
}

TEST(VerifyTest, StandaloneInconclusiveWhenNotSignificant) {
  VerificationConfig cfg;
  cfg.tau = 0.55;
  // 17 of 30 clears tau but P[X >= 17 | n=30, 0.5] is about 0.29.
  const auto r = Verify(HitsFirst(17), TriggerSet(30), cfg);
  EXPECT_GE(r.trigger_accuracy, cfg.tau);
  EXPECT_GT(r.p_value, cfg.alpha);
  EXPECT_EQ(r.decision, Decision::kInconclusive);
}

TEST(VerifyTest, BinomialTailAgainstDirectSum) {
  for (std::size_t n : {30u, 100u}) {
    for (std::size_t k = 0; k <= n; k += 7) {
      // Direct sum with log-binomial coefficients.
      double direct = 0.0;
      for (std::size_t j = k; j <= n; ++j) {
        direct += std::exp(std::lgamma(n + 1.0) - std::lgamma(j + 1.0) -
                           std::lgamma(n - j + 1.0) + n * std::log(0.5));
      }
      EXPECT_NEAR(BinomialUpperTail(k, n, 0.5), direct, 1e-12 + 1e-9 * direct);
    }
  }
}

TEST(VerifyTest, DecisionIsPureFunctionOfInputs) {
  VerificationInputs in;
  in.trigger_labels.assign(50, 1);
  in.target_predictions.assign(50, 1);
  for (int i = 0; i < 10; ++i) in.target_predictions[i] = 0;
  const auto a = VerifyPredictions(in, VerificationConfig{});
  const auto b = VerifyPredictions(in, VerificationConfig{});
  EXPECT_EQ(FormatReport(a), FormatReport(b));
}

TEST(VerifyTest, InputErrors) {
  EXPECT_THROW(Verify(kTruth, std::vector<ImageSample>{}, VerificationConfig{}), Error);
  EXPECT_THROW(Verify(kTruth, TriggerSet(29), VerificationConfig{}), Error);
  VerificationInputs in;
  in.trigger_labels.assign(40, 1);
  in.target_predictions.assign(40, 1);
  in.baseline_predictions = std::vector<int>(39, 1);
  EXPECT_THROW(VerifyPredictions(in, VerificationConfig{}), Error);
  in.baseline_predictions.reset();
  in.target_predictions.pop_back();
  EXPECT_THROW(VerifyPredictions(in, VerificationConfig{}), Error);
  VerificationConfig bad;
  bad.tau = 1.5;
  EXPECT_THROW(Verify(kTruth, TriggerSet(40), bad), Error);
}

TEST(ReportTest, KeyValueAndCsv) {
  const Predictor marked = HitsFirst(97);
  const Predictor baseline = HitsFirst(23);
  const auto r = Verify(marked, TriggerSet(100), VerificationConfig{}, &baseline, 0.835);
  const std::string text = FormatReport(r);
  EXPECT_NE(text.find("schema_version: 1\n"), std::string::npos);
  EXPECT_NE(text.find("mode: paired\n"), std::string::npos);
  EXPECT_NE(text.find("trigger_accuracy: 0.970000\n"), std::string::npos);
  EXPECT_NE(text.find("accuracy_difference: 0.740000\n"), std::string::npos);
  EXPECT_NE(text.find("clean_accuracy: 0.835000\n"), std::string::npos);
  EXPECT_NE(text.find("decision: owned\n"), std::string::npos);

  const std::string header = ReportCsvHeader();
  const std::string row = ReportCsvRow(r);
  EXPECT_EQ(std::count(header.begin(), header.end(), ','), std::count(row.begin(), row.end(), ','));
  EXPECT_EQ(row.rfind("1,paired,100,97,0.970000,0.230000,", 0), 0u) << row;

  const auto standalone = Verify(marked, TriggerSet(100), VerificationConfig{});
  EXPECT_EQ(FormatReport(standalone).find("baseline_trigger_accuracy"), std::string::npos);
}

// A small model trained through Embed on synthetic two-class data.
struct TinySetup {
  ModelConfig model_cfg;
  std::vector<ImageSample> clean_pool;
  std::vector<data::TriggerPair> pairs;
  EmbedConfig cfg;

  explicit TinySetup(int n_pairs) {
    model_cfg.input_dim = 784;
    model_cfg.ansatz.n_qubits = 2;
    model_cfg.ansatz.reps = 1;
    std::size_t next = 0;
    for (int i = 0; i < 16; ++i) {
      ImageSample s;
      s.label = i % 2;
      for (int p = 0; p < 784; ++p) s.pixels[p] = static_cast<std::uint8_t>(s.label ? 200 : 20);
      s.source_index = next++;
      clean_pool.push_back(s);
    }
    for (int i = 0; i < n_pairs; ++i) {
      ImageSample s;
      s.label = 0;
      s.source_index = next++;
      pairs.push_back({s, data::ApplyTrigger(s, data::TriggerSpec{})});
    }
    cfg.epochs = 2;
    cfg.seed = 9;
    cfg.schedule = n_pairs == 0 ? schedule::DeriveConfig(16, 0, 2, 2)
                                : schedule::DeriveConfig(12 + 2 * n_pairs, n_pairs, 2, 2);
  }
};

TEST(EmbedTest, ZeroPairsIsBaselineTraining) {
  TinySetup setup(0);
  HybridModel model = HybridModel::Initialized(setup.model_cfg, 1);
  const auto before = model.FlatParameters();
  const EvalSets eval{setup.clean_pool, {}};
  const auto result = Embed(model, setup.clean_pool, setup.pairs, setup.cfg, &eval);
  EXPECT_EQ(result.schedule.config.n_T, 0);
  EXPECT_EQ(result.schedule.entries.size(), 16u);
  ASSERT_EQ(result.log.epochs.size(), 3u);
  EXPECT_EQ(result.log.epochs[0].epoch, 0);
  EXPECT_NE(model.FlatParameters(), before);
  EXPECT_EQ(model.metadata().epochs, 2u);
  EXPECT_EQ(model.metadata().schedule_hash, result.log.schedule_hash);
}

TEST(EmbedTest, DeterministicForSeed) {
  TinySetup setup(2);
  auto run = [&](std::uint64_t seed) {
    HybridModel model = HybridModel::Initialized(setup.model_cfg, 1);
    EmbedConfig cfg = setup.cfg;
    cfg.seed = seed;
    cfg.record_wall_time = false;
    Embed(model, setup.clean_pool, setup.pairs, cfg);
    return SerializeCheckpoint(model);
  };
  EXPECT_EQ(run(4), run(4));
  EXPECT_NE(run(4), run(5));
}

TEST(EmbedTest, RandomOrderUsesSameSamples) {
  TinySetup setup(2);
  HybridModel grouped = HybridModel::Initialized(setup.model_cfg, 1);
  HybridModel shuffled = grouped;
  EmbedConfig cfg = setup.cfg;
  const auto a = Embed(grouped, setup.clean_pool, setup.pairs, cfg);
  cfg.order = OrderMode::kRandom;
  const auto b = Embed(shuffled, setup.clean_pool, setup.pairs, cfg);
  EXPECT_EQ(a.log.schedule_hash, b.log.schedule_hash);
  EXPECT_NE(grouped.FlatParameters(), shuffled.FlatParameters());
}

TEST(EmbedTest, ScheduleErrorsPropagate) {
  TinySetup setup(2);
  HybridModel model(setup.model_cfg);
  setup.pairs.pop_back();
  EXPECT_THROW(Embed(model, setup.clean_pool, setup.pairs, setup.cfg), Error);
  TinySetup bad_counts(2);
  bad_counts.cfg.batch_size = 0;
  EXPECT_THROW(Embed(model, bad_counts.clean_pool, bad_counts.pairs, bad_counts.cfg), Error);
}

TEST(EmbedTest, NonFiniteInputAborts) {
  TinySetup setup(0);
  HybridModel model = HybridModel::Initialized(setup.model_cfg, 1);
  model.head().weights[0] = std::numeric_limits<double>::quiet_NaN();
  try {
    Embed(model, setup.clean_pool, setup.pairs, setup.cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonFinite);
  }
}

TEST(EmbedTest, WallBudgetStopsEarly) {
  TinySetup setup(0);
  HybridModel model = HybridModel::Initialized(setup.model_cfg, 1);
  setup.cfg.wall_budget_seconds = 1e-9;
  const auto result = Embed(model, setup.clean_pool, setup.pairs, setup.cfg);
  EXPECT_TRUE(result.log.aborted_on_budget);
  EXPECT_EQ(result.log.epochs.size(), 2u);
}

}  // namespace
}  // namespace qnnw::watermark
