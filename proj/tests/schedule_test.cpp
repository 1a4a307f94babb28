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
#include "qnnw/schedule.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

namespace qnnw::schedule {
namespace {

using data::ImageSample;
using data::Provenance;
using data::TriggerPair;

struct Pools {
  std::vector<ImageSample> clean;
  std::vector<TriggerPair> pairs;
};

// c classes with `per_class` clean samples each plus `n_pairs` label-0 pair
// sources. Source indices are unique across everything.
Pools MakePools(int c, int per_class, int n_pairs, int target = 1) {
  Pools p;
  std::size_t next = 1000;
  for (int k = 0; k < per_class; ++k) {
    for (int label = 0; label < c; ++label) {
      ImageSample s;
      s.label = s.digit = label;
      s.source_index = next++;
      p.clean.push_back(s);
    }
  }
  for (int k = 0; k < n_pairs; ++k) {
    ImageSample clean;
    clean.label = 0;
    clean.source_index = next++;
    ImageSample trig = clean;
    trig.label = target;
    trig.provenance = Provenance::kTrigger;
    trig.pixels[0] = 255;
    p.pairs.push_back({clean, trig});
  }
  return p;
}

bool HasKind(const std::vector<Violation>& v, ViolationKind k) {
  return std::any_of(v.begin(), v.end(), [k](const Violation& x) { return x.kind == k; });
}

// Independent walk of the structure, written against the raw entry list.
void CheckStructure(const SampleSchedule& s, const ScheduleConfig& cfg, int t) {
  ASSERT_EQ(s.entries.size(), cfg.total());
  std::size_t pos = 0;
  for (int i = 1; i <= cfg.q; ++i) {
    std::vector<int> per_label(cfg.c, 0);
    for (int k = 0; k < cfg.n_D; ++k, ++pos) {
      const auto& e = s.entries[pos];
      ASSERT_EQ(BlockTag(e), "D" + std::to_string(i));
      ASSERT_EQ(e.sample.label, k % cfg.c);
      ASSERT_EQ(e.sample.provenance, Provenance::kClean);
      ++per_label[e.sample.label];
    }
    for (int n : per_label) ASSERT_EQ(n, cfg.n_D / cfg.c);
    for (int k = 0; k < cfg.n_T / 2; ++k, pos += 2) {
      const auto& a = s.entries[pos];
      const auto& b = s.entries[pos + 1];
      ASSERT_EQ(BlockTag(a), "T" + std::to_string(i));
      ASSERT_EQ(BlockTag(b), "T" + std::to_string(i));
      ASSERT_EQ(a.sample.provenance, Provenance::kClean);
      ASSERT_EQ(b.sample.provenance, Provenance::kTrigger);
      ASSERT_EQ(a.sample.source_index, b.sample.source_index);
      ASSERT_NE(a.sample.label, t);
      ASSERT_EQ(b.sample.label, t);
    }
  }
}

TEST(DeriveConfigTest, DefaultTable1) {
  const ScheduleConfig cfg = DeriveConfig(200, 10, 2, 2);
  EXPECT_EQ(cfg.q, 10);
  EXPECT_EQ(cfg.n_D, 18);
  EXPECT_EQ(cfg.n_T, 2);
  EXPECT_EQ(cfg.total(), 200u);
}

TEST(DeriveConfigTest, EnlargedTriggerSet) {
  const ScheduleConfig cfg = DeriveConfig(200, 20, 2, 2);
  EXPECT_EQ(cfg.q, 20);
  EXPECT_EQ(cfg.n_D, 8);
}

TEST(DeriveConfigTest, Infeasible) {
  EXPECT_THROW(DeriveConfig(210, 20, 2, 2), Error);  // n_D = 8.5
  EXPECT_THROW(DeriveConfig(200, 10, 2, 3), Error);  // odd n_T
  EXPECT_THROW(DeriveConfig(200, 9, 2, 4), Error);   // q not integral
  EXPECT_THROW(DeriveConfig(190, 10, 2, 2), Error);  // n_D = 17, odd for c = 2
  EXPECT_THROW(DeriveConfig(20, 20, 2, 4), Error);   // n_D negative
}

TEST(DeriveConfigTest, ZeroTriggersDegenerate) {
  const ScheduleConfig cfg = DeriveConfig(200, 0, 2, 2);
  EXPECT_EQ(cfg.q, 1);
  EXPECT_EQ(cfg.n_T, 0);
  EXPECT_EQ(cfg.n_D, 200);
}

TEST(BuildScheduleTest, DefaultLayout) {
  const ScheduleConfig cfg{2, 18, 2, 10};
  const Pools p = MakePools(2, 90, 10);
  const SampleSchedule s = BuildSchedule(p.clean, p.pairs, cfg, 17);
  EXPECT_EQ(s.entries.size(), 200u);
  CheckStructure(s, cfg, 1);
  EXPECT_TRUE(ValidateSchedule(s, cfg, 1).empty());
}

TEST(BuildScheduleTest, MinimalInstance) {
  const ScheduleConfig cfg{2, 2, 2, 1};
  const Pools p = MakePools(2, 1, 1);
  const SampleSchedule s = BuildSchedule(p.clean, p.pairs, cfg, 0);
  ASSERT_EQ(s.entries.size(), 4u);
  CheckStructure(s, cfg, 1);
}

TEST(BuildScheduleTest, CleanOnly) {
  const ScheduleConfig cfg = DeriveConfig(20, 0, 2, 2);
  const Pools p = MakePools(2, 10, 0);
  const SampleSchedule s = BuildSchedule(p.clean, p.pairs, cfg, 0);
  CheckStructure(s, cfg, 1);
  EXPECT_TRUE(ValidateSchedule(s, cfg, 1).empty());
}

TEST(BuildScheduleTest, PoolExhaustionNamesClass) {
  const ScheduleConfig cfg{2, 18, 2, 10};
  Pools p = MakePools(2, 90, 10);
  const auto it = std::find_if(p.clean.begin(), p.clean.end(), [](auto& s) { return s.label == 1; });
  p.clean.erase(it);
  try {
    BuildSchedule(p.clean, p.pairs, cfg, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientSamples);
    EXPECT_NE(std::string(e.what()).find("class 1"), std::string::npos) << e.what();
  }
}

TEST(BuildScheduleTest, InputErrors) {
  const ScheduleConfig cfg{2, 18, 2, 10};
  Pools p = MakePools(2, 90, 9);
  EXPECT_THROW(BuildSchedule(p.clean, p.pairs, cfg, 0), Error);  // pair count
  p = MakePools(2, 90, 10);
  p.clean.push_back(p.pairs[0].clean);  // pair source also in the clean pool
  EXPECT_THROW(BuildSchedule(p.clean, p.pairs, cfg, 0), Error);
  EXPECT_THROW(BuildSchedule(p.clean, p.pairs, ScheduleConfig{2, 17, 2, 10}, 0), Error);
}

TEST(BuildScheduleTest, DeterministicPerSeed) {
  const ScheduleConfig cfg{2, 18, 2, 10};
  const Pools p = MakePools(2, 120, 10);
  const auto a = BuildSchedule(p.clean, p.pairs, cfg, 5);
  const auto b = BuildSchedule(p.clean, p.pairs, cfg, 5);
  const auto c = BuildSchedule(p.clean, p.pairs, cfg, 6);
  EXPECT_EQ(ScheduleText(a), ScheduleText(b));
  EXPECT_EQ(ScheduleHash(a), ScheduleHash(b));
  EXPECT_NE(ScheduleHash(a), ScheduleHash(c));
}

TEST(ValidateScheduleTest, FuzzedBuildsAreClean) {
  std::mt19937_64 rng(20260101);
  for (int trial = 0; trial < 500; ++trial) {
    const int c = std::uniform_int_distribution<int>(2, 4)(rng);
    const int n_T = 2 * std::uniform_int_distribution<int>(1, 3)(rng);
    const int q = std::uniform_int_distribution<int>(1, 8)(rng);
    const int n_D = c * std::uniform_int_distribution<int>(1, 5)(rng);
    const int target = std::uniform_int_distribution<int>(1, c - 1)(rng);
    const std::size_t total = static_cast<std::size_t>(q) * (n_D + n_T);
    const ScheduleConfig cfg = DeriveConfig(total, static_cast<std::size_t>(q) * n_T / 2, c, n_T);
    ASSERT_EQ(cfg, (ScheduleConfig{c, n_D, n_T, q}));
    const int extra = std::uniform_int_distribution<int>(0, 3)(rng);
    const Pools p = MakePools(c, q * n_D / c + extra, q * n_T / 2, target);
    const SampleSchedule s = BuildSchedule(p.clean, p.pairs, cfg, rng());
    const auto v = ValidateSchedule(s, cfg, target);
    ASSERT_TRUE(v.empty()) << "trial " << trial << ": " << ViolationName(v[0].kind);
    CheckStructure(s, cfg, target);
  }
}

class MutantTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const Pools p = MakePools(2, 90, 10);
    schedule_ = BuildSchedule(p.clean, p.pairs, cfg_, 3);
    ASSERT_TRUE(ValidateSchedule(schedule_, cfg_, 1).empty());
  }
  std::vector<Violation> Check() const { return ValidateSchedule(schedule_, cfg_, 1); }

  ScheduleConfig cfg_{2, 18, 2, 10};
  SampleSchedule schedule_;
};

TEST_F(MutantTest, BrokenLabelCycle) {
  std::swap(schedule_.entries[0].sample, schedule_.entries[1].sample);
  EXPECT_TRUE(HasKind(Check(), ViolationKind::kLabelCycle));
}

TEST_F(MutantTest, UnpairedTrigger) {
  // Trigger of the second pair paired with the clean of the first.
  std::swap(schedule_.entries[19].sample, schedule_.entries[39].sample);
  EXPECT_TRUE(HasKind(Check(), ViolationKind::kUnpairedTrigger));
}

TEST_F(MutantTest, WrongPairOrder) {
  std::swap(schedule_.entries[18], schedule_.entries[19]);
  EXPECT_TRUE(HasKind(Check(), ViolationKind::kPairOrder));
}

TEST_F(MutantTest, DuplicateSample) {
  schedule_.entries[2].sample = schedule_.entries[0].sample;
  EXPECT_TRUE(HasKind(Check(), ViolationKind::kDuplicate));
}

TEST_F(MutantTest, WrongBlockOrder) {
  // Move T1 in front of D1.
  std::rotate(schedule_.entries.begin(), schedule_.entries.begin() + 18,
              schedule_.entries.begin() + 20);
  EXPECT_TRUE(HasKind(Check(), ViolationKind::kBlockOrder));
}

TEST_F(MutantTest, CleanLabelEqualsTarget) {
  schedule_.entries[18].sample.label = 1;
  EXPECT_TRUE(HasKind(Check(), ViolationKind::kCleanLabelIsTarget));
}

TEST_F(MutantTest, ReportsAllViolations) {
  std::swap(schedule_.entries[0].sample, schedule_.entries[1].sample);
  schedule_.entries[18].sample.label = 1;
  schedule_.entries.pop_back();
  const auto v = Check();
  EXPECT_TRUE(HasKind(v, ViolationKind::kLabelCycle));
  EXPECT_TRUE(HasKind(v, ViolationKind::kCleanLabelIsTarget));
  EXPECT_TRUE(HasKind(v, ViolationKind::kLength));
}

TEST(ScheduleTextTest, OneLinePerEntry) {
  const ScheduleConfig cfg{2, 2, 2, 1};
  const Pools p = MakePools(2, 1, 1);
  const SampleSchedule s = BuildSchedule(p.clean, p.pairs, cfg, 0);
  std::istringstream in(ScheduleText(s));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "# qnnw-schedule v1 c=2 n_D=2 n_T=2 q=1 t=1");
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[0].substr(0, 5), "0 D1 ");
  EXPECT_EQ(lines[2], "2 T1 1002 0 clean");
  EXPECT_EQ(lines[3], "3 T1 1002 1 trigger");
}

}  // namespace
}  // namespace qnnw::schedule
