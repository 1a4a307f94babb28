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
#ifndef QNNW_EXPERIMENT_HPP_
#define QNNW_EXPERIMENT_HPP_

// End-to-end runs: subset selection, trigger synthesis, training and metric
// emission, all derived from one master seed.

#include <cstdint>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "qnnw/dataset.hpp"
#include "qnnw/hybrid_model.hpp"
#include "qnnw/schedule.hpp"
#include "qnnw/watermark.hpp"

namespace qnnw::experiment {

// SplitMix64 finalizer; independent streams from one master seed.
inline std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

enum SeedStream : std::uint64_t { kDataStream = 1, kTriggerStream, kInitStream, kScheduleStream };

struct ExperimentConfig {
  int digit_a = 0;
  int digit_b = 1;
  std::size_t per_class = 100;
  std::size_t n_trigger = 10;  // 0 trains the unmarked baseline
  std::size_t n_verify = 100;
  std::size_t total = 200;     // |S_DT|
  int n_T = 2;
  data::TriggerSpec trigger;
  int epochs = 4;
  int batch_size = 4;
  double lr = 0.01;
  watermark::OrderMode order = watermark::OrderMode::kGrouped;
  bool regenerate_schedule = false;
  std::uint64_t seed = 0;
  double wall_budget_seconds = 1800.0;
  bool record_wall_time = true;
  ModelConfig model;

  bool is_baseline() const { return n_trigger == 0; }
};

inline void ValidateExperimentConfig(const ExperimentConfig& cfg) {
  if (cfg.digit_a < 0 || cfg.digit_a > 9 || cfg.digit_b < 0 || cfg.digit_b > 9 ||
      cfg.digit_a == cfg.digit_b) {
    throw Error(ErrorCode::kConfig, "digit pair must be two distinct digits 0-9");
  }
  if (cfg.per_class == 0) throw Error(ErrorCode::kConfig, "per_class must be > 0");
  if (cfg.model.input_dim != data::kImagePixels) {
    throw Error(ErrorCode::kConfig, "model input_dim must be 784 for MNIST");
  }
  data::ValidateTriggerSpec(cfg.trigger);
  if (cfg.trigger.source_label != 0 && cfg.trigger.source_label != 1) {
    throw Error(ErrorCode::kConfig, "trigger labels must be binary (0/1)");
  }
}

struct PreparedData {
  data::BinarySplit split;
  data::TriggerSets triggers;
  std::vector<data::ImageSample> clean_pool;
  schedule::ScheduleConfig schedule;
};

inline PreparedData PrepareData(const std::vector<data::ImageSample>& samples,
                                const ExperimentConfig& cfg) {
  ValidateExperimentConfig(cfg);
  PreparedData out;
  out.schedule = schedule::DeriveConfig(cfg.total, cfg.n_trigger, 2, cfg.n_T);
  out.split = data::SelectBinarySubset(samples, cfg.digit_a, cfg.digit_b, cfg.per_class,
                                       DeriveSeed(cfg.seed, kDataStream));
  out.triggers = data::BuildTriggerSets(out.split.train, out.split.test, cfg.trigger,
                                        cfg.n_trigger, cfg.n_verify,
                                        DeriveSeed(cfg.seed, kTriggerStream));
  out.clean_pool = data::RemainingCleanPool(out.split.train, out.triggers.embed_pairs);
  return out;
}

struct ExperimentResult {
  HybridModel model;
  watermark::TrainingLog log;
  schedule::SampleSchedule schedule;
  PreparedData data;

  double clean_accuracy() const { return log.epochs.back().clean_accuracy; }
  double trigger_accuracy() const { return log.epochs.back().trigger_accuracy; }
};

inline watermark::EmbedConfig MakeEmbedConfig(const ExperimentConfig& cfg,
                                              const schedule::ScheduleConfig& sched) {
  watermark::EmbedConfig e;
  e.epochs = cfg.epochs;
  e.batch_size = cfg.batch_size;
  e.lr = cfg.lr;
  e.schedule = sched;
  e.trigger = cfg.trigger;
  e.seed = DeriveSeed(cfg.seed, kScheduleStream);
  e.order = cfg.order;
  e.regenerate_schedule = cfg.regenerate_schedule;
  e.wall_budget_seconds = cfg.wall_budget_seconds;
  e.record_wall_time = cfg.record_wall_time;
  return e;
}

inline ExperimentResult RunExperiment(const std::vector<data::ImageSample>& samples,
                                      const ExperimentConfig& cfg) {
  PreparedData prepared = PrepareData(samples, cfg);
  HybridModel model =
      HybridModel::Initialized(cfg.model, DeriveSeed(cfg.seed, kInitStream));
  const watermark::EvalSets eval{prepared.split.test, prepared.triggers.verification};
  watermark::EmbedResult embedded =
      watermark::Embed(model, prepared.clean_pool, prepared.triggers.embed_pairs,
                       MakeEmbedConfig(cfg, prepared.schedule), &eval);
  model.metadata().seed = cfg.seed;
  return ExperimentResult{std::move(model), std::move(embedded.log),
                          std::move(embedded.schedule), std::move(prepared)};
}

inline const char* kMetricsCsvHeader =
    "digit_a,digit_b,n_trigger,seed,clean_acc,trigger_acc,epoch,wall_seconds";

inline std::string MetricsCsvRows(const ExperimentConfig& cfg,
                                  const watermark::TrainingLog& log) {
  std::ostringstream os;
  for (const watermark::EpochMetrics& m : log.epochs) {
    os << cfg.digit_a << ',' << cfg.digit_b << ',' << cfg.n_trigger << ',' << cfg.seed
       << ',' << std::fixed << std::setprecision(6) << m.clean_accuracy << ','
       << m.trigger_accuracy << ',' << m.epoch << ',' << std::setprecision(3)
       << m.wall_seconds << '\n';
  }
  return os.str();
}

inline std::string MetricsCsv(const ExperimentConfig& cfg,
                              const watermark::TrainingLog& log) {
  return std::string(kMetricsCsvHeader) + "\n" + MetricsCsvRows(cfg, log);
}

// Black-box transcript of a model's answers on R:
// "source_index,label,prediction" per line after a header.
inline std::string TranscriptCsv(const watermark::Predictor& predict,
                                 std::span<const data::ImageSample> trigger_set) {
  std::ostringstream os;
  os << "source_index,label,prediction\n";
  for (const data::ImageSample& s : trigger_set) {
    os << s.source_index << ',' << s.label << ',' << predict(s) << '\n';
  }
  return os.str();
}

struct Transcript {
  std::vector<std::size_t> source_index;
  std::vector<int> labels;
  std::vector<int> predictions;
};

inline Transcript ParseTranscript(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("source_index,label,prediction", 0) != 0) {
    throw Error(ErrorCode::kParse, "transcript header missing");
  }
  Transcript t;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string a, b, c;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, c)) {
      throw Error(ErrorCode::kParse, "transcript line " + std::to_string(line_no));
    }
    try {
      t.source_index.push_back(std::stoull(a));
      t.labels.push_back(std::stoi(b));
      t.predictions.push_back(std::stoi(c));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kParse, "transcript line " + std::to_string(line_no));
    }
  }
  return t;
}

}  // namespace qnnw::experiment

#endif  // QNNW_EXPERIMENT_HPP_
