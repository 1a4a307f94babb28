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
#ifndef QNNW_WATERMARK_HPP_
#define QNNW_WATERMARK_HPP_

// Watermark embedding (joint clean/trigger training over an ordered sample
// sequence) and black-box ownership verification from trigger-set
// predictions.

#include <boost/math/distributions/binomial.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "qnnw/classical.hpp"
#include "qnnw/dataset.hpp"
#include "qnnw/error.hpp"
#include "qnnw/hybrid_model.hpp"
#include "qnnw/schedule.hpp"

namespace qnnw::watermark {

// Black-box access: image in, label out.
using Predictor = std::function<int(const data::ImageSample&)>;

inline Predictor ModelPredictor(const HybridModel& model) {
  return [&model](const data::ImageSample& s) {
    const std::vector<double> x = s.Normalized();
    return model.PredictLabel(x);
  };
}

inline void RequireNonEmpty(std::size_t n, const char* what) {
  if (n == 0) throw Error(ErrorCode::kValidation, std::string(what) + " is empty");
}

inline std::vector<int> QueryAll(const Predictor& predict,
                                 std::span<const data::ImageSample> set) {
  std::vector<int> out;
  out.reserve(set.size());
  for (const data::ImageSample& s : set) out.push_back(predict(s));
  return out;
}

inline double AccuracyOf(std::span<const int> predictions,
                         std::span<const int> labels) {
  RequireNonEmpty(labels.size(), "evaluation set");
  if (predictions.size() != labels.size()) {
    throw Error(ErrorCode::kValidation, "prediction/label count mismatch");
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) hits += predictions[i] == labels[i];
  return static_cast<double>(hits) / static_cast<double>(labels.size());
}

inline std::vector<int> LabelsOf(std::span<const data::ImageSample> set) {
  std::vector<int> out;
  out.reserve(set.size());
  for (const data::ImageSample& s : set) out.push_back(s.label);
  return out;
}

inline double EvaluateClean(const Predictor& predict,
                            std::span<const data::ImageSample> clean_test) {
  RequireNonEmpty(clean_test.size(), "clean test set");
  return AccuracyOf(QueryAll(predict, clean_test), LabelsOf(clean_test));
}

// Fraction of clean inputs on which the two predictors disagree.
inline double UtilityDelta(const Predictor& marked, const Predictor& baseline,
                           std::span<const data::ImageSample> clean_test) {
  RequireNonEmpty(clean_test.size(), "clean test set");
  std::size_t diff = 0;
  for (const data::ImageSample& s : clean_test) diff += marked(s) != baseline(s);
  return static_cast<double>(diff) / static_cast<double>(clean_test.size());
}

// ---------------------------------------------------------------------------
// Embedding

enum class OrderMode { kGrouped, kRandom };

struct EmbedConfig {
  int epochs = 4;
  int batch_size = 4;
  double lr = 0.01;
  schedule::ScheduleConfig schedule;
  data::TriggerSpec trigger;
  std::uint64_t seed = 0;
  OrderMode order = OrderMode::kGrouped;
  // Rebuild the grouped schedule with a fresh seed every epoch.
  bool regenerate_schedule = false;
  double wall_budget_seconds = 1800.0;
  bool record_wall_time = true;
};

inline void ValidateEmbedConfig(const EmbedConfig& cfg) {
  if (cfg.epochs < 0) throw Error(ErrorCode::kConfig, "epochs must be >= 0");
  if (cfg.batch_size < 1) throw Error(ErrorCode::kConfig, "batch size must be >= 1");
  if (!(cfg.lr > 0.0)) throw Error(ErrorCode::kConfig, "learning rate must be > 0");
  if (!(cfg.wall_budget_seconds > 0.0)) {
    throw Error(ErrorCode::kConfig, "wall budget must be > 0");
  }
  schedule::ValidateConfig(cfg.schedule);
  data::ValidateTriggerSpec(cfg.trigger);
}

struct EpochMetrics {
  int epoch = 0;
  double mean_loss = 0.0;
  double clean_accuracy = 0.0;
  double trigger_accuracy = 0.0;
  double wall_seconds = 0.0;
};

struct TrainingLog {
  std::vector<EpochMetrics> epochs;  // epoch 0 is the untrained model
  bool aborted_on_budget = false;
  std::uint64_t schedule_hash = 0;
};

// Optional held-out sets evaluated after each epoch.
struct EvalSets {
  std::span<const data::ImageSample> clean_test;
  std::span<const data::ImageSample> trigger_set;
};

struct EmbedResult {
  TrainingLog log;
  schedule::SampleSchedule schedule;
};

// Trains `model` from its current parameters over the schedule built from
// (clean_pool, pairs). Grouped order consumes the schedule as-is in batch
// windows; random order reshuffles the same samples every epoch.
inline EmbedResult Embed(HybridModel& model,
                         const std::vector<data::ImageSample>& clean_pool,
                         const std::vector<data::TriggerPair>& pairs,
                         const EmbedConfig& cfg, const EvalSets* eval = nullptr) {
  ValidateEmbedConfig(cfg);
  std::mt19937_64 order_rng(cfg.seed ^ 0x9E3779B97F4A7C15ULL);
  EmbedResult result;
  result.schedule = schedule::BuildSchedule(clean_pool, pairs, cfg.schedule, cfg.seed);
  const auto violations = schedule::ValidateSchedule(
      result.schedule, cfg.schedule, result.schedule.target_label);
  if (!violations.empty()) {
    throw Error(ErrorCode::kSchedule,
                std::string("built schedule failed validation: ") +
                    schedule::ViolationName(violations.front().kind));
  }
  result.log.schedule_hash = schedule::ScheduleHash(result.schedule);

  nn::AdamState adam(model.num_parameters(), cfg.lr);
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  };
  auto record = [&](int epoch, double loss) {
    EpochMetrics m;
    m.epoch = epoch;
    m.mean_loss = loss;
    if (eval) {
      const Predictor predict = ModelPredictor(model);
      if (!eval->clean_test.empty()) m.clean_accuracy = EvaluateClean(predict, eval->clean_test);
      if (!eval->trigger_set.empty()) {
        m.trigger_accuracy = EvaluateClean(predict, eval->trigger_set);
      }
    }
    m.wall_seconds = cfg.record_wall_time ? elapsed() : 0.0;
    result.log.epochs.push_back(m);
  };
  record(0, 0.0);

  std::vector<data::ImageSample> sequence;
  std::vector<std::vector<double>> inputs;
  auto load_sequence = [&](const schedule::SampleSchedule& s) {
    sequence.clear();
    for (const schedule::ScheduleEntry& e : s.entries) sequence.push_back(e.sample);
  };
  load_sequence(result.schedule);

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    if (cfg.order == OrderMode::kGrouped && cfg.regenerate_schedule && epoch > 1) {
      load_sequence(schedule::BuildSchedule(clean_pool, pairs, cfg.schedule,
                                            cfg.seed + static_cast<std::uint64_t>(epoch)));
    }
    if (cfg.order == OrderMode::kRandom) {
      std::shuffle(sequence.begin(), sequence.end(), order_rng);
    }
    inputs.assign(sequence.size(), {});
    for (std::size_t i = 0; i < sequence.size(); ++i) inputs[i] = sequence[i].Normalized();

    double loss_sum = 0.0;
    std::size_t n_batches = 0;
    std::vector<Example> batch;
    for (std::size_t begin = 0; begin < sequence.size(); begin += cfg.batch_size) {
      const std::size_t end =
          std::min(sequence.size(), begin + static_cast<std::size_t>(cfg.batch_size));
      batch.clear();
      for (std::size_t i = begin; i < end; ++i) {
        batch.push_back({inputs[i], sequence[i].label});
      }
      const double loss = TrainStep(model, adam, batch);
      if (!std::isfinite(loss)) {
        throw Error(ErrorCode::kNonFinite,
                    "loss diverged at epoch " + std::to_string(epoch) + ", batch " +
                        std::to_string(n_batches));
      }
      loss_sum += loss;
      ++n_batches;
      if (elapsed() > cfg.wall_budget_seconds) {
        result.log.aborted_on_budget = true;
        record(epoch, loss_sum / static_cast<double>(n_batches));
        model.metadata() = {cfg.seed, static_cast<std::uint32_t>(epoch),
                            result.log.schedule_hash};
        return result;
      }
    }
    record(epoch, n_batches ? loss_sum / static_cast<double>(n_batches) : 0.0);
  }
  model.metadata() = {cfg.seed, static_cast<std::uint32_t>(cfg.epochs),
                      result.log.schedule_hash};
  return result;
}

// ---------------------------------------------------------------------------
// Verification

struct VerificationConfig {
  double delta = 0.4;     // paired-mode accuracy-difference threshold
  double tau = 0.7;       // standalone trigger-accuracy threshold
  double epsilon0 = 0.1;  // utility disagreement tolerance (diagnostic)
  double epsilon1 = 0.5;  // trigger agreement tolerance (diagnostic)
  double null_rate = 0.5;
  double alpha = 0.01;    // standalone binomial significance level
  std::size_t min_trigger_count = 30;
};

inline void ValidateVerificationConfig(const VerificationConfig& cfg) {
  for (double v : {cfg.delta, cfg.tau, cfg.epsilon0, cfg.epsilon1, cfg.null_rate, cfg.alpha}) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error(ErrorCode::kConfig, "verification thresholds must lie in [0, 1]");
    }
  }
}

enum class Decision { kOwned, kNotOwned, kInconclusive };

inline const char* DecisionName(Decision d) {
  switch (d) {
    case Decision::kOwned: return "owned";
    case Decision::kNotOwned: return "not-owned";
    case Decision::kInconclusive: return "inconclusive";
  }
  return "?";
}

enum class VerificationMode { kPaired, kStandalone };

inline constexpr int kReportSchemaVersion = 1;

struct VerificationReport {
  VerificationMode mode = VerificationMode::kStandalone;
  std::size_t trigger_count = 0;
  std::size_t trigger_hits = 0;
  double trigger_accuracy = 0.0;
  std::optional<double> baseline_trigger_accuracy;
  std::optional<double> accuracy_difference;  // |target - baseline|
  std::optional<double> trigger_agreement;    // Pr{target == baseline} on R
  std::optional<double> clean_accuracy;
  std::optional<double> utility_disagreement;
  double p_value = 1.0;
  bool degenerate = false;
  Decision decision = Decision::kNotOwned;
};

// P[X >= hits] for X ~ Binomial(n, p0).
inline double BinomialUpperTail(std::size_t hits, std::size_t n, double p0) {
  if (hits == 0) return 1.0;
  if (p0 <= 0.0) return 0.0;
  if (p0 >= 1.0) return 1.0;
  boost::math::binomial_distribution<double> dist(static_cast<double>(n), p0);
  return boost::math::cdf(boost::math::complement(dist, static_cast<double>(hits) - 1.0));
}

struct VerificationInputs {
  std::vector<int> trigger_labels;              // y'' of R
  std::vector<int> target_predictions;
  std::optional<std::vector<int>> baseline_predictions;
  std::optional<double> clean_accuracy;
  std::optional<double> utility_disagreement;
};

// Pure function of the observed predictions and the configuration.
inline VerificationReport VerifyPredictions(const VerificationInputs& in,
                                            const VerificationConfig& cfg) {
  ValidateVerificationConfig(cfg);
  const std::size_t n = in.trigger_labels.size();
  RequireNonEmpty(n, "trigger set");
  if (n < cfg.min_trigger_count) {
    throw Error(ErrorCode::kValidation,
                "trigger set has " + std::to_string(n) + " samples, need >= " +
                    std::to_string(cfg.min_trigger_count));
  }
  if (in.target_predictions.size() != n) {
    throw Error(ErrorCode::kValidation,
                "target answered " + std::to_string(in.target_predictions.size()) +
                    " queries for a trigger set of " + std::to_string(n));
  }
  VerificationReport r;
  r.trigger_count = n;
  for (std::size_t i = 0; i < n; ++i) {
    r.trigger_hits += in.target_predictions[i] == in.trigger_labels[i];
  }
  r.trigger_accuracy = static_cast<double>(r.trigger_hits) / static_cast<double>(n);
  r.p_value = BinomialUpperTail(r.trigger_hits, n, cfg.null_rate);
  r.clean_accuracy = in.clean_accuracy;
  r.utility_disagreement = in.utility_disagreement;
  r.degenerate = in.clean_accuracy.has_value() && *in.clean_accuracy <= cfg.null_rate;

  if (in.baseline_predictions) {
    const std::vector<int>& base = *in.baseline_predictions;
    if (base.size() != n) {
      throw Error(ErrorCode::kValidation,
                  "baseline answered " + std::to_string(base.size()) +
                      " queries, target " + std::to_string(n));
    }
    r.mode = VerificationMode::kPaired;
    std::size_t base_hits = 0;
    std::size_t agree = 0;
    for (std::size_t i = 0; i < n; ++i) {
      base_hits += base[i] == in.trigger_labels[i];
      agree += base[i] == in.target_predictions[i];
    }
    r.baseline_trigger_accuracy = static_cast<double>(base_hits) / static_cast<double>(n);
    r.accuracy_difference = std::abs(r.trigger_accuracy - *r.baseline_trigger_accuracy);
    r.trigger_agreement = static_cast<double>(agree) / static_cast<double>(n);
    r.decision = *r.accuracy_difference > cfg.delta ? Decision::kOwned : Decision::kNotOwned;
  } else {
    r.mode = VerificationMode::kStandalone;
    if (r.trigger_accuracy >= cfg.tau) {
      r.decision = r.p_value < cfg.alpha ? Decision::kOwned : Decision::kInconclusive;
    } else {
      r.decision = Decision::kNotOwned;
    }
  }
  return r;
}

// Queries the target (and optional baseline) on R only through predictions.
inline VerificationReport Verify(const Predictor& target,
                                 std::span<const data::ImageSample> trigger_set,
                                 const VerificationConfig& cfg,
                                 const Predictor* baseline = nullptr,
                                 std::optional<double> clean_accuracy = {}) {
  RequireNonEmpty(trigger_set.size(), "trigger set");
  VerificationInputs in;
  in.trigger_labels = LabelsOf(trigger_set);
  in.target_predictions = QueryAll(target, trigger_set);
  if (baseline) in.baseline_predictions = QueryAll(*baseline, trigger_set);
  in.clean_accuracy = clean_accuracy;
  return VerifyPredictions(in, cfg);
}

namespace detail {

inline std::string Fixed(double v, int digits = 6) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

inline std::string OptFixed(const std::optional<double>& v) {
  return v ? Fixed(*v) : std::string();
}

inline std::string PValue(double p) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(6) << p;
  return os.str();
}

}  // namespace detail

// "key: value" lines; optional fields are omitted when absent.
inline std::string FormatReport(const VerificationReport& r) {
  std::ostringstream os;
  os << "schema_version: " << kReportSchemaVersion << "\n";
  os << "mode: " << (r.mode == VerificationMode::kPaired ? "paired" : "standalone") << "\n";
  os << "trigger_count: " << r.trigger_count << "\n";
  os << "trigger_hits: " << r.trigger_hits << "\n";
  os << "trigger_accuracy: " << detail::Fixed(r.trigger_accuracy) << "\n";
  if (r.baseline_trigger_accuracy) {
    os << "baseline_trigger_accuracy: " << detail::Fixed(*r.baseline_trigger_accuracy) << "\n";
  }
  if (r.accuracy_difference) {
    os << "accuracy_difference: " << detail::Fixed(*r.accuracy_difference) << "\n";
  }
  if (r.trigger_agreement) {
    os << "trigger_agreement: " << detail::Fixed(*r.trigger_agreement) << "\n";
  }
  if (r.clean_accuracy) os << "clean_accuracy: " << detail::Fixed(*r.clean_accuracy) << "\n";
  if (r.utility_disagreement) {
    os << "utility_disagreement: " << detail::Fixed(*r.utility_disagreement) << "\n";
  }
  os << "p_value: " << detail::PValue(r.p_value) << "\n";
  os << "degenerate: " << (r.degenerate ? "true" : "false") << "\n";
  os << "decision: " << DecisionName(r.decision) << "\n";
  return os.str();
}

inline std::string ReportCsvHeader() {
  return "schema_version,mode,trigger_count,trigger_hits,trigger_accuracy,"
         "baseline_trigger_accuracy,accuracy_difference,trigger_agreement,"
         "clean_accuracy,utility_disagreement,p_value,degenerate,decision";
}

inline std::string ReportCsvRow(const VerificationReport& r) {
  std::ostringstream os;
  os << kReportSchemaVersion << ','
     << (r.mode == VerificationMode::kPaired ? "paired" : "standalone") << ','
     << r.trigger_count << ',' << r.trigger_hits << ','
     << detail::Fixed(r.trigger_accuracy) << ','
     << detail::OptFixed(r.baseline_trigger_accuracy) << ','
     << detail::OptFixed(r.accuracy_difference) << ','
     << detail::OptFixed(r.trigger_agreement) << ','
     << detail::OptFixed(r.clean_accuracy) << ','
     << detail::OptFixed(r.utility_disagreement) << ','
     << detail::PValue(r.p_value) << ',' << (r.degenerate ? 1 : 0) << ','
     << DecisionName(r.decision);
  return os.str();
}

}  // namespace qnnw::watermark

#endif  // QNNW_WATERMARK_HPP_
