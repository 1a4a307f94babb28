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
#ifndef QNNW_CLI_HPP_
#define QNNW_CLI_HPP_

// Command-line harness. Parsing lives here rather than in main() so the
// commands can be driven in-process from tests.
//
// Exit codes: 0 success or owned, 1 not-owned / inconclusive / failed checks,
// 2 any error.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qnnw/checkpoint.hpp"
#include "qnnw/experiment.hpp"
#include "qnnw/gradcheck.hpp"

namespace qnnw::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNegative = 1;
inline constexpr int kExitError = 2;

inline constexpr const char* kImagesFile = "mnist5k-images-idx3-ubyte";
inline constexpr const char* kLabelsFile = "mnist5k-labels-idx1-ubyte";

struct DataPaths {
  std::string data_dir;
  std::string images;
  std::string labels;

  std::string images_path() const {
    return images.empty() ? data_dir + "/" + kImagesFile : images;
  }
  std::string labels_path() const {
    return labels.empty() ? data_dir + "/" + kLabelsFile : labels;
  }
};

inline std::string DefaultDataDir() {
  if (const char* env = std::getenv("QNNW_DATA_DIR")) return env;
#ifdef QNNW_DEFAULT_DATA_DIR
  return QNNW_DEFAULT_DATA_DIR;
#else
  return "data/mnist";
#endif
}

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

namespace detail {

inline void WriteText(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIo, "cannot open " + path + " for writing");
  f << text;
  if (!f) throw Error(ErrorCode::kIo, "write to " + path + " failed");
}

inline std::string ReadText(const std::string& path) {
  const auto bytes = ReadFileBytes(path);
  return std::string(bytes.begin(), bytes.end());
}

inline std::vector<data::ImageSample> LoadSamples(const DataPaths& paths) {
  return data::LoadIdx(paths.images_path(), paths.labels_path());
}

// Options shared by every command that chooses data and a model.
struct ExperimentOptions {
  experiment::ExperimentConfig cfg;
  DataPaths paths{DefaultDataDir(), "", ""};
  std::string angle_map = "pi-sigmoid";
  bool no_timing = false;
  int trigger_value = 255;

  experiment::ExperimentConfig Resolved() const {
    experiment::ExperimentConfig c = cfg;
    if (angle_map == "pi-sigmoid") {
      c.model.angle_map = AngleMap::kPiSigmoid;
    } else if (angle_map == "pi-tanh") {
      c.model.angle_map = AngleMap::kPiTanh;
    } else {
      throw Error(ErrorCode::kConfig, "unknown angle map " + angle_map);
    }
    c.record_wall_time = !no_timing;
    c.trigger.pixel_value = static_cast<std::uint8_t>(trigger_value);
    return c;
  }
};

inline void AddDataOptions(CLI::App* app, DataPaths& paths) {
  app->add_option("--data-dir", paths.data_dir, "Directory with the MNIST IDX files")
      ->capture_default_str();
  app->add_option("--images", paths.images, "Images IDX file (overrides --data-dir)");
  app->add_option("--labels", paths.labels, "Labels IDX file (overrides --data-dir)");
}

inline void AddExperimentOptions(CLI::App* app, ExperimentOptions& o, bool training) {
  experiment::ExperimentConfig& c = o.cfg;
  AddDataOptions(app, o.paths);
  app->add_option("--digit-a", c.digit_a, "Digit mapped to label 0")->capture_default_str();
  app->add_option("--digit-b", c.digit_b, "Digit mapped to label 1")->capture_default_str();
  app->add_option("--per-class", c.per_class, "Train and test samples per class")
      ->capture_default_str();
  app->add_option("--n-verify", c.n_verify, "Size of the verification trigger set")
      ->capture_default_str();
  app->add_option("--total", c.total, "Training sequence length")->capture_default_str();
  app->add_option("--n-t", c.n_T, "Trigger group size (even)")->capture_default_str();
  app->add_option("--seed", c.seed, "Master seed")->capture_default_str();
  app->add_option("--trigger-row", c.trigger.origin_row)->capture_default_str();
  app->add_option("--trigger-col", c.trigger.origin_col)->capture_default_str();
  app->add_option("--trigger-height", c.trigger.block_height)->capture_default_str();
  app->add_option("--trigger-width", c.trigger.block_width)->capture_default_str();
  app->add_option("--trigger-value", o.trigger_value)->check(CLI::Range(0, 255))
      ->capture_default_str();
  app->add_option("--trigger-source", c.trigger.source_label)->capture_default_str();
  app->add_option("--trigger-target", c.trigger.target_label)->capture_default_str();
  if (!training) return;
  app->add_option("--epochs", c.epochs)->capture_default_str();
  app->add_option("--batch-size", c.batch_size)->capture_default_str();
  app->add_option("--lr", c.lr, "Adam learning rate")->capture_default_str();
  app->add_option("--n-qubits", c.model.ansatz.n_qubits)->capture_default_str();
  app->add_option("--reps", c.model.ansatz.reps)->capture_default_str();
  app->add_option("--angle-map", o.angle_map, "pi-sigmoid or pi-tanh")
      ->check(CLI::IsMember({"pi-sigmoid", "pi-tanh"}))
      ->capture_default_str();
  app->add_option("--wall-budget", c.wall_budget_seconds, "Seconds before a run aborts")
      ->capture_default_str();
  app->add_flag("--no-timing", o.no_timing, "Write 0 in the wall_seconds column");
}

// INI/TOML reader that files unsectioned keys under the chosen subcommand, so
// one flat file can be shared between commands.
class SubcommandConfig : public CLI::ConfigINI {
 public:
  explicit SubcommandConfig(const CLI::App* app) : app_(app) {}

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    std::vector<CLI::ConfigItem> items = CLI::ConfigINI::from_config(input);
    const auto subs = app_->get_subcommands();
    if (subs.empty()) return items;
    for (CLI::ConfigItem& item : items) {
      if (item.parents.empty() && item.name != "++" && item.name != "--") {
        item.parents = {subs.front()->get_name()};
      }
    }
    return items;
  }

 private:
  const CLI::App* app_;
};

inline void LogResolved(CLI::App* app, std::ostream& err) {
  err << "# resolved config [" << app->get_name() << "]\n"
      << app->config_to_str(/*default_also=*/true, /*write_description=*/false);
}

inline watermark::Predictor LoadPredictor(const std::string& path,
                                          std::shared_ptr<HybridModel>& holder) {
  holder = std::make_shared<HybridModel>(LoadCheckpoint(path));
  return watermark::ModelPredictor(*holder);
}

// Predictions on R from a checkpoint or a transcript. A transcript must name
// the same sources, in order, as the rebuilt R.
inline std::vector<int> PredictionsOn(const std::string& path,
                                      const std::vector<data::ImageSample>& trigger_set,
                                      std::shared_ptr<HybridModel>& model) {
  if (LooksLikeCheckpoint(path)) {
    return watermark::QueryAll(LoadPredictor(path, model), trigger_set);
  }
  const experiment::Transcript t = experiment::ParseTranscript(ReadText(path));
  if (t.predictions.size() != trigger_set.size()) {
    throw Error(ErrorCode::kValidation,
                "transcript " + path + " has " + std::to_string(t.predictions.size()) +
                    " answers, trigger set has " + std::to_string(trigger_set.size()));
  }
  for (std::size_t i = 0; i < trigger_set.size(); ++i) {
    if (t.source_index[i] != trigger_set[i].source_index) {
      throw Error(ErrorCode::kValidation,
                  "transcript " + path + " line " + std::to_string(i + 2) +
                      " answers source " + std::to_string(t.source_index[i]) +
                      ", expected " + std::to_string(trigger_set[i].source_index));
    }
  }
  return t.predictions;
}

struct ReferenceCell {
  int digit_a;
  int digit_b;
  std::size_t n_trigger;
  double clean;
  double trigger;
};

// Published reference accuracies for each table cell.
inline std::vector<ReferenceCell> ReferenceTable(int table) {
  if (table == 1) {
    return {{0, 1, 0, 0.86, 0.23},   {0, 1, 10, 0.835, 0.97}, {2, 3, 0, 0.815, 0.37},
            {2, 3, 10, 0.79, 0.98},  {4, 5, 0, 0.85, 0.37},   {4, 5, 10, 0.835, 0.82},
            {6, 7, 0, 0.77, 0.32},   {6, 7, 10, 0.75, 0.79},  {8, 9, 0, 0.93, 0.40},
            {8, 9, 10, 0.905, 0.80}};
  }
  if (table == 2) {
    return {{4, 5, 10, 0.835, 0.82}, {4, 5, 20, 0.805, 1.00}, {6, 7, 10, 0.75, 0.79},
            {6, 7, 20, 0.725, 1.00}, {8, 9, 10, 0.905, 0.80}, {8, 9, 20, 0.89, 1.00}};
  }
  throw Error(ErrorCode::kConfig, "table must be 1 or 2");
}

struct CellStats {
  double mean = 0.0;
  double median = 0.0;
  double min = 0.0;
  double max = 0.0;
};

inline CellStats Summarize(std::vector<double> v) {
  CellStats s;
  if (v.empty()) return s;
  std::sort(v.begin(), v.end());
  s.min = v.front();
  s.max = v.back();
  for (double x : v) s.mean += x;
  s.mean /= static_cast<double>(v.size());
  const std::size_t m = v.size() / 2;
  s.median = v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
  return s;
}

inline const char* kReproduceHeader =
    "digit_a,digit_b,n_trigger,seeds,completed,clean_mean,clean_median,clean_min,"
    "clean_max,reference_clean,trigger_mean,trigger_median,trigger_min,trigger_max,"
    "reference_trigger,failures";

}  // namespace detail

// Configures the baseline or watermarked pipeline from a shared option set.
inline experiment::ExperimentConfig BaselineConfig(experiment::ExperimentConfig cfg) {
  cfg.n_trigger = 0;
  cfg.order = watermark::OrderMode::kRandom;
  return cfg;
}

inline int RunTraining(const experiment::ExperimentConfig& cfg, const DataPaths& paths,
                       const std::string& checkpoint_path, const std::string& metrics_path,
                       const std::string& schedule_path, Streams io) {
  const auto samples = detail::LoadSamples(paths);
  const experiment::ExperimentResult r = experiment::RunExperiment(samples, cfg);
  SaveCheckpoint(r.model, checkpoint_path);
  const std::string csv = experiment::MetricsCsv(cfg, r.log);
  io.out << csv;
  if (!metrics_path.empty()) detail::WriteText(metrics_path, csv);
  if (!schedule_path.empty()) detail::WriteText(schedule_path, schedule::ScheduleText(r.schedule));
  if (r.log.aborted_on_budget) {
    io.err << "warning: wall budget exceeded, results are partial\n";
  }
  io.err << "checkpoint written to " << checkpoint_path << "\n";
  return kExitOk;
}

struct VerifyRequest {
  std::string target;
  std::string baseline;
  std::string report_path;
  std::string report_csv_path;
  watermark::VerificationConfig cfg;
};

inline int RunVerify(const experiment::ExperimentConfig& exp, const DataPaths& paths,
                     const VerifyRequest& req, Streams io) {
  const auto samples = detail::LoadSamples(paths);
  const experiment::PreparedData prepared = experiment::PrepareData(samples, exp);
  const auto& trigger_set = prepared.triggers.verification;

  watermark::VerificationInputs in;
  in.trigger_labels = watermark::LabelsOf(trigger_set);
  std::shared_ptr<HybridModel> target_model, baseline_model;
  in.target_predictions = detail::PredictionsOn(req.target, trigger_set, target_model);
  if (!req.baseline.empty()) {
    in.baseline_predictions = detail::PredictionsOn(req.baseline, trigger_set, baseline_model);
  }
  const auto& clean = prepared.split.test;
  if (target_model) {
    const auto predict = watermark::ModelPredictor(*target_model);
    in.clean_accuracy = watermark::EvaluateClean(predict, clean);
    if (baseline_model) {
      in.utility_disagreement = watermark::UtilityDelta(
          predict, watermark::ModelPredictor(*baseline_model), clean);
    }
  }
  const watermark::VerificationReport report = watermark::VerifyPredictions(in, req.cfg);
  const std::string text = watermark::FormatReport(report);
  io.out << text;
  if (report.utility_disagreement) {
    io.out << "utility_within_eps0: "
           << (*report.utility_disagreement < req.cfg.epsilon0 ? "true" : "false") << "\n";
  }
  if (report.trigger_agreement) {
    io.out << "agreement_within_eps1: "
           << (*report.trigger_agreement < req.cfg.epsilon1 ? "true" : "false") << "\n";
  }
  if (!req.report_path.empty()) detail::WriteText(req.report_path, text);
  if (!req.report_csv_path.empty()) {
    detail::WriteText(req.report_csv_path, watermark::ReportCsvHeader() + "\n" +
                                               watermark::ReportCsvRow(report) + "\n");
  }
  return report.decision == watermark::Decision::kOwned ? kExitOk : kExitNegative;
}

inline int RunQuery(const experiment::ExperimentConfig& exp, const DataPaths& paths,
                    const std::string& checkpoint, const std::string& out_path, Streams io) {
  const auto samples = detail::LoadSamples(paths);
  const experiment::PreparedData prepared = experiment::PrepareData(samples, exp);
  std::shared_ptr<HybridModel> model;
  const auto predict = detail::LoadPredictor(checkpoint, model);
  const std::string csv = experiment::TranscriptCsv(predict, prepared.triggers.verification);
  if (out_path.empty()) {
    io.out << csv;
  } else {
    detail::WriteText(out_path, csv);
  }
  return kExitOk;
}

inline int RunExportSchedule(const experiment::ExperimentConfig& exp, const DataPaths& paths,
                             const std::string& out_path, Streams io) {
  const auto samples = detail::LoadSamples(paths);
  const experiment::PreparedData prepared = experiment::PrepareData(samples, exp);
  const watermark::EmbedConfig embed = experiment::MakeEmbedConfig(exp, prepared.schedule);
  const schedule::SampleSchedule s = schedule::BuildSchedule(
      prepared.clean_pool, prepared.triggers.embed_pairs, prepared.schedule, embed.seed);
  const std::string text = schedule::ScheduleText(s);
  if (out_path.empty()) {
    io.out << text;
  } else {
    detail::WriteText(out_path, text);
  }
  return kExitOk;
}

// Trains every row of the chosen table for each seed. A failing run is
// recorded on its row and the sweep continues.
inline int RunReproduce(int table, const std::vector<std::uint64_t>& seeds,
                        const experiment::ExperimentConfig& base, const DataPaths& paths,
                        const std::string& out_path, const std::string& runs_path,
                        Streams io) {
  if (seeds.empty()) throw Error(ErrorCode::kConfig, "reproduce needs at least one seed");
  const std::vector<detail::ReferenceCell> cells = detail::ReferenceTable(table);
  const auto samples = detail::LoadSamples(paths);

  std::ostringstream runs;
  runs << experiment::kMetricsCsvHeader << "\n";
  std::ostringstream agg;
  agg << std::fixed << std::setprecision(6) << detail::kReproduceHeader << "\n";
  for (const detail::ReferenceCell& cell : cells) {
    std::vector<double> clean, trigger;
    std::vector<std::string> failures;
    for (std::uint64_t seed : seeds) {
      experiment::ExperimentConfig cfg = base;
      cfg.digit_a = cell.digit_a;
      cfg.digit_b = cell.digit_b;
      cfg.n_trigger = cell.n_trigger;
      cfg.seed = seed;
      cfg.order = cell.n_trigger == 0 ? watermark::OrderMode::kRandom
                                      : watermark::OrderMode::kGrouped;
      try {
        const experiment::ExperimentResult r = experiment::RunExperiment(samples, cfg);
        clean.push_back(r.clean_accuracy());
        trigger.push_back(r.trigger_accuracy());
        runs << experiment::MetricsCsvRows(cfg, r.log);
        io.err << "reproduce: " << cell.digit_a << "/" << cell.digit_b << " n_trigger="
               << cell.n_trigger << " seed=" << seed << " clean=" << r.clean_accuracy()
               << " trigger=" << r.trigger_accuracy() << "\n";
      } catch (const Error& e) {
        failures.push_back("seed " + std::to_string(seed) + ": " + e.what());
        io.err << "reproduce: run failed: " << failures.back() << "\n";
      }
    }
    const detail::CellStats c = detail::Summarize(clean);
    const detail::CellStats t = detail::Summarize(trigger);
    std::string seed_list;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      seed_list += (i ? ";" : "") + std::to_string(seeds[i]);
    }
    std::string failure_text;
    for (std::size_t i = 0; i < failures.size(); ++i) {
      std::string f = failures[i];
      std::replace(f.begin(), f.end(), ',', ' ');
      failure_text += (i ? " | " : "") + f;
    }
    agg << cell.digit_a << ',' << cell.digit_b << ',' << cell.n_trigger << ',' << seed_list
        << ',' << clean.size() << ',' << c.mean << ',' << c.median << ',' << c.min << ','
        << c.max << ',' << cell.clean << ',' << t.mean << ',' << t.median << ',' << t.min
        << ',' << t.max << ',' << cell.trigger << ',' << failure_text << "\n";
  }
  io.out << agg.str();
  if (!out_path.empty()) detail::WriteText(out_path, agg.str());
  if (!runs_path.empty()) detail::WriteText(runs_path, runs.str());
  return kExitOk;
}

inline int RunGradcheck(std::uint64_t seed, Streams io,
                        const gradcheck::GateApplier& apply = gradcheck::DefaultApplier()) {
  const gradcheck::SuiteReport report = gradcheck::RunSuite(seed, apply);
  io.out << gradcheck::FormatSuite(report);
  return report.all_passed() ? kExitOk : kExitNegative;
}

// Parses argv and dispatches. --config FILE holds "key = value" lines named
// after the long flags of the chosen subcommand; flags on the command line
// win over the file.
inline int Main(int argc, const char* const* argv, std::ostream& out = std::cout,
                std::ostream& err = std::cerr) {
  Streams io{out, err};
  CLI::App app{"Quantum neural network watermarking harness", "qnnw"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Key = value file; command-line flags take precedence");
  app.config_formatter(std::make_shared<detail::SubcommandConfig>(&app));
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.fallthrough();

  detail::ExperimentOptions base_opts, mark_opts, verify_opts, query_opts, export_opts,
      repro_opts;
  std::string base_ckpt = "baseline.qnnw", mark_ckpt = "watermarked.qnnw";
  std::string base_metrics, mark_metrics, mark_schedule;
  std::string order = "grouped";

  auto* baseline = app.add_subcommand("train-baseline", "Train an unmarked model");
  detail::AddExperimentOptions(baseline, base_opts, true);
  baseline->add_option("--checkpoint", base_ckpt, "Output checkpoint")->capture_default_str();
  baseline->add_option("--metrics", base_metrics, "Output metrics CSV");

  auto* marked = app.add_subcommand("train-watermarked", "Train with the grouped/paired schedule");
  mark_opts.cfg.n_trigger = 10;
  detail::AddExperimentOptions(marked, mark_opts, true);
  marked->add_option("--n-trigger", mark_opts.cfg.n_trigger, "Embedded trigger pairs")
      ->capture_default_str();
  marked->add_option("--order", order, "grouped or random")
      ->check(CLI::IsMember({"grouped", "random"}))
      ->capture_default_str();
  marked->add_flag("--regenerate-schedule", mark_opts.cfg.regenerate_schedule,
                   "Rebuild the schedule every epoch");
  marked->add_option("--checkpoint", mark_ckpt, "Output checkpoint")->capture_default_str();
  marked->add_option("--metrics", mark_metrics, "Output metrics CSV");
  marked->add_option("--schedule-out", mark_schedule, "Write the schedule audit text");

  VerifyRequest vreq;
  auto* verify = app.add_subcommand("verify", "Ownership verification on the trigger set");
  detail::AddExperimentOptions(verify, verify_opts, false);
  verify->add_option("--target", vreq.target, "Checkpoint or transcript of the suspect model")
      ->required();
  verify->add_option("--baseline", vreq.baseline, "Checkpoint or transcript of an unmarked model");
  verify->add_option("--delta", vreq.cfg.delta)->capture_default_str();
  verify->add_option("--tau", vreq.cfg.tau)->capture_default_str();
  verify->add_option("--eps0", vreq.cfg.epsilon0)->capture_default_str();
  verify->add_option("--eps1", vreq.cfg.epsilon1)->capture_default_str();
  verify->add_option("--null-rate", vreq.cfg.null_rate)->capture_default_str();
  verify->add_option("--alpha", vreq.cfg.alpha)->capture_default_str();
  verify->add_option("--report", vreq.report_path, "Write the key: value report");
  verify->add_option("--report-csv", vreq.report_csv_path, "Write the report as CSV");

  std::string query_ckpt, query_out;
  auto* query = app.add_subcommand("query", "Write a prediction transcript for the trigger set");
  detail::AddExperimentOptions(query, query_opts, false);
  query->add_option("--checkpoint", query_ckpt)->required();
  query->add_option("--out", query_out, "Transcript path (stdout if omitted)");

  std::string export_out;
  auto* export_cmd = app.add_subcommand("export-schedule", "Print the training schedule");
  export_opts.cfg.n_trigger = 10;
  detail::AddExperimentOptions(export_cmd, export_opts, false);
  export_cmd->add_option("--n-trigger", export_opts.cfg.n_trigger)->capture_default_str();
  export_cmd->add_option("--out", export_out, "Output path (stdout if omitted)");

  int table = 1;
  std::vector<std::uint64_t> seeds;
  std::string repro_out, repro_runs;
  auto* reproduce = app.add_subcommand("reproduce", "Multi-seed reproduction of a results table");
  detail::AddExperimentOptions(reproduce, repro_opts, true);
  reproduce->add_option("--table", table, "1 or 2")->check(CLI::IsMember({1, 2}))
      ->capture_default_str();
  reproduce->add_option("--seeds", seeds, "Seed list")->delimiter(',')->required();
  reproduce->add_option("--out", repro_out, "Aggregated CSV path");
  reproduce->add_option("--runs-out", repro_runs, "Per-run metrics CSV path");

  std::uint64_t gc_seed = 0;
  auto* gc = app.add_subcommand("gradcheck", "Gradient and gate-kernel self checks");
  gc->add_option("--seed", gc_seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands()[0]->help());
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitError;
  }

  try {
    CLI::App* cmd = app.get_subcommands().front();
    detail::LogResolved(cmd, err);
    if (cmd == baseline) {
      return RunTraining(BaselineConfig(base_opts.Resolved()), base_opts.paths, base_ckpt,
                         base_metrics, "", io);
    }
    if (cmd == marked) {
      experiment::ExperimentConfig cfg = mark_opts.Resolved();
      if (cfg.n_trigger == 0) {
        throw Error(ErrorCode::kConfig, "train-watermarked needs --n-trigger > 0");
      }
      cfg.order = order == "random" ? watermark::OrderMode::kRandom
                                    : watermark::OrderMode::kGrouped;
      return RunTraining(cfg, mark_opts.paths, mark_ckpt, mark_metrics, mark_schedule, io);
    }
    if (cmd == verify) {
      return RunVerify(verify_opts.Resolved(), verify_opts.paths, vreq, io);
    }
    if (cmd == query) {
      return RunQuery(query_opts.Resolved(), query_opts.paths, query_ckpt, query_out, io);
    }
    if (cmd == export_cmd) {
      return RunExportSchedule(export_opts.Resolved(), export_opts.paths, export_out, io);
    }
    if (cmd == reproduce) {
      return RunReproduce(table, seeds, repro_opts.Resolved(), repro_opts.paths, repro_out,
                          repro_runs, io);
    }
    if (cmd == gc) return RunGradcheck(gc_seed, io);
  } catch (const Error& e) {
    err << "error [" << ErrorCodeName(e.code()) << "]: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace qnnw::cli

#endif  // QNNW_CLI_HPP_
