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
#ifndef QNNW_SCHEDULE_HPP_
#define QNNW_SCHEDULE_HPP_

// Grouped-and-paired training order.
//
// The sequence is D_1, T_1, D_2, T_2, ..., D_q, T_q. Each clean group D_i has
// n_D samples whose labels cycle 0, 1, ..., c-1 (n_D / c full cycles). Each
// trigger group T_i holds n_T / 2 adjacent (clean, trigger) pairs where the
// trigger is the stamped copy of the clean sample just before it, the clean
// label differs from the target t, and the trigger carries t.

#include <algorithm>
#include <cstdint>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qnnw/dataset.hpp"
#include "qnnw/error.hpp"

namespace qnnw::schedule {

struct ScheduleConfig {
  int c = 2;
  int n_D = 0;
  int n_T = 0;
  int q = 1;

  std::size_t total() const {
    return static_cast<std::size_t>(q) * static_cast<std::size_t>(n_D + n_T);
  }
  bool operator==(const ScheduleConfig&) const = default;
};

inline void ValidateConfig(const ScheduleConfig& cfg) {
  auto fail = [](const std::string& msg) {
    throw Error(ErrorCode::kSchedule, msg);
  };
  if (cfg.c < 2) fail("class count c must be >= 2");
  if (cfg.q < 1) fail("group-pair count q must be >= 1");
  if (cfg.n_D < 0 || cfg.n_T < 0) fail("group sizes must be non-negative");
  if (cfg.n_D + cfg.n_T == 0) fail("groups are empty");
  if (cfg.n_D % cfg.c != 0) {
    fail("n_D mod c != 0 (n_D=" + std::to_string(cfg.n_D) +
         ", c=" + std::to_string(cfg.c) + ")");
  }
  if (cfg.n_T % 2 != 0) {
    fail("n_T mod 2 != 0 (n_T=" + std::to_string(cfg.n_T) + ")");
  }
}

// q = n_trigger_samples / (n_T / 2), n_D = total / q - n_T. With zero trigger
// samples the schedule degenerates to a single clean group of `total`.
inline ScheduleConfig DeriveConfig(std::size_t total, std::size_t n_trigger_samples,
                                   int c, int n_T) {
  ScheduleConfig cfg;
  cfg.c = c;
  if (n_trigger_samples == 0) {
    cfg.q = 1;
    cfg.n_T = 0;
    cfg.n_D = static_cast<int>(total);
    ValidateConfig(cfg);
    return cfg;
  }
  if (n_T <= 0 || n_T % 2 != 0) {
    throw Error(ErrorCode::kSchedule,
                "n_T mod 2 != 0 or n_T <= 0 (n_T=" + std::to_string(n_T) + ")");
  }
  const std::size_t per_group = static_cast<std::size_t>(n_T / 2);
  if (n_trigger_samples % per_group != 0) {
    throw Error(ErrorCode::kSchedule,
                "q is not an integer: " + std::to_string(n_trigger_samples) +
                    " trigger samples / " + std::to_string(per_group) +
                    " pairs per group");
  }
  const std::size_t q = n_trigger_samples / per_group;
  if (total % q != 0) {
    throw Error(ErrorCode::kSchedule,
                "n_D is not an integer: " + std::to_string(total) + "/" +
                    std::to_string(q) + " - " + std::to_string(n_T));
  }
  if (total / q < static_cast<std::size_t>(n_T)) {
    throw Error(ErrorCode::kSchedule, "n_D would be negative");
  }
  cfg.q = static_cast<int>(q);
  cfg.n_T = n_T;
  cfg.n_D = static_cast<int>(total / q) - n_T;
  ValidateConfig(cfg);
  return cfg;
}

enum class BlockKind { kClean, kTrigger };

struct ScheduleEntry {
  data::ImageSample sample;
  BlockKind block = BlockKind::kClean;
  int block_index = 1;  // 1-based group index i of D_i / T_i
};

struct SampleSchedule {
  ScheduleConfig config;
  int target_label = 1;
  std::vector<ScheduleEntry> entries;
};

inline std::string BlockTag(const ScheduleEntry& e) {
  return (e.block == BlockKind::kClean ? "D" : "T") + std::to_string(e.block_index);
}

// Seeded fill of the fixed structure. Uses q*n_D/c clean samples of every
// class (extra pool samples are left out) and exactly q*n_T/2 pairs.
inline SampleSchedule BuildSchedule(const std::vector<data::ImageSample>& clean_pool,
                                    const std::vector<data::TriggerPair>& pairs,
                                    const ScheduleConfig& cfg, std::uint64_t seed) {
  ValidateConfig(cfg);
  const std::size_t n_pairs = static_cast<std::size_t>(cfg.q) * (cfg.n_T / 2);
  if (pairs.size() != n_pairs) {
    throw Error(ErrorCode::kSchedule,
                "pair count mismatch: have " + std::to_string(pairs.size()) +
                    ", config needs " + std::to_string(n_pairs));
  }
  SampleSchedule out;
  out.config = cfg;
  out.target_label = pairs.empty() ? 1 : pairs.front().trigger.label;

  std::set<std::size_t> pair_sources;
  for (const data::TriggerPair& p : pairs) {
    if (p.trigger.label != out.target_label) {
      throw Error(ErrorCode::kSchedule, "trigger pairs disagree on target label");
    }
    if (p.clean.label == out.target_label) {
      throw Error(ErrorCode::kSchedule,
                  "pair clean label equals target label " +
                      std::to_string(out.target_label));
    }
    if (p.clean.source_index != p.trigger.source_index ||
        p.trigger.provenance != data::Provenance::kTrigger) {
      throw Error(ErrorCode::kSchedule, "malformed trigger pair");
    }
    pair_sources.insert(p.clean.source_index);
  }
  if (pair_sources.size() != pairs.size()) {
    throw Error(ErrorCode::kSchedule, "duplicate trigger pair source");
  }

  std::mt19937_64 rng(seed);
  const std::size_t per_class = static_cast<std::size_t>(cfg.q) * (cfg.n_D / cfg.c);
  std::vector<std::vector<const data::ImageSample*>> by_class(cfg.c);
  std::set<std::size_t> seen;
  for (const data::ImageSample& s : clean_pool) {
    if (pair_sources.count(s.source_index)) {
      throw Error(ErrorCode::kSchedule,
                  "clean pool sample " + std::to_string(s.source_index) +
                      " is also a pair source");
    }
    if (!seen.insert(s.source_index).second) {
      throw Error(ErrorCode::kSchedule,
                  "duplicate clean pool sample " + std::to_string(s.source_index));
    }
    if (s.label >= 0 && s.label < cfg.c) by_class[s.label].push_back(&s);
  }
  for (int label = 0; label < cfg.c; ++label) {
    if (by_class[label].size() < per_class) {
      throw Error(ErrorCode::kInsufficientSamples,
                  "clean pool exhausted for class " + std::to_string(label) +
                      ": have " + std::to_string(by_class[label].size()) +
                      ", need " + std::to_string(per_class));
    }
    std::shuffle(by_class[label].begin(), by_class[label].end(), rng);
  }
  std::vector<const data::TriggerPair*> pair_order;
  for (const data::TriggerPair& p : pairs) pair_order.push_back(&p);
  std::shuffle(pair_order.begin(), pair_order.end(), rng);

  std::vector<std::size_t> next(cfg.c, 0);
  std::size_t next_pair = 0;
  out.entries.reserve(cfg.total());
  for (int i = 1; i <= cfg.q; ++i) {
    for (int k = 0; k < cfg.n_D; ++k) {
      const int label = k % cfg.c;
      out.entries.push_back({*by_class[label][next[label]++], BlockKind::kClean, i});
    }
    for (int k = 0; k < cfg.n_T / 2; ++k) {
      const data::TriggerPair& p = *pair_order[next_pair++];
      out.entries.push_back({p.clean, BlockKind::kTrigger, i});
      out.entries.push_back({p.trigger, BlockKind::kTrigger, i});
    }
  }
  return out;
}

enum class ViolationKind {
  kLength,
  kBlockOrder,
  kLabelCycle,
  kProvenance,
  kUnpairedTrigger,
  kPairOrder,
  kTriggerLabel,
  kCleanLabelIsTarget,
  kDuplicate,
};

inline const char* ViolationName(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kLength: return "length";
    case ViolationKind::kBlockOrder: return "block-order";
    case ViolationKind::kLabelCycle: return "label-cycle";
    case ViolationKind::kProvenance: return "provenance";
    case ViolationKind::kUnpairedTrigger: return "unpaired-trigger";
    case ViolationKind::kPairOrder: return "pair-order";
    case ViolationKind::kTriggerLabel: return "trigger-label";
    case ViolationKind::kCleanLabelIsTarget: return "clean-label-is-target";
    case ViolationKind::kDuplicate: return "duplicate";
  }
  return "?";
}

struct Violation {
  ViolationKind kind;
  std::size_t position;
  std::string detail;
};

// Re-derives every structural invariant from the entries alone and reports
// all violations found. An empty result means the schedule is valid.
inline std::vector<Violation> ValidateSchedule(const SampleSchedule& schedule,
                                               const ScheduleConfig& cfg,
                                               int target_label) {
  std::vector<Violation> out;
  const auto& e = schedule.entries;
  auto report = [&](ViolationKind k, std::size_t pos, std::string msg) {
    out.push_back({k, pos, std::move(msg)});
  };
  if (e.size() != cfg.total()) {
    report(ViolationKind::kLength, e.size(),
           "length " + std::to_string(e.size()) + ", expected " +
               std::to_string(cfg.total()));
  }
  const std::size_t group = static_cast<std::size_t>(cfg.n_D + cfg.n_T);
  if (group == 0) return out;

  std::set<std::pair<std::size_t, data::Provenance>> seen;
  for (std::size_t pos = 0; pos < e.size(); ++pos) {
    const ScheduleEntry& entry = e[pos];
    const data::ImageSample& s = entry.sample;
    if (!seen.insert({s.source_index, s.provenance}).second) {
      report(ViolationKind::kDuplicate, pos,
             "sample " + std::to_string(s.source_index) + " repeated");
    }
    const int block_index = static_cast<int>(pos / group) + 1;
    const std::size_t offset = pos % group;
    const bool in_clean = offset < static_cast<std::size_t>(cfg.n_D);
    const BlockKind want_block = in_clean ? BlockKind::kClean : BlockKind::kTrigger;
    if (entry.block != want_block || entry.block_index != block_index) {
      report(ViolationKind::kBlockOrder, pos,
             "tag " + BlockTag(entry) + ", expected " + (in_clean ? "D" : "T") +
                 std::to_string(block_index));
    }
    if (in_clean) {
      if (s.provenance != data::Provenance::kClean) {
        report(ViolationKind::kProvenance, pos, "trigger sample inside clean group");
      }
      const int want = static_cast<int>(offset % cfg.c);
      if (s.label != want) {
        report(ViolationKind::kLabelCycle, pos,
               "label " + std::to_string(s.label) + ", cycle expects " +
                   std::to_string(want));
      }
      continue;
    }
    const std::size_t u = offset - cfg.n_D;
    const bool first_of_pair = (u % 2 == 0);
    if (first_of_pair) {
      if (s.provenance != data::Provenance::kClean) {
        const bool swapped = pos + 1 < e.size() &&
                             e[pos + 1].sample.provenance == data::Provenance::kClean &&
                             e[pos + 1].sample.source_index == s.source_index;
        report(swapped ? ViolationKind::kPairOrder : ViolationKind::kProvenance, pos,
               swapped ? "trigger precedes its clean source"
                       : "pair must open with a clean sample");
      } else if (s.label == target_label) {
        report(ViolationKind::kCleanLabelIsTarget, pos,
               "pair clean label equals target " + std::to_string(target_label));
      }
    } else {
      if (s.provenance != data::Provenance::kTrigger) {
        const bool swapped = e[pos - 1].sample.provenance == data::Provenance::kTrigger &&
                             e[pos - 1].sample.source_index == s.source_index;
        if (!swapped) {
          report(ViolationKind::kProvenance, pos, "pair must close with a trigger");
        }
        continue;
      }
      if (s.label != target_label) {
        report(ViolationKind::kTriggerLabel, pos,
               "trigger label " + std::to_string(s.label) + ", expected " +
                   std::to_string(target_label));
      }
      const data::ImageSample& prev = e[pos - 1].sample;
      if (prev.provenance == data::Provenance::kClean &&
          prev.source_index != s.source_index) {
        report(ViolationKind::kUnpairedTrigger, pos,
               "trigger of source " + std::to_string(s.source_index) +
                   " follows clean source " + std::to_string(prev.source_index));
      }
    }
  }
  return out;
}

// FNV-1a over the config and the (source, provenance, label) sequence.
inline std::uint64_t ScheduleHash(const SampleSchedule& schedule) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xFF;
      h *= 1099511628211ULL;
    }
  };
  const ScheduleConfig& cfg = schedule.config;
  mix(cfg.c);
  mix(cfg.n_D);
  mix(cfg.n_T);
  mix(cfg.q);
  mix(static_cast<std::uint64_t>(schedule.target_label));
  for (const ScheduleEntry& e : schedule.entries) {
    mix(e.sample.source_index);
    mix(e.sample.provenance == data::Provenance::kTrigger ? 1 : 0);
    mix(static_cast<std::uint64_t>(e.sample.label));
  }
  return h;
}

// Audit export: a header comment, then one entry per line as
// "position block source_index label provenance".
inline void WriteScheduleText(std::ostream& os, const SampleSchedule& schedule) {
  const ScheduleConfig& cfg = schedule.config;
  os << "# qnnw-schedule v1 c=" << cfg.c << " n_D=" << cfg.n_D
     << " n_T=" << cfg.n_T << " q=" << cfg.q << " t=" << schedule.target_label
     << "\n";
  for (std::size_t pos = 0; pos < schedule.entries.size(); ++pos) {
    const ScheduleEntry& e = schedule.entries[pos];
    os << pos << ' ' << BlockTag(e) << ' ' << e.sample.source_index << ' '
       << e.sample.label << ' '
       << (e.sample.provenance == data::Provenance::kTrigger ? "trigger" : "clean")
       << '\n';
  }
}

inline std::string ScheduleText(const SampleSchedule& schedule) {
  std::ostringstream os;
  WriteScheduleText(os, schedule);
  return os.str();
}

}  // namespace qnnw::schedule

#endif  // QNNW_SCHEDULE_HPP_
