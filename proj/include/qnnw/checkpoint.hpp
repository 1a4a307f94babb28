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
#ifndef QNNW_CHECKPOINT_HPP_
#define QNNW_CHECKPOINT_HPP_

// Binary checkpoint layout, all integers and floats little-endian:
//
//   offset  size  field
//   0       4     magic "QNNW"
//   4       4     u32 format version (kCheckpointVersion)
//   8       4     u32 input_dim
//   12      4     u32 n_qubits
//   16      4     u32 reps
//   20      4     u32 observable kind (0 = single-qubit Z, 1 = Z parity)
//   24      4     u32 observable qubit
//   28      4     u32 angle map (0 = pi*sigmoid, 1 = pi*tanh)
//   32      8     u64 training seed
//   40      4     u32 epochs
//   44      8     u64 schedule config hash
//   52      8     u64 parameter count P
//   60      8*P   f64 parameters, flat order of HybridModel::FlatParameters
//   60+8P   4     u32 CRC-32 (zlib polynomial) of the parameter payload

#include <zlib.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <type_traits>
#include <string>
#include <vector>

#include "qnnw/error.hpp"
#include "qnnw/hybrid_model.hpp"

namespace qnnw {

inline constexpr std::array<char, 4> kCheckpointMagic = {'Q', 'N', 'N', 'W'};
inline constexpr std::uint32_t kCheckpointVersion = 1;
inline constexpr std::size_t kCheckpointHeaderSize = 60;

namespace detail {

template <typename T>
void PutLe(std::vector<unsigned char>& out, T value) {
  static_assert(std::is_unsigned_v<T>);
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<unsigned char>(value >> (8 * i)));
  }
}

template <typename T>
T GetLe(const unsigned char* p) {
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<T>(p[i]) << (8 * i);
  }
  return value;
}

inline std::uint32_t Crc32(const unsigned char* data, std::size_t size) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in bounded chunks.
  while (size > 0) {
    const uInt chunk = static_cast<uInt>(std::min<std::size_t>(size, 1u << 30));
    crc = crc32(crc, data, chunk);
    data += chunk;
    size -= chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

}  // namespace detail

inline std::vector<unsigned char> SerializeCheckpoint(const HybridModel& model) {
  const ModelConfig& cfg = model.config();
  const std::vector<double> params = model.FlatParameters();
  std::vector<unsigned char> out;
  out.reserve(kCheckpointHeaderSize + 8 * params.size() + 4);
  out.insert(out.end(), kCheckpointMagic.begin(), kCheckpointMagic.end());
  detail::PutLe<std::uint32_t>(out, kCheckpointVersion);
  detail::PutLe<std::uint32_t>(out, static_cast<std::uint32_t>(cfg.input_dim));
  detail::PutLe<std::uint32_t>(out, static_cast<std::uint32_t>(cfg.ansatz.n_qubits));
  detail::PutLe<std::uint32_t>(out, static_cast<std::uint32_t>(cfg.ansatz.reps));
  detail::PutLe<std::uint32_t>(
      out, static_cast<std::uint32_t>(cfg.ansatz.observable.kind));
  detail::PutLe<std::uint32_t>(
      out, static_cast<std::uint32_t>(cfg.ansatz.observable.qubit));
  detail::PutLe<std::uint32_t>(out, static_cast<std::uint32_t>(cfg.angle_map));
  detail::PutLe<std::uint64_t>(out, model.metadata().seed);
  detail::PutLe<std::uint32_t>(out, model.metadata().epochs);
  detail::PutLe<std::uint64_t>(out, model.metadata().schedule_hash);
  detail::PutLe<std::uint64_t>(out, params.size());
  const std::size_t payload_begin = out.size();
  for (double v : params) detail::PutLe<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
  detail::PutLe<std::uint32_t>(
      out, detail::Crc32(out.data() + payload_begin, out.size() - payload_begin));
  return out;
}

inline HybridModel DeserializeCheckpoint(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < kCheckpointHeaderSize + 4 ||
      !std::equal(kCheckpointMagic.begin(), kCheckpointMagic.end(), bytes.begin())) {
    throw Error(ErrorCode::kCorrupt, "missing QNNW checkpoint header");
  }
  const unsigned char* p = bytes.data();
  const auto version = detail::GetLe<std::uint32_t>(p + 4);
  if (version != kCheckpointVersion) {
    throw Error(ErrorCode::kVersionMismatch,
                "checkpoint version " + std::to_string(version) +
                    ", expected " + std::to_string(kCheckpointVersion));
  }
  ModelConfig cfg;
  cfg.input_dim = static_cast<int>(detail::GetLe<std::uint32_t>(p + 8));
  cfg.ansatz.n_qubits = static_cast<int>(detail::GetLe<std::uint32_t>(p + 12));
  cfg.ansatz.reps = static_cast<int>(detail::GetLe<std::uint32_t>(p + 16));
  const auto obs_kind = detail::GetLe<std::uint32_t>(p + 20);
  if (obs_kind > 1) throw Error(ErrorCode::kCorrupt, "unknown observable kind");
  cfg.ansatz.observable.kind = static_cast<sim::ObservableKind>(obs_kind);
  cfg.ansatz.observable.qubit = static_cast<int>(detail::GetLe<std::uint32_t>(p + 24));
  const auto angle_map = detail::GetLe<std::uint32_t>(p + 28);
  if (angle_map > 1) throw Error(ErrorCode::kCorrupt, "unknown angle map");
  cfg.angle_map = static_cast<AngleMap>(angle_map);
  TrainingMetadata meta;
  meta.seed = detail::GetLe<std::uint64_t>(p + 32);
  meta.epochs = detail::GetLe<std::uint32_t>(p + 40);
  meta.schedule_hash = detail::GetLe<std::uint64_t>(p + 44);
  const auto count = detail::GetLe<std::uint64_t>(p + 52);

  if (cfg.input_dim < 1 || cfg.ansatz.n_qubits < 1 ||
      cfg.ansatz.n_qubits > sim::kMaxQubits || cfg.ansatz.reps < 1) {
    throw Error(ErrorCode::kCorrupt, "invalid dimension header");
  }
  if (count != cfg.num_parameters()) {
    throw Error(ErrorCode::kShape,
                "header declares " + std::to_string(count) +
                    " parameters, dimensions imply " +
                    std::to_string(cfg.num_parameters()));
  }
  if (bytes.size() != kCheckpointHeaderSize + 8 * count + 4) {
    throw Error(ErrorCode::kCorrupt, "checkpoint length does not match header");
  }
  const unsigned char* payload = p + kCheckpointHeaderSize;
  const auto stored_crc = detail::GetLe<std::uint32_t>(payload + 8 * count);
  if (stored_crc != detail::Crc32(payload, 8 * count)) {
    throw Error(ErrorCode::kCorrupt, "checkpoint payload checksum mismatch");
  }
  std::vector<double> params(count);
  for (std::size_t i = 0; i < count; ++i) {
    params[i] = std::bit_cast<double>(detail::GetLe<std::uint64_t>(payload + 8 * i));
  }
  HybridModel model(cfg);
  model.SetFlatParameters(params);
  model.metadata() = meta;
  return model;
}

inline std::vector<unsigned char> ReadFileBytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  return std::vector<unsigned char>(std::istreambuf_iterator<char>(in), {});
}

inline void WriteFileBytes(const std::string& path,
                           const std::vector<unsigned char>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "short write to " + path);
}

inline void SaveCheckpoint(const HybridModel& model, const std::string& path) {
  WriteFileBytes(path, SerializeCheckpoint(model));
}

inline HybridModel LoadCheckpoint(const std::string& path) {
  return DeserializeCheckpoint(ReadFileBytes(path));
}

inline bool LooksLikeCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::array<char, 4> head{};
  return in.read(head.data(), 4) && head == kCheckpointMagic;
}

}  // namespace qnnw

#endif  // QNNW_CHECKPOINT_HPP_
