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
#ifndef QNNW_DATASET_HPP_
#define QNNW_DATASET_HPP_

// MNIST ingestion (IDX), binary-subset selection and trigger synthesis.

#include <algorithm>
#include <array>
#include <cstdint>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "qnnw/checkpoint.hpp"
#include "qnnw/error.hpp"

namespace qnnw::data {

inline constexpr int kImageRows = 28;
inline constexpr int kImageCols = 28;
inline constexpr int kImagePixels = kImageRows * kImageCols;
inline constexpr std::uint32_t kIdxImagesMagic = 2051;
inline constexpr std::uint32_t kIdxLabelsMagic = 2049;

enum class Provenance { kClean, kTrigger };

struct ImageSample {
  std::array<std::uint8_t, kImagePixels> pixels{};
  int label = 0;  // class label used for training/evaluation
  int digit = 0;  // original dataset class
  Provenance provenance = Provenance::kClean;
  std::size_t source_index = 0;

  // raw / 255
  std::vector<double> Normalized() const {
    std::vector<double> out(kImagePixels);
    for (int i = 0; i < kImagePixels; ++i) out[i] = pixels[i] / 255.0;
    return out;
  }
};

enum class IdxFailure { kBadMagic, kBadDimensions, kTruncated, kCountMismatch };

class IdxParseError : public Error {
 public:
  IdxParseError(IdxFailure failure, const std::string& message)
      : Error(ErrorCode::kParse, message), failure_(failure) {}
  IdxFailure failure() const noexcept { return failure_; }

 private:
  IdxFailure failure_;
};

namespace detail {

inline std::uint32_t GetBe32(const std::vector<unsigned char>& b, std::size_t off) {
  return (std::uint32_t{b[off]} << 24) | (std::uint32_t{b[off + 1]} << 16) |
         (std::uint32_t{b[off + 2]} << 8) | std::uint32_t{b[off + 3]};
}

}  // namespace detail

// Parses in-memory IDX image and label files. Nothing is returned unless both
// files are fully valid.
inline std::vector<ImageSample> ParseIdx(const std::vector<unsigned char>& images,
                                         const std::vector<unsigned char>& labels) {
  if (images.size() < 16) {
    throw IdxParseError(IdxFailure::kTruncated, "image header truncated");
  }
  if (labels.size() < 8) {
    throw IdxParseError(IdxFailure::kTruncated, "label header truncated");
  }
  if (detail::GetBe32(images, 0) != kIdxImagesMagic) {
    throw IdxParseError(IdxFailure::kBadMagic,
                        "image magic " + std::to_string(detail::GetBe32(images, 0)));
  }
  if (detail::GetBe32(labels, 0) != kIdxLabelsMagic) {
    throw IdxParseError(IdxFailure::kBadMagic,
                        "label magic " + std::to_string(detail::GetBe32(labels, 0)));
  }
  const std::uint32_t n_images = detail::GetBe32(images, 4);
  const std::uint32_t rows = detail::GetBe32(images, 8);
  const std::uint32_t cols = detail::GetBe32(images, 12);
  const std::uint32_t n_labels = detail::GetBe32(labels, 4);
  if (rows != kImageRows || cols != kImageCols) {
    throw IdxParseError(IdxFailure::kBadDimensions,
                        "expected 28x28 images, got " + std::to_string(rows) +
                            "x" + std::to_string(cols));
  }
  if (n_images != n_labels) {
    throw IdxParseError(IdxFailure::kCountMismatch,
                        std::to_string(n_images) + " images vs " +
                            std::to_string(n_labels) + " labels");
  }
  if (images.size() < 16 + std::size_t{n_images} * kImagePixels) {
    throw IdxParseError(IdxFailure::kTruncated, "image payload truncated");
  }
  if (labels.size() < 8 + std::size_t{n_labels}) {
    throw IdxParseError(IdxFailure::kTruncated, "label payload truncated");
  }
  std::vector<ImageSample> out(n_images);
  for (std::size_t i = 0; i < n_images; ++i) {
    ImageSample& s = out[i];
    std::copy_n(images.begin() + 16 + static_cast<std::ptrdiff_t>(i * kImagePixels),
                kImagePixels, s.pixels.begin());
    s.label = s.digit = labels[8 + i];
    s.source_index = i;
  }
  return out;
}

inline std::vector<ImageSample> LoadIdx(const std::string& images_path,
                                        const std::string& labels_path) {
  return ParseIdx(ReadFileBytes(images_path), ReadFileBytes(labels_path));
}

struct BinarySplit {
  std::vector<ImageSample> train;
  std::vector<ImageSample> test;
};

// Draws per_class_count train and per_class_count test samples of each digit
// without replacement. Labels become class_a -> 0, class_b -> 1.
inline BinarySplit SelectBinarySubset(const std::vector<ImageSample>& samples,
                                      int class_a, int class_b,
                                      std::size_t per_class_count,
                                      std::uint64_t seed) {
  if (class_a == class_b) {
    throw Error(ErrorCode::kValidation, "binary classes must differ");
  }
  std::mt19937_64 rng(seed);
  BinarySplit split;
  const std::array<int, 2> classes = {class_a, class_b};
  for (int label = 0; label < 2; ++label) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (samples[i].digit == classes[label]) idx.push_back(i);
    }
    if (idx.size() < 2 * per_class_count) {
      throw Error(ErrorCode::kInsufficientSamples,
                  "digit " + std::to_string(classes[label]) + " has " +
                      std::to_string(idx.size()) + " samples, need " +
                      std::to_string(2 * per_class_count));
    }
    std::shuffle(idx.begin(), idx.end(), rng);
    for (std::size_t k = 0; k < 2 * per_class_count; ++k) {
      ImageSample s = samples[idx[k]];
      s.label = label;
      (k < per_class_count ? split.train : split.test).push_back(std::move(s));
    }
  }
  return split;
}

struct TriggerSpec {
  int block_height = 7;
  int block_width = 7;
  std::uint8_t pixel_value = 255;
  int origin_row = 0;
  int origin_col = 0;
  int source_label = 0;
  int target_label = 1;
};

inline void ValidateTriggerSpec(const TriggerSpec& spec) {
  if (spec.block_height < 1 || spec.block_width < 1 || spec.origin_row < 0 ||
      spec.origin_col < 0 || spec.origin_row + spec.block_height > kImageRows ||
      spec.origin_col + spec.block_width > kImageCols) {
    throw Error(ErrorCode::kValidation, "trigger block does not fit in 28x28");
  }
  if (spec.source_label == spec.target_label) {
    throw Error(ErrorCode::kValidation,
                "trigger target label must differ from source label");
  }
}

inline ImageSample ApplyTrigger(const ImageSample& sample, const TriggerSpec& spec) {
  ValidateTriggerSpec(spec);
  if (sample.label != spec.source_label) {
    throw Error(ErrorCode::kValidation,
                "trigger source label " + std::to_string(spec.source_label) +
                    " but sample has label " + std::to_string(sample.label));
  }
  ImageSample out = sample;
  for (int r = spec.origin_row; r < spec.origin_row + spec.block_height; ++r) {
    for (int c = spec.origin_col; c < spec.origin_col + spec.block_width; ++c) {
      out.pixels[r * kImageCols + c] = spec.pixel_value;
    }
  }
  out.label = spec.target_label;
  out.provenance = Provenance::kTrigger;
  return out;
}

struct TriggerPair {
  ImageSample clean;
  ImageSample trigger;
};

struct TriggerSets {
  std::vector<TriggerPair> embed_pairs;
  std::vector<ImageSample> verification;  // R
};

// Embedding pairs come from train-pool sources, verification triggers from
// test-pool sources, both restricted to spec.source_label.
inline TriggerSets BuildTriggerSets(const std::vector<ImageSample>& train_pool,
                                    const std::vector<ImageSample>& test_pool,
                                    const TriggerSpec& spec, std::size_t n_embed,
                                    std::size_t n_verify, std::uint64_t seed) {
  ValidateTriggerSpec(spec);
  std::mt19937_64 rng(seed);
  auto pick = [&](const std::vector<ImageSample>& pool, std::size_t n,
                  const char* what) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (pool[i].label == spec.source_label) idx.push_back(i);
    }
    if (idx.size() < n) {
      throw Error(ErrorCode::kInsufficientSamples,
                  std::string(what) + ": need " + std::to_string(n) +
                      " label-" + std::to_string(spec.source_label) +
                      " sources, have " + std::to_string(idx.size()));
    }
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(n);
    return idx;
  };
  TriggerSets sets;
  for (std::size_t i : pick(train_pool, n_embed, "embed pairs")) {
    sets.embed_pairs.push_back({train_pool[i], ApplyTrigger(train_pool[i], spec)});
  }
  for (std::size_t i : pick(test_pool, n_verify, "verification set")) {
    sets.verification.push_back(ApplyTrigger(test_pool[i], spec));
  }
  std::set<std::size_t> embed_sources;
  for (const TriggerPair& p : sets.embed_pairs) embed_sources.insert(p.clean.source_index);
  for (const ImageSample& s : sets.verification) {
    if (embed_sources.count(s.source_index)) {
      throw Error(ErrorCode::kOverlap,
                  "verification trigger shares source " +
                      std::to_string(s.source_index) + " with an embed pair");
    }
  }
  return sets;
}

// Train samples not used as the clean half of an embedding pair.
inline std::vector<ImageSample> RemainingCleanPool(
    const std::vector<ImageSample>& train_pool,
    const std::vector<TriggerPair>& pairs) {
  std::set<std::size_t> used;
  for (const TriggerPair& p : pairs) used.insert(p.clean.source_index);
  std::vector<ImageSample> out;
  for (const ImageSample& s : train_pool) {
    if (!used.count(s.source_index)) out.push_back(s);
  }
  return out;
}

}  // namespace qnnw::data

#endif  // QNNW_DATASET_HPP_
