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
#ifndef QNNW_ERROR_HPP_
#define QNNW_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace qnnw {

enum class ErrorCode {
  kCapacity,
  kValidation,
  kBinding,
  kUnsupportedGenerator,
  kShape,
  kParse,
  kIo,
  kVersionMismatch,
  kCorrupt,
  kInsufficientSamples,
  kOverlap,
  kSchedule,
  kNonFinite,
  kConfig,
  kBudgetExceeded,
};

inline std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kCapacity: return "capacity";
    case ErrorCode::kValidation: return "validation";
    case ErrorCode::kBinding: return "binding";
    case ErrorCode::kUnsupportedGenerator: return "unsupported-generator";
    case ErrorCode::kShape: return "shape";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kVersionMismatch: return "version-mismatch";
    case ErrorCode::kCorrupt: return "corrupt";
    case ErrorCode::kInsufficientSamples: return "insufficient-samples";
    case ErrorCode::kOverlap: return "overlap";
    case ErrorCode::kSchedule: return "schedule";
    case ErrorCode::kNonFinite: return "non-finite";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kBudgetExceeded: return "budget-exceeded";
  }
  return "unknown";
}

// All library failures are reported as qnnw::Error carrying a code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qnnw

#endif  // QNNW_ERROR_HPP_
