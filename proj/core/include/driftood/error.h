// Copyright 2026 The driftood Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DRIFTOOD_ERROR_H_
#define DRIFTOOD_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace driftood {

enum class ErrorCode {
  kZeroVector,
  kNonFinite,
  kDimensionMismatch,
  kEmptyInput,
  kDuplicateClass,
  kMissingClass,
  kEmptyPromptSet,
  kEmptyClass,
  kMissingPrototypes,
  kLabelOutOfRange,
  kLengthMismatch,
  kEmptyCalibrationSet,
  kUncalibrated,
  kAlreadyCalibrated,
  kEmptyTimestep,
  kEmptySide,
  kInvalidConfig,
  kNoOODSamples,
  kThetaOutOfRange,
  kManifestMismatch,
  kBadMagic,
  kVersionUnsupported,
  kTruncatedFile,
  kIOFailure,
  kUnsortedTimesteps,
  kUnknownParam,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures surface as this exception; `code()` identifies the
// contract that was violated and `what()` carries the details.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace driftood

#endif  // DRIFTOOD_ERROR_H_
