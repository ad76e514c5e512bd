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

#include "driftood/error.h"

namespace driftood {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kDuplicateClass: return "DuplicateClass";
    case ErrorCode::kMissingClass: return "MissingClass";
    case ErrorCode::kEmptyPromptSet: return "EmptyPromptSet";
    case ErrorCode::kEmptyClass: return "EmptyClass";
    case ErrorCode::kMissingPrototypes: return "MissingPrototypes";
    case ErrorCode::kLabelOutOfRange: return "LabelOutOfRange";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kEmptyCalibrationSet: return "EmptyCalibrationSet";
    case ErrorCode::kUncalibrated: return "Uncalibrated";
    case ErrorCode::kAlreadyCalibrated: return "AlreadyCalibrated";
    case ErrorCode::kEmptyTimestep: return "EmptyTimestep";
    case ErrorCode::kEmptySide: return "EmptySide";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kNoOODSamples: return "NoOODSamples";
    case ErrorCode::kThetaOutOfRange: return "ThetaOutOfRange";
    case ErrorCode::kManifestMismatch: return "ManifestMismatch";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kVersionUnsupported: return "VersionUnsupported";
    case ErrorCode::kTruncatedFile: return "TruncatedFile";
    case ErrorCode::kIOFailure: return "IOFailure";
    case ErrorCode::kUnsortedTimesteps: return "UnsortedTimesteps";
    case ErrorCode::kUnknownParam: return "UnknownParam";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

}  // namespace driftood
