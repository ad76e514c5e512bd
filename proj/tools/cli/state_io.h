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

#ifndef DRIFTOOD_TOOLS_CLI_STATE_IO_H_
#define DRIFTOOD_TOOLS_CLI_STATE_IO_H_

// JSON state file written by `fit` and read by `eval`.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "driftood/pipeline.h"

namespace driftood::cli {

inline constexpr char kStateFormat[] = "driftood-state-1";

struct TrialState {
  std::uint32_t trial = 0;
  std::uint64_t seed = 0;
  std::optional<ThresholdState> threshold;
  std::vector<TimestepSnapshot> snapshots;
};

struct FitState {
  Method method = Method::kQuadruple;
  FusionParams initial;
  VisualPatternConfig visual;
  TrainConfig train;
  double id_train_fraction = 0.5;
  std::vector<TrialState> trials;
};

std::string StateToJson(const FitState& state);
// Throws kManifestMismatch on malformed content.
FitState StateFromJson(const std::string& text);

void SaveState(const std::filesystem::path& path, const FitState& state);
// Throws kIOFailure when the file is missing or unreadable.
FitState LoadState(const std::filesystem::path& path);

}  // namespace driftood::cli

#endif  // DRIFTOOD_TOOLS_CLI_STATE_IO_H_
