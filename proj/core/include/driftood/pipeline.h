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

#ifndef DRIFTOOD_PIPELINE_H_
#define DRIFTOOD_PIPELINE_H_

// End-to-end runs over a TQE1 dataset: text bank, per-timestep prototypes,
// threshold calibration on the first timestep, sequential fusion training
// and per-timestep evaluation. Records are streamed; only one timestep is
// held in memory at a time.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "driftood/dataio.h"
#include "driftood/metrics.h"
#include "driftood/scoring.h"
#include "driftood/text_bank.h"
#include "driftood/training.h"
#include "driftood/visual_patterns.h"

namespace driftood {

std::string MethodName(Method method);
// Accepts "tqpm" / "dpm"; throws kInvalidConfig otherwise.
Method ParseMethod(const std::string& name);

struct PipelineConfig {
  Method method = Method::kQuadruple;
  FusionParams initial = DefaultFusionParams(Method::kQuadruple);
  VisualPatternConfig visual;
  TrainConfig train;
  // Fraction of each class's ID records per timestep used for prototypes,
  // calibration and training; the rest are held out for evaluation.
  double id_train_fraction = 0.5;
  // False evaluates with the initial parameters (zero-shot).
  bool train_fusion = true;
  bool evaluate = true;
  int threads = 1;

  void Validate() const;
};

// Parameters and statistics after one timestep has been processed.
struct TimestepSnapshot {
  std::uint32_t timestep = 0;
  FusionParams params;
  AtcState atc;
  std::vector<SimplexVector> prototypes;
};

struct RunResult {
  std::optional<ThresholdState> threshold;
  std::vector<TimestepSnapshot> snapshots;
  std::vector<EpochLog> log;
  std::vector<EvalResult> eval;
};

// Converts a stored record into a normalized engine sample.
Sample ToSample(const SampleRecord& record, const DatasetManifest& manifest);

TextBank LoadTextBank(const DatasetReader& reader);

// Per-timestep data split into training and held-out parts.
struct TimestepData {
  std::uint32_t timestep = 0;
  std::vector<Sample> train;    // ID only
  std::vector<Sample> test_id;  // ID only
  std::vector<Sample> ood;
};

// Streams the dataset and calls `fn` once per timestep, in order.
void ForEachTimestep(DatasetReader& reader, double id_train_fraction,
                     const std::function<void(TimestepData&)>& fn);

std::vector<TrainingExample> MakeTrainingExamples(std::span<const Sample> train,
                                                  const TextBank& bank,
                                                  std::span<const SimplexVector> prototypes,
                                                  const VisualPatternConfig& cfg, int threads);

// Scores held-out ID and OOD samples of one timestep.
EvalResult EvaluateTimestep(const TimestepData& data, const TextBank& bank,
                            std::span<const SimplexVector> prototypes,
                            const FusionParams& params, const VisualPatternConfig& cfg,
                            int threads);

RunResult RunPipeline(const std::filesystem::path& dataset, const PipelineConfig& cfg);

// Re-evaluates a finished run from its snapshots, without training.
std::vector<EvalResult> EvaluateSnapshots(const std::filesystem::path& dataset,
                                          const PipelineConfig& cfg,
                                          std::span<const TimestepSnapshot> snapshots);

}  // namespace driftood

#endif  // DRIFTOOD_PIPELINE_H_
