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

#include "driftood/pipeline.h"

#include <cmath>
#include <string>

#include "driftood/error.h"
#include "driftood/parallel.h"

namespace driftood {
namespace {

std::vector<double> ToDoubles(const std::vector<float>& v) {
  return std::vector<double>(v.begin(), v.end());
}

PatchEmbedding MakeView(const std::vector<float>& global, const std::vector<float>& patches,
                        std::size_t num_patches) {
  return PatchEmbedding{Normalize(ToDoubles(global)), ToDoubles(patches), num_patches};
}

TimestepData SplitTimestep(std::uint32_t t, std::vector<Sample> samples, std::size_t k,
                           double train_fraction) {
  std::vector<std::size_t> per_class(k, 0);
  for (const auto& s : samples) {
    if (s.is_id()) ++per_class[static_cast<std::size_t>(s.label)];
  }
  std::vector<std::size_t> train_quota(k, 0);
  for (std::size_t c = 0; c < k; ++c) {
    if (per_class[c] == 0) continue;
    const auto quota = static_cast<std::size_t>(
        std::ceil(train_fraction * static_cast<double>(per_class[c]) - 1e-9));
    train_quota[c] = std::clamp<std::size_t>(quota, 1, per_class[c]);
  }
  TimestepData data;
  data.timestep = t;
  for (auto& s : samples) {
    if (!s.is_id()) {
      data.ood.push_back(std::move(s));
      continue;
    }
    auto& quota = train_quota[static_cast<std::size_t>(s.label)];
    if (quota > 0) {
      --quota;
      data.train.push_back(std::move(s));
    } else {
      data.test_id.push_back(std::move(s));
    }
  }
  return data;
}

}  // namespace

std::string MethodName(Method method) {
  return method == Method::kQuadruple ? "tqpm" : "dpm";
}

Method ParseMethod(const std::string& name) {
  if (name == "tqpm") return Method::kQuadruple;
  if (name == "dpm") return Method::kDualPattern;
  throw Error(ErrorCode::kInvalidConfig, "unknown method '" + name + "' (expected tqpm or dpm)");
}

void PipelineConfig::Validate() const {
  train.Validate();
  if (!(id_train_fraction > 0.0 && id_train_fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "id_train_fraction must lie in (0, 1]");
  }
  if (!(visual.temperature > 0.0)) throw Error(ErrorCode::kInvalidConfig, "temperature must be positive");
  if (visual.gamma < 0.0) throw Error(ErrorCode::kInvalidConfig, "gamma must be nonnegative");
  if (initial.gamma_cap < 0.0) throw Error(ErrorCode::kInvalidConfig, "gamma_cap must be nonnegative");
  if (threads < 1) throw Error(ErrorCode::kInvalidConfig, "threads must be at least 1");
}

Sample ToSample(const SampleRecord& r, const DatasetManifest& m) {
  Sample s{r.timestep, r.label, MakeView(r.global, r.patches, m.num_patches),
           EncodeCaption(ToDoubles(r.caption)), std::nullopt, r.pair_id};
  // The format stores no corrupted patch tokens, so the shifted view is
  // global-only.
  if (r.is_id()) s.shifted = MakeView(r.corrupted_global, {}, 0);
  return s;
}

TextBank LoadTextBank(const DatasetReader& reader) {
  const auto table = reader.ReadPrompts();
  std::vector<PromptEmbeddingSet> sets;
  sets.reserve(table.size());
  for (std::size_t k = 0; k < table.size(); ++k) {
    PromptEmbeddingSet set{static_cast<int>(k), {}};
    for (const auto& e : table[k]) set.embeddings.push_back(ToDoubles(e));
    sets.push_back(std::move(set));
  }
  return BuildTextBank(sets, reader.manifest().class_names);
}

void ForEachTimestep(DatasetReader& reader, double id_train_fraction,
                     const std::function<void(TimestepData&)>& fn) {
  const auto& m = reader.manifest();
  SampleRecord record;
  bool pending = reader.Next(record);
  for (std::uint32_t t = 0; t < m.timesteps; ++t) {
    std::vector<Sample> samples;
    while (pending && record.timestep == t) {
      samples.push_back(ToSample(record, m));
      pending = reader.Next(record);
    }
    auto data = SplitTimestep(t, std::move(samples), m.num_classes, id_train_fraction);
    fn(data);
  }
}

std::vector<TrainingExample> MakeTrainingExamples(std::span<const Sample> train,
                                                  const TextBank& bank,
                                                  std::span<const SimplexVector> prototypes,
                                                  const VisualPatternConfig& cfg, int threads) {
  std::vector<TrainingExample> out(train.size());
  ParallelFor(train.size(), threads, [&](std::size_t i) {
    const Sample& s = train[i];
    auto& ex = out[i];
    ex.label = s.label;
    ex.logits_clean = IdLogits(s.view, bank, cfg);
    ex.logits_shift = IdLogits(*s.shifted, bank, cfg);
    ex.clean = ScoreView(s.view, s.caption, bank, prototypes, cfg);
    ex.shift = ScoreView(*s.shifted, s.caption, bank, prototypes, cfg);
  });
  return out;
}

EvalResult EvaluateTimestep(const TimestepData& data, const TextBank& bank,
                            std::span<const SimplexVector> prototypes,
                            const FusionParams& params, const VisualPatternConfig& cfg,
                            int threads) {
  if (data.ood.empty()) {
    throw Error(ErrorCode::kNoOODSamples,
                "timestep " + std::to_string(data.timestep) + " has no OOD records");
  }
  if (data.test_id.empty()) {
    throw Error(ErrorCode::kEmptySide,
                "timestep " + std::to_string(data.timestep) + " has no held-out ID records");
  }
  const std::size_t m = data.test_id.size();
  std::vector<double> id_scores(m);
  std::vector<std::vector<double>> logits_clean(m);
  std::vector<std::vector<double>> logits_shift(m);
  std::vector<int> labels(m);
  ParallelFor(m, threads, [&](std::size_t i) {
    const Sample& s = data.test_id[i];
    logits_clean[i] = IdLogits(s.view, bank, cfg);
    logits_shift[i] = IdLogits(*s.shifted, bank, cfg);
    labels[i] = s.label;
    id_scores[i] = FusedScore(ScoreView(s.view, s.caption, bank, prototypes, cfg), params);
  });
  std::vector<double> ood_scores(data.ood.size());
  ParallelFor(data.ood.size(), threads, [&](std::size_t i) {
    const Sample& s = data.ood[i];
    ood_scores[i] = FusedScore(ScoreView(s.view, s.caption, bank, prototypes, cfg), params);
  });

  EvalResult r;
  r.timestep = data.timestep;
  r.auroc = Auroc(id_scores, ood_scores);
  r.fpr95 = FprAtTpr(id_scores, ood_scores, 0.95);
  r.acc_clean = Accuracy(logits_clean, labels);
  r.acc_shift = Accuracy(logits_shift, labels);
  r.n_id = m;
  r.n_ood = data.ood.size();
  return r;
}

RunResult RunPipeline(const std::filesystem::path& dataset, const PipelineConfig& cfg) {
  cfg.Validate();
  DatasetReader reader(dataset);
  const TextBank bank = LoadTextBank(reader);
  RunResult result;
  FusionState state{cfg.initial, {}, {}};

  ForEachTimestep(reader, cfg.id_train_fraction, [&](TimestepData& data) {
    if (data.train.empty()) {
      throw Error(ErrorCode::kEmptyTimestep,
                  "timestep " + std::to_string(data.timestep) + " has no ID records");
    }
    auto prototypes = BuildPrototypes(data.train, bank, cfg.visual, cfg.threads);
    const auto examples =
        MakeTrainingExamples(data.train, bank, prototypes, cfg.visual, cfg.threads);

    if (!result.threshold) {
      std::vector<double> calib(examples.size());
      for (std::size_t i = 0; i < examples.size(); ++i) {
        calib[i] = FusedScore(examples[i].clean, state.params);
      }
      result.threshold = CalibrateThreshold(calib, cfg.train.delta_q, data.timestep);
    }
    if (cfg.train_fusion) {
      auto log = FitTimestep(examples, data.timestep, *result.threshold, state, cfg.train,
                             cfg.visual.temperature);
      result.log.insert(result.log.end(), log.begin(), log.end());
    }
    if (cfg.evaluate) {
      result.eval.push_back(
          EvaluateTimestep(data, bank, prototypes, state.params, cfg.visual, cfg.threads));
    }
    result.snapshots.push_back({data.timestep, state.params, state.atc, std::move(prototypes)});
  });
  return result;
}

std::vector<EvalResult> EvaluateSnapshots(const std::filesystem::path& dataset,
                                          const PipelineConfig& cfg,
                                          std::span<const TimestepSnapshot> snapshots) {
  cfg.Validate();
  DatasetReader reader(dataset);
  const TextBank bank = LoadTextBank(reader);
  std::vector<EvalResult> out;
  ForEachTimestep(reader, cfg.id_train_fraction, [&](TimestepData& data) {
    const TimestepSnapshot* snap = nullptr;
    for (const auto& s : snapshots) {
      if (s.timestep == data.timestep) snap = &s;
    }
    if (snap == nullptr) {
      throw Error(ErrorCode::kMissingPrototypes,
                  "saved state has no entry for timestep " + std::to_string(data.timestep));
    }
    out.push_back(
        EvaluateTimestep(data, bank, snap->prototypes, snap->params, cfg.visual, cfg.threads));
  });
  return out;
}

}  // namespace driftood
