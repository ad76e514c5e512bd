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

#include "cli/state_io.h"

#include <fstream>
#include <sstream>

#include "driftood/error.h"
#include "json.hpp"

namespace driftood::cli {
namespace {

using Json = nlohmann::ordered_json;

Json OptionalToJson(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::optional<double> OptionalFromJson(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

Json ParamsToJson(const FusionParams& p) {
  Json j;
  j["beta_raw"] = p.beta_raw;
  j["eta_raw"] = p.eta_raw;
  j["gamma_cap"] = p.gamma_cap;
  j["beta_override"] = OptionalToJson(p.beta_override);
  j["eta_override"] = OptionalToJson(p.eta_override);
  j["beta"] = p.beta();
  j["eta"] = p.eta();
  return j;
}

FusionParams ParamsFromJson(const Json& j) {
  FusionParams p;
  p.beta_raw = j.at("beta_raw").get<double>();
  p.eta_raw = j.at("eta_raw").get<double>();
  p.gamma_cap = j.at("gamma_cap").get<double>();
  p.beta_override = OptionalFromJson(j.at("beta_override"));
  p.eta_override = OptionalFromJson(j.at("eta_override"));
  return p;
}

Json TrainToJson(const TrainConfig& c) {
  Json j;
  j["lr"] = c.lr;
  j["epochs"] = c.epochs;
  j["batch_size"] = c.batch_size;
  j["lambda_cov"] = c.lambda_cov;
  j["lambda_temp"] = c.lambda_temp;
  j["kappa"] = c.kappa;
  j["delta_q"] = c.delta_q;
  j["seed"] = c.seed;
  j["adam_beta1"] = c.adam_beta1;
  j["adam_beta2"] = c.adam_beta2;
  j["adam_eps"] = c.adam_eps;
  return j;
}

TrainConfig TrainFromJson(const Json& j) {
  TrainConfig c;
  c.lr = j.at("lr").get<double>();
  c.epochs = j.at("epochs").get<int>();
  c.batch_size = j.at("batch_size").get<int>();
  c.lambda_cov = j.at("lambda_cov").get<double>();
  c.lambda_temp = j.at("lambda_temp").get<double>();
  c.kappa = j.at("kappa").get<double>();
  c.delta_q = j.at("delta_q").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.adam_beta1 = j.at("adam_beta1").get<double>();
  c.adam_beta2 = j.at("adam_beta2").get<double>();
  c.adam_eps = j.at("adam_eps").get<double>();
  return c;
}

Json SnapshotToJson(const TimestepSnapshot& s) {
  Json j;
  j["timestep"] = s.timestep;
  j["params"] = ParamsToJson(s.params);
  j["atc_clean"] = OptionalToJson(s.atc.prev_clean);
  j["atc_shift"] = OptionalToJson(s.atc.prev_shift);
  Json protos = Json::array();
  for (const auto& p : s.prototypes) protos.push_back(p.probs());
  j["prototypes"] = std::move(protos);
  return j;
}

TimestepSnapshot SnapshotFromJson(const Json& j) {
  TimestepSnapshot s;
  s.timestep = j.at("timestep").get<std::uint32_t>();
  s.params = ParamsFromJson(j.at("params"));
  s.atc.prev_clean = OptionalFromJson(j.at("atc_clean"));
  s.atc.prev_shift = OptionalFromJson(j.at("atc_shift"));
  for (const auto& p : j.at("prototypes")) {
    s.prototypes.push_back(SimplexVector::FromWeights(p.get<std::vector<double>>()));
  }
  return s;
}

}  // namespace

std::string StateToJson(const FitState& state) {
  Json j;
  j["format"] = kStateFormat;
  j["method"] = MethodName(state.method);
  j["initial"] = ParamsToJson(state.initial);
  j["visual"] = {{"gamma", state.visual.gamma}, {"temperature", state.visual.temperature}};
  j["train"] = TrainToJson(state.train);
  j["id_train_fraction"] = state.id_train_fraction;
  Json trials = Json::array();
  for (const auto& t : state.trials) {
    Json jt;
    jt["trial"] = t.trial;
    jt["seed"] = t.seed;
    if (t.threshold) {
      jt["threshold"] = {{"delta", t.threshold->delta()},
                         {"calibrated_at", t.threshold->calibrated_at()}};
    } else {
      jt["threshold"] = nullptr;
    }
    Json snaps = Json::array();
    for (const auto& s : t.snapshots) snaps.push_back(SnapshotToJson(s));
    jt["snapshots"] = std::move(snaps);
    trials.push_back(std::move(jt));
  }
  j["trials"] = std::move(trials);
  return j.dump(2) + "\n";
}

FitState StateFromJson(const std::string& text) {
  try {
    const Json j = Json::parse(text);
    if (j.at("format").get<std::string>() != kStateFormat) {
      throw Error(ErrorCode::kManifestMismatch, "unsupported state format");
    }
    FitState s;
    s.method = ParseMethod(j.at("method").get<std::string>());
    s.initial = ParamsFromJson(j.at("initial"));
    s.visual.gamma = j.at("visual").at("gamma").get<double>();
    s.visual.temperature = j.at("visual").at("temperature").get<double>();
    s.train = TrainFromJson(j.at("train"));
    s.id_train_fraction = j.at("id_train_fraction").get<double>();
    for (const auto& jt : j.at("trials")) {
      TrialState t;
      t.trial = jt.at("trial").get<std::uint32_t>();
      t.seed = jt.at("seed").get<std::uint64_t>();
      const auto& th = jt.at("threshold");
      if (!th.is_null()) {
        t.threshold = ThresholdState::Restore(th.at("delta").get<double>(),
                                              th.at("calibrated_at").get<std::uint32_t>());
      }
      for (const auto& js : jt.at("snapshots")) t.snapshots.push_back(SnapshotFromJson(js));
      s.trials.push_back(std::move(t));
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kManifestMismatch, std::string("malformed state file: ") + e.what());
  }
}

void SaveState(const std::filesystem::path& path, const FitState& state) {
  std::ofstream out(path, std::ios::binary);
  out << StateToJson(state);
  if (!out) throw Error(ErrorCode::kIOFailure, "cannot write " + path.string());
}

FitState LoadState(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIOFailure, "cannot read state file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return StateFromJson(buf.str());
}

}  // namespace driftood::cli
