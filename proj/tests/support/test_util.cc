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

#include "support/test_util.h"

#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>

#include <unistd.h>

namespace driftood::testing {
namespace {

std::atomic<int> g_dir_counter{0};

double Fused(const CrossModalScores& s, const FusionParams& p) {
  return s.s_id + p.beta() * s.s_vis - p.gamma_cap * s.s_cap_t - p.eta() * s.s_cap_v;
}

double MeanSoftAtc(const std::vector<double>& scores, double delta, double kappa) {
  double acc = 0.0;
  for (double s : scores) acc += 1.0 / (1.0 + std::exp(-(delta - s) / kappa));
  return acc / static_cast<double>(scores.size());
}

}  // namespace

ScopedTempDir::ScopedTempDir(const std::string& tag) {
  path_ = std::filesystem::temp_directory_path() /
          ("driftood_" + tag + "_" + std::to_string(::getpid()) + "_" +
           std::to_string(g_dir_counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

ScopedTempDir::~ScopedTempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::vector<double> RandomGaussian(Rng& rng, std::size_t d) {
  std::vector<double> v(d);
  for (double& x : v) x = rng.Normal();
  return v;
}

UnitVector RandomUnit(Rng& rng, std::size_t d) { return Normalize(RandomGaussian(rng, d)); }

SimplexVector RandomSimplex(Rng& rng, std::size_t k, double alpha) {
  std::vector<double> w(k);
  for (double& x : w) x = rng.Gamma(alpha);
  return SimplexVector::FromWeights(w);
}

TextBank RandomBank(Rng& rng, std::size_t k, std::size_t d) {
  std::vector<UnitVector> rows;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < k; ++i) {
    rows.push_back(RandomUnit(rng, d));
    names.push_back("c" + std::to_string(i));
  }
  return TextBank(std::move(rows), std::move(names));
}

TextBank BasisBank(std::size_t k, std::size_t d) {
  std::vector<UnitVector> rows;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<double> e(d, 0.0);
    e[i] = 1.0;
    rows.push_back(Normalize(e));
    names.push_back("c" + std::to_string(i));
  }
  return TextBank(std::move(rows), std::move(names));
}

GradientCase RandomGradientCase(Rng& rng, std::size_t batch_size, std::size_t k,
                                const TrainConfig& cfg, double margin) {
  for (;;) {
    GradientCase c;
    c.params.beta_raw = 2.0 * rng.Uniform01() - 1.0;
    c.params.eta_raw = 2.0 * rng.Uniform01() - 1.0;
    c.params.gamma_cap = 0.1;
    auto scores = [&] {
      CrossModalScores s;
      s.s_id = 2.0 * rng.Normal();
      s.s_vis = -rng.Uniform01();
      s.s_cap_t = 2.0 * rng.Uniform01() - 1.0;
      s.s_cap_v = -rng.Uniform01();
      return s;
    };
    std::vector<double> fc;
    std::vector<double> fs;
    bool ok = true;
    for (std::size_t i = 0; i < batch_size; ++i) {
      TrainingExample ex;
      ex.clean = scores();
      ex.shift = scores();
      ex.label = static_cast<int>(rng.UniformIndex(k));
      ex.logits_clean = RandomGaussian(rng, k);
      ex.logits_shift = RandomGaussian(rng, k);
      fc.push_back(Fused(ex.clean, c.params));
      fs.push_back(Fused(ex.shift, c.params));
      ok = ok && std::abs(fc.back() - fs.back()) >= margin;
      c.batch.push_back(std::move(ex));
    }
    // Place delta inside the score range so the ATC terms have slope.
    c.delta = fc[rng.UniformIndex(fc.size())];
    const double atc_c = MeanSoftAtc(fc, c.delta, cfg.kappa);
    const double atc_s = MeanSoftAtc(fs, c.delta, cfg.kappa);
    c.prev.prev_clean = rng.Uniform01();
    c.prev.prev_shift = rng.Uniform01();
    ok = ok && std::abs(atc_c - *c.prev.prev_clean) >= margin &&
         std::abs(atc_s - *c.prev.prev_shift) >= margin;
    if (ok) return c;
  }
}

std::string ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace driftood::testing
