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

#include "cli/commands.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "cli/state_io.h"
#include "driftood/error.h"
#include "driftood/metrics.h"
#include "driftood/pipeline.h"
#include "driftood/synth_bench.h"
#include "driftood/theory_checks.h"
#include "json.hpp"

namespace driftood::cli {
namespace {

namespace fs = std::filesystem;

constexpr std::uint32_t kEarlyTimestep = 2;
constexpr std::uint32_t kLateTimestep = 8;

CLI::Validator AtLeastOne() {
  return CLI::Validator(
      [](std::string& text) -> std::string {
        long long v = 0;
        try {
          std::size_t used = 0;
          v = std::stoll(text, &used);
          if (used != text.size()) return "'" + text + "' is not an integer";
        } catch (const std::exception&) {
          return "'" + text + "' is not an integer";
        }
        return v >= 1 ? "" : "must be at least 1, got " + text;
      },
      "INT>=1");
}

// Raised for bad flag combinations detected after parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MethodFlags {
  std::string method = "tqpm";
  double beta_raw = 1.0;
  double eta_raw = 0.5;
  double gamma_cap = 0.1;
  double gamma = 0.2;
  double temperature = 1.0;
  double id_train_fraction = 0.5;
  CLI::Option* gamma_cap_opt = nullptr;

  PipelineConfig ToPipeline(const TrainConfig& train, int threads) const {
    PipelineConfig cfg;
    cfg.method = ParseMethod(method);
    cfg.initial = DefaultFusionParams(cfg.method);
    cfg.initial.beta_raw = beta_raw;
    cfg.initial.eta_raw = eta_raw;
    // The baseline drops the caption-text term unless it is set explicitly.
    if (cfg.method == Method::kQuadruple || gamma_cap_opt->count() > 0) {
      cfg.initial.gamma_cap = gamma_cap;
    }
    cfg.visual.gamma = gamma;
    cfg.visual.temperature = temperature;
    cfg.train = train;
    cfg.id_train_fraction = id_train_fraction;
    cfg.threads = threads;
    return cfg;
  }
};

void AddBenchFlags(CLI::App* app, BenchConfig& b) {
  app->add_option("--classes", b.num_classes, "Number of ID classes K");
  app->add_option("--dim", b.dim, "Embedding dimension d");
  app->add_option("--timesteps", b.timesteps, "Number of timesteps")->check(AtLeastOne());
  app->add_option("--n-per-class", b.n_per_class_per_t, "ID records per class per timestep");
  app->add_option("--n-ood", b.n_ood_per_t, "OOD records per timestep");
  app->add_option("--drift-angle", b.drift_angle, "Class-mean rotation per timestep (radians)");
  app->add_option("--id-concentration", b.id_concentration,
                  "Inverse per-coordinate noise variance of ID images");
  app->add_option("--caption-noise", b.caption_noise, "Per-coordinate std of ID caption noise");
  app->add_option("--corrupt-sigma", b.corrupt_sigma,
                  "Per-coordinate std of the corrupted-view perturbation");
  app->add_option("--bench-seed", b.seed, "Generator seed");
  app->add_option("--patches", b.num_patches, "Patch embeddings per image (0 = global only)");
  app->add_option("--patch-noise", b.patch_noise, "Per-coordinate std of patch noise");
  app->add_option("--prompts-per-class", b.prompts_per_class, "Prompt embeddings per class");
  app->add_option("--prompt-noise", b.prompt_noise, "Per-coordinate std of prompt noise");
  app->add_option("--text-image-alignment", b.text_image_alignment,
                  "Cosine between a class text direction and its image mean");
  app->add_option("--ood-concepts", b.ood_concepts, "Number of OOD concepts");
  app->add_option("--ood-visual-overlap", b.ood_visual_overlap,
                  "Cosine between an OOD image center and its anchor class mean");
  app->add_option("--ood-caption-alignment", b.ood_caption_alignment,
                  "Cosine between an OOD caption center and its anchor class text");
  app->add_option("--ood-caption-noise", b.ood_caption_noise,
                  "Per-coordinate std of OOD caption noise");
}

void AddTrainFlags(CLI::App* app, TrainConfig& t) {
  app->add_option("--lr", t.lr, "Adam learning rate");
  app->add_option("--epochs", t.epochs, "Epochs per timestep");
  app->add_option("--batch-size", t.batch_size, "Mini-batch size");
  app->add_option("--lambda-cov", t.lambda_cov, "Weight of the covariate-consistency loss");
  app->add_option("--lambda-temp", t.lambda_temp, "Weight of the temporal-consistency loss");
  app->add_option("--kappa", t.kappa, "Soft-ATC sigmoid temperature");
  app->add_option("--delta-q", t.delta_q, "Threshold quantile of t=0 ID scores");
  app->add_option("--seed", t.seed, "Training seed (trial i uses seed + i)");
  app->add_option("--adam-beta1", t.adam_beta1, "Adam first-moment decay");
  app->add_option("--adam-beta2", t.adam_beta2, "Adam second-moment decay");
  app->add_option("--adam-eps", t.adam_eps, "Adam epsilon");
}

void AddMethodFlags(CLI::App* app, MethodFlags& m) {
  app->add_option("--method", m.method, "Scoring method")
      ->check(CLI::IsMember({"tqpm", "dpm"}));
  app->add_option("--beta-raw", m.beta_raw, "Initial raw visual weight (beta = softplus)");
  app->add_option("--eta-raw", m.eta_raw, "Initial raw caption-visual weight (eta = softplus)");
  m.gamma_cap_opt = app->add_option("--gamma-cap", m.gamma_cap,
                                    "Caption-text weight (dpm uses 0 unless set)");
  app->add_option("--gamma", m.gamma, "Spatial attention weight in the ID logits");
  app->add_option("--temperature", m.temperature, "Softmax temperature");
  app->add_option("--id-train-fraction", m.id_train_fraction,
                  "Fraction of each class's ID records per timestep used for training");
}

std::ofstream OpenOut(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIOFailure, "cannot write " + path.string());
  return out;
}

void EnsureDir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIOFailure, "cannot create " + dir.string());
}

std::string Fixed(double v, int digits = 4) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

void WriteTrialRows(std::ostream& out, const std::vector<std::vector<EvalResult>>& trials,
                    const std::string& method, const std::string& ood_set) {
  for (std::size_t i = 0; i < trials.size(); ++i) {
    for (const auto& r : trials[i]) {
      out << i << ",";
      WriteEvalCsvRow(out, r, method, ood_set);
    }
  }
}

// Rows for the early and late timesteps when present.
void WriteSummaryRows(std::ostream& out, const std::vector<EvalResult>& mean,
                      const std::string& method, const std::string& ood_set) {
  for (const auto& r : mean) {
    const char* split = r.timestep == kEarlyTimestep  ? "early"
                        : r.timestep == kLateTimestep ? "late"
                                                      : nullptr;
    if (split == nullptr) continue;
    out << split << ",";
    WriteEvalCsvRow(out, r, method, ood_set);
  }
}

void PrintTable(std::ostream& out, const std::vector<EvalResult>& mean, const std::string& method) {
  out << "method  timestep  fpr95   auroc   acc_clean  acc_shift\n";
  for (const auto& r : mean) {
    const char* tag = r.timestep == kEarlyTimestep  ? "  (early)"
                      : r.timestep == kLateTimestep ? "  (late)"
                                                    : "";
    out << method << (method.size() < 6 ? std::string(6 - method.size(), ' ') : "") << "  "
        << r.timestep << "         " << Fixed(r.fpr95) << "  " << Fixed(r.auroc) << "  "
        << Fixed(r.acc_clean) << "     " << Fixed(r.acc_shift) << tag << "\n";
  }
}

// Writes eval.csv (trial means), eval_trials.csv and eval_summary.csv.
void WriteEvalOutputs(const fs::path& dir, const std::string& stem,
                      const std::vector<std::pair<std::string, std::vector<std::vector<EvalResult>>>>&
                          arms,
                      const std::string& ood_set, std::ostream& console) {
  EnsureDir(dir);
  auto mean_out = OpenOut(dir / (stem + ".csv"));
  auto trial_out = OpenOut(dir / (stem + "_trials.csv"));
  auto summary_out = OpenOut(dir / (stem + "_summary.csv"));
  WriteEvalCsvHeader(mean_out);
  trial_out << "trial,";
  WriteEvalCsvHeader(trial_out);
  summary_out << "split,";
  WriteEvalCsvHeader(summary_out);
  for (const auto& [method, trials] : arms) {
    const auto mean = MeanOverTrials(trials);
    for (const auto& r : mean) WriteEvalCsvRow(mean_out, r, method, ood_set);
    WriteTrialRows(trial_out, trials, method, ood_set);
    WriteSummaryRows(summary_out, mean, method, ood_set);
    PrintTable(console, mean, method);
  }
}

std::vector<EvalResult> KeepTimestep(std::vector<EvalResult> rows,
                                     const std::optional<std::uint32_t>& t) {
  if (!t) return rows;
  std::vector<EvalResult> out;
  for (const auto& r : rows) {
    if (r.timestep == *t) out.push_back(r);
  }
  if (out.empty()) {
    throw UsageError("dataset has no timestep " + std::to_string(*t));
  }
  return out;
}

// ---- gen ------------------------------------------------------------------

struct GenArgs {
  BenchConfig bench;
  std::string out_dir;
};

int CmdGen(const GenArgs& a, std::ostream& out) {
  const auto m = GenerateToDisk(a.bench, a.out_dir);
  out << "wrote " << m.TotalRecords() << " records to " << a.out_dir << "\n"
      << "  format " << m.format_version << ", K=" << m.num_classes << ", d=" << m.d
      << ", patches=" << m.num_patches << ", timesteps=" << m.timesteps << "\n"
      << "  per timestep: " << m.counts.front().n_id << " ID, " << m.counts.front().n_ood
      << " OOD\n";
  return kExitOk;
}

// ---- fit ------------------------------------------------------------------

struct FitArgs {
  std::string dataset;
  std::string out_dir;
  int trials = 3;
  int threads = 1;
  MethodFlags method;
  TrainConfig train;
};

int CmdFit(const FitArgs& a, std::ostream& out) {
  EnsureDir(a.out_dir);
  FitState state;
  const PipelineConfig base = a.method.ToPipeline(a.train, a.threads);
  state.method = base.method;
  state.initial = base.initial;
  state.visual = base.visual;
  state.train = base.train;
  state.id_train_fraction = base.id_train_fraction;

  auto log = OpenOut(fs::path(a.out_dir) / "train_log.jsonl");
  for (int i = 0; i < a.trials; ++i) {
    PipelineConfig cfg = base;
    cfg.train.seed = base.train.seed + static_cast<std::uint64_t>(i);
    cfg.evaluate = false;
    auto run = RunPipeline(a.dataset, cfg);
    for (const auto& e : run.log) {
      nlohmann::ordered_json j;
      j["trial"] = i;
      j["timestep"] = e.timestep;
      j["epoch"] = e.epoch;
      j["l_id"] = e.loss.l_id;
      j["l_cov"] = e.loss.l_cov;
      j["l_temp"] = e.loss.l_temp;
      j["l_total"] = e.loss.l_total;
      j["beta"] = e.beta;
      j["eta"] = e.eta;
      j["atc_clean"] = e.atc_clean;
      j["atc_shift"] = e.atc_shift;
      log << j.dump() << "\n";
    }
    const auto& last = run.snapshots.back().params;
    out << "trial " << i << ": delta=" << Fixed(run.threshold->delta(), 6)
        << " beta=" << Fixed(last.beta(), 6) << " eta=" << Fixed(last.eta(), 6) << "\n";
    state.trials.push_back({static_cast<std::uint32_t>(i), cfg.train.seed, run.threshold,
                            std::move(run.snapshots)});
  }
  SaveState(fs::path(a.out_dir) / "state.json", state);
  out << "state written to " << (fs::path(a.out_dir) / "state.json").string() << "\n";
  return kExitOk;
}

// ---- eval -----------------------------------------------------------------

struct EvalArgs {
  std::string dataset;
  std::string state_path;
  std::string out_dir;
  std::string ood_set = "synthetic";
  bool zero_shot = false;
  std::optional<std::uint32_t> timestep;
  std::optional<int> trials;
  int threads = 1;
  MethodFlags method;
};

int CmdEval(const EvalArgs& a, std::ostream& out) {
  std::vector<std::vector<EvalResult>> trials;
  std::string method_name;
  if (a.zero_shot) {
    PipelineConfig cfg = a.method.ToPipeline(TrainConfig{}, a.threads);
    cfg.train_fusion = false;
    method_name = MethodName(cfg.method);
    // Zero-shot evaluation has no seed dependence; one run stands for all trials.
    trials.push_back(RunPipeline(a.dataset, cfg).eval);
  } else {
    if (a.state_path.empty() || !fs::exists(a.state_path)) {
      const std::string which =
          a.state_path.empty() ? "no --state given" : "state file '" + a.state_path + "' not found";
      throw UsageError(which + "; run `driftood fit --dataset " + a.dataset +
                       " --out-dir <dir>` first and pass --state <dir>/state.json, "
                       "or use --zero-shot");
    }
    const FitState state = LoadState(a.state_path);
    const int n = a.trials.value_or(static_cast<int>(state.trials.size()));
    if (n < 1 || n > static_cast<int>(state.trials.size())) {
      throw UsageError("--trials must lie in [1, " + std::to_string(state.trials.size()) +
                       "] for this state file");
    }
    PipelineConfig cfg;
    cfg.method = state.method;
    cfg.initial = state.initial;
    cfg.visual = state.visual;
    cfg.train = state.train;
    cfg.id_train_fraction = state.id_train_fraction;
    cfg.threads = a.threads;
    method_name = MethodName(state.method);
    for (int i = 0; i < n; ++i) {
      trials.push_back(EvaluateSnapshots(a.dataset, cfg, state.trials[i].snapshots));
    }
  }
  for (auto& t : trials) t = KeepTimestep(std::move(t), a.timestep);
  WriteEvalOutputs(a.out_dir, "eval", {{method_name, trials}}, a.ood_set, out);
  return kExitOk;
}

// ---- sweep ----------------------------------------------------------------

enum class SweepParam { kBeta, kEta, kGammaCap };

SweepParam ParseSweepParam(const std::string& name) {
  if (name == "beta") return SweepParam::kBeta;
  if (name == "eta") return SweepParam::kEta;
  if (name == "gamma_cap") return SweepParam::kGammaCap;
  throw Error(ErrorCode::kUnknownParam,
              "unknown sweep parameter '" + name + "' (expected beta, eta or gamma_cap)");
}

struct SweepArgs {
  std::string dataset;
  std::string out_dir;
  std::string param;
  std::vector<double> values;
  int trials = 3;
  int threads = 1;
  MethodFlags method;
  TrainConfig train;
};

int CmdSweep(const SweepArgs& a, std::ostream& out) {
  const SweepParam param = ParseSweepParam(a.param);
  if (a.values.empty()) throw UsageError("--values needs at least one value");
  EnsureDir(a.out_dir);
  auto summary = OpenOut(fs::path(a.out_dir) / "sweep.csv");
  auto detail = OpenOut(fs::path(a.out_dir) / "sweep_timesteps.csv");
  summary << "param,value,auroc,fpr95\n";
  detail << "param,value,timestep,auroc,fpr95\n";
  out << "param      value     auroc   fpr95\n";
  for (double v : a.values) {
    PipelineConfig cfg = a.method.ToPipeline(a.train, a.threads);
    switch (param) {
      case SweepParam::kBeta:
        cfg.initial.beta_override = v;
        break;
      case SweepParam::kEta:
        cfg.initial.eta_override = v;
        break;
      case SweepParam::kGammaCap:
        cfg.initial.gamma_cap = v;
        break;
    }
    std::vector<std::vector<EvalResult>> trials;
    for (int i = 0; i < a.trials; ++i) {
      PipelineConfig c = cfg;
      c.train.seed = cfg.train.seed + static_cast<std::uint64_t>(i);
      trials.push_back(RunPipeline(a.dataset, c).eval);
    }
    const auto mean = MeanOverTrials(trials);
    double auroc = 0.0;
    double fpr = 0.0;
    for (const auto& r : mean) {
      auroc += r.auroc;
      fpr += r.fpr95;
      detail << a.param << "," << Fixed(v, 6) << "," << r.timestep << "," << Fixed(r.auroc, 6)
             << "," << Fixed(r.fpr95, 6) << "\n";
    }
    auroc /= static_cast<double>(mean.size());
    fpr /= static_cast<double>(mean.size());
    summary << a.param << "," << Fixed(v, 6) << "," << Fixed(auroc, 6) << "," << Fixed(fpr, 6)
            << "\n";
    out << a.param << std::string(11 - std::min<std::size_t>(a.param.size(), 10), ' ')
        << Fixed(v) << "    " << Fixed(auroc) << "  " << Fixed(fpr) << "\n";
  }
  return kExitOk;
}

// ---- theory-check ----------------------------------------------------------

struct TheoryArgs {
  std::uint64_t trials = 100000;
  int grid = 1000;
  std::uint64_t seed = 1556;
  int threads = 1;
  bool inject_violation = false;
  std::string out_csv;
};

void Merge(CheckReport& into, const CheckReport& r) {
  if (into.trials == 0) {
    into = r;
    return;
  }
  into.trials += r.trials;
  if (into.violations == 0 && r.violations > 0) into.offending_input = r.offending_input;
  into.violations += r.violations;
  into.max_violation = std::max(into.max_violation, r.max_violation);
}

int CmdTheory(const TheoryArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<CheckReport> reports(4);
  for (int k : {2, 10, 100}) Merge(reports[0], CheckEntropyConfidence(k, a.grid));
  for (int k : {2, 5, 10}) Merge(reports[1], CheckPinskerUniform(a.trials, k, a.seed, a.threads));
  for (int k : {2, 5, 10}) Merge(reports[2], CheckKlTvChi2(a.trials, k, a.seed, a.threads));
  const auto deltas = DefaultFisherDeltas();
  for (double theta : {0.2, 0.5, 0.8}) {
    Merge(reports[3], CheckChi2FisherExpansion(deltas, theta));
  }
  if (a.inject_violation) {
    // Debug path: a pair whose left side is deliberately inflated.
    const auto f = SimplexVector::FromWeights(std::vector<double>{0.9, 0.1});
    const auto sides = PinskerUniformSides(f);
    const double gap = (sides.lhs + 1.0) - sides.rhs;
    auto& r = reports[1];
    ++r.trials;
    ++r.violations;
    r.max_violation = std::max(r.max_violation, gap);
    r.offending_input = "injected F=[0.9,0.1] with TV + 1";
  }

  std::ofstream csv;
  if (!a.out_csv.empty()) {
    csv = OpenOut(a.out_csv);
    csv << "check_name,trials,violations,max_violation,tolerance\n";
  }
  out << "check                   trials    violations  max_violation  tolerance\n";
  bool ok = true;
  for (const auto& r : reports) {
    char line[160];
    std::snprintf(line, sizeof(line), "%-22s  %-8llu  %-10llu  %-13.3e  %.0e\n",
                  r.check_name.c_str(), static_cast<unsigned long long>(r.trials),
                  static_cast<unsigned long long>(r.violations), r.max_violation, r.tolerance);
    out << line;
    if (csv.is_open()) {
      csv << r.check_name << "," << r.trials << "," << r.violations << ","
          << nlohmann::json(r.max_violation).dump() << "," << nlohmann::json(r.tolerance).dump()
          << "\n";
    }
    if (!r.ok()) {
      ok = false;
      err << "violation in " << r.check_name << ": " << r.offending_input << "\n";
    }
  }
  return ok ? kExitOk : kExitFailure;
}

// ---- compare --------------------------------------------------------------

struct CompareArgs {
  BenchConfig bench;
  TrainConfig train;
  std::string out_dir;
  int trials = 3;
  int threads = 1;
};

int CmdCompare(const CompareArgs& a, std::ostream& out) {
  EnsureDir(a.out_dir);
  const auto c = RunComparison(a.bench, a.train, a.trials, fs::path(a.out_dir) / "data", a.threads);
  WriteEvalOutputs(a.out_dir, "compare",
                   {{MethodName(Method::kQuadruple), c.tqpm_trials},
                    {MethodName(Method::kDualPattern), c.dpm_trials}},
                   "synthetic", out);
  return kExitOk;
}

bool IsUsageCode(ErrorCode code) {
  return code == ErrorCode::kInvalidConfig || code == ErrorCode::kUnknownParam;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Temporal OOD detection with cross-modal fusion scores", "driftood"};
  app.option_defaults()->always_capture_default();
  app.set_config("--config", "", "Read flags from a TOML/INI file (flags on the command line win)");
  app.require_subcommand(1);
  app.fallthrough();
  app.allow_config_extras(CLI::config_extras_mode::error);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic drifting dataset (TQE1)");
  gen_cmd->add_option("--out", gen.out_dir, "Output dataset directory")->required();
  AddBenchFlags(gen_cmd, gen.bench);

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Train fusion weights across timesteps");
  fit_cmd->add_option("--dataset", fit.dataset, "TQE1 dataset directory")->required();
  fit_cmd->add_option("--out-dir", fit.out_dir, "Directory for state.json and train_log.jsonl")
      ->required();
  fit_cmd->add_option("--trials", fit.trials, "Independent trials (seed offset by trial)")
      ->check(AtLeastOne());
  fit_cmd->add_option("--threads", fit.threads, "Worker threads")->check(AtLeastOne());
  AddMethodFlags(fit_cmd, fit.method);
  AddTrainFlags(fit_cmd, fit.train);

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a fitted state per timestep");
  eval_cmd->add_option("--dataset", ev.dataset, "TQE1 dataset directory")->required();
  eval_cmd->add_option("--state", ev.state_path, "State file written by `fit`");
  eval_cmd->add_option("--out-dir", ev.out_dir, "Directory for eval CSV files")->required();
  eval_cmd->add_option("--ood-set", ev.ood_set, "Label for the ood_set CSV column");
  eval_cmd->add_flag("--zero-shot", ev.zero_shot, "Evaluate with initial parameters, no state");
  eval_cmd->add_option("--timestep", ev.timestep, "Report only this timestep");
  eval_cmd->add_option("--trials", ev.trials, "Use the first N trials of the state (default all)");
  eval_cmd->add_option("--threads", ev.threads, "Worker threads")->check(AtLeastOne());
  AddMethodFlags(eval_cmd, ev.method);

  SweepArgs sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "AUROC as one fusion weight is pinned");
  sweep_cmd->add_option("--dataset", sw.dataset, "TQE1 dataset directory")->required();
  sweep_cmd->add_option("--out-dir", sw.out_dir, "Directory for sweep CSV files")->required();
  sweep_cmd->add_option("--param", sw.param, "beta, eta or gamma_cap")->required();
  sweep_cmd->add_option("--values", sw.values, "Values of the effective parameter")
      ->required()
      ->expected(0, CLI::detail::expected_max_vector_size);
  sweep_cmd->add_option("--trials", sw.trials, "Independent trials")->check(AtLeastOne());
  sweep_cmd->add_option("--threads", sw.threads, "Worker threads")->check(AtLeastOne());
  AddMethodFlags(sweep_cmd, sw.method);
  AddTrainFlags(sweep_cmd, sw.train);

  TheoryArgs th;
  auto* theory_cmd = app.add_subcommand("theory-check", "Numerical checks of the divergence bounds");
  theory_cmd->add_option("--trials", th.trials, "Monte-Carlo trials per K")
      ->check(AtLeastOne());
  theory_cmd->add_option("--grid", th.grid, "Grid points for the entropy scan");
  theory_cmd->add_option("--seed", th.seed, "Sampling seed");
  theory_cmd->add_option("--threads", th.threads, "Worker threads")->check(AtLeastOne());
  theory_cmd->add_option("--out", th.out_csv, "Optional CSV report path");
  theory_cmd->add_flag("--inject-violation", th.inject_violation,
                       "Debug: add a violating pair to exercise the failure path");

  CompareArgs cmp;
  auto* compare_cmd = app.add_subcommand("compare", "Generate and run tqpm vs dpm over trials");
  compare_cmd->add_option("--out-dir", cmp.out_dir, "Output directory")->required();
  compare_cmd->add_option("--trials", cmp.trials, "Independent trials")->check(AtLeastOne());
  compare_cmd->add_option("--threads", cmp.threads, "Worker threads")->check(AtLeastOne());
  AddBenchFlags(compare_cmd, cmp.bench);
  AddTrainFlags(compare_cmd, cmp.train);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen_cmd) return CmdGen(gen, out);
    if (*fit_cmd) return CmdFit(fit, out);
    if (*eval_cmd) return CmdEval(ev, out);
    if (*sweep_cmd) return CmdSweep(sw, out);
    if (*theory_cmd) return CmdTheory(th, out, err);
    if (*compare_cmd) return CmdCompare(cmp, out);
  } catch (const UsageError& e) {
    err << "driftood: usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "driftood: " << (IsUsageCode(e.code()) ? "usage error: " : "error: ") << e.what()
        << "\n";
    return IsUsageCode(e.code()) ? kExitUsage : kExitFailure;
  } catch (const std::exception& e) {
    err << "driftood: error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace driftood::cli
