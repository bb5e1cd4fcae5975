// Copyright 2026 The ctce Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ctce/checkpoint.hpp"
#include "ctce/dataset.hpp"
#include "ctce/itn.hpp"

namespace ctce {

enum class EvalMode { one_step, two_step };
enum class TrainTarget { entity, transcript };

struct TrainConfig {
  std::string train_path;
  std::string valid_path;
  std::string config_path;  // synth config next to the data
  std::string checkpoint_dir;
  std::string checkpoint_name = "model.ckpt";

  TrainTarget target = TrainTarget::entity;
  // Train on one entity type, or pool everything (the joint model).
  std::optional<EntityType> type_filter;

  int epochs = 30;
  int batch_size = 32;
  double lr = 1e-3;
  // Staged decay: full lr for the first half of the epochs, then these
  // multipliers for the next 30% and final 20%. Flattens the late-epoch
  // oscillation a fixed lr shows on this task.
  double lr_mid_scale = 0.3;
  double lr_late_scale = 0.1;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double clip_norm = 5.0;
  uint64_t seed = 1;

  int hidden = 64;
  int layers = 3;
  int kernel = 5;

  int threads = 0;  // 0 = hardware concurrency
};

struct EpochLog {
  int epoch = 0;
  double train_loss = 0.0;
  double valid_metric = 0.0;  // exact match (entity) or char accuracy (transcript)
  size_t skipped = 0;         // infeasible samples skipped this epoch
};

struct TrainResult {
  std::string checkpoint_path;
  std::string log_path;
  std::vector<EpochLog> log;
  double best_valid = -1.0;
  int best_epoch = -1;
};

/// Seeded, deterministic training: shuffled batches, mean CTC loss, Adam
/// with global-norm clipping, best-valid-checkpoint selection. Reruns with
/// the same config produce byte-identical checkpoints and logs.
TrainResult train(const TrainConfig& cfg);

/// Same encoder and data; CTC targets are the spoken transcript characters.
/// This is stage 1 of the 2-step cascade.
TrainResult train_transcription_model(TrainConfig cfg);

/// In-memory variant used by the sweep (no file loading).
TrainResult train_on(const Dataset& train_data, const Dataset& valid_data,
                     const SynthConfig& synth, const TrainConfig& cfg);

struct SampleRow {
  uint64_t id = 0;
  EntityType type = EntityType::last_name;
  std::string hyp;
  std::string ref;
  double confidence = 0.0;
  bool correct = false;
  bool parse_failure = false;
};

struct TypeMetrics {
  size_t count = 0;
  double exact_match_acc = 0.0;
  double word_acc = 0.0;
  double char_acc = 0.0;
  double parse_failure_rate = 0.0;
};

struct EvalReport {
  EvalMode mode = EvalMode::one_step;
  std::map<EntityType, TypeMetrics> per_type;
  TypeMetrics overall;
  std::vector<SampleRow> rows;
  /// two_step only: stage-1 transcript character accuracy (reference vs
  /// decoded spoken text); -1 when not applicable.
  double transcript_char_acc = -1.0;
};

struct EvalInputs {
  const EncoderModel* extractor = nullptr;    // one_step
  const EncoderModel* transcriber = nullptr;  // two_step stage 1
  const ItnRules* rules = nullptr;            // two_step stage 2; defaults() if null
  bool oracle_transcripts = false;            // two_step on reference transcripts
  int threads = 0;
};

/// Per-sample greedy decoding and scoring over a whole dataset. Total:
/// every sample yields exactly one row; malformed outputs are wrong, never
/// fatal. Deterministic for a fixed checkpoint and dataset.
EvalReport evaluate(const EvalInputs& inputs, const Dataset& data, const SynthConfig& synth,
                    EvalMode mode);

void write_eval_csv(const std::string& path, const EvalReport& report);
std::vector<SampleRow> load_eval_rows(const std::string& path);
std::string summary_text(const EvalReport& report);

struct CurvePoint {
  double threshold = 0.0;
  double rejection_rate = 0.0;
  double error_rate = 0.0;  // on accepted samples; 0 when none accepted
};

struct RejectionCurve {
  std::vector<CurvePoint> points;  // threshold ascending, -inf first in "all" mode
  std::optional<double> operating_point;  // caller-chosen; not set here
};

/// Error-versus-rejection sweep. Samples with confidence exactly equal to
/// the threshold are accepted. `thresholds == nullptr` means one point per
/// distinct confidence plus the -inf boundary. Throws DomainError on an
/// empty report.
RejectionCurve rejection_curve(const std::vector<SampleRow>& rows,
                               const std::vector<double>* thresholds);

void write_curve_csv(const std::string& path, const RejectionCurve& curve);

struct SweepRow {
  size_t train_size = 0;
  double exact_match_acc = 0.0;
  double word_acc = 0.0;
  double char_acc = 0.0;
  std::string checkpoint_path;
};

/// Trains one model per size on nested prefixes of the (seed-shuffled)
/// training corpus and scores each on the fixed test set.
std::vector<SweepRow> training_size_sweep(const TrainConfig& cfg,
                                          const std::vector<size_t>& sizes,
                                          const Dataset& test_data);

}  // namespace ctce
