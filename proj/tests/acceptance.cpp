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

// End-to-end acceptance suite. Runs nine numbered checks and prints one
// PASS/FAIL line each; exit status is the number of failures. The learning
// checks train real models and take tens of minutes on two cores.
//
//   acceptance [--criteria 1,2,...] [--work-dir DIR] [--threads N]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ctce/checkpoint.hpp"
#include "ctce/ctc.hpp"
#include "ctce/dataset.hpp"
#include "ctce/encoder.hpp"
#include "ctce/errors.hpp"
#include "ctce/numeric.hpp"
#include "ctce/pipeline.hpp"
#include "ctce/rng.hpp"
#include "ctce/synth.hpp"

namespace fs = std::filesystem;
using namespace ctce;
using Clock = std::chrono::steady_clock;

namespace {

struct Context {
  fs::path work;
  int threads = 0;
  // Artifacts shared between checks (5 feeds 7).
  std::string email_model_path;
  std::string email_corpus_dir;
  SynthConfig email_cfg;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

PosteriorGrid grid_from_logits(const Matrix& logits) {
  PosteriorGrid grid(logits.rows, logits.cols);
  for (size_t t = 0; t < logits.rows; ++t) {
    softmax_row(logits.row(t), grid.row(t), logits.cols);
  }
  return grid;
}

PosteriorGrid random_grid(SplitMix64& rng, size_t T, size_t cols) {
  Matrix logits(T, cols);
  for (double& v : logits.data) v = rng.uniform(-3.0, 3.0);
  return grid_from_logits(logits);
}

TokenSequence random_feasible_target(SplitMix64& rng, size_t T, size_t n_labels) {
  for (;;) {
    const size_t len = rng.below(T + 1);
    TokenSequence target(len);
    for (Label& l : target) l = static_cast<Label>(rng.below(n_labels));
    if (ctc_min_frames(target) <= T) return target;
  }
}

// ---- criterion 1: forward-backward vs enumeration --------------------

bool criterion_1(Context&, std::string& detail) {
  const auto start = Clock::now();
  SplitMix64 rng(0xC1);
  double worst = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    const size_t T = 1 + rng.below(8);
    const size_t n_labels = 1 + rng.below(3);
    const PosteriorGrid grid = random_grid(rng, T, n_labels + 1);
    const TokenSequence target = random_feasible_target(rng, T, n_labels);
    const double dp = ctc_loss(grid, target).log_prob;
    const double oracle = brute_force_target_log_prob(grid, target);
    worst = std::max(worst, std::abs(dp - oracle));
  }
  const double secs = seconds_since(start);
  char buf[160];
  std::snprintf(buf, sizeof(buf), "max |dp - enumeration| = %.3e over 200 instances (%.1f s)",
                worst, secs);
  detail = buf;
  return worst <= 1e-9 && secs <= 60.0;
}

// ---- criterion 2: total probability over collapsed outputs -----------

bool criterion_2(Context&, std::string& detail) {
  const auto start = Clock::now();
  SplitMix64 rng(0xC2);
  double worst = 0.0;
  for (int rep = 0; rep < 40; ++rep) {
    const size_t T = 1 + rng.below(5);
    const size_t n_labels = 1 + rng.below(3);
    const PosteriorGrid grid = random_grid(rng, T, n_labels + 1);
    double total = 0.0;
    for (const auto& [target, prob] : enumerate_collapsed_outputs(grid)) total += prob;
    worst = std::max(worst, std::abs(total - 1.0));
  }
  const double secs = seconds_since(start);
  char buf[160];
  std::snprintf(buf, sizeof(buf), "max |sum p - 1| = %.3e over 40 grids (%.1f s)", worst, secs);
  detail = buf;
  return worst <= 1e-9 && secs <= 30.0;
}

// ---- criterion 3: analytic gradient vs finite differences ------------

// Relu gate pattern of a forward pass; central differences are only a
// valid derivative estimate when no gate flips inside [theta-h, theta+h].
uint64_t relu_gate_signature(const ForwardTrace& trace) {
  uint64_t h = 0xCBF29CE484222325ULL;
  for (size_t l = 1; l < trace.padded_acts.size(); ++l) {
    for (double a : trace.padded_acts[l].data) {
      h ^= a > 0.0 ? 0x9Eu : 0x3Bu;
      h *= 0x100000001B3ULL;
    }
  }
  return h;
}

bool criterion_3(Context& ctx, std::string& detail) {
  const auto start = Clock::now();
  EncoderConfig enc;
  enc.input_dim = 6;
  enc.hidden = 8;
  enc.layers = 3;
  enc.kernel = 5;
  enc.outputs = 6;  // |L| = 5 plus blank
  double worst = 0.0;
  size_t probes = 0, skipped_kinks = 0;
  SplitMix64 rng(0xC3);
  for (int instance = 0; instance < 20; ++instance) {
    EncoderModel model = EncoderModel::init(enc, 9000 + instance);
    const size_t T = 6 + rng.below(7);  // up to 12 frames
    FeatureSequence x(T, 6);
    for (double& v : x.data) v = rng.normal();
    TokenSequence target = random_feasible_target(rng, T / 2, 5);
    if (target.empty()) target.push_back(static_cast<Label>(rng.below(5)));

    ForwardTrace trace;
    model.forward(x, trace);
    const CtcLossResult res = ctc_loss(trace.posteriors, target);
    std::vector<double> grad(model.params.size(), 0.0);
    model.backward_from_logits(trace, res.logit_grad, grad);

    int done = 0;
    while (done < 11) {
      const size_t i = rng.below(model.params.size());
      const double h = 1e-4;
      EncoderModel plus = model, minus = model;
      plus.params[i] += h;
      minus.params[i] -= h;
      ForwardTrace tp, tm;
      const double fp = ctc_loss(plus.forward(x, tp), target).loss;
      const double fm = ctc_loss(minus.forward(x, tm), target).loss;
      if (relu_gate_signature(tp) != relu_gate_signature(tm)) {
        // The loss is non-smooth inside the step; the fd quotient is not a
        // derivative there. Probe a different parameter instead.
        ++skipped_kinks;
        if (skipped_kinks > 200) break;
        continue;
      }
      const double fd = (fp - fm) / (2 * h);
      const double rel =
          std::abs(fd - grad[i]) / std::max({std::abs(fd), std::abs(grad[i]), 1e-8});
      worst = std::max(worst, rel);
      ++probes;
      ++done;
    }
  }
  const double secs = seconds_since(start);
  char buf[240];
  std::snprintf(buf, sizeof(buf),
                "max relative error = %.3e over %zu parameters, 20 instances (%zu kink "
                "probes resampled) (%.1f s)",
                worst, probes, skipped_kinks, secs);
  detail = buf;
  (void)ctx;
  return worst <= 1e-4 && probes >= 200 && secs <= 300.0;
}

// ---- criterion 4: round-trip identities -------------------------------

bool criterion_4(Context&, std::string& detail) {
  const Vocabulary& vocab = Vocabulary::standard();
  SplitMix64 rng(0xC4);
  const std::string letters = "abcdefghijklmnopqrstuvwxyz";
  auto word = [&](size_t max_len) {
    std::string s;
    const size_t len = 1 + rng.below(max_len);
    for (size_t i = 0; i < len; ++i) s += letters[rng.below(letters.size())];
    return s;
  };
  auto random_record = [&]() {
    EntityRecord r;
    switch (rng.below(5)) {
      case 0:
        r.type = EntityType::first_name;
        r.value = word(10);
        break;
      case 1:
        r.type = EntityType::last_name;
        r.value = word(10) + (rng.bernoulli(0.2) ? "'" + word(4) : "");
        break;
      case 2:
        r.type = EntityType::full_name;
        r.first = word(8);
        r.last = word(8) + (rng.bernoulli(0.3) ? " " + word(6) : "");
        break;
      case 3:
        r.type = EntityType::street_address;
        r.street = std::to_string(1 + rng.below(9999)) + " " + word(8) + " st.";
        if (rng.bernoulli(0.4)) r.apartment = "apt " + std::to_string(1 + rng.below(999));
        break;
      default:
        r.type = EntityType::email;
        r.value = word(8) + std::to_string(rng.below(100)) + "@" + word(6) + ".com";
        break;
    }
    return r;
  };

  size_t vocab_fail = 0, entity_fail = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    const EntityRecord r = random_record();
    const std::string tagged = render_entities({r});
    const TokenSequence tokens = vocab.encode_tagged(tagged);
    if (vocab.decode_tokens(tokens) != tagged ||
        vocab.encode_tagged(vocab.decode_tokens(tokens)) != tokens) {
      ++vocab_fail;
    }
    const ParseResult back = parse_entities(vocab, tokens);
    if (back.parse_failure || back.records.size() != 1 || !(back.records[0] == r)) {
      ++entity_fail;
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "vocab failures = %zu/1000, render/parse failures = %zu/1000", vocab_fail,
                entity_fail);
  detail = buf;
  return vocab_fail == 0 && entity_fail == 0;
}

// ---- criterion 5: desk-scale learning ---------------------------------

struct LearnedType {
  double exact = 0.0;
  double train_seconds = 0.0;
  std::string model_path;
  std::string corpus_dir;
};

LearnedType train_and_eval_type(Context& ctx, EntityType type, size_t n_train, int epochs) {
  const std::string name = entity_type_name(type);
  const fs::path dir = ctx.work / ("c5_" + name);
  SynthConfig cfg = SynthConfig::defaults();
  CorpusSpec spec;
  spec.types = {type};
  spec.n_train = n_train;
  spec.n_test = 500;
  const CorpusPaths paths = build_corpus(cfg, spec, dir.string());

  TrainConfig tc;
  tc.train_path = paths.train;
  tc.valid_path = paths.valid;
  tc.config_path = paths.config;
  tc.checkpoint_dir = (dir / "run").string();
  tc.type_filter = type;
  tc.epochs = epochs;
  tc.seed = 1;
  tc.threads = ctx.threads;

  const auto start = Clock::now();
  const TrainResult tr = train(tc);
  LearnedType out;
  out.train_seconds = seconds_since(start);
  out.model_path = tr.checkpoint_path;
  out.corpus_dir = dir.string();

  const Checkpoint ckpt = load_checkpoint(tr.checkpoint_path);
  const LoadedCorpus test = load_corpus(paths.test, paths.config);
  EvalInputs inputs;
  inputs.extractor = &ckpt.model;
  inputs.threads = ctx.threads;
  const EvalReport report = evaluate(inputs, test.data, test.cfg, EvalMode::one_step);
  out.exact = report.overall.exact_match_acc;
  return out;
}

bool criterion_5(Context& ctx, std::string& detail) {
  const LearnedType last = train_and_eval_type(ctx, EntityType::last_name, 5000, 45);
  const LearnedType email = train_and_eval_type(ctx, EntityType::email, 5000, 45);
  ctx.email_model_path = email.model_path;
  ctx.email_corpus_dir = email.corpus_dir;
  ctx.email_cfg = SynthConfig::defaults();
  char buf[240];
  std::snprintf(buf, sizeof(buf),
                "last_name exact = %.4f (>= 0.90, %.0f s), email exact = %.4f (>= 0.80, %.0f s)",
                last.exact, last.train_seconds, email.exact, email.train_seconds);
  detail = buf;
  return last.exact >= 0.90 && email.exact >= 0.80 && last.train_seconds <= 900.0 &&
         email.train_seconds <= 900.0;
}

// ---- criterion 6: 1-step beats the cascade under noisy transcription --

// Noise pinned so that stage-1 transcription lands in the required
// character-accuracy window on the pooled test set.
constexpr double kDirectionalNoiseSigma = 0.75;

bool criterion_6(Context& ctx, std::string& detail) {
  const fs::path dir = ctx.work / "c6_directional";
  SynthConfig cfg = SynthConfig::defaults();
  cfg.seed = 20260606;
  cfg.noise_sigma = kDirectionalNoiseSigma;
  CorpusSpec spec;
  spec.n_train = 2000;
  spec.n_test = 300;
  const CorpusPaths paths = build_corpus(cfg, spec, dir.string());

  TrainConfig base;
  base.train_path = paths.train;
  base.valid_path = paths.valid;
  base.config_path = paths.config;
  base.epochs = 18;
  base.seed = 1;
  base.threads = ctx.threads;

  TrainConfig one_step_cfg = base;
  one_step_cfg.checkpoint_dir = (dir / "one_step").string();
  const TrainResult one_step_tr = train(one_step_cfg);

  TrainConfig stage1_cfg = base;
  stage1_cfg.checkpoint_dir = (dir / "stage1").string();
  const TrainResult stage1_tr = train_transcription_model(stage1_cfg);

  const Checkpoint one_ckpt = load_checkpoint(one_step_tr.checkpoint_path);
  const Checkpoint s1_ckpt = load_checkpoint(stage1_tr.checkpoint_path);
  const LoadedCorpus test = load_corpus(paths.test, paths.config);

  EvalInputs one_inputs;
  one_inputs.extractor = &one_ckpt.model;
  one_inputs.threads = ctx.threads;
  const EvalReport one_step = evaluate(one_inputs, test.data, test.cfg, EvalMode::one_step);

  EvalInputs two_inputs;
  two_inputs.transcriber = &s1_ckpt.model;
  two_inputs.threads = ctx.threads;
  const EvalReport two_step = evaluate(two_inputs, test.data, test.cfg, EvalMode::two_step);

  EvalInputs oracle_inputs;
  oracle_inputs.oracle_transcripts = true;
  oracle_inputs.threads = ctx.threads;
  const EvalReport oracle = evaluate(oracle_inputs, test.data, test.cfg, EvalMode::two_step);

  const double s1_char = two_step.transcript_char_acc;
  bool gate_ok = s1_char >= 0.90 && s1_char <= 0.97;
  bool direction_ok = true;
  std::string per_type;
  for (EntityType type : kAllEntityTypes) {
    const double one = one_step.per_type.at(type).exact_match_acc;
    const double two = two_step.per_type.at(type).exact_match_acc;
    if (one < two) direction_ok = false;
    char frag[96];
    std::snprintf(frag, sizeof(frag), " %s %.3f/%.3f", entity_type_name(type), one, two);
    per_type += frag;
  }
  const bool oracle_ok = oracle.overall.exact_match_acc >= two_step.overall.exact_match_acc;

  char buf[400];
  std::snprintf(buf, sizeof(buf),
                "stage1 char acc = %.4f (in [0.90,0.97]); one/two exact:%s; oracle cascade "
                "%.3f >= decoded %.3f",
                s1_char, per_type.c_str(), oracle.overall.exact_match_acc,
                two_step.overall.exact_match_acc);
  detail = buf;
  return gate_ok && direction_ok && oracle_ok;
}

// ---- criterion 7: blank-dominated alignments over expansion spans -----

bool criterion_7(Context& ctx, std::string& detail) {
  if (ctx.email_model_path.empty()) {
    // Criterion 5 did not run in this invocation; rebuild its artifacts.
    std::string unused;
    criterion_5(ctx, unused);
  }
  const Checkpoint ckpt = load_checkpoint(ctx.email_model_path);
  const fs::path dir(ctx.email_corpus_dir);
  const LoadedCorpus test =
      load_corpus((dir / "test.jsonl").string(), (dir / "synth.toml").string());

  size_t used = 0;
  size_t expansion_frames = 0, expansion_blanks = 0;
  size_t entity_frames = 0;
  double entity_beyond = 0.0;
  const Label blank = Vocabulary::standard().blank();

  // Test ids for the single-type corpus: first 5000 train, then valid,
  // then test; novelty follows the generator's per-split pattern.
  for (size_t i = 0; i < test.data.samples.size() && used < 200; ++i) {
    const SynthSample& stored = test.data.samples[i];
    const bool novel = static_cast<int>(i % 100) <
                       static_cast<int>(test.cfg.novel_test_fraction * 100.0 + 0.5);
    std::vector<TokenRole> roles;
    const SynthSample regen =
        generate_sample(test.cfg, stored.entity_type, stored.id, novel, &roles);
    if (regen.spoken_tokens != stored.spoken_tokens || regen.seed != stored.seed) {
      detail = "internal: could not reproduce sample roles";
      return false;
    }
    bool has_expansion = false;
    for (TokenRole r : roles) {
      if (r == TokenRole::expansion_word) has_expansion = true;
    }
    if (!has_expansion) continue;
    ++used;

    std::vector<FrameSpan> plan;
    const FeatureSequence x = synthesize_features(stored, test.cfg, &plan);
    const PosteriorGrid grid = ckpt.model.forward(x);
    const GreedyResult g = greedy_decode(grid);

    for (const FrameSpan& span : plan) {
      if (span.silence) continue;
      size_t blanks = 0;
      for (size_t f = span.begin; f < span.begin + span.count; ++f) {
        if (g.path[f] == blank) ++blanks;
      }
      const TokenRole role = roles[span.token_index];
      if (role == TokenRole::expansion_word) {
        expansion_frames += span.count;
        expansion_blanks += blanks;
      } else if (role == TokenRole::letter) {
        // One emitted label suffices for a single-letter token; every
        // frame beyond count-1 that is blank means the letter went missing.
        entity_frames += span.count;
        entity_beyond += std::max(0.0, static_cast<double>(blanks) -
                                           static_cast<double>(span.count - 1));
      }
    }
  }

  if (used < 200) {
    detail = "only " + std::to_string(used) + " expansion samples available";
    return false;
  }
  const double expansion_frac =
      static_cast<double>(expansion_blanks) / static_cast<double>(expansion_frames);
  const double entity_frac = entity_beyond / static_cast<double>(entity_frames);
  char buf[240];
  std::snprintf(buf, sizeof(buf),
                "blank fraction in expansion spans = %.4f, blank-beyond-necessary in entity "
                "spans = %.4f (need >= 2x) over %zu samples",
                expansion_frac, entity_frac, used);
  detail = buf;
  return expansion_frac >= 2.0 * entity_frac;
}

// ---- criterion 8: rejection curve vs brute force -----------------------

bool criterion_8(Context&, std::string& detail) {
  SplitMix64 rng(0xC8);
  size_t mismatches = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const size_t n = 1 + rng.below(60);
    std::vector<SampleRow> rows(n);
    for (SampleRow& r : rows) {
      r.confidence = rng.bernoulli(0.08) ? kNegInf : rng.uniform(-4.0, 0.0);
      if (rng.bernoulli(0.25) && &r != rows.data()) r.confidence = rows[0].confidence;
      r.correct = rng.bernoulli(0.7);
    }
    const RejectionCurve curve = rejection_curve(rows, nullptr);

    // Independent per-threshold filtering, no sorting.
    if (curve.points.front().threshold != kNegInf ||
        curve.points.front().rejection_rate != 0.0) {
      ++mismatches;
      continue;
    }
    for (const CurvePoint& p : curve.points) {
      size_t rejected = 0, accepted = 0, wrong = 0;
      for (const SampleRow& r : rows) {
        if (r.confidence < p.threshold) {
          ++rejected;
        } else {
          ++accepted;
          if (!r.correct) ++wrong;
        }
      }
      const double rr = static_cast<double>(rejected) / n;
      const double er = accepted == 0 ? 0.0 : static_cast<double>(wrong) / accepted;
      if (rr != p.rejection_rate || er != p.error_rate) ++mismatches;
    }
    // theta above the maximum confidence rejects everything, error 0.
    const std::vector<double> above{1.0};
    const RejectionCurve top = rejection_curve(rows, &above);
    if (top.points[0].rejection_rate != 1.0 || top.points[0].error_rate != 0.0) ++mismatches;
  }
  detail = "mismatched points = " + std::to_string(mismatches) + " over 100 random reports";
  return mismatches == 0;
}

// ---- criterion 9: byte-identical reruns --------------------------------

std::string file_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return "<missing:" + p.string() + ">";
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool criterion_9(Context& ctx, std::string& detail) {
#ifndef CTCE_TOOL
  detail = "tool path not configured";
  return false;
#else
  const std::string tool = CTCE_TOOL;
  const fs::path dir = ctx.work / "c9_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto sh = [&](const std::string& cmd) {
    const std::string full = cmd + " >> " + (dir / "cli_log.txt").string() + " 2>&1";
    return std::system(full.c_str()) == 0;
  };

  for (int run = 1; run <= 2; ++run) {
    const std::string d = (dir / ("gen" + std::to_string(run))).string();
    if (!sh(tool + " gen-data --out " + d +
            " --types last_name --n-train 300 --n-test 60 --seed 99")) {
      detail = "gen-data invocation failed";
      return false;
    }
    if (!sh(tool + " train --data " + d + " --out " + d +
            "/run --type last_name --epochs 3 --seed 7 --threads 2")) {
      detail = "train invocation failed";
      return false;
    }
    if (!sh(tool + " eval --model " + d + "/run/model.ckpt --data " + d +
            "/test.jsonl --mode one_step --out " + d + "/eval --threads 2")) {
      detail = "eval invocation failed";
      return false;
    }
  }

  std::vector<std::string> diffs;
  for (const char* rel :
       {"train.jsonl", "valid.jsonl", "test.jsonl", "synth.toml", "run/model.ckpt",
        "run/model_train_log.txt", "eval/report.csv", "eval/summary.txt"}) {
    if (file_bytes(dir / "gen1" / rel) != file_bytes(dir / "gen2" / rel)) {
      diffs.push_back(rel);
    }
  }
  if (diffs.empty()) {
    detail = "gen-data, train, and eval artifacts byte-identical across reruns";
    return true;
  }
  detail = "differing artifacts:";
  for (const std::string& d : diffs) detail += " " + d;
  return false;
#endif
}

using CriterionFn = bool (*)(Context&, std::string&);

struct Criterion {
  int number;
  const char* title;
  CriterionFn fn;
};

const Criterion kCriteria[] = {
    {1, "CTC forward-backward matches the enumeration oracle", criterion_1},
    {2, "collapsed-output probabilities sum to one", criterion_2},
    {3, "analytic encoder+CTC gradient matches finite differences", criterion_3},
    {4, "vocabulary and entity round-trip identities", criterion_4},
    {5, "desk-scale learning reaches the accuracy bars in budget", criterion_5},
    {6, "1-step outperforms the 2-step cascade under noisy transcription", criterion_6},
    {7, "blanks dominate expansion-word spans at decode time", criterion_7},
    {8, "rejection curve matches brute-force recomputation", criterion_8},
    {9, "gen-data/train/eval reruns are byte-identical", criterion_9},
};

}  // namespace

int main(int argc, char** argv) {
  Context ctx;
  ctx.work = fs::temp_directory_path() / "ctce_acceptance";
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criteria" && i + 1 < argc) {
      std::istringstream in(argv[++i]);
      std::string tok;
      while (std::getline(in, tok, ',')) selected.insert(std::stoi(tok));
    } else if (arg == "--work-dir" && i + 1 < argc) {
      ctx.work = argv[++i];
    } else if (arg == "--threads" && i + 1 < argc) {
      ctx.threads = std::stoi(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--criteria 1,2,...] [--work-dir DIR] [--threads N]\n";
      return 64;
    }
  }
  fs::create_directories(ctx.work);

  int failures = 0;
  for (const Criterion& c : kCriteria) {
    if (!selected.empty() && !selected.count(c.number)) continue;
    std::string detail;
    bool ok = false;
    const auto start = Clock::now();
    try {
      ok = c.fn(ctx, detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double secs = seconds_since(start);
    std::printf("CRITERION %d [%s] %s — %s (%.0f s)\n", c.number, ok ? "PASS" : "FAIL",
                c.title, detail.c_str(), secs);
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures;
}
