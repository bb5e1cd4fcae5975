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

// Training and evaluation orchestration. Everything here is deterministic
// for a fixed seed: batches shuffle with a per-epoch derived seed, worker
// threads own contiguous sample ranges and their gradients are reduced in
// thread order, and no artifact (checkpoint, log, CSV) contains wall-clock
// state.

#include "ctce/pipeline.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include "ctce/ctc.hpp"
#include "ctce/errors.hpp"
#include "ctce/kernels.hpp"
#include "ctce/numeric.hpp"
#include "ctce/rng.hpp"

namespace ctce {

namespace fs = std::filesystem;

namespace {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(begin, end, tid) over contiguous chunks of [0, n). Determinism
// comes from chunking by index, not from scheduling.
void parallel_chunks(size_t n, int threads,
                     const std::function<void(size_t, size_t, int)>& fn) {
  if (n == 0) return;
  const int use = std::min<size_t>(static_cast<size_t>(std::max(1, threads)), n);
  if (use == 1) {
    fn(0, n, 0);
    return;
  }
  std::vector<std::thread> pool;
  const size_t chunk = (n + use - 1) / use;
  for (int t = 0; t < use; ++t) {
    const size_t begin = static_cast<size_t>(t) * chunk;
    const size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(fn, begin, end, t);
  }
  for (auto& th : pool) th.join();
}

std::string format_double(double v) {
  if (v == kNegInf) return "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_fixed(double v, int places) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.*f", places, v);
  return buf;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

TokenSequence target_tokens(const Vocabulary& vocab, const SynthSample& s, TrainTarget mode) {
  if (mode == TrainTarget::entity) return vocab.encode_tagged(s.target);
  return vocab.encode_tagged(transcript_text(s.spoken_tokens));
}

std::vector<const SynthSample*> filter_samples(const Dataset& data,
                                               const std::optional<EntityType>& type) {
  std::vector<const SynthSample*> out;
  for (const SynthSample& s : data.samples) {
    if (!type || s.entity_type == *type) out.push_back(&s);
  }
  return out;
}

double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

// Exclusive lock on the checkpoint directory: concurrent trainings must
// not interleave best-checkpoint writes.
class CheckpointLock {
 public:
  explicit CheckpointLock(const std::string& dir) : path_(dir + "/.lock") {
    fs::create_directories(dir);
    fd_ = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd_ < 0) {
      throw IoError("train: checkpoint dir " + dir +
                    " is locked by another run (remove .lock if stale)");
    }
  }
  ~CheckpointLock() {
    if (fd_ >= 0) {
      ::close(fd_);
      ::unlink(path_.c_str());
    }
  }
  CheckpointLock(const CheckpointLock&) = delete;
  CheckpointLock& operator=(const CheckpointLock&) = delete;

 private:
  std::string path_;
  int fd_ = -1;
};

// Character accuracy of one hypothesis string, clamped to [0, 1].
double char_accuracy(const std::string& hyp, const std::string& ref) {
  const double d = static_cast<double>(levenshtein(hyp, ref));
  return clamp01(1.0 - d / std::max<size_t>(1, ref.size()));
}

// Word-level units scored positionally against the reference slots.
size_t correct_units(const EntityRecord& hyp, const EntityRecord& ref) {
  if (hyp.type != ref.type) return 0;
  const auto h = hyp.slot_units();
  const auto r = ref.slot_units();
  size_t ok = 0;
  for (size_t i = 0; i < r.size(); ++i) {
    if (i < h.size() && h[i] == r[i]) ++ok;
  }
  return ok;
}

}  // namespace

// ---------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------

namespace {

struct ValidScorer {
  const Vocabulary& vocab;
  TrainTarget mode;
  const SynthConfig& synth;
  const std::vector<const SynthSample*>& samples;
  int threads;

  double score(const EncoderModel& model) const {
    if (samples.empty()) return 0.0;
    std::vector<double> per(samples.size(), 0.0);
    parallel_chunks(samples.size(), threads, [&](size_t b, size_t e, int) {
      for (size_t i = b; i < e; ++i) {
        const SynthSample& s = *samples[i];
        const FeatureSequence x = synthesize_features(s, synth);
        const PosteriorGrid grid = model.forward(x);
        const GreedyResult g = greedy_decode(grid);
        if (mode == TrainTarget::entity) {
          const ParseResult parsed = parse_entities(vocab, g.tokens);
          per[i] = (!parsed.parse_failure && parsed.records.size() == 1 &&
                    parsed.records[0] == s.entity)
                       ? 1.0
                       : 0.0;
        } else {
          const std::string hyp = vocab.decode_tokens(g.tokens);
          per[i] = char_accuracy(hyp, transcript_text(s.spoken_tokens));
        }
      }
    });
    double acc = 0.0;
    for (double v : per) acc += v;
    return acc / static_cast<double>(samples.size());
  }
};

}  // namespace

TrainResult train_on(const Dataset& train_data, const Dataset& valid_data,
                     const SynthConfig& synth, const TrainConfig& cfg) {
  if (cfg.epochs < 1 || cfg.batch_size < 1) {
    throw ConfigError("train: epochs and batch size must be >= 1");
  }
  const Vocabulary& vocab = Vocabulary::standard();
  const int threads = resolve_threads(cfg.threads);

  const CheckpointLock lock(cfg.checkpoint_dir);

  const std::vector<const SynthSample*> train_samples =
      filter_samples(train_data, cfg.type_filter);
  const std::vector<const SynthSample*> valid_samples =
      filter_samples(valid_data, cfg.type_filter);
  if (train_samples.empty()) throw ConfigError("train: no training samples after filtering");

  // Targets are fixed; encode once.
  std::vector<TokenSequence> targets(train_samples.size());
  for (size_t i = 0; i < train_samples.size(); ++i) {
    targets[i] = target_tokens(vocab, *train_samples[i], cfg.target);
  }

  EncoderConfig enc;
  enc.input_dim = synth.feature_dim;
  enc.hidden = cfg.hidden;
  enc.layers = cfg.layers;
  enc.kernel = cfg.kernel;
  enc.outputs = static_cast<int>(vocab.output_size());
  EncoderModel model = EncoderModel::init(enc, cfg.seed);
  AdamState adam(model.params.size(), cfg.lr);
  adam.beta1 = cfg.beta1;
  adam.beta2 = cfg.beta2;
  adam.eps = cfg.eps;

  const size_t n = train_samples.size();
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;

  const ValidScorer scorer{vocab, cfg.target, synth, valid_samples, threads};

  TrainResult result;
  std::vector<double> best_params;
  std::vector<double> grad_sum(model.params.size());
  std::vector<std::vector<double>> thread_grads(
      static_cast<size_t>(threads), std::vector<double>(model.params.size(), 0.0));

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const double progress = static_cast<double>(epoch - 1) / cfg.epochs;
    adam.lr = cfg.lr * (progress < 0.5 ? 1.0 : progress < 0.8 ? cfg.lr_mid_scale
                                                              : cfg.lr_late_scale);
    // Seeded Fisher-Yates; epoch order is independent of thread count.
    SplitMix64 shuffle_rng(seed_mix(cfg.seed, static_cast<uint64_t>(epoch)));
    for (size_t i = n - 1; i > 0; --i) {
      const size_t j = shuffle_rng.below(i + 1);
      std::swap(order[i], order[j]);
    }

    double epoch_loss = 0.0;
    size_t epoch_counted = 0;
    size_t epoch_skipped = 0;

    for (size_t batch_begin = 0; batch_begin < n; batch_begin += cfg.batch_size) {
      const size_t batch_end = std::min(n, batch_begin + cfg.batch_size);
      const size_t bn = batch_end - batch_begin;
      std::vector<double> losses(bn, 0.0);
      std::vector<uint8_t> skipped(bn, 0);
      for (auto& g : thread_grads) std::fill(g.begin(), g.end(), 0.0);

      parallel_chunks(bn, threads, [&](size_t b, size_t e, int tid) {
        std::vector<double>& grad = thread_grads[static_cast<size_t>(tid)];
        ForwardTrace trace;
        for (size_t k = b; k < e; ++k) {
          const size_t idx = order[batch_begin + k];
          const SynthSample& s = *train_samples[idx];
          const FeatureSequence x = synthesize_features(s, synth);
          model.forward(x, trace);
          try {
            const CtcLossResult loss = ctc_loss(trace.posteriors, targets[idx]);
            losses[k] = loss.loss;
            model.backward_from_logits(trace, loss.logit_grad, grad);
          } catch (const AlignmentInfeasible&) {
            skipped[k] = 1;
          }
        }
      });

      size_t counted = 0;
      double batch_loss = 0.0;
      for (size_t k = 0; k < bn; ++k) {
        if (skipped[k]) {
          ++epoch_skipped;
          std::cerr << "train: skipping infeasible sample id="
                    << train_samples[order[batch_begin + k]]->id << "\n";
          continue;
        }
        batch_loss += losses[k];
        ++counted;
      }
      if (counted == 0) continue;

      std::fill(grad_sum.begin(), grad_sum.end(), 0.0);
      for (const auto& g : thread_grads) {
        kernels::active().axpy(1.0, g.data(), grad_sum.data(), grad_sum.size());
      }
      kernels::active().scale(grad_sum.data(), grad_sum.size(), 1.0 / static_cast<double>(counted));

      const double mean_loss = batch_loss / static_cast<double>(counted);
      if (!std::isfinite(mean_loss)) {
        throw TrainingError("train: non-finite loss at epoch " + std::to_string(epoch) +
                            " batch " + std::to_string(batch_begin / cfg.batch_size));
      }
      epoch_loss += batch_loss;
      epoch_counted += counted;

      clip_global_norm(grad_sum, cfg.clip_norm);
      adam.step(model.params, grad_sum);
    }

    EpochLog entry;
    entry.epoch = epoch;
    entry.train_loss = epoch_counted > 0 ? epoch_loss / static_cast<double>(epoch_counted) : 0.0;
    entry.valid_metric = scorer.score(model);
    entry.skipped = epoch_skipped;
    result.log.push_back(entry);
    std::cerr << "epoch " << epoch << " loss " << format_fixed(entry.train_loss, 4)
              << " valid " << format_fixed(entry.valid_metric, 4) << "\n";

    // Ties go to the later epoch: with a decaying lr the later model is the
    // more converged one, and early epochs can tie at zero on hard targets.
    if (entry.valid_metric >= result.best_valid) {
      result.best_valid = entry.valid_metric;
      result.best_epoch = epoch;
      best_params = model.params;
    }
  }

  if (best_params.empty()) best_params = model.params;
  EncoderModel best = model;
  best.params = std::move(best_params);

  fs::create_directories(cfg.checkpoint_dir);
  result.checkpoint_path = (fs::path(cfg.checkpoint_dir) / cfg.checkpoint_name).string();
  save_checkpoint(result.checkpoint_path, best, vocab);

  result.log_path = (fs::path(cfg.checkpoint_dir) /
                     (fs::path(cfg.checkpoint_name).stem().string() + "_train_log.txt"))
                        .string();
  {
    std::ofstream log(result.log_path + ".tmp", std::ios::binary);
    if (!log) throw IoError("train: cannot open " + result.log_path);
    for (const EpochLog& e : result.log) {
      log << "epoch=" << e.epoch << " train_loss=" << format_fixed(e.train_loss, 6)
          << " valid=" << format_fixed(e.valid_metric, 6) << " skipped=" << e.skipped << "\n";
    }
    log << "best_epoch=" << result.best_epoch
        << " best_valid=" << format_fixed(result.best_valid, 6) << "\n";
    if (!log.flush()) throw IoError("train: log write failed");
  }
  std::error_code ec;
  fs::rename(result.log_path + ".tmp", result.log_path, ec);
  if (ec) throw IoError("train: log rename failed: " + ec.message());
  return result;
}

TrainResult train(const TrainConfig& cfg) {
  const LoadedCorpus train_corpus = load_corpus(cfg.train_path, cfg.config_path);
  const Dataset valid_data = load_dataset(cfg.valid_path);
  if (valid_data.config_hash != train_corpus.data.config_hash) {
    throw MismatchError("train: valid set was generated with a different config");
  }
  return train_on(train_corpus.data, valid_data, train_corpus.cfg, cfg);
}

TrainResult train_transcription_model(TrainConfig cfg) {
  cfg.target = TrainTarget::transcript;
  if (cfg.checkpoint_name == "model.ckpt") cfg.checkpoint_name = "transcriber.ckpt";
  return train(cfg);
}

// ---------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------

EvalReport evaluate(const EvalInputs& inputs, const Dataset& data, const SynthConfig& synth,
                    EvalMode mode) {
  const Vocabulary& vocab = Vocabulary::standard();
  const ItnRules& rules = inputs.rules ? *inputs.rules : ItnRules::defaults();
  const int threads = resolve_threads(inputs.threads);

  if (mode == EvalMode::one_step && !inputs.extractor) {
    throw ConfigError("evaluate: one_step needs an extractor model");
  }
  if (mode == EvalMode::two_step && !inputs.oracle_transcripts && !inputs.transcriber) {
    throw ConfigError("evaluate: two_step needs a transcriber model");
  }

  EvalReport report;
  report.mode = mode;
  const size_t n = data.samples.size();
  report.rows.resize(n);
  std::vector<double> unit_total(n, 0.0), unit_ok(n, 0.0), char_acc(n, 0.0);
  std::vector<double> stage1_char(n, 0.0);

  parallel_chunks(n, threads, [&](size_t b, size_t e, int) {
    for (size_t i = b; i < e; ++i) {
      const SynthSample& s = data.samples[i];
      SampleRow row;
      row.id = s.id;
      row.type = s.entity_type;
      row.ref = s.entity.flat();

      std::vector<EntityRecord> hyp_records;
      bool parse_failure = false;

      if (mode == EvalMode::one_step) {
        const FeatureSequence x = synthesize_features(s, synth);
        const PosteriorGrid grid = inputs.extractor->forward(x);
        const GreedyResult g = greedy_decode(grid);
        row.confidence = confidence(grid, g.path).normalized;
        const ParseResult parsed = parse_entities(vocab, g.tokens);
        parse_failure = parsed.parse_failure;
        hyp_records = parsed.records;
        row.hyp = vocab.decode_tokens(g.tokens);
      } else {
        std::string transcript;
        if (inputs.oracle_transcripts) {
          transcript = transcript_text(s.spoken_tokens);
          row.confidence = 0.0;
        } else {
          const FeatureSequence x = synthesize_features(s, synth);
          const PosteriorGrid grid = inputs.transcriber->forward(x);
          const GreedyResult g = greedy_decode(grid);
          row.confidence = confidence(grid, g.path).normalized;
          transcript = vocab.decode_tokens(g.tokens);
          stage1_char[i] = char_accuracy(transcript, transcript_text(s.spoken_tokens));
        }
        SpokenTranscript words;
        std::istringstream in(transcript);
        std::string w;
        while (in >> w) words.push_back(w);
        const ItnResult itn = itn_extract(words, s.entity_type, rules);
        parse_failure = !itn.ok;
        if (itn.ok) hyp_records.push_back(itn.record);
        row.hyp = itn.ok ? itn.record.flat() : "";
      }

      row.parse_failure = parse_failure;
      row.correct = !parse_failure && hyp_records.size() == 1 && hyp_records[0] == s.entity;

      const auto ref_units = s.entity.slot_units();
      unit_total[i] = static_cast<double>(ref_units.size());
      unit_ok[i] = hyp_records.size() == 1
                       ? static_cast<double>(correct_units(hyp_records[0], s.entity))
                       : 0.0;
      const std::string hyp_flat =
          hyp_records.size() == 1 ? hyp_records[0].flat() : std::string();
      char_acc[i] = char_accuracy(hyp_flat, row.ref);
      report.rows[i] = std::move(row);
    }
  });

  // Aggregate serially, in dataset order.
  struct Acc {
    size_t count = 0, correct = 0, failures = 0;
    double units = 0, units_ok = 0, chars = 0;
  };
  std::map<EntityType, Acc> per_type;
  Acc overall;
  double stage1_sum = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const SampleRow& row = report.rows[i];
    for (Acc* a : {&per_type[row.type], &overall}) {
      a->count += 1;
      a->correct += row.correct ? 1 : 0;
      a->failures += row.parse_failure ? 1 : 0;
      a->units += unit_total[i];
      a->units_ok += unit_ok[i];
      a->chars += char_acc[i];
    }
    stage1_sum += stage1_char[i];
  }
  auto to_metrics = [](const Acc& a) {
    TypeMetrics m;
    m.count = a.count;
    if (a.count > 0) {
      m.exact_match_acc = static_cast<double>(a.correct) / a.count;
      m.char_acc = a.chars / static_cast<double>(a.count);
      m.parse_failure_rate = static_cast<double>(a.failures) / a.count;
    }
    if (a.units > 0) m.word_acc = a.units_ok / a.units;
    return m;
  };
  for (const auto& [type, acc] : per_type) report.per_type[type] = to_metrics(acc);
  report.overall = to_metrics(overall);
  if (mode == EvalMode::two_step && !inputs.oracle_transcripts && n > 0) {
    report.transcript_char_acc = stage1_sum / static_cast<double>(n);
  }
  return report;
}

void write_eval_csv(const std::string& path, const EvalReport& report) {
  std::ofstream out(path + ".tmp", std::ios::binary);
  if (!out) throw IoError("eval: cannot open " + path);
  out << "id,entity_type,hyp,ref,confidence,correct,parse_failure\n";
  for (const SampleRow& row : report.rows) {
    out << row.id << ',' << entity_type_name(row.type) << ',' << csv_quote(row.hyp) << ','
        << csv_quote(row.ref) << ',' << format_double(row.confidence) << ','
        << (row.correct ? 1 : 0) << ',' << (row.parse_failure ? 1 : 0) << "\n";
  }
  if (!out.flush()) throw IoError("eval: write failed for " + path);
  out.close();
  std::error_code ec;
  fs::rename(path + ".tmp", path, ec);
  if (ec) throw IoError("eval: rename failed: " + ec.message());
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

std::vector<SampleRow> load_eval_rows(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("eval rows: cannot open " + path);
  std::vector<SampleRow> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      first = false;
      continue;  // header
    }
    const auto f = split_csv_line(line);
    if (f.size() != 7) throw IoError("eval rows: malformed line in " + path);
    SampleRow row;
    row.id = std::stoull(f[0]);
    const auto type = entity_type_from_name(f[1]);
    if (!type) throw IoError("eval rows: unknown type " + f[1]);
    row.type = *type;
    row.hyp = f[2];
    row.ref = f[3];
    row.confidence = f[4] == "-inf" ? kNegInf : std::stod(f[4]);
    row.correct = f[5] == "1";
    row.parse_failure = f[6] == "1";
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string summary_text(const EvalReport& report) {
  std::ostringstream out;
  out << "mode=" << (report.mode == EvalMode::one_step ? "one_step" : "two_step") << "\n";
  out << "type              n   exact    word    char    parse_fail\n";
  auto line = [&](const std::string& name, const TypeMetrics& m) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-15s %5zu  %.4f  %.4f  %.4f  %.4f\n", name.c_str(),
                  m.count, m.exact_match_acc, m.word_acc, m.char_acc, m.parse_failure_rate);
    out << buf;
  };
  for (const auto& [type, metrics] : report.per_type) {
    line(entity_type_name(type), metrics);
  }
  line("overall", report.overall);
  if (report.transcript_char_acc >= 0.0) {
    out << "stage1_char_acc=" << format_fixed(report.transcript_char_acc, 4) << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------
// Rejection curves
// ---------------------------------------------------------------------

RejectionCurve rejection_curve(const std::vector<SampleRow>& rows,
                               const std::vector<double>* thresholds) {
  if (rows.empty()) throw DomainError("rejection_curve: empty report");

  std::vector<double> grid;
  if (thresholds) {
    grid = *thresholds;
  } else {
    grid.reserve(rows.size() + 1);
    grid.push_back(kNegInf);
    for (const SampleRow& r : rows) grid.push_back(r.confidence);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  RejectionCurve curve;
  const double total = static_cast<double>(rows.size());
  for (double theta : grid) {
    size_t rejected = 0, wrong_accepted = 0;
    for (const SampleRow& r : rows) {
      if (r.confidence < theta) {
        ++rejected;
      } else if (!r.correct) {
        ++wrong_accepted;
      }
    }
    const size_t accepted = rows.size() - rejected;
    CurvePoint p;
    p.threshold = theta;
    p.rejection_rate = static_cast<double>(rejected) / total;
    p.error_rate = accepted == 0 ? 0.0 : static_cast<double>(wrong_accepted) / accepted;
    curve.points.push_back(p);
  }
  return curve;
}

void write_curve_csv(const std::string& path, const RejectionCurve& curve) {
  std::ofstream out(path + ".tmp", std::ios::binary);
  if (!out) throw IoError("curve: cannot open " + path);
  out << "threshold,rejection_rate,error_rate\n";
  for (const CurvePoint& p : curve.points) {
    out << format_double(p.threshold) << ',' << format_double(p.rejection_rate) << ','
        << format_double(p.error_rate) << "\n";
  }
  if (!out.flush()) throw IoError("curve: write failed for " + path);
  out.close();
  std::error_code ec;
  fs::rename(path + ".tmp", path, ec);
  if (ec) throw IoError("curve: rename failed: " + ec.message());
}

// ---------------------------------------------------------------------
// Training-size sweep
// ---------------------------------------------------------------------

std::vector<SweepRow> training_size_sweep(const TrainConfig& cfg,
                                          const std::vector<size_t>& sizes,
                                          const Dataset& test_data) {
  const LoadedCorpus corpus = load_corpus(cfg.train_path, cfg.config_path);
  const Dataset valid_data = load_dataset(cfg.valid_path);

  std::vector<const SynthSample*> pool = filter_samples(corpus.data, cfg.type_filter);
  // One shuffle shared by every size: prefixes nest.
  SplitMix64 rng(seed_mix(cfg.seed, 0x5EEDull));
  for (size_t i = pool.size() - 1; i > 0; --i) {
    const size_t j = rng.below(i + 1);
    std::swap(pool[i], pool[j]);
  }

  std::vector<SweepRow> rows;
  for (size_t size : sizes) {
    if (size > pool.size()) {
      throw ConfigError("sweep: size " + std::to_string(size) + " exceeds corpus (" +
                        std::to_string(pool.size()) + ")");
    }
    Dataset subset;
    subset.config_hash = corpus.data.config_hash;
    for (size_t i = 0; i < size; ++i) subset.samples.push_back(*pool[i]);
    std::sort(subset.samples.begin(), subset.samples.end(),
              [](const SynthSample& a, const SynthSample& b) { return a.id < b.id; });

    Dataset valid_subset;
    valid_subset.config_hash = valid_data.config_hash;
    for (const SynthSample* s : filter_samples(valid_data, cfg.type_filter)) {
      valid_subset.samples.push_back(*s);
    }

    TrainConfig sub_cfg = cfg;
    sub_cfg.type_filter.reset();  // subsets are already filtered
    sub_cfg.checkpoint_name = "model_" + std::to_string(size) + ".ckpt";
    const TrainResult tr = train_on(subset, valid_subset, corpus.cfg, sub_cfg);

    const Checkpoint ckpt = load_checkpoint(tr.checkpoint_path);
    EvalInputs inputs;
    inputs.extractor = &ckpt.model;
    inputs.threads = cfg.threads;
    const EvalReport report = evaluate(inputs, test_data, corpus.cfg, EvalMode::one_step);

    SweepRow row;
    row.train_size = size;
    row.exact_match_acc = report.overall.exact_match_acc;
    row.word_acc = report.overall.word_acc;
    row.char_acc = report.overall.char_acc;
    row.checkpoint_path = tr.checkpoint_path;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace ctce
