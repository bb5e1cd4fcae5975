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

// Command-line front end: gen-data, train, decode, eval, curve, sweep.
// Results go to stdout, diagnostics to stderr. Exit codes: 0 ok, 2 config,
// 3 I/O, 4 artifact mismatch, 5 training abort.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "ctce/checkpoint.hpp"
#include "ctce/ctc.hpp"
#include "ctce/dataset.hpp"
#include "ctce/errors.hpp"
#include "ctce/pipeline.hpp"

namespace fs = std::filesystem;
using namespace ctce;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitMismatch = 4;
constexpr int kExitTraining = 5;

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<EntityType> parse_types(const std::string& spec) {
  std::vector<EntityType> out;
  for (const std::string& name : split_commas(spec)) {
    const auto t = entity_type_from_name(name);
    if (!t) {
      std::string valid;
      for (EntityType e : kAllEntityTypes) {
        if (!valid.empty()) valid += ", ";
        valid += entity_type_name(e);
      }
      throw ConfigError("unknown entity type '" + name + "'; valid types: " + valid);
    }
    out.push_back(*t);
  }
  return out;
}

SynthConfig synth_from_args(const std::string& config_file, uint64_t seed, bool seed_set,
                            const std::vector<std::string>& overrides) {
  SynthConfig cfg =
      config_file.empty() ? SynthConfig::defaults() : load_synth_config(config_file);
  for (const std::string& kv : overrides) {
    const size_t eq = kv.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("--set expects key=value, got '" + kv + "'");
    }
    apply_synth_kv(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (seed_set) cfg.seed = seed;
  return cfg;
}

const EncoderModel& require_standard_vocab(const Checkpoint& ckpt, const std::string& path) {
  if (ckpt.vocab.content_hash() != Vocabulary::standard().content_hash()) {
    throw MismatchError("checkpoint " + path +
                        " uses a different vocabulary than this build's datasets");
  }
  return ckpt.model;
}

FeatureSequence read_feature_file(const std::string& path, int expected_dim) {
  std::ifstream in(path);
  if (!in) throw IoError("features: cannot open " + path);
  std::vector<double> values;
  size_t rows = 0;
  size_t cols = 0;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    double v;
    size_t n = 0;
    while (ls >> v) {
      values.push_back(v);
      ++n;
    }
    if (n == 0) continue;
    if (cols == 0) cols = n;
    if (n != cols) throw ConfigError("features: ragged rows in " + path);
    ++rows;
  }
  if (rows == 0) throw ConfigError("features: no rows in " + path);
  if (expected_dim > 0 && cols != static_cast<size_t>(expected_dim)) {
    throw ConfigError("features: width " + std::to_string(cols) + " does not match model (" +
                      std::to_string(expected_dim) + ")");
  }
  FeatureSequence x(rows, cols);
  x.data = std::move(values);
  return x;
}

void print_decode(const PosteriorGrid& grid) {
  const Vocabulary& vocab = Vocabulary::standard();
  const GreedyResult g = greedy_decode(grid);
  const ConfidenceScore score = confidence(grid, g.path);
  std::cout << "tagged: " << vocab.decode_tokens(g.tokens) << "\n";
  const ParseResult parsed = parse_entities(vocab, g.tokens);
  if (parsed.parse_failure) {
    std::cout << "entity: <parse failure: " << parsed.failure_reason << ">\n";
  } else if (parsed.records.empty()) {
    std::cout << "entity: <none>\n";
  } else {
    for (const EntityRecord& r : parsed.records) {
      std::cout << "entity: " << entity_type_name(r.type) << " = " << r.flat() << "\n";
    }
  }
  std::cout << "confidence_raw: " << score.raw << "\n";
  std::cout << "confidence: " << score.normalized << "\n";
}

int run(int argc, char** argv) {
  CLI::App app{"ctce: spoken entity extraction with CTC, at desk scale"};
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "suppress progress diagnostics (stderr)");

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "generate a synthetic say-and-spell corpus");
  std::string gen_out, gen_config, gen_types;
  uint64_t gen_seed = 0;
  size_t n_train = 5000, n_valid = 0, n_test = 500;
  std::vector<std::string> gen_sets;
  gen->add_option("--out", gen_out, "output directory")->required();
  gen->add_option("--config", gen_config, "generator config file");
  gen->add_option("--seed", gen_seed, "generator seed (overrides config)");
  gen->add_option("--types", gen_types, "comma-separated entity types");
  gen->add_option("--n-train", n_train, "training samples per type");
  gen->add_option("--n-valid", n_valid, "validation samples per type (0 = 10% of train)");
  gen->add_option("--n-test", n_test, "test samples per type");
  gen->add_option("--set", gen_sets, "config override key=value (repeatable)");

  // train
  auto* tr = app.add_subcommand("train", "train an extraction or transcription model");
  std::string tr_data, tr_train, tr_valid, tr_cfg, tr_out, tr_type, tr_target = "entity";
  TrainConfig tcfg;
  bool tr_joint = false;
  tr->add_option("--data", tr_data, "corpus directory (train/valid/synth.toml inside)");
  tr->add_option("--train", tr_train, "explicit train.jsonl");
  tr->add_option("--valid", tr_valid, "explicit valid.jsonl");
  tr->add_option("--config", tr_cfg, "explicit synth.toml");
  tr->add_option("--out", tr_out, "checkpoint directory")->required();
  tr->add_option("--type", tr_type, "train on one entity type");
  tr->add_flag("--joint", tr_joint, "pool all entity types (default when --type absent)");
  tr->add_option("--target", tr_target, "entity|transcript")
      ->check(CLI::IsMember({"entity", "transcript"}));
  tr->add_option("--epochs", tcfg.epochs, "training epochs");
  tr->add_option("--batch", tcfg.batch_size, "batch size");
  tr->add_option("--lr", tcfg.lr, "Adam learning rate");
  tr->add_option("--clip", tcfg.clip_norm, "gradient clip (global norm)");
  tr->add_option("--seed", tcfg.seed, "training seed");
  tr->add_option("--hidden", tcfg.hidden, "conv channels");
  tr->add_option("--layers", tcfg.layers, "conv layers");
  tr->add_option("--threads", tcfg.threads, "worker threads (0 = hardware)");

  // decode
  auto* de = app.add_subcommand("decode", "greedy-decode one sample or a features file");
  std::string de_model, de_data, de_features;
  int64_t de_id = -1;
  de->add_option("--model", de_model, "checkpoint")->required();
  de->add_option("--data", de_data, "dataset file (with --id)");
  de->add_option("--id", de_id, "sample id inside --data");
  de->add_option("--features", de_features, "whitespace text matrix, one frame per line");

  // eval
  auto* ev = app.add_subcommand("eval", "score a model on a dataset");
  std::string ev_model, ev_stage1, ev_data, ev_out, ev_mode = "one_step";
  bool ev_oracle = false;
  int ev_threads = 0;
  ev->add_option("--model", ev_model, "extraction checkpoint (one_step)");
  ev->add_option("--stage1", ev_stage1, "transcription checkpoint (two_step)");
  ev->add_option("--data", ev_data, "test dataset")->required();
  ev->add_option("--mode", ev_mode, "one_step|two_step")
      ->check(CLI::IsMember({"one_step", "two_step"}));
  ev->add_flag("--oracle-transcripts", ev_oracle, "two_step on reference transcripts");
  ev->add_option("--out", ev_out, "report directory")->required();
  ev->add_option("--threads", ev_threads, "worker threads");

  // curve
  auto* cu = app.add_subcommand("curve", "error-rejection curve from an eval report");
  std::string cu_report, cu_out, cu_thresholds;
  bool cu_all = false;
  cu->add_option("--report", cu_report, "eval report.csv")->required();
  cu->add_option("--out", cu_out, "output curve.csv")->required();
  cu->add_flag("--all-thresholds", cu_all, "one point per distinct confidence");
  cu->add_option("--thresholds", cu_thresholds, "comma-separated threshold list");

  // sweep
  auto* sw = app.add_subcommand("sweep", "training-size sweep");
  std::string sw_data, sw_out, sw_sizes, sw_type;
  TrainConfig scfg;
  sw->add_option("--data", sw_data, "corpus directory")->required();
  sw->add_option("--out", sw_out, "output directory")->required();
  sw->add_option("--sizes", sw_sizes, "comma-separated training sizes")->required();
  sw->add_option("--type", sw_type, "entity type to sweep");
  sw->add_option("--epochs", scfg.epochs, "epochs per size");
  sw->add_option("--batch", scfg.batch_size, "batch size");
  sw->add_option("--seed", scfg.seed, "seed");
  sw->add_option("--threads", scfg.threads, "worker threads");

  CLI11_PARSE(app, argc, argv);

  if (quiet) {
    // Results stay on stdout; diagnostics go nowhere.
    static std::ofstream null_sink("/dev/null");
    std::cerr.rdbuf(null_sink.rdbuf());
  }

  if (gen->parsed()) {
    const SynthConfig cfg =
        synth_from_args(gen_config, gen_seed, gen->count("--seed") > 0, gen_sets);
    CorpusSpec spec;
    if (!gen_types.empty()) spec.types = parse_types(gen_types);
    spec.n_train = n_train;
    spec.n_valid = n_valid;
    spec.n_test = n_test;
    const CorpusPaths paths = build_corpus(cfg, spec, gen_out);
    const auto& types = spec.types.empty() ? cfg.entity_types : spec.types;
    const size_t valid_per_type = n_valid > 0 ? n_valid : std::max<size_t>(1, n_train / 10);
    for (EntityType t : types) {
      std::cout << entity_type_name(t) << ": train=" << n_train << " valid=" << valid_per_type
                << " test=" << n_test << "\n";
    }
    std::cout << "wrote " << paths.train << ", " << paths.valid << ", " << paths.test << ", "
              << paths.config << "\n";
    return kExitOk;
  }

  if (tr->parsed()) {
    if (!tr_data.empty()) {
      tcfg.train_path = (fs::path(tr_data) / "train.jsonl").string();
      tcfg.valid_path = (fs::path(tr_data) / "valid.jsonl").string();
      tcfg.config_path = (fs::path(tr_data) / "synth.toml").string();
    }
    if (!tr_train.empty()) tcfg.train_path = tr_train;
    if (!tr_valid.empty()) tcfg.valid_path = tr_valid;
    if (!tr_cfg.empty()) tcfg.config_path = tr_cfg;
    if (tcfg.train_path.empty() || tcfg.valid_path.empty() || tcfg.config_path.empty()) {
      throw ConfigError("train: provide --data DIR or all of --train/--valid/--config");
    }
    tcfg.checkpoint_dir = tr_out;
    if (!tr_type.empty()) {
      if (tr_joint) throw ConfigError("train: --type and --joint are mutually exclusive");
      const auto t = entity_type_from_name(tr_type);
      if (!t) throw ConfigError("train: unknown entity type '" + tr_type + "'");
      tcfg.type_filter = *t;
    }
    tcfg.target = tr_target == "transcript" ? TrainTarget::transcript : TrainTarget::entity;
    if (tcfg.target == TrainTarget::transcript && tcfg.checkpoint_name == "model.ckpt") {
      tcfg.checkpoint_name = "transcriber.ckpt";
    }
    const TrainResult result = train(tcfg);
    std::cout << "checkpoint: " << result.checkpoint_path << "\n";
    std::cout << "best_epoch: " << result.best_epoch << "\n";
    std::cout << "best_valid: " << result.best_valid << "\n";
    return kExitOk;
  }

  if (de->parsed()) {
    const Checkpoint ckpt = load_checkpoint(de_model);
    const EncoderModel& model = require_standard_vocab(ckpt, de_model);
    if (!de_features.empty()) {
      const FeatureSequence x = read_feature_file(de_features, model.cfg.input_dim);
      print_decode(model.forward(x));
      return kExitOk;
    }
    if (de_data.empty() || de_id < 0) {
      throw ConfigError("decode: provide --features FILE or --data FILE with --id N");
    }
    const LoadedCorpus corpus = load_corpus(de_data, sibling_config_path(de_data));
    const SynthSample* found = nullptr;
    for (const SynthSample& s : corpus.data.samples) {
      if (s.id == static_cast<uint64_t>(de_id)) found = &s;
    }
    if (!found) throw ConfigError("decode: id " + std::to_string(de_id) + " not in " + de_data);
    std::cerr << "spoken: " << transcript_text(found->spoken_tokens) << "\n";
    std::cerr << "reference: " << found->target << "\n";
    print_decode(model.forward(synthesize_features(*found, corpus.cfg)));
    return kExitOk;
  }

  if (ev->parsed()) {
    const LoadedCorpus corpus = load_corpus(ev_data, sibling_config_path(ev_data));
    EvalInputs inputs;
    inputs.threads = ev_threads;
    inputs.oracle_transcripts = ev_oracle;
    std::optional<Checkpoint> model_ckpt, stage1_ckpt;
    const EvalMode mode = ev_mode == "two_step" ? EvalMode::two_step : EvalMode::one_step;
    if (mode == EvalMode::one_step) {
      if (ev_model.empty()) throw ConfigError("eval: one_step needs --model");
      model_ckpt = load_checkpoint(ev_model);
      inputs.extractor = &require_standard_vocab(*model_ckpt, ev_model);
    } else if (!ev_oracle) {
      if (ev_stage1.empty()) {
        throw ConfigError("eval: two_step needs --stage1 (or --oracle-transcripts)");
      }
      stage1_ckpt = load_checkpoint(ev_stage1);
      inputs.transcriber = &require_standard_vocab(*stage1_ckpt, ev_stage1);
    }
    const EvalReport report = evaluate(inputs, corpus.data, corpus.cfg, mode);
    fs::create_directories(ev_out);
    const std::string csv = (fs::path(ev_out) / "report.csv").string();
    const std::string summary = (fs::path(ev_out) / "summary.txt").string();
    write_eval_csv(csv, report);
    {
      std::ofstream out(summary, std::ios::binary);
      out << summary_text(report);
      if (!out.flush()) throw IoError("eval: cannot write " + summary);
    }
    std::cout << summary_text(report);
    std::cerr << "report: " << csv << "\n";
    return kExitOk;
  }

  if (cu->parsed()) {
    if (cu_all == !cu_thresholds.empty()) {
      throw ConfigError("curve: pass exactly one of --all-thresholds or --thresholds");
    }
    const std::vector<SampleRow> rows = load_eval_rows(cu_report);
    RejectionCurve curve;
    if (cu_all) {
      curve = rejection_curve(rows, nullptr);
    } else {
      std::vector<double> thetas;
      for (const std::string& t : split_commas(cu_thresholds)) thetas.push_back(std::stod(t));
      curve = rejection_curve(rows, &thetas);
    }
    write_curve_csv(cu_out, curve);
    std::cout << "points: " << curve.points.size() << "\n";
    std::cout << "wrote " << cu_out << "\n";
    return kExitOk;
  }

  if (sw->parsed()) {
    scfg.train_path = (fs::path(sw_data) / "train.jsonl").string();
    scfg.valid_path = (fs::path(sw_data) / "valid.jsonl").string();
    scfg.config_path = (fs::path(sw_data) / "synth.toml").string();
    scfg.checkpoint_dir = sw_out;
    if (!sw_type.empty()) {
      const auto t = entity_type_from_name(sw_type);
      if (!t) throw ConfigError("sweep: unknown entity type '" + sw_type + "'");
      scfg.type_filter = *t;
    }
    std::vector<size_t> sizes;
    for (const std::string& s : split_commas(sw_sizes)) sizes.push_back(std::stoull(s));
    if (sizes.empty()) throw ConfigError("sweep: --sizes is empty");
    const LoadedCorpus test = load_corpus((fs::path(sw_data) / "test.jsonl").string(),
                                          (fs::path(sw_data) / "synth.toml").string());
    const auto rows = training_size_sweep(scfg, sizes, test.data);
    fs::create_directories(sw_out);
    const std::string csv_path = (fs::path(sw_out) / "sweep.csv").string();
    std::ofstream csv(csv_path, std::ios::binary);
    csv << "train_size,exact_match_acc,word_acc,char_acc\n";
    std::cout << "train_size,exact_match_acc,word_acc,char_acc\n";
    for (const SweepRow& r : rows) {
      char buf[128];
      std::snprintf(buf, sizeof(buf), "%zu,%.6f,%.6f,%.6f\n", r.train_size, r.exact_match_acc,
                    r.word_acc, r.char_acc);
      csv << buf;
      std::cout << buf;
    }
    if (!csv.flush()) throw IoError("sweep: cannot write " + csv_path);
    return kExitOk;
  }

  return kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const MismatchError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMismatch;
  } catch (const TrainingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitTraining;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
