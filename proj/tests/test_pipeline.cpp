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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ctce/numeric.hpp"
#include "ctce/pipeline.hpp"
#include "ctce/rng.hpp"

using namespace ctce;

namespace fs = std::filesystem;

namespace {

SampleRow row(double confidence, bool correct) {
  SampleRow r;
  r.confidence = confidence;
  r.correct = correct;
  return r;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Threshold-by-threshold recomputation without any shared machinery; the
// independent check for curve correctness.
CurvePoint naive_point(const std::vector<SampleRow>& rows, double theta) {
  size_t rejected = 0, accepted = 0, wrong = 0;
  for (const SampleRow& r : rows) {
    if (r.confidence < theta) {
      ++rejected;
    } else {
      ++accepted;
      if (!r.correct) ++wrong;
    }
  }
  CurvePoint p;
  p.threshold = theta;
  p.rejection_rate = static_cast<double>(rejected) / rows.size();
  p.error_rate = accepted == 0 ? 0.0 : static_cast<double>(wrong) / accepted;
  return p;
}

}  // namespace

TEST_CASE("rejection curve: four-sample worked example") {
  const std::vector<SampleRow> rows{row(-0.1, true), row(-0.2, true), row(-0.3, false),
                                    row(-0.4, true)};
  const std::vector<double> thetas{-0.25};
  const RejectionCurve curve = rejection_curve(rows, &thetas);
  REQUIRE(curve.points.size() == 1);
  CHECK(curve.points[0].rejection_rate == doctest::Approx(0.5));
  CHECK(curve.points[0].error_rate == doctest::Approx(0.0));
}

TEST_CASE("rejection curve boundary thresholds") {
  const std::vector<SampleRow> rows{row(-0.1, true), row(-0.2, false), row(-0.3, true),
                                    row(-0.5, false)};
  const std::vector<double> thetas{kNegInf, 0.0};
  const RejectionCurve curve = rejection_curve(rows, &thetas);
  REQUIRE(curve.points.size() == 2);
  // theta = -inf: nothing rejected, error = overall error rate.
  CHECK(curve.points[0].rejection_rate == 0.0);
  CHECK(curve.points[0].error_rate == doctest::Approx(0.5));
  // theta above every confidence: all rejected, error defined as 0.
  CHECK(curve.points[1].rejection_rate == 1.0);
  CHECK(curve.points[1].error_rate == 0.0);
}

TEST_CASE("rejection curve: ties are accepted") {
  const std::vector<SampleRow> rows{row(-0.2, false), row(-0.2, true), row(-0.1, true)};
  const std::vector<double> thetas{-0.2};
  const RejectionCurve curve = rejection_curve(rows, &thetas);
  CHECK(curve.points[0].rejection_rate == 0.0);  // equality accepted
  CHECK(curve.points[0].error_rate == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("rejection curve matches a brute-force recomputation on random reports") {
  SplitMix64 rng(4242);
  for (int rep = 0; rep < 100; ++rep) {
    const size_t n = 1 + rng.below(40);
    std::vector<SampleRow> rows;
    for (size_t i = 0; i < n; ++i) {
      double conf = rng.bernoulli(0.1) ? kNegInf : rng.uniform(-3.0, 0.0);
      if (rng.bernoulli(0.3) && !rows.empty()) conf = rows.back().confidence;  // ties
      rows.push_back(row(conf, rng.bernoulli(0.6)));
    }
    const RejectionCurve curve = rejection_curve(rows, nullptr);

    // First point is the -inf boundary.
    REQUIRE(!curve.points.empty());
    CHECK(curve.points.front().threshold == kNegInf);
    CHECK(curve.points.front().rejection_rate == 0.0);

    double prev_rejection = -1.0;
    for (const CurvePoint& p : curve.points) {
      const CurvePoint naive = naive_point(rows, p.threshold);
      CHECK(p.rejection_rate == naive.rejection_rate);  // exact, same arithmetic
      CHECK(p.error_rate == naive.error_rate);
      CHECK(p.rejection_rate >= prev_rejection);  // non-decreasing in theta
      CHECK(p.rejection_rate >= 0.0);
      CHECK(p.rejection_rate <= 1.0);
      CHECK(p.error_rate >= 0.0);
      CHECK(p.error_rate <= 1.0);
      prev_rejection = p.rejection_rate;
    }
  }
  CHECK_THROWS_AS(rejection_curve({}, nullptr), DomainError);
}

TEST_CASE("eval CSV round trip") {
  EvalReport report;
  SampleRow a;
  a.id = 7;
  a.type = EntityType::street_address;
  a.hyp = "646 state st., apt 1";  // comma forces quoting
  a.ref = "646 state st.";
  a.confidence = -0.125;
  a.correct = false;
  a.parse_failure = false;
  SampleRow b;
  b.id = 8;
  b.type = EntityType::email;
  b.hyp = "quote\"inside";
  b.ref = "kin915@gmail.com";
  b.confidence = kNegInf;
  b.correct = false;
  b.parse_failure = true;
  report.rows = {a, b};

  const fs::path dir = fresh_dir("ctce_csv_roundtrip");
  const std::string path = (dir / "report.csv").string();
  write_eval_csv(path, report);
  const std::vector<SampleRow> rows = load_eval_rows(path);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].id == 7);
  CHECK(rows[0].hyp == a.hyp);
  CHECK(rows[0].confidence == doctest::Approx(-0.125));
  CHECK(rows[1].hyp == b.hyp);
  CHECK(rows[1].confidence == kNegInf);
  CHECK(rows[1].parse_failure);
  fs::remove_all(dir);
}

TEST_CASE("tiny training run: epochs, logs, determinism, evaluation totality") {
  SynthConfig synth = SynthConfig::defaults();
  synth.seed = 777;
  CorpusSpec spec;
  spec.types = {EntityType::last_name};
  spec.n_train = 32;
  spec.n_valid = 8;
  spec.n_test = 12;
  const fs::path dir = fresh_dir("ctce_train_smoke");
  const CorpusPaths paths = build_corpus(synth, spec, dir.string());

  TrainConfig cfg;
  cfg.train_path = paths.train;
  cfg.valid_path = paths.valid;
  cfg.config_path = paths.config;
  cfg.checkpoint_dir = (dir / "run1").string();
  cfg.epochs = 2;
  cfg.batch_size = 32;
  cfg.hidden = 16;  // keep the smoke test quick
  cfg.layers = 2;
  cfg.seed = 5;

  const TrainResult r1 = train(cfg);
  CHECK(r1.log.size() == 2);  // one line per epoch
  for (const EpochLog& e : r1.log) {
    CHECK(std::isfinite(e.train_loss));
    CHECK(e.skipped == 0);
  }

  // Re-run with the same seed: byte-identical checkpoint and log.
  TrainConfig cfg2 = cfg;
  cfg2.checkpoint_dir = (dir / "run2").string();
  const TrainResult r2 = train(cfg2);
  CHECK(read_file(r1.checkpoint_path) == read_file(r2.checkpoint_path));
  CHECK(read_file(r1.log_path) == read_file(r2.log_path));

  // Evaluate: total, deterministic, rows aligned with the dataset.
  const Checkpoint ckpt = load_checkpoint(r1.checkpoint_path);
  const LoadedCorpus test = load_corpus(paths.test, paths.config);
  EvalInputs inputs;
  inputs.extractor = &ckpt.model;
  const EvalReport e1 = evaluate(inputs, test.data, test.cfg, EvalMode::one_step);
  const EvalReport e2 = evaluate(inputs, test.data, test.cfg, EvalMode::one_step);
  CHECK(e1.rows.size() == test.data.samples.size());
  for (size_t i = 0; i < e1.rows.size(); ++i) {
    CHECK(e1.rows[i].id == test.data.samples[i].id);
    CHECK(e1.rows[i].hyp == e2.rows[i].hyp);
    CHECK(e1.rows[i].confidence == e2.rows[i].confidence);
  }
  CHECK(e1.overall.count == test.data.samples.size());
  CHECK(e1.overall.exact_match_acc >= 0.0);
  CHECK(e1.overall.exact_match_acc <= 1.0);
  CHECK(e1.overall.word_acc >= 0.0);
  CHECK(e1.overall.word_acc <= 1.0);
  CHECK(e1.overall.char_acc >= 0.0);
  CHECK(e1.overall.char_acc <= 1.0);

  // Cascade on reference transcripts is exact by the generator/ITN pairing,
  // and a perfect report has perfect character accuracy.
  EvalInputs oracle;
  oracle.oracle_transcripts = true;
  const EvalReport cascade = evaluate(oracle, test.data, test.cfg, EvalMode::two_step);
  CHECK(cascade.overall.exact_match_acc == doctest::Approx(1.0));
  CHECK(cascade.overall.char_acc == doctest::Approx(1.0));
  CHECK(cascade.overall.word_acc == doctest::Approx(1.0));

  fs::remove_all(dir);
}

TEST_CASE("training-size sweep: nested prefixes, soft monotonicity, full-size equivalence") {
  SynthConfig synth = SynthConfig::defaults();
  synth.seed = 424242;
  CorpusSpec spec;
  spec.types = {EntityType::last_name};
  spec.n_train = 600;
  spec.n_valid = 60;
  spec.n_test = 80;
  const fs::path dir = fresh_dir("ctce_sweep_test");
  const CorpusPaths paths = build_corpus(synth, spec, dir.string());

  TrainConfig cfg;
  cfg.train_path = paths.train;
  cfg.valid_path = paths.valid;
  cfg.config_path = paths.config;
  cfg.checkpoint_dir = (dir / "sweep").string();
  cfg.type_filter = EntityType::last_name;
  cfg.epochs = 8;
  cfg.hidden = 32;
  cfg.seed = 9;

  const LoadedCorpus test = load_corpus(paths.test, paths.config);
  const auto rows = training_size_sweep(cfg, {150, 600}, test.data);
  REQUIRE(rows.size() == 2);
  // Larger prefixes should not be much worse (soft monotonicity allowance).
  CHECK(rows[0].char_acc <= rows[1].char_acc + 0.05);
  for (const SweepRow& r : rows) {
    CHECK(r.char_acc >= r.word_acc);  // characters come before whole words
    CHECK(r.char_acc >= 0.0);
    CHECK(r.char_acc <= 1.0);
  }

  // The full-corpus sweep point is the same model path as a direct train +
  // evaluate, number for number.
  const Checkpoint full = load_checkpoint(rows[1].checkpoint_path);
  EvalInputs inputs;
  inputs.extractor = &full.model;
  const EvalReport direct = evaluate(inputs, test.data, test.cfg, EvalMode::one_step);
  CHECK(direct.overall.exact_match_acc == rows[1].exact_match_acc);
  CHECK(direct.overall.word_acc == rows[1].word_acc);
  CHECK(direct.overall.char_acc == rows[1].char_acc);
  fs::remove_all(dir);
}

TEST_CASE("summary text is shaped like a results table") {
  EvalReport report;
  report.mode = EvalMode::one_step;
  TypeMetrics m;
  m.count = 10;
  m.exact_match_acc = 0.9;
  m.word_acc = 0.9;
  m.char_acc = 0.99;
  report.per_type[EntityType::last_name] = m;
  report.overall = m;
  const std::string text = summary_text(report);
  CHECK(text.find("mode=one_step") != std::string::npos);
  CHECK(text.find("last_name") != std::string::npos);
  CHECK(text.find("overall") != std::string::npos);
  CHECK(text.find("0.9000") != std::string::npos);
}
