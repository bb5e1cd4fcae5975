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
#include <set>
#include <sstream>

#include "ctce/ctc.hpp"
#include "ctce/dataset.hpp"
#include "ctce/errors.hpp"
#include "ctce/synth.hpp"
#include "ctce/vocab.hpp"

using namespace ctce;

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("generation is a pure function of (config, type, id)") {
  const SynthConfig cfg = SynthConfig::defaults();
  for (EntityType type : kAllEntityTypes) {
    const SynthSample a = generate_sample(cfg, type, 17);
    const SynthSample b = generate_sample(cfg, type, 17);
    CHECK(a.spoken_tokens == b.spoken_tokens);
    CHECK(a.target == b.target);
    CHECK(a.entity == b.entity);
    CHECK(a.seed == b.seed);
    const FeatureSequence xa = synthesize_features(a, cfg);
    const FeatureSequence xb = synthesize_features(b, cfg);
    CHECK(xa.data == xb.data);
    // Different ids diverge.
    const SynthSample c = generate_sample(cfg, type, 18);
    CHECK(a.seed != c.seed);
  }
}

TEST_CASE("spell-only style with everything else off is the bare spelling") {
  SynthConfig cfg = SynthConfig::defaults();
  cfg.p_spell_only = 1.0;
  cfg.p_say_then_spell = 0.0;
  cfg.p_carrier = 0.0;
  cfg.p_filler = 0.0;
  cfg.p_name_expansion = 0.0;
  cfg.p_repeat = 0.0;
  for (uint64_t id = 0; id < 50; ++id) {
    const SynthSample s = generate_sample(cfg, EntityType::last_name, id);
    std::string spelled;
    for (const std::string& tok : s.spoken_tokens) {
      if (tok == "apostrophe") {
        spelled += '\'';
      } else if (tok == "dash") {
        spelled += '-';
      } else {
        REQUIRE(tok.size() == 1);
        spelled += tok;
      }
    }
    CHECK(spelled == s.entity.value);
    CHECK(s.target == "B_LN " + s.entity.value + " E_LN");
  }
}

TEST_CASE("email samples carry the say-and-spell machinery") {
  SynthConfig cfg = SynthConfig::defaults();
  cfg.p_email_expansion = 1.0;
  size_t with_connector = 0;
  for (uint64_t id = 0; id < 40; ++id) {
    const SynthSample s = generate_sample(cfg, EntityType::email, id);
    bool has_at = false, has_dot = false, has_connector = false;
    for (const std::string& tok : s.spoken_tokens) {
      if (tok == "at") has_at = true;
      if (tok == "dot") has_dot = true;
      if (tok == "as" || tok == "like") has_connector = true;
    }
    CHECK(has_at);
    CHECK(has_dot);
    if (has_connector) ++with_connector;
    CHECK(s.target.substr(0, 6) == "B_EML ");
  }
  CHECK(with_connector == 40);  // the gate forces at least one expansion
}

TEST_CASE("features: zero noise emits the token's segment rows in order") {
  SynthConfig cfg = SynthConfig::defaults();
  cfg.noise_sigma = 0.0;
  const SynthSample s = generate_sample(cfg, EntityType::last_name, 5);
  std::vector<FrameSpan> plan;
  const FeatureSequence x = synthesize_features(s, cfg, &plan);

  size_t planned = 0;
  for (const FrameSpan& span : plan) {
    planned += span.count;
    if (span.silence) {
      const auto sil = lexeme_embedding("<sil>", 0, cfg.feature_dim, cfg.seed);
      for (size_t f = 0; f < span.count; ++f) {
        for (size_t c = 0; c < x.cols; ++c) CHECK(x.at(span.begin + f, c) == sil[c]);
      }
      continue;
    }
    // Rows walk the word's per-character segments in order, each repeated
    // at least frames_per_char_min times.
    const std::string& word = s.spoken_tokens[span.token_index];
    size_t segment = 0;
    size_t run = 0;
    auto emb = lexeme_embedding(word, 0, cfg.feature_dim, cfg.seed);
    for (size_t f = 0; f < span.count; ++f) {
      const double* row = x.row(span.begin + f);
      bool matches = true;
      for (size_t c = 0; c < x.cols; ++c) {
        if (row[c] != emb[c]) matches = false;
      }
      if (!matches) {
        CHECK(run >= static_cast<size_t>(cfg.frames_per_char_min));
        ++segment;
        REQUIRE(segment < word.size());
        emb = lexeme_embedding(word, segment, cfg.feature_dim, cfg.seed);
        run = 0;
        for (size_t c = 0; c < x.cols; ++c) CHECK(row[c] == emb[c]);
      }
      ++run;
    }
    CHECK(segment == word.size() - 1);  // every character got its segment
  }
  CHECK(planned == x.rows);  // T = sum of durations + silences exactly
}

TEST_CASE("distinct (word, segment) pairs get distinct embeddings") {
  const SynthConfig cfg = SynthConfig::defaults();
  std::set<std::vector<double>> seen;
  for (const std::string& w : cfg.last_names) {
    for (size_t s = 0; s < w.size(); ++s) {
      CHECK(seen.insert(lexeme_embedding(w, s, cfg.feature_dim, cfg.seed)).second);
    }
  }
  CHECK(seen.insert(lexeme_embedding("<sil>", 0, cfg.feature_dim, cfg.seed)).second);
  // Letter tokens share nothing with same-letter word segments.
  CHECK(lexeme_embedding("k", 0, cfg.feature_dim, cfg.seed) !=
        lexeme_embedding("king", 0, cfg.feature_dim, cfg.seed));
}

TEST_CASE("every emitted sample is CTC-feasible for both target modes") {
  const SynthConfig cfg = SynthConfig::defaults();
  const Vocabulary& vocab = Vocabulary::standard();
  for (EntityType type : kAllEntityTypes) {
    for (uint64_t id = 0; id < 400; ++id) {
      const SynthSample s = generate_sample(cfg, type, id, (id % 4) == 0);
      const FeatureSequence x = synthesize_features(s, cfg);
      CHECK(x.rows >= ctc_min_frames(vocab.encode_tagged(s.target)));
      CHECK(x.rows >=
            ctc_min_frames(vocab.encode_tagged(transcript_text(s.spoken_tokens))));
    }
  }
}

TEST_CASE("raw draws are feasible at the default config 99.9% of the time") {
  const SynthConfig cfg = SynthConfig::defaults();
  uint64_t draws = 0, samples = 0;
  for (EntityType type : kAllEntityTypes) {
    for (uint64_t id = 0; id < 20000; ++id) {
      int attempts = 0;
      (void)generate_sample(cfg, type, id, (id % 10) < 3, nullptr, &attempts);
      draws += static_cast<uint64_t>(attempts);
      ++samples;
    }
  }
  const double infeasible_rate =
      static_cast<double>(draws - samples) / static_cast<double>(draws);
  CAPTURE(infeasible_rate);
  CHECK(draws >= 100000);
  CHECK(infeasible_rate <= 0.001);
}

TEST_CASE("label consistency: the rule stage inverts the generator") {
  const SynthConfig cfg = SynthConfig::defaults();
  const ItnRules& rules = ItnRules::defaults();
  for (EntityType type : kAllEntityTypes) {
    for (uint64_t id = 0; id < 800; ++id) {
      const bool novel = (id % 3) == 0;
      const SynthSample s = generate_sample(cfg, type, id, novel);
      const ItnResult r = itn_extract(s.spoken_tokens, type, rules);
      CAPTURE(transcript_text(s.spoken_tokens));
      CAPTURE(s.entity.flat());
      REQUIRE(r.ok);
      CHECK(r.record == s.entity);
    }
  }
}

TEST_CASE("spelled and said forms genuinely disagree in mismatch samples") {
  SynthConfig cfg = SynthConfig::defaults();
  cfg.p_say_then_spell = 1.0;
  cfg.p_spell_only = 0.0;
  cfg.p_said_mismatch = 1.0;
  cfg.p_carrier = 0.0;
  cfg.p_filler = 0.0;
  size_t disagreements = 0;
  for (uint64_t id = 0; id < 60; ++id) {
    const SynthSample s = generate_sample(cfg, EntityType::last_name, id);
    // First token is the said form.
    if (s.spoken_tokens[0] != s.entity.value) ++disagreements;
    const ItnResult r = itn_extract(s.spoken_tokens, EntityType::last_name, ItnRules::defaults());
    REQUIRE(r.ok);
    CHECK(r.record == s.entity);  // spelled form wins
  }
  CHECK(disagreements > 40);  // mutation must actually change the word
}

TEST_CASE("target equals render_entities of the entity") {
  const SynthConfig cfg = SynthConfig::defaults();
  for (EntityType type : kAllEntityTypes) {
    for (uint64_t id = 0; id < 100; ++id) {
      const SynthSample s = generate_sample(cfg, type, id);
      CHECK(s.target == render_entities({s.entity}));
    }
  }
}

TEST_CASE("build_corpus writes disjoint, deterministic splits") {
  SynthConfig cfg = SynthConfig::defaults();
  CorpusSpec spec;
  spec.types = {EntityType::last_name, EntityType::email};
  spec.n_train = 40;
  spec.n_valid = 0;  // 10% default
  spec.n_test = 10;

  const fs::path dir1 = fresh_dir("ctce_corpus_a");
  const fs::path dir2 = fresh_dir("ctce_corpus_b");
  const CorpusPaths p1 = build_corpus(cfg, spec, dir1.string());
  const CorpusPaths p2 = build_corpus(cfg, spec, dir2.string());

  CHECK(read_file(p1.train) == read_file(p2.train));
  CHECK(read_file(p1.valid) == read_file(p2.valid));
  CHECK(read_file(p1.test) == read_file(p2.test));
  CHECK(read_file(p1.config) == read_file(p2.config));

  const Dataset train = load_dataset(p1.train);
  const Dataset valid = load_dataset(p1.valid);
  const Dataset test = load_dataset(p1.test);
  CHECK(train.samples.size() == 80);  // 40 per type
  CHECK(valid.samples.size() == 8);   // 10% of train per type
  CHECK(test.samples.size() == 20);

  std::set<uint64_t> ids;
  for (const Dataset* d : {&train, &valid, &test}) {
    for (const SynthSample& s : d->samples) {
      CHECK(ids.insert(s.id).second);  // no id in two splits
    }
  }

  // Loader round trip preserves everything.
  const LoadedCorpus corpus = load_corpus(p1.train, p1.config);
  CHECK(corpus.cfg.content_hash() == cfg.content_hash());
  for (size_t i = 0; i < train.samples.size(); ++i) {
    CHECK(train.samples[i].spoken_tokens == corpus.data.samples[i].spoken_tokens);
    CHECK(train.samples[i].entity == corpus.data.samples[i].entity);
    CHECK(train.samples[i].seed == corpus.data.samples[i].seed);
  }

  // A corpus forged with a different config is refused.
  SynthConfig other = cfg;
  other.seed += 1;
  write_synth_config((dir1 / "synth.toml").string(), other);
  CHECK_THROWS_AS(load_corpus(p1.train, p1.config), MismatchError);

  fs::remove_all(dir1);
  fs::remove_all(dir2);
}

TEST_CASE("novel test entities leave the training lexicon") {
  SynthConfig cfg = SynthConfig::defaults();
  size_t novel_names = 0;
  for (uint64_t id = 0; id < 120; ++id) {
    const SynthSample s = generate_sample(cfg, EntityType::last_name, id, true);
    bool in_lexicon = false;
    for (const std::string& n : cfg.last_names) {
      if (n == s.entity.value) in_lexicon = true;
    }
    if (!in_lexicon) ++novel_names;
  }
  CHECK(novel_names > 100);
}

TEST_CASE("config serialization round trips through the file format") {
  SynthConfig cfg = SynthConfig::defaults();
  cfg.noise_sigma = 0.12345678901234567;
  cfg.seed = 0xDEADBEEFCAFEF00DULL;
  const fs::path dir = fresh_dir("ctce_cfg_roundtrip");
  const std::string path = (dir / "synth.toml").string();
  write_synth_config(path, cfg);
  const SynthConfig back = load_synth_config(path);
  CHECK(back.serialize() == cfg.serialize());
  CHECK(back.content_hash() == cfg.content_hash());
  fs::remove_all(dir);
}

TEST_CASE("grapheme coverage across default training targets") {
  SynthConfig cfg = SynthConfig::defaults();
  const Vocabulary& vocab = Vocabulary::standard();
  std::map<EntityType, std::set<char>> seen;
  for (EntityType type : kAllEntityTypes) {
    for (uint64_t id = 0; id < 1500; ++id) {
      const SynthSample s = generate_sample(cfg, type, id);
      for (char c : s.entity.flat()) seen[type].insert(c);
    }
  }
  // Union over types covers every grapheme in the vocabulary.
  std::set<char> all;
  for (const auto& [type, chars] : seen) all.insert(chars.begin(), chars.end());
  for (const std::string& label : vocab.labels()) {
    if (label.size() == 1) {
      CAPTURE(label);
      CHECK(all.count(label[0]) == 1);
    }
  }
  // Per type, the graphemes its grammar can produce all occur.
  const std::string letters = "abcdefghijklmnopqrstuvwxyz";
  for (char c : letters) {
    CHECK(seen[EntityType::last_name].count(c) == 1);
    CHECK(seen[EntityType::full_name].count(c) == 1);
  }
  for (char c : std::string("0123456789")) {
    CHECK(seen[EntityType::street_address].count(c) == 1);
    CHECK(seen[EntityType::email].count(c) == 1);
  }
  CHECK(seen[EntityType::email].count('@') == 1);
  CHECK(seen[EntityType::email].count('.') == 1);
  CHECK(seen[EntityType::street_address].count('.') == 1);
  CHECK(seen[EntityType::street_address].count(' ') == 1);
  CHECK(seen[EntityType::last_name].count('\'') == 1);
  CHECK(seen[EntityType::last_name].count('-') == 1);
}
