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

#include <cstdint>
#include <string>
#include <vector>

#include "ctce/entity.hpp"
#include "ctce/itn.hpp"
#include "ctce/matrix.hpp"

namespace ctce {

/// Deterministic say-and-spell sample generator. Every draw is a pure
/// function of (config, entity type, id), so corpora are byte-reproducible
/// and features can be regenerated from a stored seed at load time.
struct SynthConfig {
  uint64_t seed = 20260101;

  // Pseudo-acoustics.
  int feature_dim = 16;
  // Per-character frame draw; a token's duration is the sum over its
  // characters, so long words take proportionally longer.
  int frames_per_char_min = 2;
  int frames_per_char_max = 6;
  int silence_min = 0;  // frames between tokens
  int silence_max = 3;
  double noise_sigma = 0.25;

  // Style mix for name-like entities; remainder of the two is say-only.
  // Say-only defaults to zero: a hash embedding of a whole word carries no
  // character information, so an unspelled name is unlearnable for both
  // the 1-step model and the cascade (and the conflicting signal drags
  // down say-then-spell spans). The style stays implemented for
  // experiments that want it.
  double p_spell_only = 0.5;
  double p_say_then_spell = 0.5;
  // Sample-level gates for "X as in WORD" expansions, then per-letter rate.
  double p_name_expansion = 0.35;
  double p_email_expansion = 0.7;
  double p_expansion_letter = 0.3;
  double p_carrier = 0.6;
  double p_filler = 0.2;
  double p_repeat = 0.01;        // spelled run said twice
  double p_said_mismatch = 0.15; // said form disagrees; spelled form is truth
  double novel_test_fraction = 0.3;

  std::vector<EntityType> entity_types{
      EntityType::first_name, EntityType::last_name, EntityType::full_name,
      EntityType::street_address, EntityType::email};

  // Lexicons.
  std::vector<std::string> first_names;
  std::vector<std::string> last_names;
  std::vector<std::string> street_words;   // word-style street names
  std::vector<std::string> street_types;   // abbreviatable type words
  std::vector<std::string> email_domains;  // written form, e.g. "gmail.com"

  static SynthConfig defaults();

  /// Canonical key=value serialization (the synth section of the config
  /// file); content hash is FNV-1a over these bytes.
  std::string serialize() const;
  uint64_t content_hash() const;
};

/// What each spoken token is doing in the utterance. Not persisted in
/// dataset files; re-derivable from (config, type, id) for diagnostics.
enum class TokenRole {
  carrier,
  filler,
  marker,
  letter,          // spelled character that lands in the entity
  digit_word,
  symbol_word,     // at / dot / dash / apostrophe
  said_word,       // whole-word rendition of a name
  expansion_connector,  // as / in / like
  expansion_word,       // the example word after the connector
  name_word,       // street-name word
  ordinal_word,
  street_type,
  apt_marker,
};

struct SynthSample {
  uint64_t id = 0;
  EntityType entity_type = EntityType::last_name;
  SpokenTranscript spoken_tokens;
  std::string target;   // tagged string, = render_entities({entity})
  EntityRecord entity;
  uint64_t seed = 0;    // effective seed; features derive from this alone
};

/// One generated sample. `novel` draws the entity outside the training
/// lexicon (character recombination for names, held-out words/ordinals for
/// streets). Infeasible draws (too few frames for the CTC target) are
/// regenerated with a derived fresh seed, so every emitted sample is
/// alignable. Pass `roles` to receive one role per spoken token, and
/// `attempts` to learn how many draws the sample took (1 = first draw was
/// feasible).
SynthSample generate_sample(const SynthConfig& cfg, EntityType type, uint64_t id,
                            bool novel = false, std::vector<TokenRole>* roles = nullptr,
                            int* attempts = nullptr);

struct FrameSpan {
  size_t token_index = 0;  // index into spoken_tokens; unused for silence
  size_t begin = 0;
  size_t count = 0;
  bool silence = false;
};

/// Deterministic pseudo-embedding of one spoken word's segment. A word is
/// a sequence of per-character segments, each a pure function of
/// (word, segment index, dim, seed): word-specific (segments share nothing
/// across words or with letter tokens, so an unseen word stays unreadable)
/// but temporally ordered the way real pronunciations are.
std::vector<double> lexeme_embedding(const std::string& word, size_t segment,
                                     int dim, uint64_t seed);

/// Frames for a sample: each token's segment embeddings, one per
/// character, each repeated for its drawn duration, plus i.i.d. Gaussian
/// noise; silence frames between tokens. Pure function of
/// (sample.seed, cfg).
FeatureSequence synthesize_features(const SynthSample& sample, const SynthConfig& cfg,
                                    std::vector<FrameSpan>* plan = nullptr);

/// Spoken transcript as a character string (tokens joined by single
/// spaces); the training target of the cascade's transcription stage.
std::string transcript_text(const SpokenTranscript& tokens);

struct CorpusSpec {
  std::vector<EntityType> types;  // empty -> cfg.entity_types
  size_t n_train = 5000;          // per type
  size_t n_valid = 0;             // 0 -> 10% of n_train
  size_t n_test = 500;            // per type
};

struct CorpusPaths {
  std::string train;
  std::string valid;
  std::string test;
  std::string config;
};

/// Writes train/valid/test JSONL files plus the serialized config next to
/// them. Ids are globally unique and split-disjoint; samples are ordered by
/// id, so output is byte-stable.
CorpusPaths build_corpus(const SynthConfig& cfg, const CorpusSpec& spec,
                         const std::string& out_dir);

}  // namespace ctce
