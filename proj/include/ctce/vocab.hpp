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
#include <unordered_map>
#include <vector>

#include "ctce/ctc.hpp"

namespace ctce {

/// Ordered label set L: single-character graphemes plus multi-character
/// entity boundary tags. The blank index is |L| (one past the last label)
/// and never appears in the label list itself.
class Vocabulary {
 public:
  /// The shared character-level vocabulary used by every model in this
  /// project: a-z, 0-9, space, '.', '@', apostrophe, hyphen, then the
  /// begin/end tags for all five entity types.
  static const Vocabulary& standard();

  explicit Vocabulary(std::vector<std::string> labels);

  const std::vector<std::string>& labels() const { return labels_; }
  size_t alphabet_size() const { return labels_.size(); }        // |L|
  size_t output_size() const { return labels_.size() + 1; }      // |L| + 1
  Label blank() const { return static_cast<Label>(labels_.size()); }

  /// FNV-1a over newline-joined labels; stored in checkpoints and checked
  /// at load so a model is never paired with a foreign label order.
  uint64_t content_hash() const { return hash_; }

  bool is_tag(Label l) const;
  Label label_index(const std::string& label) const;  // -1 when absent
  const std::string& label_name(Label l) const;       // throws DecodingError

  /// Tagged text -> tokens. Tags map to single tokens and consume one
  /// delimiting space on each side; every other character maps to its
  /// grapheme token (interior payload spaces included). Throws
  /// EncodingError naming the character and offset on unknown input.
  TokenSequence encode_tagged(const std::string& text) const;

  /// Tokens -> tagged text. No tag-balance validation here: raw model
  /// output is rendered verbatim. Throws DecodingError on a bad index.
  std::string decode_tokens(const TokenSequence& tokens) const;

  /// One label per line; the blank is implied last and not written.
  void dump(const std::string& path) const;

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, Label> index_;
  uint64_t hash_ = 0;
};

}  // namespace ctce
