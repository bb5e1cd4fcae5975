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

#include "ctce/vocab.hpp"

#include <fstream>

#include "ctce/errors.hpp"
#include "ctce/rng.hpp"

namespace ctce {

namespace {

const char* kTags[] = {"B_FN", "E_FN", "B_LN",   "E_LN",   "B_STRT",
                       "E_STRT", "B_APT", "E_APT", "B_EML", "E_EML"};

std::vector<std::string> standard_labels() {
  std::vector<std::string> labels;
  for (char c = 'a'; c <= 'z'; ++c) labels.emplace_back(1, c);
  for (char c = '0'; c <= '9'; ++c) labels.emplace_back(1, c);
  labels.emplace_back(1, ' ');
  labels.emplace_back(1, '.');
  labels.emplace_back(1, '@');
  labels.emplace_back(1, '\'');
  labels.emplace_back(1, '-');
  for (const char* tag : kTags) labels.emplace_back(tag);
  return labels;
}

}  // namespace

const Vocabulary& Vocabulary::standard() {
  static const Vocabulary vocab(standard_labels());
  return vocab;
}

Vocabulary::Vocabulary(std::vector<std::string> labels) : labels_(std::move(labels)) {
  std::string joined;
  for (size_t i = 0; i < labels_.size(); ++i) {
    const std::string& l = labels_[i];
    if (l.empty()) throw ConfigError("vocabulary: empty label");
    if (!index_.emplace(l, static_cast<Label>(i)).second) {
      throw ConfigError("vocabulary: duplicate label '" + l + "'");
    }
    joined += l;
    joined += '\n';
  }
  hash_ = fnv1a64(joined);
}

bool Vocabulary::is_tag(Label l) const {
  return l >= 0 && static_cast<size_t>(l) < labels_.size() && labels_[static_cast<size_t>(l)].size() > 1;
}

Label Vocabulary::label_index(const std::string& label) const {
  auto it = index_.find(label);
  return it == index_.end() ? -1 : it->second;
}

const std::string& Vocabulary::label_name(Label l) const {
  if (l < 0 || static_cast<size_t>(l) >= labels_.size()) {
    throw DecodingError("vocabulary: token index " + std::to_string(l) + " out of range");
  }
  return labels_[static_cast<size_t>(l)];
}

TokenSequence Vocabulary::encode_tagged(const std::string& text) const {
  TokenSequence tokens;
  // Atoms are maximal space-free runs; a space between two non-tag atoms is
  // payload, a space adjacent to a tag is a delimiter and is consumed.
  size_t pos = 0;
  bool prev_was_tag = true;  // swallows nothing at the very start
  bool pending_space = false;
  while (pos < text.size()) {
    size_t end = text.find(' ', pos);
    if (end == std::string::npos) end = text.size();
    const std::string atom = text.substr(pos, end - pos);
    const Label tag = atom.size() > 1 ? label_index(atom) : -1;
    const bool is_tag_atom = tag >= 0 && is_tag(tag);
    if (is_tag_atom) {
      tokens.push_back(tag);
    } else {
      if (pending_space && !prev_was_tag) {
        tokens.push_back(label_index(" "));
      }
      for (size_t i = 0; i < atom.size(); ++i) {
        const Label l = label_index(std::string(1, atom[i]));
        if (l < 0) {
          throw EncodingError("encode: unknown character '" + std::string(1, atom[i]) +
                              "' at offset " + std::to_string(pos + i));
        }
        tokens.push_back(l);
      }
    }
    prev_was_tag = is_tag_atom;
    pending_space = end < text.size();
    pos = end + 1;
  }
  return tokens;
}

std::string Vocabulary::decode_tokens(const TokenSequence& tokens) const {
  std::string out;
  bool prev_was_tag = false;
  bool first = true;
  for (Label l : tokens) {
    const std::string& name = label_name(l);
    const bool tag = name.size() > 1;
    if ((tag || prev_was_tag) && !first) out += ' ';
    out += name;
    prev_was_tag = tag;
    first = false;
  }
  return out;
}

void Vocabulary::dump(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("vocabulary: cannot open " + path);
  for (const std::string& l : labels_) out << l << '\n';
  if (!out.flush()) throw IoError("vocabulary: write failed for " + path);
}

}  // namespace ctce
