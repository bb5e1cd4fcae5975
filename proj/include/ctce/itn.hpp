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
#include <set>
#include <string>
#include <vector>

#include "ctce/entity.hpp"

namespace ctce {

/// Lowercase spoken-form word tokens, no punctuation.
using SpokenTranscript = std::vector<std::string>;

/// Rule tables for spoken-form -> written-form conversion, loaded from a
/// line-oriented text file (see data/itn_rules.txt for the grammar). The
/// same tables drive the synthetic-speech verbalizer, which is what keeps
/// generation and extraction mutually consistent.
struct ItnRules {
  std::vector<std::vector<std::string>> carrier_phrases;  // multi-word, strip
  std::set<std::string> fillers;                          // single word, strip
  std::set<std::string> connectors;        // "as", "like" ("in" may follow "as")
  std::map<std::string, int> digits;       // zero..nine, oh
  std::map<std::string, int> teens;        // ten..nineteen
  std::map<std::string, int> tens;         // twenty..ninety (+ "fourty")
  std::set<std::string> hundred_words;     // hundred (+ plural)
  std::map<std::string, int> ordinal_units;  // first..ninth
  std::map<std::string, int> ordinal_teens;  // tenth..nineteenth
  std::map<std::string, int> ordinal_tens;   // twentieth..ninetieth
  std::map<std::string, std::string> street_abbrev;  // street -> st.
  std::map<std::string, std::string> symbols;        // at -> @, dot -> .
  std::set<std::string> apartment_words;             // apartment, apt, unit
  std::vector<std::vector<std::string>> name_markers;  // "last name", "first name"
  std::map<char, std::vector<std::string>> expansion_words;  // letter -> "as in" words

  static ItnRules parse(const std::string& text);
  static ItnRules load(const std::string& path);
  /// Built-in copy of data/itn_rules.txt.
  static const ItnRules& defaults();
  static const std::string& defaults_text();

  bool is_number_word(const std::string& w) const;
  bool is_ordinal_word(const std::string& w) const;
};

struct ItnResult {
  bool ok = false;
  EntityRecord record;
  std::string error;
};

/// Rule-based inverse text normalization: spoken tokens for a known prompt
/// type -> one normalized entity. Total and deterministic; failure is a
/// value, never a throw. Applies, in order: carrier stripping, "X as in
/// WORD" reduction, spelled-letter concatenation, the number grammar,
/// ordinal suffixing, street-type abbreviation, email symbol mapping, and
/// spelled-over-said precedence for names.
ItnResult itn_extract(const SpokenTranscript& transcript, EntityType type,
                      const ItnRules& rules);

/// Spoken-number grammar used by street/apartment extraction: consumes the
/// longest prefix of number words and returns the concatenated digit groups
/// ("six forty six" -> "646", "forty one hundred twenty three" -> "4123").
/// Returns the number of tokens consumed (0 when the prefix is not a
/// number) through `consumed`.
std::string parse_number_group(const std::vector<std::string>& words, size_t start,
                               const ItnRules& rules, size_t* consumed);

/// Ordinal rendering: 23 -> "23rd", 112 -> "112th".
std::string ordinal_suffix(int value);

}  // namespace ctce
