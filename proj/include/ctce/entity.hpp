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

#include <optional>
#include <string>
#include <vector>

#include "ctce/vocab.hpp"

namespace ctce {

enum class EntityType { first_name, last_name, full_name, street_address, email };

const char* entity_type_name(EntityType t);
std::optional<EntityType> entity_type_from_name(const std::string& name);
inline constexpr EntityType kAllEntityTypes[] = {
    EntityType::first_name, EntityType::last_name, EntityType::full_name,
    EntityType::street_address, EntityType::email};

/// One extracted entity. Slot layout by type:
///   first_name / last_name / email -> {value}
///   full_name                      -> {first, last}
///   street_address                 -> {street, apartment?}
/// Slot values are lowercase grapheme-set strings.
struct EntityRecord {
  EntityType type = EntityType::last_name;
  std::string value;      // single-slot types
  std::string first;      // full_name
  std::string last;       // full_name
  std::string street;     // street_address
  std::string apartment;  // street_address, may be empty

  bool operator==(const EntityRecord&) const = default;

  /// Slot values joined in canonical order; the unit of character-level
  /// scoring.
  std::string flat() const;
  /// Slot values as word-level scoring units (full_name contributes two).
  std::vector<std::string> slot_units() const;
};

struct ParseResult {
  std::vector<EntityRecord> records;
  bool parse_failure = false;
  std::string failure_reason;
};

/// Extract well-formed begin..end spans from decoded model output. Never
/// throws: unmatched, crossed, or mistyped tags and empty payloads set the
/// parse_failure flag instead of guessing. A B_FN span and a B_LN span
/// compose into one full_name record; B_STRT and B_APT compose into one
/// street_address record.
ParseResult parse_entities(const Vocabulary& vocab, const TokenSequence& tokens);
ParseResult parse_entities(const Vocabulary& vocab, const std::string& tagged);

/// Records -> canonical tagged string (first before last, street before
/// apartment). Inverse of parse_entities on its image. Throws EncodingError
/// when a slot holds characters outside the grapheme set.
std::string render_entities(const std::vector<EntityRecord>& records);

/// Levenshtein edit distance over bytes.
size_t levenshtein(const std::string& a, const std::string& b);

}  // namespace ctce
