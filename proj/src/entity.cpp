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

#include "ctce/entity.hpp"

#include <algorithm>
#include <array>

#include "ctce/errors.hpp"

namespace ctce {

const char* entity_type_name(EntityType t) {
  switch (t) {
    case EntityType::first_name: return "first_name";
    case EntityType::last_name: return "last_name";
    case EntityType::full_name: return "full_name";
    case EntityType::street_address: return "street_address";
    case EntityType::email: return "email";
  }
  return "unknown";
}

std::optional<EntityType> entity_type_from_name(const std::string& name) {
  for (EntityType t : kAllEntityTypes) {
    if (name == entity_type_name(t)) return t;
  }
  return std::nullopt;
}

std::string EntityRecord::flat() const {
  switch (type) {
    case EntityType::full_name: return first + " " + last;
    case EntityType::street_address:
      return apartment.empty() ? street : street + " " + apartment;
    default: return value;
  }
}

std::vector<std::string> EntityRecord::slot_units() const {
  switch (type) {
    case EntityType::full_name: return {first, last};
    case EntityType::street_address:
      if (!apartment.empty()) return {street, apartment};
      return {street};
    default: return {value};
  }
}

namespace {

struct TagInfo {
  const char* begin;
  const char* end;
};

// Span tag pairs in canonical render order per slot kind.
constexpr TagInfo kFirstTag{"B_FN", "E_FN"};
constexpr TagInfo kLastTag{"B_LN", "E_LN"};
constexpr TagInfo kStreetTag{"B_STRT", "E_STRT"};
constexpr TagInfo kAptTag{"B_APT", "E_APT"};
constexpr TagInfo kEmailTag{"B_EML", "E_EML"};

bool is_begin_tag(const std::string& name) { return name.size() > 1 && name[0] == 'B'; }

std::string matching_end(const std::string& begin_name) {
  return "E" + begin_name.substr(1);
}

void append_span(std::string& out, const TagInfo& tag, const std::string& payload) {
  if (!out.empty()) out += ' ';
  out += tag.begin;
  out += ' ';
  out += payload;
  out += ' ';
  out += tag.end;
}

void check_payload(const Vocabulary& vocab, const std::string& payload) {
  if (payload.empty()) throw EncodingError("render: empty slot value");
  if (payload.front() == ' ' || payload.back() == ' ') {
    throw EncodingError("render: slot value has leading/trailing space");
  }
  for (char c : payload) {
    Label l = vocab.label_index(std::string(1, c));
    if (l < 0 || vocab.is_tag(l)) {
      throw EncodingError(std::string("render: character '") + c + "' not in grapheme set");
    }
  }
}

}  // namespace

ParseResult parse_entities(const Vocabulary& vocab, const TokenSequence& tokens) {
  ParseResult result;
  struct Span {
    std::string begin_name;
    std::string payload;
  };
  std::vector<Span> spans;

  size_t i = 0;
  while (i < tokens.size()) {
    const Label l = tokens[i];
    if (l < 0 || static_cast<size_t>(l) >= vocab.output_size()) {
      result.parse_failure = true;
      result.failure_reason = "token out of range";
      return result;
    }
    if (l == vocab.blank() || !vocab.is_tag(l)) {
      // Stray content outside spans carries no entity information; skip it.
      ++i;
      continue;
    }
    const std::string& name = vocab.label_name(l);
    if (!is_begin_tag(name)) {
      result.parse_failure = true;
      result.failure_reason = "unmatched end tag " + name;
      return result;
    }
    const std::string want_end = matching_end(name);
    std::string payload;
    ++i;
    bool closed = false;
    for (; i < tokens.size(); ++i) {
      const Label inner = tokens[i];
      if (inner < 0 || static_cast<size_t>(inner) >= vocab.output_size()) {
        result.parse_failure = true;
        result.failure_reason = "token out of range";
        return result;
      }
      if (inner == vocab.blank()) continue;
      if (vocab.is_tag(inner)) {
        if (vocab.label_name(inner) == want_end) {
          closed = true;
          ++i;
        }
        break;  // any other tag inside a span is a crossing
      }
      payload += vocab.label_name(inner);
    }
    if (!closed) {
      result.parse_failure = true;
      result.failure_reason = "unmatched begin tag " + name;
      return result;
    }
    // Trim delimiter spaces that greedy decoding sometimes leaves behind.
    while (!payload.empty() && payload.front() == ' ') payload.erase(payload.begin());
    while (!payload.empty() && payload.back() == ' ') payload.pop_back();
    if (payload.empty()) {
      result.parse_failure = true;
      result.failure_reason = "empty span " + name;
      return result;
    }
    spans.push_back({name, payload});
  }

  // Compose records. A first+last pair folds into one full_name; street and
  // apartment fold into one street_address.
  std::optional<std::string> first, last, street, apartment;
  for (const Span& s : spans) {
    auto assign = [&](std::optional<std::string>& slot) {
      if (slot.has_value()) {
        result.parse_failure = true;
        result.failure_reason = "duplicate span " + s.begin_name;
        return false;
      }
      slot = s.payload;
      return true;
    };
    if (s.begin_name == kFirstTag.begin) {
      if (!assign(first)) return result;
    } else if (s.begin_name == kLastTag.begin) {
      if (!assign(last)) return result;
    } else if (s.begin_name == kStreetTag.begin) {
      if (!assign(street)) return result;
    } else if (s.begin_name == kAptTag.begin) {
      if (!assign(apartment)) return result;
    } else if (s.begin_name == kEmailTag.begin) {
      EntityRecord r;
      r.type = EntityType::email;
      r.value = s.payload;
      result.records.push_back(std::move(r));
    }
  }
  if (first && last) {
    EntityRecord r;
    r.type = EntityType::full_name;
    r.first = *first;
    r.last = *last;
    result.records.push_back(std::move(r));
  } else if (first) {
    EntityRecord r;
    r.type = EntityType::first_name;
    r.value = *first;
    result.records.push_back(std::move(r));
  } else if (last) {
    EntityRecord r;
    r.type = EntityType::last_name;
    r.value = *last;
    result.records.push_back(std::move(r));
  }
  if (street || apartment) {
    EntityRecord r;
    r.type = EntityType::street_address;
    r.street = street.value_or("");
    r.apartment = apartment.value_or("");
    if (r.street.empty()) {
      // Apartment with no street is not a usable address.
      result.parse_failure = true;
      result.failure_reason = "apartment span without street span";
      return result;
    }
    result.records.push_back(std::move(r));
  }
  return result;
}

ParseResult parse_entities(const Vocabulary& vocab, const std::string& tagged) {
  TokenSequence tokens;
  try {
    tokens = vocab.encode_tagged(tagged);
  } catch (const EncodingError& e) {
    ParseResult r;
    r.parse_failure = true;
    r.failure_reason = e.what();
    return r;
  }
  return parse_entities(vocab, tokens);
}

std::string render_entities(const std::vector<EntityRecord>& records) {
  const Vocabulary& vocab = Vocabulary::standard();
  std::string out;
  for (const EntityRecord& r : records) {
    switch (r.type) {
      case EntityType::first_name:
        check_payload(vocab, r.value);
        append_span(out, kFirstTag, r.value);
        break;
      case EntityType::last_name:
        check_payload(vocab, r.value);
        append_span(out, kLastTag, r.value);
        break;
      case EntityType::full_name:
        check_payload(vocab, r.first);
        check_payload(vocab, r.last);
        append_span(out, kFirstTag, r.first);
        append_span(out, kLastTag, r.last);
        break;
      case EntityType::street_address:
        check_payload(vocab, r.street);
        append_span(out, kStreetTag, r.street);
        if (!r.apartment.empty()) {
          check_payload(vocab, r.apartment);
          append_span(out, kAptTag, r.apartment);
        }
        break;
      case EntityType::email:
        check_payload(vocab, r.value);
        append_span(out, kEmailTag, r.value);
        break;
    }
  }
  return out;
}

size_t levenshtein(const std::string& a, const std::string& b) {
  const size_t n = a.size();
  const size_t m = b.size();
  if (n == 0) return m;
  if (m == 0) return n;
  std::vector<size_t> prev(m + 1), cur(m + 1);
  for (size_t j = 0; j <= m; ++j) prev[j] = j;
  for (size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (size_t j = 1; j <= m; ++j) {
      const size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

}  // namespace ctce
