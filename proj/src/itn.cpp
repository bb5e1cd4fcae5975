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

// Rule-based inverse text normalization: the text-side stage of the 2-step
// cascade. The number grammar reads house numbers as concatenated groups
// ("six forty six" -> 646) and resolves the grouped-vs-hundreds ambiguity
// in favor of a street-number + ordinal-street reading, so
// "forty one hundred twenty third street" comes out as "41 123rd street".

#include "ctce/itn.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ctce/errors.hpp"

namespace ctce {

extern const char* kDefaultItnRulesText;  // generated from data/itn_rules.txt

namespace {

std::vector<std::string> split_words(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

bool is_single_letter(const std::string& w) {
  return w.size() == 1 && w[0] >= 'a' && w[0] <= 'z';
}

}  // namespace

ItnRules ItnRules::parse(const std::string& text) {
  ItnRules rules;
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const std::vector<std::string> w = split_words(line);
    if (w.empty()) continue;
    auto need = [&](size_t n) {
      if (w.size() < n + 1) {
        throw ConfigError("itn rules line " + std::to_string(lineno) + ": expected " +
                          std::to_string(n) + " arguments");
      }
    };
    const std::string& kind = w[0];
    if (kind == "carrier") {
      need(1);
      rules.carrier_phrases.emplace_back(w.begin() + 1, w.end());
    } else if (kind == "filler") {
      need(1);
      rules.fillers.insert(w[1]);
    } else if (kind == "connector") {
      need(1);
      rules.connectors.insert(w[1]);
    } else if (kind == "digit") {
      need(2);
      rules.digits[w[1]] = std::stoi(w[2]);
    } else if (kind == "teen") {
      need(2);
      rules.teens[w[1]] = std::stoi(w[2]);
    } else if (kind == "tens") {
      need(2);
      rules.tens[w[1]] = std::stoi(w[2]);
    } else if (kind == "hundred") {
      need(1);
      rules.hundred_words.insert(w[1]);
    } else if (kind == "ordunit") {
      need(2);
      rules.ordinal_units[w[1]] = std::stoi(w[2]);
    } else if (kind == "ordteen") {
      need(2);
      rules.ordinal_teens[w[1]] = std::stoi(w[2]);
    } else if (kind == "ordtens") {
      need(2);
      rules.ordinal_tens[w[1]] = std::stoi(w[2]);
    } else if (kind == "abbrev") {
      need(2);
      rules.street_abbrev[w[1]] = w[2];
    } else if (kind == "symbol") {
      need(2);
      rules.symbols[w[1]] = w[2];
    } else if (kind == "apt") {
      need(1);
      rules.apartment_words.insert(w[1]);
    } else if (kind == "marker") {
      need(1);
      rules.name_markers.emplace_back(w.begin() + 1, w.end());
    } else if (kind == "letterword") {
      need(2);
      if (!is_single_letter(w[1])) {
        throw ConfigError("itn rules line " + std::to_string(lineno) + ": bad letter");
      }
      auto& list = rules.expansion_words[w[1][0]];
      list.insert(list.end(), w.begin() + 2, w.end());
    } else {
      throw ConfigError("itn rules line " + std::to_string(lineno) + ": unknown kind '" +
                        kind + "'");
    }
  }
  // Longest carrier first so "my name is" beats "name is".
  std::stable_sort(rules.carrier_phrases.begin(), rules.carrier_phrases.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  std::stable_sort(rules.name_markers.begin(), rules.name_markers.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  return rules;
}

ItnRules ItnRules::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("itn rules: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const std::string& ItnRules::defaults_text() {
  static const std::string text = kDefaultItnRulesText;
  return text;
}

const ItnRules& ItnRules::defaults() {
  static const ItnRules rules = parse(defaults_text());
  return rules;
}

bool ItnRules::is_number_word(const std::string& w) const {
  return digits.count(w) || teens.count(w) || tens.count(w) || hundred_words.count(w);
}

bool ItnRules::is_ordinal_word(const std::string& w) const {
  return ordinal_units.count(w) || ordinal_teens.count(w) || ordinal_tens.count(w);
}

std::string ordinal_suffix(int value) {
  const int mod100 = value % 100;
  const int mod10 = value % 10;
  std::string suffix = "th";
  if (mod100 < 11 || mod100 > 13) {
    if (mod10 == 1) suffix = "st";
    else if (mod10 == 2) suffix = "nd";
    else if (mod10 == 3) suffix = "rd";
  }
  return std::to_string(value) + suffix;
}

namespace {

// Sub-hundred cardinal starting at `i`: digit 1-9, teen, or tens(+unit).
// Returns value through `value`, tokens consumed as return; 0 if no match.
size_t parse_sub_hundred(const std::vector<std::string>& w, size_t i, const ItnRules& r,
                         int* value) {
  if (i >= w.size()) return 0;
  if (auto it = r.teens.find(w[i]); it != r.teens.end()) {
    *value = it->second;
    return 1;
  }
  if (auto it = r.tens.find(w[i]); it != r.tens.end()) {
    int v = it->second;
    if (i + 1 < w.size()) {
      if (auto d = r.digits.find(w[i + 1]); d != r.digits.end() && d->second >= 1) {
        *value = v + d->second;
        return 2;
      }
    }
    *value = v;
    return 1;
  }
  if (auto it = r.digits.find(w[i]); it != r.digits.end() && it->second >= 1) {
    *value = it->second;
    return 1;
  }
  return 0;
}

}  // namespace

std::string parse_number_group(const std::vector<std::string>& words, size_t start,
                               const ItnRules& rules, size_t* consumed) {
  std::string out;
  size_t i = start;
  while (i < words.size()) {
    // Zero/oh never opens a multi-word group; emit and move on.
    if (auto d = rules.digits.find(words[i]); d != rules.digits.end() && d->second == 0) {
      out += '0';
      ++i;
      continue;
    }
    int v = 0;
    const size_t used = parse_sub_hundred(words, i, rules, &v);
    if (used == 0) break;
    size_t j = i + used;
    if (j < words.size() && rules.hundred_words.count(words[j])) {
      // "X hundred (Y)" composes arithmetically.
      ++j;
      int sub = 0;
      const size_t sub_used = parse_sub_hundred(words, j, rules, &sub);
      j += sub_used;
      v = v * 100 + sub;
    }
    out += std::to_string(v);
    i = j;
  }
  *consumed = i - start;
  return out;
}

namespace {

// Ordinal group: optional cardinal head, mandatory trailing ordinal word.
// "hundred twenty third" is accepted with an elided leading one (-> 123).
// Returns false when the tokens are not a single well-formed ordinal.
bool parse_ordinal_group(const std::vector<std::string>& w, const ItnRules& r, int* value) {
  if (w.empty()) return false;
  const std::string& last = w.back();
  int ord = 0;
  enum class OrdKind { unit, teen, tens } kind;
  if (auto it = r.ordinal_units.find(last); it != r.ordinal_units.end()) {
    ord = it->second;
    kind = OrdKind::unit;
  } else if (auto it = r.ordinal_teens.find(last); it != r.ordinal_teens.end()) {
    ord = it->second;
    kind = OrdKind::teen;
  } else if (auto it = r.ordinal_tens.find(last); it != r.ordinal_tens.end()) {
    ord = it->second;
    kind = OrdKind::tens;
  } else {
    return false;
  }

  size_t n = w.size() - 1;  // cardinal head length
  int hundreds = 0;
  size_t i = 0;
  // Optional "[X] hundred" prefix; X elides to one.
  size_t hundred_pos = n;
  for (size_t k = 0; k < n; ++k) {
    if (r.hundred_words.count(w[k])) {
      hundred_pos = k;
      break;
    }
  }
  if (hundred_pos < n) {
    if (hundred_pos == 0) {
      hundreds = 1;
    } else {
      int head = 0;
      const size_t used = parse_sub_hundred(w, 0, r, &head);
      if (used != hundred_pos) return false;
      hundreds = head;
    }
    i = hundred_pos + 1;
  }
  // Remaining head must combine with the ordinal word itself.
  const size_t rem = n - i;
  int sub = 0;
  if (kind == OrdKind::unit) {
    if (rem == 0) {
      sub = ord;
    } else if (rem == 1 && r.tens.count(w[i])) {
      sub = r.tens.at(w[i]) + ord;  // twenty third
    } else {
      return false;
    }
  } else {
    // teen/tens ordinals stand alone below the hundred.
    if (rem != 0) return false;
    sub = ord;
  }
  *value = hundreds * 100 + sub;
  return *value > 0;
}

struct Stripped {
  std::vector<std::string> words;
  std::vector<size_t> marker_splits;  // indices into `words` where a name marker sat
};

bool phrase_at(const std::vector<std::string>& w, size_t i,
               const std::vector<std::string>& phrase) {
  if (i + phrase.size() > w.size()) return false;
  for (size_t k = 0; k < phrase.size(); ++k) {
    if (w[i + k] != phrase[k]) return false;
  }
  return true;
}

// Carrier/filler removal; name markers are recorded as split points (and
// removed) rather than silently dropped.
Stripped strip_carriers(const SpokenTranscript& transcript, const ItnRules& rules) {
  Stripped out;
  size_t i = 0;
  while (i < transcript.size()) {
    bool matched = false;
    for (const auto& marker : rules.name_markers) {
      if (phrase_at(transcript, i, marker)) {
        out.marker_splits.push_back(out.words.size());
        i += marker.size();
        matched = true;
        break;
      }
    }
    if (matched) continue;
    for (const auto& phrase : rules.carrier_phrases) {
      if (phrase_at(transcript, i, phrase)) {
        i += phrase.size();
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (rules.fillers.count(transcript[i])) {
      ++i;
      continue;
    }
    out.words.push_back(transcript[i]);
    ++i;
  }
  return out;
}

// "X as (in) WORD" / "X like WORD" -> the letter X. Applied to the carrier-
// stripped stream; split indices are remapped.
void reduce_expansions(Stripped& s, const ItnRules& rules) {
  std::vector<std::string> out;
  std::vector<size_t> splits;
  size_t next_split = 0;
  size_t i = 0;
  while (i < s.words.size()) {
    while (next_split < s.marker_splits.size() && s.marker_splits[next_split] == i) {
      splits.push_back(out.size());
      ++next_split;
    }
    const std::string& w = s.words[i];
    if (is_single_letter(w) && i + 1 < s.words.size() && rules.connectors.count(s.words[i + 1])) {
      size_t j = i + 2;
      if (s.words[i + 1] == "as" && j < s.words.size() && s.words[j] == "in") ++j;
      if (j < s.words.size()) {
        out.push_back(w);  // keep the letter, drop connector and example word
        i = j + 1;
        continue;
      }
    }
    out.push_back(w);
    ++i;
  }
  while (next_split < s.marker_splits.size()) {
    splits.push_back(out.size());
    ++next_split;
  }
  s.words = std::move(out);
  s.marker_splits = std::move(splits);
}

struct NamePart {
  std::string spelled;
  std::vector<std::string> said;
};

NamePart extract_name_part(const std::vector<std::string>& words, size_t begin, size_t end,
                           const ItnRules& rules) {
  NamePart part;
  for (size_t i = begin; i < end; ++i) {
    const std::string& w = words[i];
    if (is_single_letter(w)) {
      part.spelled += w;
    } else if (auto it = rules.symbols.find(w); it != rules.symbols.end() && it->second != "@") {
      part.spelled += it->second;
    } else if (auto it = rules.digits.find(w); it != rules.digits.end()) {
      part.spelled += static_cast<char>('0' + it->second);
    } else {
      part.said.push_back(w);
    }
  }
  return part;
}

std::string join(const std::vector<std::string>& words, size_t begin, size_t end) {
  std::string out;
  for (size_t i = begin; i < end; ++i) {
    if (!out.empty()) out += ' ';
    out += words[i];
  }
  return out;
}

// Spelled form wins over the said form whenever both are present. A
// spelling said twice in a row ("k i n g k i n g") collapses to one copy.
std::string name_value(const NamePart& part) {
  std::string s = part.spelled;
  if (s.size() >= 6 && s.size() % 2 == 0) {
    const size_t half = s.size() / 2;
    if (std::equal(s.begin(), s.begin() + static_cast<long>(half),
                   s.begin() + static_cast<long>(half))) {
      s.resize(half);
    }
  }
  if (!s.empty()) return s;
  return join(part.said, 0, part.said.size());
}

ItnResult fail(const std::string& why) {
  ItnResult r;
  r.error = why;
  return r;
}

ItnResult extract_single_name(const Stripped& s, EntityType type, const ItnRules& rules) {
  const NamePart part = extract_name_part(s.words, 0, s.words.size(), rules);
  const std::string value = name_value(part);
  if (value.empty()) return fail("no name content");
  ItnResult r;
  r.ok = true;
  r.record.type = type;
  r.record.value = value;
  return r;
}

ItnResult extract_full_name(const Stripped& s, const ItnRules& rules) {
  if (!s.marker_splits.empty()) {
    // Marker fixes the first/last boundary; spelled content on each side wins.
    const size_t split = s.marker_splits.back();
    const NamePart first = extract_name_part(s.words, 0, split, rules);
    const NamePart last = extract_name_part(s.words, split, s.words.size(), rules);
    const std::string f = name_value(first);
    std::string l = name_value(last);
    if (f.empty() || l.empty()) return fail("missing name part");
    ItnResult r;
    r.ok = true;
    r.record.type = EntityType::full_name;
    r.record.first = f;
    r.record.last = l;
    return r;
  }
  // No marker: said words only, first word is the first name and the rest
  // the last name. A spelled run without a marker cannot be split.
  const NamePart all = extract_name_part(s.words, 0, s.words.size(), rules);
  if (!all.spelled.empty()) return fail("spelled full name without a boundary marker");
  if (all.said.size() < 2) return fail("need at least two words for a full name");
  ItnResult r;
  r.ok = true;
  r.record.type = EntityType::full_name;
  r.record.first = all.said.front();
  r.record.last = join(all.said, 1, all.said.size());
  return r;
}

ItnResult extract_email(const Stripped& s, const ItnRules& rules) {
  std::string user, domain;
  bool seen_at = false;
  for (const std::string& w : s.words) {
    const auto sym = rules.symbols.find(w);
    const std::string mapped = sym == rules.symbols.end() ? "" : sym->second;
    if (!seen_at && mapped == "@") {
      seen_at = true;
      continue;
    }
    std::string& dst = seen_at ? domain : user;
    if (!mapped.empty() && mapped != "@") {
      dst += mapped;
    } else if (is_single_letter(w)) {
      dst += w;
    } else if (auto d = rules.digits.find(w); d != rules.digits.end()) {
      dst += static_cast<char>('0' + d->second);
    } else {
      dst += w;  // whole words read verbatim (domain names, mostly)
    }
  }
  if (!seen_at || user.empty() || domain.empty()) return fail("no well-formed email");
  ItnResult r;
  r.ok = true;
  r.record.type = EntityType::email;
  r.record.value = user + "@" + domain;
  return r;
}

// House number + ordinal street split with the one-binds-left rule: a
// candidate split starting at "one" right after a tens word is rejected so
// "forty one hundred twenty third" reads as 41 + (1)23rd, not 40 + 123rd.
bool split_ordinal_street(const std::vector<std::string>& run, const ItnRules& rules,
                          std::string* house, std::string* street_ord) {
  for (size_t k = 1; k < run.size(); ++k) {
    if (run[k] == "one" && rules.tens.count(run[k - 1])) continue;
    std::vector<std::string> suffix(run.begin() + static_cast<long>(k), run.end());
    int ord_value = 0;
    if (!parse_ordinal_group(suffix, rules, &ord_value)) continue;
    // The house parse must consume the prefix exactly.
    size_t house_consumed = 0;
    std::vector<std::string> prefix(run.begin(), run.begin() + static_cast<long>(k));
    const std::string house_digits = parse_number_group(prefix, 0, rules, &house_consumed);
    if (house_consumed != prefix.size() || house_digits.empty()) continue;
    *house = house_digits;
    *street_ord = ordinal_suffix(ord_value);
    return true;
  }
  return false;
}

ItnResult extract_street(const Stripped& s, const ItnRules& rules) {
  std::vector<std::string> words = s.words;

  // Peel off the apartment clause first.
  std::string apartment;
  for (size_t i = 0; i < words.size(); ++i) {
    if (rules.apartment_words.count(words[i])) {
      size_t consumed = 0;
      const std::string digits =
          parse_number_group(words, i + 1, rules, &consumed);
      if (!digits.empty()) {
        apartment = "apt " + digits;
      }
      words.resize(i);
      break;
    }
  }

  // Leading run of number/ordinal words.
  size_t run_end = 0;
  bool has_ordinal = false;
  while (run_end < words.size() &&
         (rules.is_number_word(words[run_end]) || rules.is_ordinal_word(words[run_end]))) {
    if (rules.is_ordinal_word(words[run_end])) {
      has_ordinal = true;
      ++run_end;
      break;  // an ordinal terminates the run
    }
    ++run_end;
  }
  if (run_end == 0) return fail("no house number");

  std::string house, street_name;
  if (has_ordinal) {
    const std::vector<std::string> run(words.begin(), words.begin() + static_cast<long>(run_end));
    if (!split_ordinal_street(run, rules, &house, &street_name)) {
      return fail("unparseable ordinal street number");
    }
  } else {
    size_t consumed = 0;
    house = parse_number_group(words, 0, rules, &consumed);
    if (consumed != run_end || house.empty()) return fail("unparseable house number");
  }

  // Remaining words: street name, then an optional street-type word that
  // gets abbreviated.
  std::vector<std::string> name_words;
  std::string abbrev;
  for (size_t i = run_end; i < words.size(); ++i) {
    const auto ab = rules.street_abbrev.find(words[i]);
    if (ab != rules.street_abbrev.end() && i + 1 == words.size()) {
      abbrev = ab->second;
    } else {
      name_words.push_back(words[i]);
    }
  }
  std::string value = house;
  if (!street_name.empty()) value += " " + street_name;
  const std::string name_joined = join(name_words, 0, name_words.size());
  if (!name_joined.empty()) value += " " + name_joined;
  if (!abbrev.empty()) value += " " + abbrev;

  ItnResult r;
  r.ok = true;
  r.record.type = EntityType::street_address;
  r.record.street = value;
  r.record.apartment = apartment;
  return r;
}

}  // namespace

ItnResult itn_extract(const SpokenTranscript& transcript, EntityType type,
                      const ItnRules& rules) {
  Stripped s = strip_carriers(transcript, rules);
  reduce_expansions(s, rules);
  if (s.words.empty()) return fail("no extractable content");
  switch (type) {
    case EntityType::first_name:
    case EntityType::last_name:
      return extract_single_name(s, type, rules);
    case EntityType::full_name:
      return extract_full_name(s, rules);
    case EntityType::email:
      return extract_email(s, rules);
    case EntityType::street_address:
      return extract_street(s, rules);
  }
  return fail("unknown entity type");
}

}  // namespace ctce
