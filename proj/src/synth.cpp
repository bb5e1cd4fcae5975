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

// Say-and-spell generator. The verbalizers here and the ITN rules are a
// matched pair: for every emitted sample, itn_extract(spoken, type) must
// reproduce the entity exactly. The guards below (house-number styles next
// to ordinal street names, spell-only for punctuated names, no doubled
// entities) exist to keep that inversion unambiguous.

#include "ctce/synth.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "ctce/ctc.hpp"
#include "ctce/errors.hpp"
#include "ctce/rng.hpp"

namespace ctce {

namespace {

constexpr uint64_t kDurationSalt = 0xD0A7;
constexpr uint64_t kNoiseSalt = 0x4015E;
constexpr uint64_t kEmbedSalt = 0xE3BED;

const char* kDigitWords[10] = {"zero", "one", "two",   "three", "four",
                               "five", "six", "seven", "eight", "nine"};
const char* kTeenWords[10] = {"ten",     "eleven",  "twelve",  "thirteen", "fourteen",
                              "fifteen", "sixteen", "seventeen", "eighteen", "nineteen"};
const char* kTensWords[8] = {"twenty", "thirty", "forty",  "fifty",
                             "sixty",  "seventy", "eighty", "ninety"};
const char* kOrdUnitWords[9] = {"first", "second", "third",   "fourth", "fifth",
                                "sixth", "seventh", "eighth", "ninth"};
const char* kOrdTeenWords[10] = {"tenth",     "eleventh",  "twelfth",    "thirteenth",
                                 "fourteenth", "fifteenth", "sixteenth", "seventeenth",
                                 "eighteenth", "nineteenth"};
const char* kOrdTensWords[8] = {"twentieth", "thirtieth", "fortieth",  "fiftieth",
                                "sixtieth",  "seventieth", "eightieth", "ninetieth"};

const char* kNameCarriers[] = {"my name is", "this is", "name is", "it is"};
const char* kEmailCarriers[] = {"my email is", "the email is", "it is"};
const char* kStreetCarriers[] = {"my address is", "i live at", "the address is"};
const char* kFillers[] = {"um", "uh", "yeah"};

std::vector<std::string> default_first_names() {
  return {
      "aaron",  "abby",   "adam",   "alan",   "albert", "alexus", "alice",  "amber",
      "amy",    "andre",  "angela", "anita",  "anna",   "april",  "barry",  "becky",
      "ben",    "beth",   "billy",  "blake",  "bonnie", "brad",   "brian",  "bruce",
      "calvin", "carla",  "carol",  "casey",  "chad",   "chloe",  "cindy",  "clara",
      "cody",   "colin",  "connie", "craig",  "dale",   "dana",   "dawn",   "dean",
      "debra",  "denise", "derek",  "diana",  "diego",  "dora",   "doug",   "dylan",
      "eddie",  "elena",  "ella",   "emma",   "eric",   "erin",   "ethan",  "eva",
      "evan",   "faith",  "felix",  "fiona",  "floyd",  "fred",   "gail",   "gavin",
      "gina",   "glen",   "grace",  "greg",   "haley",  "hank",   "harry",  "hazel",
      "heidi",  "holly",  "hugo",   "ian",    "iris",   "isaac",  "ivan",   "ivy",
      "jade",   "jane",   "jared",  "jason",  "jenna",  "jesse",  "joan",   "joel",
      "jorge",  "josie",  "joy",    "juan",   "judy",   "julia",  "june",   "kara",
      "karen",  "kate",   "keith",  "kelly",  "kevin",  "kim",    "kira",   "kyle",
      "lara",   "laura",  "leah",   "lena",   "leo",    "liam",   "lily",   "lisa",
      "logan",  "lola",   "lucas",  "luke",   "luz",    "mabel",  "marco",  "maria",
      "mark",   "mason",  "maya",   "megan",  "mia",    "miles",  "milo",   "mona",
      "myra",   "nadia",  "naomi",  "nina",   "noah",   "nora",   "olga",   "oliver",
      "omar",   "opal",   "owen",   "pablo",  "paige",  "pam",    "paula",  "pedro",
      "penny",  "percy",  "phil",   "piper",  "quinn",  "quincy", "rachel", "ralph",
      "randy",  "raul",   "rex",    "rita",   "rosa",   "ross",   "ruby",   "rudy",
      "ruth",   "ryan",   "sadie",  "sally",  "sara",   "scott",  "sean",   "seth",
      "shane",  "shawn",  "sofia",  "stacy",  "susan",  "tanya",  "tara",   "ted",
      "tessa",  "tina",   "todd",   "tony",   "tracy",  "troy",   "tyler",  "vera",
      "vince",  "wade",   "wanda",  "wendy",  "xavier", "yolanda", "zach",  "zelda",
  };
}

std::vector<std::string> default_last_names() {
  return {
      "adams",    "allen",    "alvarez",  "archer",   "austin",    "avery",
      "bailey",   "barnes",   "barrett",  "bates",    "beck",      "bell",
      "bennett",  "berg",     "bishop",   "black",    "blair",     "bloom",
      "bond",     "booth",    "bowen",    "boyd",     "brady",     "briggs",
      "brooks",   "brown",    "bryant",   "burke",    "burns",     "byrd",
      "cain",     "campos",   "carey",    "carter",   "chavez",    "clark",
      "cohen",    "cole",     "collins",  "conner",   "cooper",    "cortez",
      "cox",      "crane",    "cruz",     "curtis",   "dalton",    "daniels",
      "davies",   "dawson",   "diaz",     "dixon",    "dolan",     "donovan",
      "doyle",    "drake",    "duffy",    "duncan",   "dunn",      "eaton",
      "ellis",    "emery",    "evans",    "farley",   "ferris",    "fields",
      "finch",    "fisher",   "fleming",  "fletcher", "flores",    "foster",
      "fowler",   "french",   "frost",    "fuller",   "galvan",    "garcia",
      "garner",   "gibbs",    "gibson",   "giles",    "glass",     "gomez",
      "gordon",   "grant",    "graves",   "gray",     "green",     "griffin",
      "guzman",   "hale",     "hall",     "hansen",   "hardy",     "harmon",
      "harper",   "hayes",    "heath",    "henson",   "hicks",     "hines",
      "hodge",    "hogan",    "holt",     "hopkins",  "horton",    "howard",
      "hudson",   "hughes",   "hunt",     "hurst",    "ingram",    "irwin",
      "jacobs",   "james",    "jarvis",   "jensen",   "jimenez",   "jones",
      "jordan",   "joyce",    "keller",   "kemp",     "kendall",   "kent",
      "kerr",     "king",     "kirby",    "knight",   "knox",      "kramer",
      "lamb",     "lambert",  "larsen",   "lawson",   "leach",     "lee",
      "leon",     "levy",     "lewis",    "little",   "lloyd",     "lopez",
      "lowe",     "lund",     "lynch",    "macias",   "madden",    "maddox",
      "malone",   "mann",     "marquez",  "marsh",    "martin",    "mathis",
      "maxwell",  "mayer",    "mccall",   "mcgee",    "mckay",     "mead",
      "mejia",    "mercer",   "meyer",    "miller",   "mills",     "monroe",
      "moody",    "moon",     "moore",    "morales",  "moran",     "morgan",
      "morris",   "morrow",   "moss",     "mueller",  "munoz",     "murphy",
      "myers",    "nash",     "navarro",  "neal",     "nelson",    "newman",
      "nichols",  "nixon",    "noble",    "nolan",    "norris",    "nunez",
      "odell",    "ogden",    "olsen",    "ortega",   "ortiz",     "osborn",
      "owens",    "pace",     "padilla",  "page",     "palmer",    "parker",
      "parks",    "patton",   "paxton",   "payne",    "pearce",    "pena",
      "perez",    "perkins",  "perry",    "peters",   "phelps",    "pierce",
      "pittman",  "poole",    "porter",   "potter",   "powell",    "pratt",
      "price",    "prince",   "pruitt",   "quick",    "quigley",   "ramos",
      "randall",  "ray",      "reed",     "reese",    "reyes",     "rhodes",
      "rice",     "riggs",    "riley",    "rivera",   "roberts",   "robles",
      "rogers",   "rojas",    "rollins",  "romero",   "rosales",   "rowe",
      "roy",      "rudd",     "ruiz",     "rush",     "russell",   "salas",
      "sanchez",  "sanders",  "santos",   "sawyer",   "schmidt",   "sellers",
      "serrano",  "sharp",    "shaw",     "shepard",  "short",     "silva",
      "simon",    "singh",    "skinner",  "sloan",    "small",     "smith",
      "snow",     "solis",    "soto",     "sparks",   "spears",    "stark",
      "staton",   "steele",   "stein",    "stevens",  "stokes",    "stone",
      "stout",    "strong",   "stuart",   "sutton",   "swanson",   "sweet",
      "tate",     "taylor",   "terry",    "thomas",   "thornton",  "tidwell",
      "todd",     "torres",   "tran",     "tucker",   "turner",    "underwood",
      "valdez",   "vance",    "vargas",   "vasquez",  "vaughn",    "vega",
      "velez",    "vernon",   "vick",     "vogel",    "wagner",    "walker",
      "wallace",  "walsh",    "ward",     "ware",     "watts",     "weaver",
      "webb",     "weiss",    "welch",    "wells",    "west",      "wheeler",
      "whitaker", "white",    "wilcox",   "wilder",   "wiley",     "wilkins",
      "willis",   "wilson",   "winters",  "wise",     "wolf",      "wood",
      "woods",    "wright",   "wyatt",    "xiong",    "yang",      "yates",
      "yoder",    "york",     "zamora",   "zimmerman", "zuniga",   "o'brien",
      "o'neal",   "d'angelo", "smith-jones", "reyes-cruz",
  };
}

std::vector<std::string> default_street_words() {
  return {
      "main",    "state",   "oak",      "elm",      "maple",   "pine",
      "cedar",   "birch",   "walnut",   "cherry",   "spruce",  "willow",
      "aspen",   "park",    "lake",     "hill",     "river",   "ridge",
      "valley",  "meadow",  "forest",   "garden",   "grove",   "summit",
      "sunset",  "sunrise", "highland", "franklin", "madison", "lincoln",
      "remo",    "crescent", "union",   "center",   "market",  "church",
      "spring",  "north",   "south",    "east",     "west",    "bay",
      "mill",    "bridge",  "canyon",   "prairie",  "harbor",  "juniper",
      "magnolia", "sycamore", "chestnut", "hickory", "laurel",  "poplar",
  };
}

std::vector<std::string> default_street_types() {
  return {"street", "road", "avenue", "drive", "boulevard", "lane", "court"};
}

std::vector<std::string> default_email_domains() {
  // Mixed tlds on purpose: an all-.com list teaches a "dot then c" prior
  // that misfires on username dots.
  return {"gmail.com",  "yahoo.com", "outlook.com", "hotmail.com",
          "aol.com",    "icloud.com", "zoho.net",   "inbox.net",
          "post.org",   "mailfort.org"};
}

template <typename T, size_t N>
const T& pick(SplitMix64& rng, const T (&arr)[N]) {
  return arr[rng.below(N)];
}

const std::string& pick(SplitMix64& rng, const std::vector<std::string>& v) {
  return v[rng.below(v.size())];
}

void push_words(const std::string& phrase, TokenRole role, SpokenTranscript& tokens,
                std::vector<TokenRole>& roles) {
  std::istringstream in(phrase);
  std::string w;
  while (in >> w) {
    tokens.push_back(w);
    roles.push_back(role);
  }
}

void push_one(const std::string& word, TokenRole role, SpokenTranscript& tokens,
              std::vector<TokenRole>& roles) {
  tokens.push_back(word);
  roles.push_back(role);
}

bool is_doubled(const std::string& s) {
  return s.size() >= 6 && s.size() % 2 == 0 &&
         std::equal(s.begin(), s.begin() + static_cast<long>(s.size() / 2),
                    s.begin() + static_cast<long>(s.size() / 2));
}

bool plain_alpha(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

// Character-recombined novel name: prefix of one lexicon entry, suffix of
// another. Deterministic given the rng state.
std::string novel_name(SplitMix64& rng, const std::vector<std::string>& lexicon) {
  for (int tries = 0; tries < 32; ++tries) {
    const std::string& a = pick(rng, lexicon);
    const std::string& b = pick(rng, lexicon);
    if (!plain_alpha(a) || !plain_alpha(b)) continue;
    const size_t cut_a = 1 + rng.below(a.size() - 1);
    const size_t cut_b = rng.below(b.size() - 1);
    std::string candidate = a.substr(0, cut_a) + b.substr(cut_b);
    if (candidate.size() < 3 || candidate.size() > 12) continue;
    if (is_doubled(candidate)) continue;
    if (std::find(lexicon.begin(), lexicon.end(), candidate) != lexicon.end()) continue;
    return candidate;
  }
  return pick(rng, lexicon);  // give up on novelty, stay valid
}

// Deterministic one-edit variant of a name; used for the said-vs-spelled
// disagreement samples. Always differs from the input.
std::string mutate_name(SplitMix64& rng, const std::string& name) {
  std::string out = name;
  const int op = static_cast<int>(rng.below(3));
  if (op == 0 && out.size() > 3) {
    out.erase(out.begin() + static_cast<long>(1 + rng.below(out.size() - 2)));
  } else if (op == 1) {
    const size_t at = rng.below(out.size());
    out.insert(out.begin() + static_cast<long>(at), out[at]);
  } else {
    out += 'e';
    if (out == name) out += 's';
  }
  if (out == name) out += 's';
  return out;
}

// ---------------------------------------------------------------------
// Number verbalization, guarded to stay invertible by the ITN grammar.
// ---------------------------------------------------------------------

// v in [1, 99]; emits a tens(+unit)/teen/digit reading.
void say_value_sub_hundred(int v, SpokenTranscript& tokens, std::vector<TokenRole>& roles) {
  if (v < 10) {
    push_one(kDigitWords[v], TokenRole::digit_word, tokens, roles);
  } else if (v < 20) {
    push_one(kTeenWords[v - 10], TokenRole::digit_word, tokens, roles);
  } else {
    push_one(kTensWords[v / 10 - 2], TokenRole::digit_word, tokens, roles);
    if (v % 10 != 0) push_one(kDigitWords[v % 10], TokenRole::digit_word, tokens, roles);
  }
}

void say_digitwise(const std::string& digits, SplitMix64& rng, SpokenTranscript& tokens,
                   std::vector<TokenRole>& roles) {
  for (char c : digits) {
    const int d = c - '0';
    if (d == 0) {
      push_one(rng.bernoulli(0.5) ? "zero" : "oh", TokenRole::digit_word, tokens, roles);
    } else {
      push_one(kDigitWords[d], TokenRole::digit_word, tokens, roles);
    }
  }
}

// Pairwise grouping ("six forty six"); usable only when no group would
// start with a zero digit.
bool try_say_grouped(const std::string& digits, SplitMix64& rng, SpokenTranscript& tokens,
                     std::vector<TokenRole>& roles) {
  if (digits.size() < 3 || digits.size() > 4) return false;
  const size_t head = digits.size() % 2;
  for (size_t i = head; i < digits.size(); i += 2) {
    if (digits[i] == '0') return false;
  }
  if (head == 1) {
    const int d = digits[0] - '0';
    if (d == 0) return false;
    push_one(kDigitWords[d], TokenRole::digit_word, tokens, roles);
  }
  for (size_t i = head; i < digits.size(); i += 2) {
    const int v = (digits[i] - '0') * 10 + (digits[i + 1] - '0');
    say_value_sub_hundred(v, tokens, roles);
  }
  (void)rng;
  return true;
}

// "X hundred (Y)" composition for a whole value; word-name streets only.
bool try_say_hundreds(int value, SpokenTranscript& tokens, std::vector<TokenRole>& roles) {
  if (value < 100 || value > 9999) return false;
  const int x = value / 100;
  const int y = value % 100;
  say_value_sub_hundred(x, tokens, roles);
  push_one("hundred", TokenRole::digit_word, tokens, roles);
  if (y != 0) say_value_sub_hundred(y, tokens, roles);
  return true;
}

struct HouseSpeech {
  SpokenTranscript tokens;
  std::vector<TokenRole> roles;
  bool ends_with_tens_unit_one = false;
};

// House number next to an ordinal street name: digit-wise, or tens+unit /
// teen / single digit for small numbers. Grouped and hundreds styles are
// reserved for word-name streets, where nothing after the number can
// merge with it.
HouseSpeech say_house_for_ordinal(int value, SplitMix64& rng) {
  HouseSpeech out;
  const std::string digits = std::to_string(value);
  const bool small_ok = value >= 1 && value <= 99 && value % 10 != 0;
  if (small_ok && value >= 10 && rng.bernoulli(0.6)) {
    say_value_sub_hundred(value, out.tokens, out.roles);
    out.ends_with_tens_unit_one = value >= 21 && value % 10 == 1;
  } else if (value <= 9) {
    say_value_sub_hundred(value, out.tokens, out.roles);
  } else {
    say_digitwise(digits, rng, out.tokens, out.roles);
  }
  return out;
}

void say_house_for_word_street(int value, SplitMix64& rng, SpokenTranscript& tokens,
                               std::vector<TokenRole>& roles) {
  const std::string digits = std::to_string(value);
  const int style = static_cast<int>(rng.below(3));
  if (style == 0 && try_say_grouped(digits, rng, tokens, roles)) return;
  if (style == 1 && try_say_hundreds(value, tokens, roles)) return;
  if (value <= 99) {
    say_value_sub_hundred(value, tokens, roles);
    return;
  }
  say_digitwise(digits, rng, tokens, roles);
}

// Ordinal street name, optionally with the leading "one" of 1xx elided
// when the house reading just ended "...ty one" (the say-and-spell habit
// the ITN one-binding rule recovers).
void say_ordinal(int value, bool may_elide_one, SplitMix64& rng, SpokenTranscript& tokens,
                 std::vector<TokenRole>& roles) {
  const int hundreds = value / 100;
  const int sub = value % 100;
  if (hundreds > 0) {
    const bool elide = hundreds == 1 && may_elide_one && rng.bernoulli(0.5);
    if (!elide) say_value_sub_hundred(hundreds, tokens, roles);
    push_one("hundred", TokenRole::ordinal_word, tokens, roles);
  }
  // sub > 0 always (generator never draws multiples of 100).
  if (sub < 10) {
    push_one(kOrdUnitWords[sub - 1], TokenRole::ordinal_word, tokens, roles);
  } else if (sub < 20) {
    push_one(kOrdTeenWords[sub - 10], TokenRole::ordinal_word, tokens, roles);
  } else if (sub % 10 == 0) {
    push_one(kOrdTensWords[sub / 10 - 2], TokenRole::ordinal_word, tokens, roles);
  } else {
    push_one(kTensWords[sub / 10 - 2], TokenRole::ordinal_word, tokens, roles);
    push_one(kOrdUnitWords[sub % 10 - 1], TokenRole::ordinal_word, tokens, roles);
  }
}

// ---------------------------------------------------------------------
// Spelling.
// ---------------------------------------------------------------------

void spell_string(const std::string& text, bool expansions, double p_letter,
                  SplitMix64& rng, const ItnRules& rules, SpokenTranscript& tokens,
                  std::vector<TokenRole>& roles, bool force_one_expansion = false) {
  bool any_expansion = false;
  std::vector<size_t> letter_positions;
  for (char c : text) {
    if (c >= 'a' && c <= 'z') {
      letter_positions.push_back(tokens.size());
      push_one(std::string(1, c), TokenRole::letter, tokens, roles);
      if (expansions && rng.bernoulli(p_letter)) {
        const auto it = rules.expansion_words.find(c);
        if (it != rules.expansion_words.end()) {
          const int conn = static_cast<int>(rng.below(3));
          if (conn == 0) {
            push_one("as", TokenRole::expansion_connector, tokens, roles);
            push_one("in", TokenRole::expansion_connector, tokens, roles);
          } else if (conn == 1) {
            push_one("as", TokenRole::expansion_connector, tokens, roles);
          } else {
            push_one("like", TokenRole::expansion_connector, tokens, roles);
          }
          push_one(it->second[rng.below(it->second.size())], TokenRole::expansion_word,
                   tokens, roles);
          any_expansion = true;
        }
      }
    } else if (c >= '0' && c <= '9') {
      push_one(kDigitWords[c - '0'], TokenRole::digit_word, tokens, roles);
    } else if (c == '.') {
      push_one("dot", TokenRole::symbol_word, tokens, roles);
    } else if (c == '\'') {
      push_one("apostrophe", TokenRole::symbol_word, tokens, roles);
    } else if (c == '-') {
      push_one("dash", TokenRole::symbol_word, tokens, roles);
    }
  }
  if (expansions && force_one_expansion && !any_expansion && !letter_positions.empty()) {
    // Retrofit one expansion onto a random letter so the sample-level gate
    // means what it says.
    const size_t at = letter_positions[rng.below(letter_positions.size())];
    const char c = tokens[at][0];
    const auto it = rules.expansion_words.find(c);
    if (it != rules.expansion_words.end()) {
      std::vector<std::string> ins = {"as", "in", it->second[rng.below(it->second.size())]};
      std::vector<TokenRole> ins_roles = {TokenRole::expansion_connector,
                                          TokenRole::expansion_connector,
                                          TokenRole::expansion_word};
      tokens.insert(tokens.begin() + static_cast<long>(at + 1), ins.begin(), ins.end());
      roles.insert(roles.begin() + static_cast<long>(at + 1), ins_roles.begin(),
                   ins_roles.end());
    }
  }
}

enum class Style { spell_only, say_then_spell, say_only };

Style draw_style(const SynthConfig& cfg, SplitMix64& rng) {
  const double u = rng.uniform();
  if (u < cfg.p_spell_only) return Style::spell_only;
  if (u < cfg.p_spell_only + cfg.p_say_then_spell) return Style::say_then_spell;
  return Style::say_only;
}

struct Draft {
  SpokenTranscript tokens;
  std::vector<TokenRole> roles;
  EntityRecord entity;
};

void add_preamble(const SynthConfig& cfg, SplitMix64& rng, const char* const* carriers,
                  size_t n_carriers, Draft& d) {
  if (rng.bernoulli(cfg.p_filler)) {
    push_one(kFillers[rng.below(3)], TokenRole::filler, d.tokens, d.roles);
  }
  if (rng.bernoulli(cfg.p_carrier)) {
    push_words(carriers[rng.below(n_carriers)], TokenRole::carrier, d.tokens, d.roles);
  }
}

std::string draw_name(SplitMix64& rng, const std::vector<std::string>& lexicon, bool novel) {
  return novel ? novel_name(rng, lexicon) : pick(rng, lexicon);
}

void say_and_spell_name(const SynthConfig& cfg, SplitMix64& rng, const ItnRules& rules,
                        const std::string& name, Style style, bool allow_mismatch,
                        Draft& d) {
  // Punctuated names have no clean single-token said form; spell them.
  if (!plain_alpha(name)) style = Style::spell_only;
  const bool expansions = rng.bernoulli(cfg.p_name_expansion);
  if (style != Style::spell_only) {
    std::string said = name;
    if (style == Style::say_then_spell && allow_mismatch &&
        rng.bernoulli(cfg.p_said_mismatch)) {
      said = mutate_name(rng, name);
    }
    push_one(said, TokenRole::said_word, d.tokens, d.roles);
  }
  if (style != Style::say_only) {
    spell_string(name, expansions, cfg.p_expansion_letter, rng, rules, d.tokens, d.roles);
    if (rng.bernoulli(cfg.p_repeat) && plain_alpha(name) && !is_doubled(name)) {
      spell_string(name, false, 0.0, rng, rules, d.tokens, d.roles);
    }
  }
}

Draft draft_single_name(const SynthConfig& cfg, SplitMix64& rng, const ItnRules& rules,
                        EntityType type, bool novel) {
  Draft d;
  const auto& lexicon =
      type == EntityType::first_name ? cfg.first_names : cfg.last_names;
  const std::string name = draw_name(rng, lexicon, novel);
  d.entity.type = type;
  d.entity.value = name;
  add_preamble(cfg, rng, kNameCarriers, 4, d);
  say_and_spell_name(cfg, rng, rules, name, draw_style(cfg, rng), true, d);
  return d;
}

Draft draft_full_name(const SynthConfig& cfg, SplitMix64& rng, const ItnRules& rules,
                      bool novel) {
  Draft d;
  const bool novel_first = novel && rng.bernoulli(0.5);
  const std::string first = draw_name(rng, cfg.first_names, novel_first);
  const std::string last = draw_name(rng, cfg.last_names, novel && !novel_first);
  d.entity.type = EntityType::full_name;
  d.entity.first = first;
  d.entity.last = last;
  add_preamble(cfg, rng, kNameCarriers, 4, d);
  Style style = draw_style(cfg, rng);
  if (!plain_alpha(first) || !plain_alpha(last)) {
    // Both parts must be spelled, and spelling needs the marker.
    style = Style::spell_only;
  }
  if (style == Style::say_only) {
    push_one(first, TokenRole::said_word, d.tokens, d.roles);
    push_one(last, TokenRole::said_word, d.tokens, d.roles);
    return d;
  }
  if (style == Style::say_then_spell) {
    std::string said_first = first;
    std::string said_last = last;
    if (rng.bernoulli(cfg.p_said_mismatch)) {
      if (rng.bernoulli(0.5)) {
        said_first = mutate_name(rng, first);
      } else {
        said_last = mutate_name(rng, last);
      }
    }
    push_one(said_first, TokenRole::said_word, d.tokens, d.roles);
    push_one(said_last, TokenRole::said_word, d.tokens, d.roles);
  }
  const bool expansions = rng.bernoulli(cfg.p_name_expansion);
  spell_string(first, expansions, cfg.p_expansion_letter, rng, rules, d.tokens, d.roles);
  push_words("last name", TokenRole::marker, d.tokens, d.roles);
  spell_string(last, expansions, cfg.p_expansion_letter, rng, rules, d.tokens, d.roles);
  return d;
}

Draft draft_street(const SynthConfig& cfg, SplitMix64& rng, const ItnRules& rules,
                   bool novel) {
  Draft d;
  d.entity.type = EntityType::street_address;
  add_preamble(cfg, rng, kStreetCarriers, 3, d);

  const int house = 1 + static_cast<int>(rng.below(9999));
  const bool ordinal_street = rng.bernoulli(0.4);
  const std::string type_word = pick(rng, cfg.street_types);
  const std::string abbrev = rules.street_abbrev.at(type_word);

  std::string street_value = std::to_string(house);
  if (ordinal_street) {
    // Held-out ordinal range for novel test entities; never a multiple of
    // 100 (no "hundredth" rule).
    int ord = 0;
    do {
      ord = novel ? 150 + static_cast<int>(rng.below(50))
                  : 1 + static_cast<int>(rng.below(149));
    } while (ord % 100 == 0);
    HouseSpeech house_speech = say_house_for_ordinal(house, rng);
    d.tokens.insert(d.tokens.end(), house_speech.tokens.begin(), house_speech.tokens.end());
    d.roles.insert(d.roles.end(), house_speech.roles.begin(), house_speech.roles.end());
    const bool may_elide = house_speech.ends_with_tens_unit_one;
    say_ordinal(ord, may_elide, rng, d.tokens, d.roles);
    street_value += " " + ordinal_suffix(ord);
  } else {
    say_house_for_word_street(house, rng, d.tokens, d.roles);
    const size_t lex_size = cfg.street_words.size();
    const size_t held_out = std::max<size_t>(1, lex_size / 4);  // novel draws only
    auto draw_word = [&]() -> const std::string& {
      if (novel) {
        return cfg.street_words[lex_size - held_out + rng.below(held_out)];
      }
      return cfg.street_words[rng.below(lex_size - held_out)];
    };
    const std::string w1 = draw_word();
    push_one(w1, TokenRole::name_word, d.tokens, d.roles);
    street_value += " " + w1;
    if (rng.bernoulli(0.35)) {
      const std::string w2 = draw_word();
      if (w2 != w1) {
        push_one(w2, TokenRole::name_word, d.tokens, d.roles);
        street_value += " " + w2;
      }
    }
  }
  push_one(type_word, TokenRole::street_type, d.tokens, d.roles);
  street_value += " " + abbrev;
  d.entity.street = street_value;

  if (rng.bernoulli(0.3)) {
    const int apt = 1 + static_cast<int>(rng.below(999));
    static const char* kAptMarkers[3] = {"apartment", "apt", "unit"};
    push_one(kAptMarkers[rng.below(3)], TokenRole::apt_marker, d.tokens, d.roles);
    if (apt <= 20) {
      say_value_sub_hundred(apt, d.tokens, d.roles);
    } else {
      say_digitwise(std::to_string(apt), rng, d.tokens, d.roles);
    }
    d.entity.apartment = "apt " + std::to_string(apt);
  }
  return d;
}

Draft draft_email(const SynthConfig& cfg, SplitMix64& rng, const ItnRules& rules,
                  bool novel) {
  Draft d;
  d.entity.type = EntityType::email;
  add_preamble(cfg, rng, kEmailCarriers, 3, d);

  std::string user = draw_name(rng, rng.bernoulli(0.5) ? cfg.first_names : cfg.last_names,
                               novel);
  while (!plain_alpha(user)) user = pick(rng, cfg.first_names);
  if (rng.bernoulli(0.25)) {
    std::string second = pick(rng, cfg.last_names);
    while (!plain_alpha(second)) second = pick(rng, cfg.last_names);
    user += "." + second;
  }
  if (rng.bernoulli(0.6)) {
    const int n_digits = 1 + static_cast<int>(rng.below(4));
    for (int i = 0; i < n_digits; ++i) {
      user += static_cast<char>('0' + rng.below(10));
    }
  }
  const std::string domain = pick(rng, cfg.email_domains);
  d.entity.value = user + "@" + domain;

  const bool expansions = rng.bernoulli(cfg.p_email_expansion);
  spell_string(user, expansions, cfg.p_expansion_letter, rng, rules, d.tokens, d.roles,
               /*force_one_expansion=*/true);
  push_one("at", TokenRole::symbol_word, d.tokens, d.roles);
  const size_t dot = domain.find('.');
  push_one(domain.substr(0, dot), TokenRole::said_word, d.tokens, d.roles);
  push_one("dot", TokenRole::symbol_word, d.tokens, d.roles);
  push_one(domain.substr(dot + 1), TokenRole::said_word, d.tokens, d.roles);
  return d;
}

Draft draft_sample(const SynthConfig& cfg, SplitMix64& rng, EntityType type, bool novel) {
  const ItnRules& rules = ItnRules::defaults();
  switch (type) {
    case EntityType::first_name:
    case EntityType::last_name:
      return draft_single_name(cfg, rng, rules, type, novel);
    case EntityType::full_name:
      return draft_full_name(cfg, rng, rules, novel);
    case EntityType::street_address:
      return draft_street(cfg, rng, rules, novel);
    case EntityType::email:
      return draft_email(cfg, rng, rules, novel);
  }
  throw DomainError("unknown entity type");
}

// Durations are a pure function of the sample seed; generate_sample uses
// the same plan to test feasibility that synthesize_features replays.
// One draw per character of each token; the draw is also the duration of
// that character's acoustic segment.
struct DurationPlan {
  std::vector<std::vector<size_t>> segment_frames;  // [token][char]
  std::vector<size_t> silence_frames;               // after token i
  size_t total = 0;
};

DurationPlan plan_durations(uint64_t sample_seed, const SynthConfig& cfg,
                            const SpokenTranscript& tokens) {
  DurationPlan plan;
  SplitMix64 rng(seed_mix(sample_seed, kDurationSalt));
  for (size_t i = 0; i < tokens.size(); ++i) {
    std::vector<size_t> segs(tokens[i].size());
    for (size_t c = 0; c < segs.size(); ++c) {
      segs[c] = static_cast<size_t>(rng.range(cfg.frames_per_char_min, cfg.frames_per_char_max));
      plan.total += segs[c];
    }
    plan.segment_frames.push_back(std::move(segs));
    if (i + 1 < tokens.size()) {
      const size_t sil = static_cast<size_t>(rng.range(cfg.silence_min, cfg.silence_max));
      plan.silence_frames.push_back(sil);
      plan.total += sil;
    }
  }
  return plan;
}

size_t min_frames_for_text(const Vocabulary& vocab, const std::string& text) {
  return ctc_min_frames(vocab.encode_tagged(text));
}

}  // namespace

SynthConfig SynthConfig::defaults() {
  SynthConfig cfg;
  cfg.first_names = default_first_names();
  cfg.last_names = default_last_names();
  cfg.street_words = default_street_words();
  cfg.street_types = default_street_types();
  cfg.email_domains = default_email_domains();
  return cfg;
}

std::string SynthConfig::serialize() const {
  std::ostringstream out;
  out << std::setprecision(17);  // doubles round-trip exactly
  out << "[synth]\n";
  out << "seed = " << seed << "\n";
  out << "feature_dim = " << feature_dim << "\n";
  out << "frames_per_char_min = " << frames_per_char_min << "\n";
  out << "frames_per_char_max = " << frames_per_char_max << "\n";
  out << "silence_min = " << silence_min << "\n";
  out << "silence_max = " << silence_max << "\n";
  out << "noise_sigma = " << noise_sigma << "\n";
  out << "p_spell_only = " << p_spell_only << "\n";
  out << "p_say_then_spell = " << p_say_then_spell << "\n";
  out << "p_name_expansion = " << p_name_expansion << "\n";
  out << "p_email_expansion = " << p_email_expansion << "\n";
  out << "p_expansion_letter = " << p_expansion_letter << "\n";
  out << "p_carrier = " << p_carrier << "\n";
  out << "p_filler = " << p_filler << "\n";
  out << "p_repeat = " << p_repeat << "\n";
  out << "p_said_mismatch = " << p_said_mismatch << "\n";
  out << "novel_test_fraction = " << novel_test_fraction << "\n";
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& w : v) {
      if (!s.empty()) s += ',';
      s += w;
    }
    return s;
  };
  std::string types;
  for (EntityType t : entity_types) {
    if (!types.empty()) types += ',';
    types += entity_type_name(t);
  }
  out << "entity_types = " << types << "\n";
  out << "first_names = " << join(first_names) << "\n";
  out << "last_names = " << join(last_names) << "\n";
  out << "street_words = " << join(street_words) << "\n";
  out << "street_types = " << join(street_types) << "\n";
  out << "email_domains = " << join(email_domains) << "\n";
  return out.str();
}

uint64_t SynthConfig::content_hash() const { return fnv1a64(serialize()); }

SynthSample generate_sample(const SynthConfig& cfg, EntityType type, uint64_t id,
                            bool novel, std::vector<TokenRole>* roles, int* attempts) {
  const Vocabulary& vocab = Vocabulary::standard();
  const uint64_t base =
      seed_mix(seed_mix(cfg.seed, static_cast<uint64_t>(type) + 1), id + 1);
  for (uint64_t attempt = 0; attempt < 64; ++attempt) {
    const uint64_t eff = attempt == 0 ? base : seed_mix(base, attempt);
    SplitMix64 rng(eff);
    Draft d = draft_sample(cfg, rng, type, novel);
    const std::string target = render_entities({d.entity});
    const DurationPlan plan = plan_durations(eff, cfg, d.tokens);
    const size_t need_entity = min_frames_for_text(vocab, target);
    const size_t need_transcript = min_frames_for_text(vocab, transcript_text(d.tokens));
    if (plan.total < need_entity || plan.total < need_transcript) {
      continue;  // regenerate with a fresh derived seed
    }
    SynthSample sample;
    sample.id = id;
    sample.entity_type = type;
    sample.spoken_tokens = std::move(d.tokens);
    sample.target = target;
    sample.entity = std::move(d.entity);
    sample.seed = eff;
    if (roles) *roles = std::move(d.roles);
    if (attempts) *attempts = static_cast<int>(attempt) + 1;
    return sample;
  }
  throw DomainError("generate_sample: no feasible draw after 64 attempts");
}

std::vector<double> lexeme_embedding(const std::string& word, size_t segment,
                                     int dim, uint64_t seed) {
  SplitMix64 rng(seed_mix(fnv1a64(word) + 0x9E3779B97F4A7C15ULL * (segment + 1),
                          seed ^ kEmbedSalt));
  std::vector<double> e(static_cast<size_t>(dim));
  for (double& v : e) v = rng.normal();
  return e;
}

std::string transcript_text(const SpokenTranscript& tokens) {
  std::string out;
  for (const std::string& w : tokens) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

FeatureSequence synthesize_features(const SynthSample& sample, const SynthConfig& cfg,
                                    std::vector<FrameSpan>* plan_out) {
  const DurationPlan plan = plan_durations(sample.seed, cfg, sample.spoken_tokens);
  FeatureSequence x(plan.total, static_cast<size_t>(cfg.feature_dim));
  SplitMix64 noise(seed_mix(sample.seed, kNoiseSalt));
  const std::vector<double> silence = lexeme_embedding("<sil>", 0, cfg.feature_dim, cfg.seed);
  if (plan_out) plan_out->clear();

  size_t t = 0;
  for (size_t i = 0; i < sample.spoken_tokens.size(); ++i) {
    const std::string& word = sample.spoken_tokens[i];
    const std::vector<size_t>& segs = plan.segment_frames[i];
    size_t token_frames = 0;
    for (size_t d : segs) token_frames += d;
    if (plan_out && token_frames > 0) {
      plan_out->push_back({i, t, token_frames, false});
    }
    for (size_t s = 0; s < segs.size(); ++s) {
      const std::vector<double> emb = lexeme_embedding(word, s, cfg.feature_dim, cfg.seed);
      for (size_t f = 0; f < segs[s]; ++f, ++t) {
        double* row = x.row(t);
        for (size_t c = 0; c < x.cols; ++c) {
          row[c] = emb[c] + (cfg.noise_sigma > 0.0 ? cfg.noise_sigma * noise.normal() : 0.0);
        }
      }
    }
    if (i < plan.silence_frames.size()) {
      const size_t sil = plan.silence_frames[i];
      if (plan_out && sil > 0) plan_out->push_back({i, t, sil, true});
      for (size_t f = 0; f < sil; ++f, ++t) {
        double* row = x.row(t);
        for (size_t c = 0; c < x.cols; ++c) {
          row[c] = silence[c] + (cfg.noise_sigma > 0.0 ? cfg.noise_sigma * noise.normal() : 0.0);
        }
      }
    }
  }
  return x;
}

}  // namespace ctce
