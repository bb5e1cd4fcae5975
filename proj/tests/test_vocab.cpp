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

#include "ctce/entity.hpp"
#include "ctce/errors.hpp"
#include "ctce/rng.hpp"
#include "ctce/vocab.hpp"

using namespace ctce;

namespace {

TokenSequence encode_names(const Vocabulary& v, const std::vector<std::string>& names) {
  TokenSequence out;
  for (const std::string& n : names) out.push_back(v.label_index(n));
  return out;
}

}  // namespace

TEST_CASE("standard vocabulary shape") {
  const Vocabulary& v = Vocabulary::standard();
  CHECK(v.alphabet_size() == 51);  // 26 letters, 10 digits, 5 punct, 10 tags
  CHECK(v.output_size() == 52);
  CHECK(v.blank() == 51);
  CHECK(v.label_index("B_FN") >= 0);
  CHECK(v.is_tag(v.label_index("B_EML")));
  CHECK(!v.is_tag(v.label_index("a")));
  CHECK(v.content_hash() == Vocabulary(v.labels()).content_hash());
}

TEST_CASE("tag spaces are delimiters, payload spaces are content") {
  const Vocabulary& v = Vocabulary::standard();
  const TokenSequence got = v.encode_tagged("B_FN alexus E_FN B_LN king E_LN");
  const TokenSequence want = encode_names(
      v, {"B_FN", "a", "l", "e", "x", "u", "s", "E_FN", "B_LN", "k", "i", "n", "g", "E_LN"});
  CHECK(got == want);

  const TokenSequence street = v.encode_tagged("B_STRT 646 state st. E_STRT");
  const TokenSequence street_want =
      encode_names(v, {"B_STRT", "6", "4", "6", " ", "s", "t", "a", "t", "e", " ", "s", "t",
                       ".", "E_STRT"});
  CHECK(street == street_want);
}

TEST_CASE("encode/decode edges") {
  const Vocabulary& v = Vocabulary::standard();
  CHECK(v.encode_tagged("").empty());
  CHECK(v.decode_tokens({}).empty());

  const TokenSequence email = v.encode_tagged("B_EML kin915@gmail.com E_EML");
  CHECK(v.decode_tokens(email) == "B_EML kin915@gmail.com E_EML");

  // Unbalanced model output renders verbatim, no validation.
  const TokenSequence raw = encode_names(v, {"B_FN", "a"});
  CHECK(v.decode_tokens(raw) == "B_FN a");

  CHECK_THROWS_AS(v.encode_tagged("B_FN Alexus E_FN"), EncodingError);  // uppercase
  try {
    v.encode_tagged("ab?cd");
  } catch (const EncodingError& e) {
    const std::string msg = e.what();
    CHECK(msg.find('?') != std::string::npos);
    CHECK(msg.find("2") != std::string::npos);  // offset
  }
  CHECK_THROWS_AS(v.decode_tokens({9999}), DecodingError);
  CHECK_THROWS_AS(v.decode_tokens({v.blank()}), DecodingError);
}

TEST_CASE("round trips on randomized valid tagged strings") {
  const Vocabulary& v = Vocabulary::standard();
  SplitMix64 rng(515);
  const std::string graphemes = "abcdefghijklmnopqrstuvwxyz0123456789.@'-";
  int checked = 0;
  while (checked < 1000) {
    // Random records of every entity type, rendered then round-tripped.
    EntityRecord r;
    auto random_payload = [&](bool spaces) {
      std::string s;
      const size_t len = 1 + rng.below(12);
      for (size_t i = 0; i < len; ++i) {
        if (spaces && i > 0 && i + 1 < len && rng.bernoulli(0.15) && s.back() != ' ') {
          s += ' ';
        } else {
          s += graphemes[rng.below(graphemes.size())];
        }
      }
      if (s.front() == ' ') s.front() = 'x';
      if (s.back() == ' ') s.back() = 'x';
      return s;
    };
    switch (rng.below(5)) {
      case 0:
        r.type = EntityType::first_name;
        r.value = random_payload(false);
        break;
      case 1:
        r.type = EntityType::last_name;
        r.value = random_payload(false);
        break;
      case 2:
        r.type = EntityType::full_name;
        r.first = random_payload(false);
        r.last = random_payload(true);
        break;
      case 3:
        r.type = EntityType::street_address;
        r.street = random_payload(true);
        if (rng.bernoulli(0.5)) r.apartment = random_payload(true);
        break;
      default:
        r.type = EntityType::email;
        r.value = random_payload(false);
        break;
    }
    const std::string tagged = render_entities({r});
    const TokenSequence tokens = v.encode_tagged(tagged);
    CHECK(v.decode_tokens(tokens) == tagged);             // decode . encode = id
    CHECK(v.encode_tagged(v.decode_tokens(tokens)) == tokens);  // encode . decode = id
    ++checked;
  }
}

TEST_CASE("vocabulary dump lists one label per line") {
  const Vocabulary& v = Vocabulary::standard();
  const auto path = std::filesystem::temp_directory_path() / "ctce_vocab_dump.txt";
  v.dump(path.string());
  std::ifstream in(path);
  std::string line;
  size_t count = 0;
  while (std::getline(in, line)) {
    CHECK(line == v.labels()[count]);
    ++count;
  }
  CHECK(count == v.alphabet_size());
  std::filesystem::remove(path);
}
