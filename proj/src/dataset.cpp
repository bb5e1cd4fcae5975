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

#include "ctce/dataset.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "ctce/errors.hpp"
#include "ctce/rng.hpp"

namespace ctce {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string hex64(uint64_t v) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << v;
  return out.str();
}

uint64_t parse_hex64(const std::string& s) {
  uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v, 16);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw IoError("dataset: bad hex field '" + s + "'");
  }
  return v;
}

json entity_to_json(const EntityRecord& e) {
  json j;
  j["type"] = entity_type_name(e.type);
  switch (e.type) {
    case EntityType::full_name:
      j["first"] = e.first;
      j["last"] = e.last;
      break;
    case EntityType::street_address:
      j["street"] = e.street;
      if (!e.apartment.empty()) j["apartment"] = e.apartment;
      break;
    default:
      j["value"] = e.value;
  }
  return j;
}

EntityRecord entity_from_json(const json& j) {
  EntityRecord e;
  const auto type = entity_type_from_name(j.at("type").get<std::string>());
  if (!type) throw IoError("dataset: unknown entity type");
  e.type = *type;
  switch (e.type) {
    case EntityType::full_name:
      e.first = j.at("first").get<std::string>();
      e.last = j.at("last").get<std::string>();
      break;
    case EntityType::street_address:
      e.street = j.at("street").get<std::string>();
      if (j.contains("apartment")) e.apartment = j.at("apartment").get<std::string>();
      break;
    default:
      e.value = j.at("value").get<std::string>();
  }
  return e;
}

}  // namespace

void write_dataset(const std::string& path, const std::vector<SynthSample>& samples,
                   uint64_t config_hash) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("dataset: cannot open " + tmp);
    json header;
    header["kind"] = "header";
    header["config_hash"] = hex64(config_hash);
    header["records"] = samples.size();
    out << header.dump() << '\n';
    for (const SynthSample& s : samples) {
      json j;
      j["id"] = s.id;
      j["entity_type"] = entity_type_name(s.entity_type);
      j["spoken_tokens"] = s.spoken_tokens;
      j["target"] = s.target;
      j["entity"] = entity_to_json(s.entity);
      j["seed"] = hex64(s.seed);
      out << j.dump() << '\n';
    }
    if (!out.flush()) throw IoError("dataset: write failed for " + tmp);
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("dataset: rename to " + path + " failed: " + ec.message());
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("dataset: cannot open " + path);
  Dataset ds;
  std::string line;
  size_t lineno = 0;
  size_t expected = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw IoError("dataset: " + path + " line " + std::to_string(lineno) + ": " + e.what());
    }
    if (lineno == 1) {
      if (!j.contains("kind") || j.at("kind") != "header") {
        throw IoError("dataset: " + path + " missing header line");
      }
      ds.config_hash = parse_hex64(j.at("config_hash").get<std::string>());
      expected = j.at("records").get<size_t>();
      continue;
    }
    SynthSample s;
    s.id = j.at("id").get<uint64_t>();
    const auto type = entity_type_from_name(j.at("entity_type").get<std::string>());
    if (!type) throw IoError("dataset: unknown entity type at line " + std::to_string(lineno));
    s.entity_type = *type;
    s.spoken_tokens = j.at("spoken_tokens").get<std::vector<std::string>>();
    s.target = j.at("target").get<std::string>();
    s.entity = entity_from_json(j.at("entity"));
    s.seed = parse_hex64(j.at("seed").get<std::string>());
    ds.samples.push_back(std::move(s));
  }
  if (ds.samples.size() != expected) {
    throw IoError("dataset: " + path + " has " + std::to_string(ds.samples.size()) +
                  " records, header says " + std::to_string(expected));
  }
  return ds;
}

void write_synth_config(const std::string& path, const SynthConfig& cfg) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("config: cannot open " + tmp);
    out << cfg.serialize();
    if (!out.flush()) throw IoError("config: write failed for " + tmp);
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("config: rename to " + path + " failed: " + ec.message());
}

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

void apply_synth_kv(SynthConfig& cfg, const std::string& key, const std::string& value) {
  try {
    if (key == "seed") cfg.seed = std::stoull(value);
    else if (key == "feature_dim") cfg.feature_dim = std::stoi(value);
    else if (key == "frames_per_char_min") cfg.frames_per_char_min = std::stoi(value);
    else if (key == "frames_per_char_max") cfg.frames_per_char_max = std::stoi(value);
    else if (key == "silence_min") cfg.silence_min = std::stoi(value);
    else if (key == "silence_max") cfg.silence_max = std::stoi(value);
    else if (key == "noise_sigma") cfg.noise_sigma = std::stod(value);
    else if (key == "p_spell_only") cfg.p_spell_only = std::stod(value);
    else if (key == "p_say_then_spell") cfg.p_say_then_spell = std::stod(value);
    else if (key == "p_name_expansion") cfg.p_name_expansion = std::stod(value);
    else if (key == "p_email_expansion") cfg.p_email_expansion = std::stod(value);
    else if (key == "p_expansion_letter") cfg.p_expansion_letter = std::stod(value);
    else if (key == "p_carrier") cfg.p_carrier = std::stod(value);
    else if (key == "p_filler") cfg.p_filler = std::stod(value);
    else if (key == "p_repeat") cfg.p_repeat = std::stod(value);
    else if (key == "p_said_mismatch") cfg.p_said_mismatch = std::stod(value);
    else if (key == "novel_test_fraction") cfg.novel_test_fraction = std::stod(value);
    else if (key == "entity_types") {
      cfg.entity_types.clear();
      for (const std::string& name : split_list(value)) {
        const auto et = entity_type_from_name(name);
        if (!et) throw ConfigError("config: unknown entity type '" + name + "'");
        cfg.entity_types.push_back(*et);
      }
    } else if (key == "first_names") cfg.first_names = split_list(value);
    else if (key == "last_names") cfg.last_names = split_list(value);
    else if (key == "street_words") cfg.street_words = split_list(value);
    else if (key == "street_types") cfg.street_types = split_list(value);
    else if (key == "email_domains") cfg.email_domains = split_list(value);
    else throw ConfigError("config: unknown key '" + key + "'");
  } catch (const std::invalid_argument&) {
    throw ConfigError("config: bad value '" + value + "' for " + key);
  } catch (const std::out_of_range&) {
    throw ConfigError("config: value '" + value + "' out of range for " + key);
  }
}

SynthConfig load_synth_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("config: cannot open " + path);
  SynthConfig cfg;  // all fields set explicitly by the file
  cfg.entity_types.clear();
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == '[') continue;
    const size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: " + path + " line " + std::to_string(lineno) +
                        ": expected key = value");
    }
    try {
      apply_synth_kv(cfg, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(e.what()) + " (" + path + " line " +
                        std::to_string(lineno) + ")");
    }
  }
  return cfg;
}

std::string sibling_config_path(const std::string& dataset_path) {
  return (fs::path(dataset_path).parent_path() / "synth.toml").string();
}

CorpusPaths build_corpus(const SynthConfig& cfg, const CorpusSpec& spec,
                         const std::string& out_dir) {
  const std::vector<EntityType>& types = spec.types.empty() ? cfg.entity_types : spec.types;
  if (types.empty()) throw ConfigError("build_corpus: no entity types");
  if (spec.n_train < 1 || spec.n_test < 1) {
    throw ConfigError("build_corpus: split sizes must be >= 1");
  }
  const size_t n_valid =
      spec.n_valid > 0 ? spec.n_valid : std::max<size_t>(1, spec.n_train / 10);

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("build_corpus: cannot create " + out_dir + ": " + ec.message());

  const uint64_t hash = cfg.content_hash();
  const int novel_percent =
      static_cast<int>(cfg.novel_test_fraction * 100.0 + 0.5);

  uint64_t next_id = 0;
  auto make_split = [&](size_t per_type, bool test_split) {
    std::vector<SynthSample> samples;
    samples.reserve(per_type * types.size());
    for (EntityType type : types) {
      for (size_t k = 0; k < per_type; ++k) {
        const bool novel = test_split && static_cast<int>(k % 100) < novel_percent;
        samples.push_back(generate_sample(cfg, type, next_id++, novel));
      }
    }
    return samples;
  };

  CorpusPaths paths;
  paths.train = (fs::path(out_dir) / "train.jsonl").string();
  paths.valid = (fs::path(out_dir) / "valid.jsonl").string();
  paths.test = (fs::path(out_dir) / "test.jsonl").string();
  paths.config = (fs::path(out_dir) / "synth.toml").string();

  write_dataset(paths.train, make_split(spec.n_train, false), hash);
  write_dataset(paths.valid, make_split(n_valid, false), hash);
  write_dataset(paths.test, make_split(spec.n_test, true), hash);
  write_synth_config(paths.config, cfg);
  return paths;
}

LoadedCorpus load_corpus(const std::string& dataset_path, const std::string& config_path) {
  LoadedCorpus out;
  out.data = load_dataset(dataset_path);
  out.cfg = load_synth_config(config_path);
  if (out.cfg.content_hash() != out.data.config_hash) {
    throw MismatchError("dataset " + dataset_path + " was generated with a different config than " +
                        config_path);
  }
  return out;
}

}  // namespace ctce
