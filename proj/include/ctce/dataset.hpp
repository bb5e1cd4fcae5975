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

#include <string>
#include <vector>

#include "ctce/synth.hpp"

namespace ctce {

struct Dataset {
  std::vector<SynthSample> samples;
  uint64_t config_hash = 0;
};

/// JSON Lines: a header record {"kind":"header","config_hash":...,"records":N}
/// followed by one sample per line. Seeds and hashes are hex strings (u64
/// does not survive JSON number precision). Output is byte-stable.
void write_dataset(const std::string& path, const std::vector<SynthSample>& samples,
                   uint64_t config_hash);
Dataset load_dataset(const std::string& path);

/// The generator config next to its corpus. The file is exactly
/// cfg.serialize(); its FNV-1a hash is what dataset headers reference.
void write_synth_config(const std::string& path, const SynthConfig& cfg);
SynthConfig load_synth_config(const std::string& path);

/// One key=value assignment in the synth config grammar (also the CLI
/// --set override path). Throws ConfigError on unknown keys or bad values.
void apply_synth_kv(SynthConfig& cfg, const std::string& key, const std::string& value);

/// Loads the dataset and its sibling config, verifying the header hash.
/// Throws MismatchError when the config does not match the data.
struct LoadedCorpus {
  Dataset data;
  SynthConfig cfg;
};
LoadedCorpus load_corpus(const std::string& dataset_path, const std::string& config_path);

/// Convention: the config sits next to the dataset file as synth.toml.
std::string sibling_config_path(const std::string& dataset_path);

}  // namespace ctce
