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

#include "ctce/encoder.hpp"
#include "ctce/vocab.hpp"

namespace ctce {

/// Binary checkpoint: magic "CTCE", u32 format version, config block
/// (encoder dims + vocabulary labels and hash), then the flat little-endian
/// f64 parameter vector in declaration order. Written to a temp file and
/// renamed, so readers never see a torn checkpoint.
struct Checkpoint {
  EncoderModel model;
  Vocabulary vocab{std::vector<std::string>{"a"}};  // replaced on load
};

void save_checkpoint(const std::string& path, const EncoderModel& model,
                     const Vocabulary& vocab);

/// Throws IoError on malformed files and MismatchError when the stored
/// vocabulary hash does not match the stored labels.
Checkpoint load_checkpoint(const std::string& path);

}  // namespace ctce
