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

#include "ctce/checkpoint.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>

#include "ctce/errors.hpp"

namespace ctce {

namespace fs = std::filesystem;

namespace {

constexpr char kMagic[4] = {'C', 'T', 'C', 'E'};
constexpr uint32_t kVersion = 1;

void put_u32(std::ostream& out, uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ostream& out, uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

void put_f64(std::ostream& out, double v) {
  uint64_t bits;
  std::memcpy(&bits, &v, 8);
  put_u64(out, bits);
}

uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(b[i]) << (8 * i);
  return v;
}

uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& in) {
  const uint64_t bits = get_u64(in);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

}  // namespace

void save_checkpoint(const std::string& path, const EncoderModel& model,
                     const Vocabulary& vocab) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("checkpoint: cannot open " + tmp);
    out.write(kMagic, 4);
    put_u32(out, kVersion);
    put_u32(out, static_cast<uint32_t>(model.cfg.input_dim));
    put_u32(out, static_cast<uint32_t>(model.cfg.hidden));
    put_u32(out, static_cast<uint32_t>(model.cfg.layers));
    put_u32(out, static_cast<uint32_t>(model.cfg.kernel));
    put_u32(out, static_cast<uint32_t>(model.cfg.outputs));
    put_u64(out, vocab.content_hash());
    put_u32(out, static_cast<uint32_t>(vocab.labels().size()));
    for (const std::string& label : vocab.labels()) {
      put_u32(out, static_cast<uint32_t>(label.size()));
      out.write(label.data(), static_cast<std::streamsize>(label.size()));
    }
    put_u64(out, model.params.size());
    for (double p : model.params) put_f64(out, p);
    if (!out.flush()) throw IoError("checkpoint: write failed for " + tmp);
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("checkpoint: rename to " + path + " failed: " + ec.message());
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("checkpoint: cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw IoError("checkpoint: " + path + " is not a CTCE checkpoint");
  }
  const uint32_t version = get_u32(in);
  if (version != kVersion) {
    throw IoError("checkpoint: unsupported format version " + std::to_string(version));
  }
  EncoderConfig cfg;
  cfg.input_dim = static_cast<int>(get_u32(in));
  cfg.hidden = static_cast<int>(get_u32(in));
  cfg.layers = static_cast<int>(get_u32(in));
  cfg.kernel = static_cast<int>(get_u32(in));
  cfg.outputs = static_cast<int>(get_u32(in));
  const uint64_t stored_hash = get_u64(in);
  const uint32_t label_count = get_u32(in);
  std::vector<std::string> labels;
  labels.reserve(label_count);
  for (uint32_t i = 0; i < label_count; ++i) {
    const uint32_t len = get_u32(in);
    if (!in || len > 64) throw IoError("checkpoint: corrupt label table");
    std::string label(len, '\0');
    in.read(label.data(), len);
    labels.push_back(std::move(label));
  }
  Checkpoint ckpt;
  ckpt.vocab = Vocabulary(std::move(labels));
  if (ckpt.vocab.content_hash() != stored_hash) {
    throw MismatchError("checkpoint: stored vocabulary hash does not match its labels");
  }
  if (cfg.outputs != static_cast<int>(ckpt.vocab.output_size())) {
    throw MismatchError("checkpoint: output width " + std::to_string(cfg.outputs) +
                        " does not cover the vocabulary plus blank");
  }
  const uint64_t count = get_u64(in);
  if (count != EncoderModel::param_count(cfg)) {
    throw IoError("checkpoint: parameter count does not match config");
  }
  ckpt.model.cfg = cfg;
  ckpt.model.params.resize(count);
  for (uint64_t i = 0; i < count; ++i) ckpt.model.params[i] = get_f64(in);
  if (!in) throw IoError("checkpoint: truncated parameter block");
  return ckpt;
}

}  // namespace ctce
