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

#include "ctce/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace ctce::kernels {

const Backend* avx2_backend();  // nullptr when not compiled in / unsupported
const Backend* neon_backend();

namespace {

bool cpu_supports_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Backend* lookup(const std::string& name) {
  if (name == "scalar") return &scalar();
  if (name == "avx2" && cpu_supports_avx2()) return avx2_backend();
  if (name == "neon") return neon_backend();
  return nullptr;
}

const Backend* pick_default() {
  if (const char* env = std::getenv("CTCE_KERNELS")) {
    if (const Backend* b = lookup(env)) return b;
    // Unknown or unsupported override: fall through to autodetect.
  }
  if (cpu_supports_avx2()) {
    if (const Backend* b = avx2_backend()) return b;
  }
  if (const Backend* b = neon_backend()) return b;
  return &scalar();
}

std::atomic<const Backend*>& active_slot() {
  static std::atomic<const Backend*> slot{pick_default()};
  return slot;
}

}  // namespace

const Backend& active() { return *active_slot().load(std::memory_order_relaxed); }

bool set_active(const std::string& name) {
  if (const Backend* b = lookup(name)) {
    active_slot().store(b, std::memory_order_relaxed);
    return true;
  }
  return false;
}

std::vector<std::string> available() {
  std::vector<std::string> names{"scalar"};
  if (cpu_supports_avx2() && avx2_backend()) names.push_back("avx2");
  if (neon_backend()) names.push_back("neon");
  return names;
}

}  // namespace ctce::kernels
