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

#include <cstddef>
#include <string>
#include <vector>

namespace ctce::kernels {

// Flat f64 primitives behind the encoder's hot loops. Every entry has a
// scalar reference implementation; SIMD variants (AVX2 on x86_64, NEON on
// aarch64) are selected once at startup. Results may differ from scalar in
// the last ulps (different reduction order / FMA contraction), but every
// backend is deterministic for fixed inputs, so reruns on the same machine
// reproduce bit-identical artifacts.
struct Backend {
  const char* name;

  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, size_t n);
  // out[r] = dot(w + r*cols, x) for r in [0, rows)
  void (*matvec)(const double* w, const double* x, double* out, size_t rows,
                 size_t cols);
  // x[i] = max(0, x[i])
  void (*relu)(double* x, size_t n);
  // g[i] = act[i] > 0 ? g[i] : 0
  void (*relu_backward)(const double* act, double* g, size_t n);
  // Bias-corrected Adam step; bc1 = 1/(1-b1^t), bc2 = 1/(1-b2^t) are
  // precomputed by the caller so this stays elementwise.
  void (*adam_update)(double* p, double* m, double* v, const double* g,
                      size_t n, double lr, double b1, double b2, double eps,
                      double bc1, double bc2);
  double (*max)(const double* x, size_t n);   // n >= 1
  double (*sum)(const double* x, size_t n);
  void (*scale)(double* x, size_t n, double alpha);
};

/// Scalar reference backend; always available.
const Backend& scalar();

/// The backend in use. Chosen on first call: best SIMD variant the CPU
/// supports, unless the CTCE_KERNELS environment variable ("scalar",
/// "avx2", "neon") overrides it.
const Backend& active();

/// Force a backend by name; returns false if unavailable on this machine.
bool set_active(const std::string& name);

/// Names of backends usable on this machine, scalar first.
std::vector<std::string> available();

}  // namespace ctce::kernels
