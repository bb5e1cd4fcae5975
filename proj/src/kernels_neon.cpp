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

// NEON (aarch64) variants. f64x2 lanes; NEON is baseline on aarch64 so no
// runtime feature check is needed.

#include "ctce/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>

namespace ctce::kernels {
namespace {

double dot_neon(const double* a, const double* b, size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += a[i] * b[i];
  return vaddvq_f64(acc0) + vaddvq_f64(acc1) + tail;
}

void axpy_neon(double alpha, const double* x, double* y, size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void matvec_neon(const double* w, const double* x, double* out, size_t rows,
                 size_t cols) {
  for (size_t r = 0; r < rows; ++r) out[r] = dot_neon(w + r * cols, x, cols);
}

void relu_neon(double* x, size_t n) {
  const float64x2_t zero = vdupq_n_f64(0.0);
  size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(x + i, vmaxq_f64(zero, vld1q_f64(x + i)));
  }
  for (; i < n; ++i) x[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void relu_backward_neon(const double* act, double* g, size_t n) {
  for (size_t i = 0; i < n; ++i) {
    if (act[i] <= 0.0) g[i] = 0.0;
  }
}

void adam_neon(double* p, double* m, double* v, const double* g, size_t n,
               double lr, double b1, double b2, double eps, double bc1,
               double bc2) {
  for (size_t i = 0; i < n; ++i) {
    m[i] = b1 * m[i] + (1.0 - b1) * g[i];
    v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
    p[i] -= lr * (m[i] * bc1) / (std::sqrt(v[i] * bc2) + eps);
  }
}

double max_neon(const double* x, size_t n) {
  double best = x[0];
  for (size_t i = 1; i < n; ++i) best = x[i] > best ? x[i] : best;
  return best;
}

double sum_neon(const double* x, size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(x + i));
  double tail = 0.0;
  for (; i < n; ++i) tail += x[i];
  return vaddvq_f64(acc) + tail;
}

void scale_neon(double* x, size_t n, double alpha) {
  const float64x2_t va = vdupq_n_f64(alpha);
  size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(x + i, vmulq_f64(va, vld1q_f64(x + i)));
  }
  for (; i < n; ++i) x[i] *= alpha;
}

}  // namespace

const Backend* neon_backend() {
  static const Backend backend = {
      .name = "neon",
      .dot = dot_neon,
      .axpy = axpy_neon,
      .matvec = matvec_neon,
      .relu = relu_neon,
      .relu_backward = relu_backward_neon,
      .adam_update = adam_neon,
      .max = max_neon,
      .sum = sum_neon,
      .scale = scale_neon,
  };
  return &backend;
}

}  // namespace ctce::kernels

#else

namespace ctce::kernels {
const Backend* neon_backend() { return nullptr; }
}  // namespace ctce::kernels

#endif
