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

// AVX2+FMA variants of the f64 kernels. This translation unit is compiled
// with -mavx2 -mfma on x86_64 only; the dispatcher checks cpu support at
// runtime before handing these out.

#include "ctce/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

namespace ctce::kernels {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s2 = _mm_add_pd(lo, hi);
  const __m128d s1 = _mm_add_sd(s2, _mm_unpackhi_pd(s2, s2));
  return _mm_cvtsd_f64(s1);
}

double dot_avx2(const double* a, const double* b, size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd();
  __m256d acc3 = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 8), _mm256_loadu_pd(b + i + 8), acc2);
    acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 12), _mm256_loadu_pd(b + i + 12), acc3);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += a[i] * b[i];
  acc0 = _mm256_add_pd(_mm256_add_pd(acc0, acc1), _mm256_add_pd(acc2, acc3));
  return hsum(acc0) + tail;
}

void axpy_avx2(double alpha, const double* x, double* y, size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256d y0 = _mm256_loadu_pd(y + i);
    __m256d y1 = _mm256_loadu_pd(y + i + 4);
    y0 = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), y0);
    y1 = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i + 4), y1);
    _mm256_storeu_pd(y + i, y0);
    _mm256_storeu_pd(y + i + 4, y1);
  }
  for (; i + 4 <= n; i += 4) {
    __m256d y0 = _mm256_loadu_pd(y + i);
    y0 = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), y0);
    _mm256_storeu_pd(y + i, y0);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

// Four output rows share each load of x; this is the encoder's dominant
// loop (same-padded conv as matvec over contiguous frame windows).
void matvec_avx2(const double* w, const double* x, double* out, size_t rows,
                 size_t cols) {
  size_t r = 0;
  for (; r + 4 <= rows; r += 4) {
    const double* w0 = w + (r + 0) * cols;
    const double* w1 = w + (r + 1) * cols;
    const double* w2 = w + (r + 2) * cols;
    const double* w3 = w + (r + 3) * cols;
    __m256d a0 = _mm256_setzero_pd();
    __m256d a1 = _mm256_setzero_pd();
    __m256d a2 = _mm256_setzero_pd();
    __m256d a3 = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= cols; i += 4) {
      const __m256d xv = _mm256_loadu_pd(x + i);
      a0 = _mm256_fmadd_pd(_mm256_loadu_pd(w0 + i), xv, a0);
      a1 = _mm256_fmadd_pd(_mm256_loadu_pd(w1 + i), xv, a1);
      a2 = _mm256_fmadd_pd(_mm256_loadu_pd(w2 + i), xv, a2);
      a3 = _mm256_fmadd_pd(_mm256_loadu_pd(w3 + i), xv, a3);
    }
    double t0 = hsum(a0), t1 = hsum(a1), t2 = hsum(a2), t3 = hsum(a3);
    for (; i < cols; ++i) {
      t0 += w0[i] * x[i];
      t1 += w1[i] * x[i];
      t2 += w2[i] * x[i];
      t3 += w3[i] * x[i];
    }
    out[r + 0] = t0;
    out[r + 1] = t1;
    out[r + 2] = t2;
    out[r + 3] = t3;
  }
  for (; r < rows; ++r) out[r] = dot_avx2(w + r * cols, x, cols);
}

void relu_avx2(double* x, size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_max_pd(zero, _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) x[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void relu_backward_avx2(const double* act, double* g, size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d mask = _mm256_cmp_pd(_mm256_loadu_pd(act + i), zero, _CMP_GT_OQ);
    _mm256_storeu_pd(g + i, _mm256_and_pd(mask, _mm256_loadu_pd(g + i)));
  }
  for (; i < n; ++i) {
    if (act[i] <= 0.0) g[i] = 0.0;
  }
}

void adam_avx2(double* p, double* m, double* v, const double* g, size_t n,
               double lr, double b1, double b2, double eps, double bc1,
               double bc2) {
  const __m256d vb1 = _mm256_set1_pd(b1);
  const __m256d vb2 = _mm256_set1_pd(b2);
  const __m256d vob1 = _mm256_set1_pd(1.0 - b1);
  const __m256d vob2 = _mm256_set1_pd(1.0 - b2);
  const __m256d vbc1 = _mm256_set1_pd(bc1);
  const __m256d vbc2 = _mm256_set1_pd(bc2);
  const __m256d vlr = _mm256_set1_pd(lr);
  const __m256d veps = _mm256_set1_pd(eps);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d gv = _mm256_loadu_pd(g + i);
    __m256d mv = _mm256_loadu_pd(m + i);
    __m256d vv = _mm256_loadu_pd(v + i);
    mv = _mm256_fmadd_pd(vb1, mv, _mm256_mul_pd(vob1, gv));
    vv = _mm256_fmadd_pd(vb2, vv, _mm256_mul_pd(vob2, _mm256_mul_pd(gv, gv)));
    _mm256_storeu_pd(m + i, mv);
    _mm256_storeu_pd(v + i, vv);
    const __m256d mhat = _mm256_mul_pd(mv, vbc1);
    const __m256d vhat = _mm256_mul_pd(vv, vbc2);
    const __m256d denom = _mm256_add_pd(_mm256_sqrt_pd(vhat), veps);
    const __m256d step = _mm256_div_pd(_mm256_mul_pd(vlr, mhat), denom);
    _mm256_storeu_pd(p + i, _mm256_sub_pd(_mm256_loadu_pd(p + i), step));
  }
  for (; i < n; ++i) {
    m[i] = b1 * m[i] + (1.0 - b1) * g[i];
    v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
    p[i] -= lr * (m[i] * bc1) / (std::sqrt(v[i] * bc2) + eps);
  }
}

double max_avx2(const double* x, size_t n) {
  if (n < 8) {
    double best = x[0];
    for (size_t i = 1; i < n; ++i) best = x[i] > best ? x[i] : best;
    return best;
  }
  __m256d vbest = _mm256_loadu_pd(x);
  size_t i = 4;
  for (; i + 4 <= n; i += 4) {
    vbest = _mm256_max_pd(vbest, _mm256_loadu_pd(x + i));
  }
  double lanes[4];
  _mm256_storeu_pd(lanes, vbest);
  double best = lanes[0];
  for (int k = 1; k < 4; ++k) best = lanes[k] > best ? lanes[k] : best;
  for (; i < n; ++i) best = x[i] > best ? x[i] : best;
  return best;
}

double sum_avx2(const double* x, size_t n) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double tail = 0.0;
  for (; i < n; ++i) tail += x[i];
  return hsum(acc) + tail;
}

void scale_avx2(double* x, size_t n, double alpha) {
  const __m256d va = _mm256_set1_pd(alpha);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) x[i] *= alpha;
}

}  // namespace

const Backend* avx2_backend() {
  static const Backend backend = {
      .name = "avx2",
      .dot = dot_avx2,
      .axpy = axpy_avx2,
      .matvec = matvec_avx2,
      .relu = relu_avx2,
      .relu_backward = relu_backward_avx2,
      .adam_update = adam_avx2,
      .max = max_avx2,
      .sum = sum_avx2,
      .scale = scale_avx2,
  };
  return &backend;
}

}  // namespace ctce::kernels

#else

namespace ctce::kernels {
const Backend* avx2_backend() { return nullptr; }
}  // namespace ctce::kernels

#endif
