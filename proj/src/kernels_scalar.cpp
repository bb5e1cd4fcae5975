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

// Reference kernels. Plain loops, no pragmas: these define the semantics
// the SIMD variants are equivalence-tested against.

#include <cmath>

#include "ctce/kernels.hpp"

namespace ctce::kernels {
namespace {

double dot_scalar(const double* a, const double* b, size_t n) {
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, size_t n) {
  for (size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void matvec_scalar(const double* w, const double* x, double* out, size_t rows,
                   size_t cols) {
  for (size_t r = 0; r < rows; ++r) out[r] = dot_scalar(w + r * cols, x, cols);
}

void relu_scalar(double* x, size_t n) {
  for (size_t i = 0; i < n; ++i) x[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void relu_backward_scalar(const double* act, double* g, size_t n) {
  for (size_t i = 0; i < n; ++i) {
    if (act[i] <= 0.0) g[i] = 0.0;
  }
}

void adam_scalar(double* p, double* m, double* v, const double* g, size_t n,
                 double lr, double b1, double b2, double eps, double bc1,
                 double bc2) {
  for (size_t i = 0; i < n; ++i) {
    m[i] = b1 * m[i] + (1.0 - b1) * g[i];
    v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
    const double mhat = m[i] * bc1;
    const double vhat = v[i] * bc2;
    p[i] -= lr * mhat / (std::sqrt(vhat) + eps);
  }
}

double max_scalar(const double* x, size_t n) {
  double best = x[0];
  for (size_t i = 1; i < n; ++i) {
    if (x[i] > best) best = x[i];
  }
  return best;
}

double sum_scalar(const double* x, size_t n) {
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

void scale_scalar(double* x, size_t n, double alpha) {
  for (size_t i = 0; i < n; ++i) x[i] *= alpha;
}

}  // namespace

const Backend& scalar() {
  static const Backend backend = {
      .name = "scalar",
      .dot = dot_scalar,
      .axpy = axpy_scalar,
      .matvec = matvec_scalar,
      .relu = relu_scalar,
      .relu_backward = relu_backward_scalar,
      .adam_update = adam_scalar,
      .max = max_scalar,
      .sum = sum_scalar,
      .scale = scale_scalar,
  };
  return backend;
}

}  // namespace ctce::kernels
