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

#include <cmath>
#include <vector>

#include "ctce/kernels.hpp"
#include "ctce/rng.hpp"

using namespace ctce;

namespace {

std::vector<double> random_vec(SplitMix64& rng, size_t n, double lo = -1.0, double hi = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

const size_t kSizes[] = {0, 1, 3, 7, 8, 17, 64, 320, 1001};

}  // namespace

TEST_CASE("every available backend matches the scalar reference") {
  const auto& ref = kernels::scalar();
  for (const std::string& name : kernels::available()) {
    CAPTURE(name);
    REQUIRE(kernels::set_active(name));
    const auto& k = kernels::active();
    SplitMix64 rng(42);

    for (size_t n : kSizes) {
      CAPTURE(n);
      const auto a = random_vec(rng, n);
      const auto b = random_vec(rng, n);

      if (n > 0) {
        const double d_ref = ref.dot(a.data(), b.data(), n);
        const double d = k.dot(a.data(), b.data(), n);
        CHECK(std::abs(d - d_ref) <= 1e-13 * std::max(1.0, std::abs(d_ref)));

        CHECK(k.max(a.data(), n) == ref.max(a.data(), n));
        const double s_ref = ref.sum(a.data(), n);
        CHECK(std::abs(k.sum(a.data(), n) - s_ref) <= 1e-13 * std::max(1.0, std::abs(s_ref)));
      }

      auto y1 = random_vec(rng, n);
      auto y2 = y1;
      ref.axpy(0.37, a.data(), y1.data(), n);
      k.axpy(0.37, a.data(), y2.data(), n);
      for (size_t i = 0; i < n; ++i) {
        CHECK(std::abs(y1[i] - y2[i]) <= 1e-14 * std::max(1.0, std::abs(y1[i])));
      }

      auto r1 = random_vec(rng, n);
      auto r2 = r1;
      ref.relu(r1.data(), n);
      k.relu(r2.data(), n);
      CHECK(r1 == r2);

      auto g1 = random_vec(rng, n);
      auto g2 = g1;
      ref.relu_backward(r1.data(), g1.data(), n);
      k.relu_backward(r2.data(), g2.data(), n);
      CHECK(g1 == g2);

      auto s1 = random_vec(rng, n);
      auto s2 = s1;
      ref.scale(s1.data(), n, -1.75);
      k.scale(s2.data(), n, -1.75);
      CHECK(s1 == s2);
    }

    // matvec against per-row dot.
    const size_t rows = 13, cols = 37;
    const auto w = random_vec(rng, rows * cols);
    const auto x = random_vec(rng, cols);
    std::vector<double> out_ref(rows), out(rows);
    ref.matvec(w.data(), x.data(), out_ref.data(), rows, cols);
    k.matvec(w.data(), x.data(), out.data(), rows, cols);
    for (size_t r = 0; r < rows; ++r) {
      CHECK(std::abs(out[r] - out_ref[r]) <= 1e-13 * std::max(1.0, std::abs(out_ref[r])));
    }

    // adam elementwise equivalence.
    const size_t n = 259;
    auto p1 = random_vec(rng, n), m1 = random_vec(rng, n, 0, 0.1), v1 = random_vec(rng, n, 0, 0.1);
    auto g = random_vec(rng, n);
    auto p2 = p1, m2 = m1, v2 = v1;
    ref.adam_update(p1.data(), m1.data(), v1.data(), g.data(), n, 1e-3, 0.9, 0.999, 1e-8,
                    1.0 / (1 - 0.9), 1.0 / (1 - 0.999));
    k.adam_update(p2.data(), m2.data(), v2.data(), g.data(), n, 1e-3, 0.9, 0.999, 1e-8,
                  1.0 / (1 - 0.9), 1.0 / (1 - 0.999));
    for (size_t i = 0; i < n; ++i) {
      CHECK(std::abs(p1[i] - p2[i]) <= 1e-12 * std::max(1.0, std::abs(p1[i])));
      CHECK(std::abs(m1[i] - m2[i]) <= 1e-12);
      CHECK(std::abs(v1[i] - v2[i]) <= 1e-12);
    }
  }
  // Restore the default for any later test binaries sharing the process.
  kernels::set_active(kernels::available().back());
}

TEST_CASE("backend selection") {
  const auto names = kernels::available();
  REQUIRE(!names.empty());
  CHECK(names.front() == "scalar");
  CHECK(kernels::set_active("scalar"));
  CHECK(std::string(kernels::active().name) == "scalar");
  CHECK(!kernels::set_active("no-such-backend"));
  CHECK(std::string(kernels::active().name) == "scalar");
  kernels::set_active(names.back());
}
