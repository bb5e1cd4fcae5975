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

#include <cmath>
#include <limits>
#include <span>

#include "ctce/errors.hpp"

namespace ctce {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log(exp(a) + exp(b)) with max-shift; -inf is an absorbing zero.
inline double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = a > b ? a : b;
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

inline double log_add3(double a, double b, double c) {
  double m = a > b ? a : b;
  m = c > m ? c : m;
  if (m == kNegInf) return kNegInf;
  return m + std::log(std::exp(a - m) + std::exp(b - m) + std::exp(c - m));
}

/// log sum_i exp(v[i]) over a non-empty list. All-(-inf) input yields -inf
/// exactly; no intermediate overflow for any finite inputs.
inline double log_sum_exp(std::span<const double> values) {
  if (values.empty()) {
    throw DomainError("log_sum_exp: empty input");
  }
  double m = kNegInf;
  for (double v : values) {
    if (v > m) m = v;
  }
  if (m == kNegInf) return kNegInf;
  double acc = 0.0;
  for (double v : values) acc += std::exp(v - m);
  return m + std::log(acc);
}

}  // namespace ctce
