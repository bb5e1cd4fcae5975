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

// Forward-backward (alpha/beta) over the blank-interleaved target, all in
// log space. alpha_t(s) includes frames 1..t, beta_t(s) includes t..T, so
// for every t: logsumexp_s(alpha + beta - logp_t(l'_s)) equals the target
// log-probability.

#include "ctce/ctc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ctce/errors.hpp"
#include "ctce/numeric.hpp"

namespace ctce {

namespace {

constexpr double kProbFloor = 1e-12;

inline double flog(double p) { return std::log(p < kProbFloor ? kProbFloor : p); }

// Blank-interleaved target: (blank, l1, blank, l2, ..., blank).
std::vector<Label> extend_target(const TokenSequence& target, Label blank) {
  std::vector<Label> ext(2 * target.size() + 1, blank);
  for (size_t i = 0; i < target.size(); ++i) ext[2 * i + 1] = target[i];
  return ext;
}

void check_target(const PosteriorGrid& grid, const TokenSequence& target) {
  const Label blank = static_cast<Label>(grid.cols) - 1;
  for (Label l : target) {
    if (l < 0 || l >= blank) {
      throw DomainError("ctc: target label out of range");
    }
  }
}

}  // namespace

double path_log_prob(const PosteriorGrid& grid, const AlignmentPath& path) {
  if (path.size() != grid.rows) {
    throw DomainError("path_log_prob: path length " + std::to_string(path.size()) +
                      " != frame count " + std::to_string(grid.rows));
  }
  double acc = 0.0;
  for (size_t t = 0; t < path.size(); ++t) {
    const Label l = path[t];
    if (l < 0 || static_cast<size_t>(l) >= grid.cols) {
      throw DomainError("path_log_prob: label out of range");
    }
    acc += flog(grid.at(t, static_cast<size_t>(l)));
  }
  return acc;
}

TokenSequence collapse(const AlignmentPath& path, Label blank) {
  TokenSequence out;
  Label prev = -1;
  for (Label l : path) {
    if (l != prev && l != blank) out.push_back(l);
    prev = l;
  }
  return out;
}

size_t ctc_min_frames(const TokenSequence& target) {
  size_t repeats = 0;
  for (size_t i = 1; i < target.size(); ++i) {
    if (target[i] == target[i - 1]) ++repeats;
  }
  return target.size() + repeats;
}

CtcLossResult ctc_loss(const PosteriorGrid& grid, const TokenSequence& target) {
  check_target(grid, target);
  const size_t T = grid.rows;
  const size_t n = grid.cols;
  const Label blank = static_cast<Label>(n) - 1;
  if (T < ctc_min_frames(target)) {
    throw AlignmentInfeasible("ctc: target needs " + std::to_string(ctc_min_frames(target)) +
                              " frames, grid has " + std::to_string(T));
  }

  const std::vector<Label> ext = extend_target(target, blank);
  const size_t S = ext.size();

  // Log posteriors of the extended-target labels only.
  Matrix lp(T, S);
  for (size_t t = 0; t < T; ++t) {
    for (size_t s = 0; s < S; ++s) {
      lp.at(t, s) = flog(grid.at(t, static_cast<size_t>(ext[s])));
    }
  }

  auto allows_skip = [&](size_t s) {
    return ext[s] != blank && s >= 2 && ext[s] != ext[s - 2];
  };

  Matrix alpha(T, S, kNegInf);
  alpha.at(0, 0) = lp.at(0, 0);
  if (S > 1) alpha.at(0, 1) = lp.at(0, 1);
  for (size_t t = 1; t < T; ++t) {
    for (size_t s = 0; s < S; ++s) {
      double acc = alpha.at(t - 1, s);
      if (s >= 1) acc = log_add(acc, alpha.at(t - 1, s - 1));
      if (allows_skip(s)) acc = log_add(acc, alpha.at(t - 1, s - 2));
      alpha.at(t, s) = acc == kNegInf ? kNegInf : acc + lp.at(t, s);
    }
  }

  double log_prob = alpha.at(T - 1, S - 1);
  if (S > 1) log_prob = log_add(log_prob, alpha.at(T - 1, S - 2));

  Matrix beta(T, S, kNegInf);
  beta.at(T - 1, S - 1) = lp.at(T - 1, S - 1);
  if (S > 1) beta.at(T - 1, S - 2) = lp.at(T - 1, S - 2);
  for (size_t t = T - 1; t-- > 0;) {
    for (size_t s = 0; s < S; ++s) {
      double acc = beta.at(t + 1, s);
      if (s + 1 < S) acc = log_add(acc, beta.at(t + 1, s + 1));
      if (s + 2 < S && allows_skip(s + 2)) acc = log_add(acc, beta.at(t + 1, s + 2));
      beta.at(t, s) = acc == kNegInf ? kNegInf : acc + lp.at(t, s);
    }
  }

  // d(loss)/d(logit_tk) = y_tk - exp(occupancy_t(k) - log_prob), where
  // occupancy sums alpha*beta/y over extended positions labeled k.
  CtcLossResult result;
  result.log_prob = log_prob;
  result.loss = -log_prob;
  result.logit_grad = Matrix(T, n);
  std::vector<double> occ(n);
  for (size_t t = 0; t < T; ++t) {
    std::fill(occ.begin(), occ.end(), kNegInf);
    for (size_t s = 0; s < S; ++s) {
      const double ab = alpha.at(t, s) + beta.at(t, s) - lp.at(t, s);
      const size_t k = static_cast<size_t>(ext[s]);
      occ[k] = log_add(occ[k], ab);
    }
    double* g = result.logit_grad.row(t);
    const double* y = grid.row(t);
    for (size_t k = 0; k < n; ++k) {
      const double q = occ[k] == kNegInf ? 0.0 : std::exp(occ[k] - log_prob);
      g[k] = y[k] - q;
    }
  }
  return result;
}

namespace {

void check_enumeration_size(const PosteriorGrid& grid) {
  double paths = 1.0;
  for (size_t t = 0; t < grid.rows; ++t) {
    paths *= static_cast<double>(grid.cols);
    if (paths > 1e7) {
      throw DomainError("brute force: instance too large to enumerate");
    }
  }
}

// Visits every path over (cols)^T with its linear-domain probability.
template <typename Fn>
void for_each_path(const PosteriorGrid& grid, Fn&& fn) {
  const size_t T = grid.rows;
  const size_t n = grid.cols;
  AlignmentPath path(T, 0);
  std::vector<double> prefix(T + 1, 1.0);  // prefix[t] = prob of path[0..t)
  size_t t = 0;
  while (true) {
    if (t == T) {
      fn(path, prefix[T]);
      // Odometer step.
      while (t > 0 && static_cast<size_t>(path[t - 1]) + 1 == n) {
        path[t - 1] = 0;
        --t;
      }
      if (t == 0) return;
      ++path[t - 1];
      --t;
    }
    prefix[t + 1] = prefix[t] * grid.at(t, static_cast<size_t>(path[t]));
    ++t;
  }
}

}  // namespace

double brute_force_target_log_prob(const PosteriorGrid& grid, const TokenSequence& target) {
  check_enumeration_size(grid);
  const Label blank = static_cast<Label>(grid.cols) - 1;
  double total = 0.0;
  for_each_path(grid, [&](const AlignmentPath& path, double prob) {
    if (collapse(path, blank) == target) total += prob;
  });
  return total > 0.0 ? std::log(total) : kNegInf;
}

std::map<TokenSequence, double> enumerate_collapsed_outputs(const PosteriorGrid& grid) {
  check_enumeration_size(grid);
  const Label blank = static_cast<Label>(grid.cols) - 1;
  std::map<TokenSequence, double> table;
  for_each_path(grid, [&](const AlignmentPath& path, double prob) {
    table[collapse(path, blank)] += prob;
  });
  return table;
}

GreedyResult greedy_decode(const PosteriorGrid& grid) {
  GreedyResult res;
  res.path.resize(grid.rows);
  for (size_t t = 0; t < grid.rows; ++t) {
    const double* y = grid.row(t);
    size_t best = 0;
    for (size_t k = 1; k < grid.cols; ++k) {
      if (y[k] > y[best]) best = k;  // ties keep the lowest index
    }
    res.path[t] = static_cast<Label>(best);
  }
  res.tokens = collapse(res.path, static_cast<Label>(grid.cols) - 1);
  return res;
}

ConfidenceScore confidence(const PosteriorGrid& grid, const AlignmentPath& best_path) {
  if (best_path.size() != grid.rows) {
    throw DomainError("confidence: path length mismatch");
  }
  const Label blank = static_cast<Label>(grid.cols) - 1;
  ConfidenceScore score;
  double raw = 0.0;
  size_t count = 0;
  for (size_t t = 0; t < best_path.size(); ++t) {
    if (best_path[t] != blank) {
      raw += flog(grid.at(t, static_cast<size_t>(best_path[t])));
      ++count;
    }
  }
  if (count == 0) {
    score.raw = kNegInf;
    score.normalized = kNegInf;
    return score;
  }
  score.raw = raw;
  score.normalized = raw / static_cast<double>(count);
  score.nonblank_frames = count;
  return score;
}

}  // namespace ctce
