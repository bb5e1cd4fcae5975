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

#include <cstdint>
#include <map>
#include <vector>

#include "ctce/matrix.hpp"

namespace ctce {

using Label = int32_t;

/// Length-T frame labeling over L u {blank}; blank is column count - 1 of
/// the grid it belongs to.
using AlignmentPath = std::vector<Label>;

/// Blank-free label sequence (a collapsed path, or a training target).
using TokenSequence = std::vector<Label>;

/// Sum over frames of log p(path_t at t). Throws DomainError when the path
/// length does not match the grid.
double path_log_prob(const PosteriorGrid& grid, const AlignmentPath& path);

/// Collapse map: merge adjacent repeats first, then drop blanks, so a blank
/// acts as a repeat separator ([a,-,a] -> aa, [a,a] -> a).
TokenSequence collapse(const AlignmentPath& path, Label blank);

/// Frames needed to emit `target`: its length plus one separator blank per
/// adjacent equal pair.
size_t ctc_min_frames(const TokenSequence& target);

struct CtcLossResult {
  double loss = 0.0;      // -log p(target | x)
  double log_prob = 0.0;  // log p(target | x)
  Matrix logit_grad;      // T x (|L|+1), d(loss)/d(pre-softmax logits)
};

/// Log-space forward-backward over the blank-interleaved target. Posteriors
/// are floored at 1e-12 before logs. Throws AlignmentInfeasible when T is
/// too short for the target.
CtcLossResult ctc_loss(const PosteriorGrid& grid, const TokenSequence& target);

/// Enumeration oracle for the target marginal: sums path probabilities over
/// every path that collapses to `target`. Exponential in T; throws
/// DomainError when (|L|+1)^T exceeds 1e7. Returns -inf for unreachable
/// targets.
double brute_force_target_log_prob(const PosteriorGrid& grid, const TokenSequence& target);

/// Full collapsed-output distribution by enumeration (linear-domain
/// probabilities). Same size guard as above.
std::map<TokenSequence, double> enumerate_collapsed_outputs(const PosteriorGrid& grid);

struct GreedyResult {
  TokenSequence tokens;  // collapsed
  AlignmentPath path;    // raw per-frame argmax (ties -> lowest index)
};

GreedyResult greedy_decode(const PosteriorGrid& grid);

struct ConfidenceScore {
  double raw = 0.0;            // sum of log posteriors at non-blank frames
  double normalized = 0.0;     // raw / max(1, non-blank frame count)
  size_t nonblank_frames = 0;  // frames counted into raw
};

/// Confidence of a best path: log-posterior mass of the non-blank frames.
/// An all-blank path scores -inf on both fields.
ConfidenceScore confidence(const PosteriorGrid& grid, const AlignmentPath& best_path);

}  // namespace ctce
