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
#include <span>
#include <vector>

#include "ctce/matrix.hpp"

namespace ctce {

/// Stack of same-padded stride-1 temporal convolutions with relu, topped by
/// an affine softmax head. Frame count is preserved end to end, so output
/// row t is aligned with input frame t.
struct EncoderConfig {
  int input_dim = 16;   // features per frame
  int hidden = 64;      // channels per conv layer
  int layers = 3;       // conv layer count
  int kernel = 5;       // odd kernel width
  int outputs = 0;      // |L| + 1, blank last

  bool operator==(const EncoderConfig&) const = default;
};

/// Per-layer slice of the flat parameter vector. Weights are row-major
/// [out x (kernel*in)] for conv layers and [outputs x hidden] for the head,
/// each followed by its bias. Checkpoints store the flat vector as-is.
struct ParamSlice {
  size_t weight_off = 0;
  size_t weight_rows = 0;
  size_t weight_cols = 0;
  size_t bias_off = 0;
  size_t bias_len = 0;
};

/// Activations kept from a forward pass so backward can run without
/// recomputing. Padded layouts match what the conv kernels consume.
struct ForwardTrace {
  std::vector<Matrix> padded_acts;  // layer inputs, (T + kernel-1) x width, zero edges
  Matrix logits;                    // T x outputs
  PosteriorGrid posteriors;         // T x outputs
};

struct EncoderModel {
  EncoderConfig cfg;
  std::vector<double> params;

  static size_t param_count(const EncoderConfig& cfg);
  static std::vector<ParamSlice> layout(const EncoderConfig& cfg);

  /// Glorot-style uniform(-a, a) init, a = sqrt(6/(fan_in+fan_out)), from a
  /// seeded generator; identical (cfg, seed) gives identical parameters.
  static EncoderModel init(const EncoderConfig& cfg, uint64_t seed);

  /// Frames in, per-frame posteriors out. Throws ConfigError on a feature
  /// width mismatch. Deterministic: same model and input, same bits.
  PosteriorGrid forward(const FeatureSequence& x) const;
  PosteriorGrid forward(const FeatureSequence& x, ForwardTrace& trace) const;

  /// d(loss)/d(params) given d(loss)/d(logits); accumulates into grad
  /// (which must be param_count long). The CTC loss produces logit-space
  /// gradients directly, so this is the primary reverse path.
  void backward_from_logits(const ForwardTrace& trace, const Matrix& grad_logits,
                            std::span<double> grad) const;

  /// Same, but the upstream gradient is w.r.t. the posterior grid; the
  /// softmax Jacobian is applied per row first.
  void backward(const ForwardTrace& trace, const Matrix& grad_posteriors,
                std::span<double> grad) const;

  /// Receptive-field half-width: a posterior row depends on input frames
  /// within this distance.
  int receptive_half_width() const { return cfg.layers * (cfg.kernel - 1) / 2; }
};

/// Adam with bias correction. Moments live here; shapes are fixed at
/// construction and must match the parameter vector on every step.
struct AdamState {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  int64_t step_count = 0;
  std::vector<double> m;
  std::vector<double> v;

  explicit AdamState(size_t n, double lr_ = 1e-3) : lr(lr_), m(n, 0.0), v(n, 0.0) {}

  /// One update in place. Throws TrainingError on non-finite gradients,
  /// ConfigError on shape mismatch.
  void step(std::span<double> params, std::span<const double> grads);
};

/// Softmax over one row, max-shifted. Exposed for tests.
void softmax_row(const double* logits, double* probs, size_t n);

/// Scales grads in place so the global L2 norm is at most max_norm.
/// Returns the pre-clip norm.
double clip_global_norm(std::span<double> grads, double max_norm);

}  // namespace ctce
