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

#include "ctce/encoder.hpp"

#include <cmath>
#include <string>

#include "ctce/errors.hpp"
#include "ctce/kernels.hpp"
#include "ctce/rng.hpp"

namespace ctce {

namespace {

// Width of layer l's input.
int layer_in_width(const EncoderConfig& cfg, int layer) {
  return layer == 0 ? cfg.input_dim : cfg.hidden;
}

void check_config(const EncoderConfig& cfg) {
  if (cfg.input_dim < 1 || cfg.hidden < 1 || cfg.layers < 1 || cfg.outputs < 2) {
    throw ConfigError("encoder: invalid dimensions");
  }
  if (cfg.kernel < 1 || cfg.kernel % 2 == 0) {
    throw ConfigError("encoder: kernel width must be odd");
  }
}

}  // namespace

std::vector<ParamSlice> EncoderModel::layout(const EncoderConfig& cfg) {
  std::vector<ParamSlice> slices;
  size_t off = 0;
  for (int l = 0; l < cfg.layers; ++l) {
    ParamSlice s;
    s.weight_rows = static_cast<size_t>(cfg.hidden);
    s.weight_cols = static_cast<size_t>(cfg.kernel) * layer_in_width(cfg, l);
    s.weight_off = off;
    off += s.weight_rows * s.weight_cols;
    s.bias_off = off;
    s.bias_len = s.weight_rows;
    off += s.bias_len;
    slices.push_back(s);
  }
  ParamSlice head;
  head.weight_rows = static_cast<size_t>(cfg.outputs);
  head.weight_cols = static_cast<size_t>(cfg.hidden);
  head.weight_off = off;
  off += head.weight_rows * head.weight_cols;
  head.bias_off = off;
  head.bias_len = head.weight_rows;
  slices.push_back(head);
  return slices;
}

size_t EncoderModel::param_count(const EncoderConfig& cfg) {
  const auto slices = layout(cfg);
  const ParamSlice& last = slices.back();
  return last.bias_off + last.bias_len;
}

EncoderModel EncoderModel::init(const EncoderConfig& cfg, uint64_t seed) {
  check_config(cfg);
  EncoderModel model;
  model.cfg = cfg;
  model.params.assign(param_count(cfg), 0.0);
  SplitMix64 rng(seed);
  for (const ParamSlice& s : layout(cfg)) {
    const double fan_in = static_cast<double>(s.weight_cols);
    const double fan_out = static_cast<double>(s.weight_rows);
    const double a = std::sqrt(6.0 / (fan_in + fan_out));
    for (size_t i = 0; i < s.weight_rows * s.weight_cols; ++i) {
      model.params[s.weight_off + i] = rng.uniform(-a, a);
    }
    // Biases start at zero, except the blank head bias below.
  }
  // Start blank-dominant. Without this, a label shared by every target in
  // a batch (the 'o' of email domains, say) can become the rest state of
  // early alignments instead of blank, a degenerate attractor the
  // optimizer never leaves on long utterances.
  const ParamSlice& head = layout(cfg).back();
  model.params[head.bias_off + head.bias_len - 1] = 5.0;
  return model;
}

void softmax_row(const double* logits, double* probs, size_t n) {
  const auto& k = kernels::active();
  const double m = k.max(logits, n);
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) {
    probs[i] = std::exp(logits[i] - m);
    acc += probs[i];
  }
  k.scale(probs, n, 1.0 / acc);
}

PosteriorGrid EncoderModel::forward(const FeatureSequence& x) const {
  ForwardTrace trace;
  return forward(x, trace);
}

PosteriorGrid EncoderModel::forward(const FeatureSequence& x, ForwardTrace& trace) const {
  if (x.cols != static_cast<size_t>(cfg.input_dim)) {
    throw ConfigError("encoder: feature width " + std::to_string(x.cols) +
                      " does not match model input width " + std::to_string(cfg.input_dim));
  }
  if (x.rows == 0) {
    throw ConfigError("encoder: empty feature sequence");
  }
  const auto& k = kernels::active();
  const auto slices = layout(cfg);
  const size_t T = x.rows;
  const size_t pad = static_cast<size_t>(cfg.kernel - 1) / 2;

  trace.padded_acts.clear();
  trace.padded_acts.reserve(static_cast<size_t>(cfg.layers) + 1);

  // Zero-padded copy of the input so every conv window is one contiguous run.
  Matrix cur(T + 2 * pad, x.cols, 0.0);
  for (size_t t = 0; t < T; ++t) {
    const double* src = x.row(t);
    double* dst = cur.row(t + pad);
    for (size_t c = 0; c < x.cols; ++c) dst[c] = src[c];
  }
  trace.padded_acts.push_back(std::move(cur));

  for (int l = 0; l < cfg.layers; ++l) {
    const ParamSlice& s = slices[static_cast<size_t>(l)];
    const Matrix& in = trace.padded_acts.back();
    Matrix out(T + 2 * pad, static_cast<size_t>(cfg.hidden), 0.0);
    const double* w = params.data() + s.weight_off;
    const double* b = params.data() + s.bias_off;
    for (size_t t = 0; t < T; ++t) {
      double* o = out.row(t + pad);
      k.matvec(w, in.row(t), o, s.weight_rows, s.weight_cols);
      for (size_t r = 0; r < s.weight_rows; ++r) o[r] += b[r];
      k.relu(o, s.weight_rows);
    }
    trace.padded_acts.push_back(std::move(out));
  }

  const ParamSlice& head = slices.back();
  trace.logits = Matrix(T, static_cast<size_t>(cfg.outputs));
  trace.posteriors = Matrix(T, static_cast<size_t>(cfg.outputs));
  const double* hw = params.data() + head.weight_off;
  const double* hb = params.data() + head.bias_off;
  const Matrix& top = trace.padded_acts.back();
  for (size_t t = 0; t < T; ++t) {
    double* z = trace.logits.row(t);
    k.matvec(hw, top.row(t + pad), z, head.weight_rows, head.weight_cols);
    for (size_t r = 0; r < head.weight_rows; ++r) z[r] += hb[r];
    softmax_row(z, trace.posteriors.row(t), head.weight_rows);
  }
  return trace.posteriors;
}

void EncoderModel::backward_from_logits(const ForwardTrace& trace, const Matrix& grad_logits,
                                        std::span<double> grad) const {
  if (!grad_logits.same_shape(trace.logits)) {
    throw ConfigError("encoder backward: gradient shape mismatch");
  }
  if (grad.size() != params.size()) {
    throw ConfigError("encoder backward: parameter gradient size mismatch");
  }
  const auto& k = kernels::active();
  const auto slices = layout(cfg);
  const size_t T = trace.logits.rows;
  const size_t pad = static_cast<size_t>(cfg.kernel - 1) / 2;

  const ParamSlice& head = slices.back();
  const Matrix& top = trace.padded_acts.back();

  // Head: accumulate weight/bias grads and push gradient onto the top
  // activations (padded layout, same as forward).
  Matrix dtop(top.rows, top.cols, 0.0);
  {
    const double* hw = params.data() + head.weight_off;
    double* gw = grad.data() + head.weight_off;
    double* gb = grad.data() + head.bias_off;
    for (size_t t = 0; t < T; ++t) {
      const double* gz = grad_logits.row(t);
      const double* act = top.row(t + pad);
      double* da = dtop.row(t + pad);
      for (size_t r = 0; r < head.weight_rows; ++r) {
        if (gz[r] != 0.0) {
          k.axpy(gz[r], act, gw + r * head.weight_cols, head.weight_cols);
          k.axpy(gz[r], hw + r * head.weight_cols, da, head.weight_cols);
          gb[r] += gz[r];
        }
      }
    }
  }

  // Conv layers, top down. d(cur) arrives on the padded activation grid;
  // relu gate applies at the layer's own output rows.
  Matrix dcur = std::move(dtop);
  for (int l = cfg.layers - 1; l >= 0; --l) {
    const ParamSlice& s = slices[static_cast<size_t>(l)];
    const Matrix& in = trace.padded_acts[static_cast<size_t>(l)];
    const Matrix& out = trace.padded_acts[static_cast<size_t>(l) + 1];
    Matrix din(in.rows, in.cols, 0.0);
    const double* w = params.data() + s.weight_off;
    double* gw = grad.data() + s.weight_off;
    double* gb = grad.data() + s.bias_off;
    for (size_t t = 0; t < T; ++t) {
      double* go = dcur.row(t + pad);
      k.relu_backward(out.row(t + pad), go, s.weight_rows);
      const double* win = in.row(t);
      double* gin = din.row(t);
      for (size_t r = 0; r < s.weight_rows; ++r) {
        if (go[r] != 0.0) {
          k.axpy(go[r], win, gw + r * s.weight_cols, s.weight_cols);
          k.axpy(go[r], w + r * s.weight_cols, gin, s.weight_cols);
          gb[r] += go[r];
        }
      }
    }
    dcur = std::move(din);
  }
}

void EncoderModel::backward(const ForwardTrace& trace, const Matrix& grad_posteriors,
                            std::span<double> grad) const {
  if (!grad_posteriors.same_shape(trace.posteriors)) {
    throw ConfigError("encoder backward: gradient shape mismatch");
  }
  // Map through the softmax Jacobian: dz_k = p_k * (dp_k - sum_j dp_j p_j).
  Matrix grad_logits(grad_posteriors.rows, grad_posteriors.cols);
  const auto& k = kernels::active();
  for (size_t t = 0; t < grad_posteriors.rows; ++t) {
    const double* p = trace.posteriors.row(t);
    const double* dp = grad_posteriors.row(t);
    double* dz = grad_logits.row(t);
    const double inner = k.dot(dp, p, grad_posteriors.cols);
    for (size_t c = 0; c < grad_posteriors.cols; ++c) {
      dz[c] = p[c] * (dp[c] - inner);
    }
  }
  backward_from_logits(trace, grad_logits, grad);
}

void AdamState::step(std::span<double> params, std::span<const double> grads) {
  if (params.size() != m.size() || grads.size() != m.size()) {
    throw ConfigError("adam: shape mismatch");
  }
  for (double g : grads) {
    if (!std::isfinite(g)) {
      throw TrainingError("adam: non-finite gradient");
    }
  }
  ++step_count;
  const double bc1 = 1.0 / (1.0 - std::pow(beta1, static_cast<double>(step_count)));
  const double bc2 = 1.0 / (1.0 - std::pow(beta2, static_cast<double>(step_count)));
  kernels::active().adam_update(params.data(), m.data(), v.data(), grads.data(),
                                params.size(), lr, beta1, beta2, eps, bc1, bc2);
}

double clip_global_norm(std::span<double> grads, double max_norm) {
  const auto& k = kernels::active();
  const double sq = k.dot(grads.data(), grads.data(), grads.size());
  const double norm = std::sqrt(sq);
  if (norm > max_norm && norm > 0.0) {
    k.scale(grads.data(), grads.size(), max_norm / norm);
  }
  return norm;
}

}  // namespace ctce
