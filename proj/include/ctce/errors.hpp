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

#include <stdexcept>
#include <string>

namespace ctce {

// Bad wiring: shape mismatches, unknown config keys, invalid config values.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid argument to an otherwise pure operation (empty log-sum-exp input,
// path/grid length mismatch, oversized brute-force instance).
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-finite loss or gradient during optimization.
struct TrainingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Target sequence cannot be aligned within the available frames.
// Training loops catch this, log the sample, and move on.
struct AlignmentInfeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Text -> token encoding failure (unknown character).
struct EncodingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Token -> text decoding failure (index out of range).
struct DecodingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Checkpoint/dataset hash disagreement. CLI maps this to exit code 4.
struct MismatchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Filesystem failure. CLI maps this to exit code 3.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ctce
