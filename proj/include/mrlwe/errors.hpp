// Copyright 2026 The mrlwe-toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace mrlwe {

// Shape or modulus disagreement between operands.
struct StructuralError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A numeric parameter is outside its admissible range.
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A required algebraic object (root of unity, prime, ...) does not exist.
struct ExistenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Multiplicative depth budget exhausted.
struct DepthError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Encoded support does not fit the ring.
struct SizingError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed, truncated or unsupported serialized data.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mrlwe
