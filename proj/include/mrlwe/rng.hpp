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

#include <cstdint>
#include <random>

#include "mrlwe/errors.hpp"

namespace mrlwe {

// Seedable randomness source. All sampling goes through next()/below() so a
// fixed seed reproduces every key, ciphertext and noise polynomial bit for
// bit. std::mt19937_64 output is pinned by the standard; the distributions
// here avoid std::uniform_int_distribution, whose mapping is not.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next() { return gen_(); }

  // Unbiased draw from [0, bound) by rejection.
  uint64_t below(uint64_t bound) {
    if (bound == 0) throw ParameterError("Rng::below: bound must be positive");
    // 2^64 mod bound; accepting r >= threshold leaves a multiple of bound.
    uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      uint64_t r = gen_();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace mrlwe
