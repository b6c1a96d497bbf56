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
#include <initializer_list>
#include <vector>

#include "mrlwe/errors.hpp"

namespace mrlwe {

/// Row-major integer tensor used for signals, kernels and decoded results.
struct Tensor {
  std::vector<size_t> dims;
  std::vector<int64_t> data;

  static Tensor zeros(std::vector<size_t> dims) {
    Tensor t;
    t.dims = std::move(dims);
    size_t n = 1;
    for (size_t d : t.dims) n *= d;
    t.data.assign(n, 0);
    return t;
  }

  size_t size() const { return data.size(); }

  size_t flat(std::initializer_list<size_t> idx) const {
    if (idx.size() != dims.size())
      throw StructuralError("Tensor: index rank mismatch");
    size_t f = 0;
    size_t a = 0;
    for (size_t i : idx) {
      if (i >= dims[a]) throw StructuralError("Tensor: index out of range");
      f = f * dims[a] + i;
      ++a;
    }
    return f;
  }

  int64_t& at(std::initializer_list<size_t> idx) { return data[flat(idx)]; }
  int64_t at(std::initializer_list<size_t> idx) const { return data[flat(idx)]; }

  bool operator==(const Tensor&) const = default;
};

}  // namespace mrlwe
