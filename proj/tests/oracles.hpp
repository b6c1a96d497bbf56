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

// Independent reference implementations the tests check the library against.
// Everything here is written naively on purpose and shares no code with the
// paths under test.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <vector>

#include "mrlwe/ring.hpp"
#include "mrlwe/rng.hpp"

namespace oracle {

using BigInt = boost::multiprecision::cpp_int;

// Multi-index decode of a flat row-major index.
inline std::vector<size_t> unflatten(size_t flat,
                                     const std::vector<size_t>& shape) {
  std::vector<size_t> idx(shape.size());
  for (size_t a = shape.size(); a-- > 0;) {
    idx[a] = flat % shape[a];
    flat /= shape[a];
  }
  return idx;
}

inline size_t flatten(const std::vector<size_t>& idx,
                      const std::vector<size_t>& shape) {
  size_t f = 0;
  for (size_t a = 0; a < shape.size(); ++a) f = f * shape[a] + idx[a];
  return f;
}

// Negacyclic product via exact big-integer accumulation, reduced at the end.
inline mrlwe::MultiPoly negacyclic_mul(const mrlwe::MultiPoly& a,
                                       const mrlwe::MultiPoly& b) {
  const auto& shape = a.shape;
  size_t n = a.coeffs.size();
  std::vector<BigInt> acc(n, 0);
  for (size_t i = 0; i < n; ++i) {
    if (a.coeffs[i] == 0) continue;
    auto ia = unflatten(i, shape);
    for (size_t j = 0; j < n; ++j) {
      if (b.coeffs[j] == 0) continue;
      auto jb = unflatten(j, shape);
      std::vector<size_t> k(shape.size());
      int sign = 1;
      for (size_t ax = 0; ax < shape.size(); ++ax) {
        size_t s = ia[ax] + jb[ax];
        if (s >= shape[ax]) {
          s -= shape[ax];
          sign = -sign;
        }
        k[ax] = s;
      }
      acc[flatten(k, shape)] +=
          sign * BigInt(a.coeffs[i]) * BigInt(b.coeffs[j]);
    }
  }
  mrlwe::MultiPoly out = mrlwe::MultiPoly::zero(shape, a.modulus);
  for (size_t i = 0; i < n; ++i) {
    BigInt r = acc[i] % a.modulus;
    if (r < 0) r += a.modulus;
    out.coeffs[i] = r.convert_to<uint64_t>();
  }
  return out;
}

// Coefficientwise sum through big integers.
inline mrlwe::MultiPoly add(const mrlwe::MultiPoly& a,
                            const mrlwe::MultiPoly& b) {
  mrlwe::MultiPoly out = mrlwe::MultiPoly::zero(a.shape, a.modulus);
  for (size_t i = 0; i < a.coeffs.size(); ++i) {
    BigInt r = (BigInt(a.coeffs[i]) + BigInt(b.coeffs[i])) % a.modulus;
    out.coeffs[i] = r.convert_to<uint64_t>();
  }
  return out;
}

inline bool trial_division_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline mrlwe::MultiPoly random_poly(const std::vector<size_t>& shape,
                                    uint64_t modulus, mrlwe::Rng& rng) {
  mrlwe::MultiPoly p = mrlwe::MultiPoly::zero(shape, modulus);
  for (auto& c : p.coeffs) c = rng.below(modulus);
  return p;
}

// Reconstruction sum_i digits[i] T^i, exact in big integers then reduced.
inline mrlwe::MultiPoly recompose(const mrlwe::BaseDecomposition& d,
                                  uint64_t modulus) {
  const auto& shape = d.digits.front().shape;
  mrlwe::MultiPoly out = mrlwe::MultiPoly::zero(shape, modulus);
  for (size_t k = 0; k < out.coeffs.size(); ++k) {
    BigInt acc = 0;
    BigInt pw = 1;
    for (const auto& digit : d.digits) {
      acc += pw * digit.coeffs[k];
      pw *= d.base;
    }
    out.coeffs[k] = (acc % modulus).convert_to<uint64_t>();
  }
  return out;
}

}  // namespace oracle
