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
#include <numeric>
#include <vector>

#include "mrlwe/errors.hpp"

namespace mrlwe {

using u128 = unsigned __int128;

// Moduli must stay below 2^62 so that residue sums fit in 64 bits and
// products fit in 128 bits with headroom. Larger moduli are rejected, not
// approximated.
inline constexpr uint64_t kModulusCeiling = uint64_t{1} << 62;

inline uint64_t add_mod(uint64_t a, uint64_t b, uint64_t m) {
  uint64_t s = a + b;
  return s >= m ? s - m : s;
}

inline uint64_t sub_mod(uint64_t a, uint64_t b, uint64_t m) {
  return a >= b ? a - b : a + (m - b);
}

inline uint64_t neg_mod(uint64_t a, uint64_t m) { return a == 0 ? 0 : m - a; }

inline uint64_t mul_mod(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>(u128(a) * b % m);
}

inline uint64_t pow_mod(uint64_t base, uint64_t exp, uint64_t m) {
  uint64_t acc = 1 % m;
  uint64_t cur = base % m;
  while (exp != 0) {
    if (exp & 1) acc = mul_mod(acc, cur, m);
    cur = mul_mod(cur, cur, m);
    exp >>= 1;
  }
  return acc;
}

// Modular inverse by extended Euclid. Throws when gcd(a, m) != 1.
inline uint64_t inv_mod(uint64_t a, uint64_t m) {
  int64_t r0 = static_cast<int64_t>(m), r1 = static_cast<int64_t>(a % m);
  int64_t t0 = 0, t1 = 1;
  while (r1 != 0) {
    int64_t qu = r0 / r1;
    int64_t r2 = r0 - qu * r1;
    int64_t t2 = t0 - qu * t1;
    r0 = r1;
    r1 = r2;
    t0 = t1;
    t1 = t2;
  }
  if (r0 != 1) throw ParameterError("inv_mod: operand is not invertible");
  if (t0 < 0) t0 += static_cast<int64_t>(m);
  return static_cast<uint64_t>(t0);
}

// Representative of x in (-m/2, m/2].
inline int64_t centered(uint64_t x, uint64_t m) {
  return x <= (m - 1) / 2 ? static_cast<int64_t>(x)
                          : static_cast<int64_t>(x) - static_cast<int64_t>(m);
}

// Reduce a signed value into [0, m).
inline uint64_t mod_into(int64_t v, uint64_t m) {
  int64_t r = v % static_cast<int64_t>(m);
  if (r < 0) r += static_cast<int64_t>(m);
  return static_cast<uint64_t>(r);
}

// Deterministic Miller-Rabin, valid for all 64-bit inputs.
inline bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                     23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                     23ull, 29ull, 31ull, 37ull}) {
    uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < r; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

// Distinct prime factors by trial division; intended for small inputs
// (transform orders, degree products).
inline std::vector<uint64_t> distinct_prime_factors(uint64_t n) {
  std::vector<uint64_t> out;
  for (uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline bool is_power_of_two(uint64_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline uint64_t next_power_of_two(uint64_t n) {
  uint64_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

inline unsigned log2_exact(uint64_t n) {
  unsigned b = 0;
  while ((uint64_t{1} << b) < n) ++b;
  return b;
}

}  // namespace mrlwe
